#include "bpnld/frames.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "bpnld/errors.hpp"
#include "bpnld/rng.hpp"

namespace bpnld {
namespace {

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, uint32_t v) {
  put_u16(out, static_cast<uint16_t>(v & 0xffff));
  put_u16(out, static_cast<uint16_t>(v >> 16));
}

void put_u64(std::string& out, uint64_t v) {
  put_u32(out, static_cast<uint32_t>(v & 0xffffffffu));
  put_u32(out, static_cast<uint32_t>(v >> 32));
}

class Reader {
 public:
  Reader(const unsigned char* data, size_t size) : data_(data), size_(size) {}
  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  uint32_t u32() {
    const uint32_t lo = u16();
    const uint32_t hi = u16();
    return lo | (hi << 16);
  }
  uint64_t u64() {
    const uint64_t lo = u32();
    const uint64_t hi = u32();
    return lo | (hi << 32);
  }
  void magic(const char* m) {
    need(4);
    if (std::memcmp(data_ + pos_, m, 4) != 0)
      throw Error("frame container: bad magic");
    pos_ += 4;
  }
  bool done() const { return pos_ == size_; }

 private:
  void need(size_t n) {
    if (pos_ + n > size_) throw Error("frame container: truncated file");
  }
  const unsigned char* data_;
  size_t size_;
  size_t pos_ = 0;
};

}  // namespace

void DetectorModel::validate() const {
  if (!(quantum_efficiency >= 0.0 && quantum_efficiency <= 1.0))
    throw std::invalid_argument("quantum efficiency must be in [0,1]");
  if (!(dark_count_prob >= 0.0 && dark_count_prob < 1.0))
    throw std::invalid_argument("dark count probability must be in [0,1)");
  if (!(pixel_pitch > 0.0)) throw std::invalid_argument("pixel pitch must be positive");
  if (width < 1 || height < 1)
    throw std::invalid_argument("sensor dimensions must be >= 1");
  if (width > 65535 || height > 65535)
    throw std::invalid_argument("sensor dimensions must fit 16 bits");
}

void PixelRegion::validate(const DetectorModel& det) const {
  if (count < 1) throw std::invalid_argument("region must contain pixels");
  if (x0 < 0 || y < 0 || x0 + count > det.width || y >= det.height)
    throw Error("region out of sensor bounds");
}

void JointPdf::validate() const {
  if (region1.count < 1 || region2.count < 1 ||
      p.size() != static_cast<size_t>(region1.count) * region2.count)
    throw std::invalid_argument("joint pdf shape mismatch");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument("joint pdf must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("joint pdf must sum to 1");
}

JointPdf discretize_joint(const ExperimentSpec& spec, const DetectorModel& det,
                          const PixelRegion& region1, const PixelRegion& region2) {
  det.validate();
  region1.validate(det);
  region2.validate(det);
  JointPdf pdf;
  pdf.region1 = region1;
  pdf.region2 = region2;
  pdf.p.assign(static_cast<size_t>(region1.count) * region2.count, 0.0);
  double sum = 0.0;
  for (int i = 0; i < region1.count; ++i) {
    const double u1 = region1.position(i, det.pixel_pitch);
    for (int j = 0; j < region2.count; ++j) {
      const double u2 = region2.position(j, det.pixel_pitch);
      const double r = coincidence_rate(spec, u1, u2);
      const double v = r > 0.0 ? r : 0.0;
      pdf.p[static_cast<size_t>(i) * region2.count + j] = v;
      sum += v;
    }
  }
  if (!(sum > 0.0)) throw Error("joint pdf has zero total mass");
  for (double& v : pdf.p) v /= sum;
  return pdf;
}

FrameStack synthesize_frames(const JointPdf& pdf, double pairs_per_frame_mean,
                             const DetectorModel& det, size_t n_frames,
                             uint64_t seed) {
  pdf.validate();
  det.validate();
  pdf.region1.validate(det);
  pdf.region2.validate(det);
  if (!(pairs_per_frame_mean > 0.0))
    throw std::invalid_argument("pairs per frame mean must be positive");
  if (n_frames < 1) throw std::invalid_argument("need at least one frame");

  std::vector<double> cdf(pdf.p.size());
  double acc = 0.0;
  for (size_t i = 0; i < pdf.p.size(); ++i) {
    acc += pdf.p[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  FrameStack stack;
  stack.detector = det;
  stack.seed = seed;
  stack.frames.resize(n_frames);
  const int n2 = pdf.region2.count;
  for (size_t f = 0; f < n_frames; ++f) {
    Rng rng(seed, f);
    std::vector<FramePixel>& px = stack.frames[f];
    const uint32_t pairs = rng.poisson(pairs_per_frame_mean);
    for (uint32_t q = 0; q < pairs; ++q) {
      const size_t cell = rng.sample_cdf(cdf);
      const int i = static_cast<int>(cell) / n2;
      const int j = static_cast<int>(cell) % n2;
      if (rng.bernoulli(det.quantum_efficiency)) {
        px.push_back({static_cast<uint16_t>(pdf.region1.x0 + i),
                      static_cast<uint16_t>(pdf.region1.y)});
      }
      if (rng.bernoulli(det.quantum_efficiency)) {
        px.push_back({static_cast<uint16_t>(pdf.region2.x0 + j),
                      static_cast<uint16_t>(pdf.region2.y)});
      }
    }
    if (det.dark_count_prob > 0.0) {
      for (int y = 0; y < det.height; ++y) {
        for (int x = 0; x < det.width; ++x) {
          if (rng.bernoulli(det.dark_count_prob)) {
            px.push_back({static_cast<uint16_t>(x), static_cast<uint16_t>(y)});
          }
        }
      }
    }
    std::sort(px.begin(), px.end());
    px.erase(std::unique(px.begin(), px.end()), px.end());
  }
  return stack;
}

std::vector<std::vector<double>> coincidence_map(const FrameStack& stack,
                                                 const PixelRegion& region1,
                                                 const PixelRegion& region2) {
  stack.detector.validate();
  region1.validate(stack.detector);
  region2.validate(stack.detector);
  if (stack.n_frames() < 2)
    throw std::invalid_argument("coincidence map needs at least two frames");

  const int n1 = region1.count;
  const int n2 = region2.count;
  std::vector<uint64_t> cnt1(n1, 0), cnt2(n2, 0);
  std::vector<uint64_t> joint(static_cast<size_t>(n1) * n2, 0);
  std::vector<int> hits1, hits2;
  for (const auto& frame : stack.frames) {
    hits1.clear();
    hits2.clear();
    for (const FramePixel& px : frame) {
      if (px.y == region1.y && px.x >= region1.x0 && px.x < region1.x0 + n1)
        hits1.push_back(px.x - region1.x0);
      if (px.y == region2.y && px.x >= region2.x0 && px.x < region2.x0 + n2)
        hits2.push_back(px.x - region2.x0);
    }
    for (int i : hits1) ++cnt1[i];
    for (int j : hits2) ++cnt2[j];
    for (int i : hits1)
      for (int j : hits2) ++joint[static_cast<size_t>(i) * n2 + j];
  }

  const double n = static_cast<double>(stack.n_frames());
  std::vector<std::vector<double>> c(n1, std::vector<double>(n2, 0.0));
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      c[i][j] = static_cast<double>(joint[static_cast<size_t>(i) * n2 + j]) / n -
                (static_cast<double>(cnt1[i]) / n) * (static_cast<double>(cnt2[j]) / n);
    }
  }
  return c;
}

Pattern pattern_from_frames(const FrameStack& stack, const PixelRegion& region1,
                            const PixelRegion& region2, int j_star) {
  if (j_star < 0 || j_star >= region2.count)
    throw std::invalid_argument("fixed pixel index outside region2");
  bool any_photon = false;
  for (const auto& f : stack.frames) {
    if (!f.empty()) {
      any_photon = true;
      break;
    }
  }
  if (!any_photon) throw Error("no coincidence signal: frame stack is empty");

  const auto c = coincidence_map(stack, region1, region2);
  Pattern p;
  p.positions.resize(region1.count);
  p.values.resize(region1.count);
  double peak = 0.0;
  for (int i = 0; i < region1.count; ++i) {
    p.positions[i] = region1.position(i, stack.detector.pixel_pitch);
    p.values[i] = std::max(c[i][j_star], 0.0);
    peak = std::max(peak, p.values[i]);
  }
  if (!(peak > 0.0)) throw Error("no coincidence signal in selected column");
  for (double& v : p.values) v /= peak;
  return p;
}

void write_frames(const std::string& path, const FrameStack& stack) {
  if (stack.n_frames() > 0xffffffffu) throw Error("too many frames for container");
  std::string out;
  out.reserve(24 + stack.n_frames() * 8);
  out.append("BPNF", 4);
  put_u16(out, 1);
  put_u16(out, static_cast<uint16_t>(stack.detector.width));
  put_u16(out, static_cast<uint16_t>(stack.detector.height));
  put_u32(out, static_cast<uint32_t>(stack.n_frames()));
  put_u64(out, stack.seed);
  for (const auto& frame : stack.frames) {
    if (frame.size() > 0xffff) throw Error("frame has too many pixels for container");
    put_u16(out, static_cast<uint16_t>(frame.size()));
    for (const FramePixel& px : frame) {
      put_u16(out, px.x);
      put_u16(out, px.y);
    }
  }
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw Error("cannot open " + path + " for writing");
  const size_t written = std::fwrite(out.data(), 1, out.size(), fp);
  std::fclose(fp);
  if (written != out.size()) throw Error("short write to " + path);
}

FrameStack read_frames(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw Error("cannot open " + path);
  std::string data;
  char buf[65536];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, fp)) > 0) data.append(buf, got);
  std::fclose(fp);

  Reader rd(reinterpret_cast<const unsigned char*>(data.data()), data.size());
  rd.magic("BPNF");
  const uint16_t version = rd.u16();
  if (version != 1) throw Error("frame container: unsupported version");
  FrameStack stack;
  stack.detector.width = rd.u16();
  stack.detector.height = rd.u16();
  const uint32_t n = rd.u32();
  stack.seed = rd.u64();
  stack.frames.resize(n);
  for (uint32_t f = 0; f < n; ++f) {
    const uint16_t count = rd.u16();
    stack.frames[f].resize(count);
    for (uint16_t i = 0; i < count; ++i) {
      stack.frames[f][i].x = rd.u16();
      stack.frames[f][i].y = rd.u16();
    }
  }
  if (!rd.done()) throw Error("frame container: trailing bytes");
  return stack;
}

}  // namespace bpnld
