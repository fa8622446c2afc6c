#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpnld/closed_form.hpp"

namespace bpnld {

// Photon-counting camera abstraction. Gain and readout details are collapsed
// into the detection probability and the per-pixel dark-count probability.
struct DetectorModel {
  double quantum_efficiency = 0.6;
  double dark_count_prob = 1e-4;  // per pixel per frame
  double pixel_pitch = 16e-6;     // m
  int width = 128;                // pixels
  int height = 8;

  void validate() const;
};

// Horizontal run of pixels used as a 1-D scan region.
struct PixelRegion {
  int x0 = 0;
  int y = 0;
  int count = 0;

  void validate(const DetectorModel& det) const;
  // Transverse coordinate of a pixel center, measured from the region center.
  double position(int index, double pitch) const {
    return (index - (count - 1) / 2.0) * pitch;
  }
};

// Discretized joint detection probability over region1 x region2 pixels,
// normalized to total mass 1. Row-major: p[i * region2.count + j].
struct JointPdf {
  PixelRegion region1;
  PixelRegion region2;
  std::vector<double> p;

  double at(int i, int j) const { return p[static_cast<size_t>(i) * region2.count + j]; }
  void validate() const;
};

struct FramePixel {
  uint16_t x = 0;
  uint16_t y = 0;
  friend bool operator==(FramePixel a, FramePixel b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(FramePixel a, FramePixel b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  }
};

// Binary photon-counting frames, sparse per-frame pixel lists.
struct FrameStack {
  DetectorModel detector;
  uint64_t seed = 0;
  std::vector<std::vector<FramePixel>> frames;

  size_t n_frames() const { return frames.size(); }
};

// Samples the closed-form coincidence rate at pixel centers, clips negatives,
// and normalizes to total mass 1.
JointPdf discretize_joint(const ExperimentSpec& spec, const DetectorModel& det,
                          const PixelRegion& region1, const PixelRegion& region2);

// Forward model of a photon-counting acquisition: Poisson pair count per
// frame, pair positions from the joint pdf, independent detection with the
// quantum efficiency, then dark counts; pixels saturate to binary.
FrameStack synthesize_frames(const JointPdf& pdf, double pairs_per_frame_mean,
                             const DetectorModel& det, size_t n_frames,
                             uint64_t seed);

// C(i, j) = <n_i n_j> - <n_i><n_j> over frames, for pixel i in region1 and
// j in region2. Counts accumulate exactly in integers.
std::vector<std::vector<double>> coincidence_map(const FrameStack& frames,
                                                 const PixelRegion& region1,
                                                 const PixelRegion& region2);

// Extracts column C(., j_star), clips negatives to zero and normalizes.
Pattern pattern_from_frames(const FrameStack& frames, const PixelRegion& region1,
                            const PixelRegion& region2, int j_star);

// Binary container: "BPNF" magic, version u16, width u16, height u16,
// n_frames u32, seed u64, then per frame a u16 pixel count followed by
// (x u16, y u16) pairs. Little-endian throughout.
void write_frames(const std::string& path, const FrameStack& stack);
FrameStack read_frames(const std::string& path);

}  // namespace bpnld
