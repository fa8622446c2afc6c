#include "bpnld/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "bpnld/errors.hpp"
#include "bpnld/io.hpp"

namespace bpnld {
namespace {

using nlohmann::json;

size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

[[noreturn]] void unknown_key(const std::string& path, const std::string& key,
                              const std::vector<std::string>& known) {
  std::string best;
  size_t best_d = std::numeric_limits<size_t>::max();
  for (const auto& k : known) {
    const size_t d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  std::string msg = path + ": unknown key \"" + key + "\"";
  if (!best.empty() && best_d <= best.size() / 2 + 2)
    msg += "; did you mean \"" + best + "\"?";
  throw ConfigError(msg);
}

void check_keys(const json& obj, const std::string& path,
                const std::vector<std::string>& known) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      unknown_key(path, it.key(), known);
  }
}

double get_num(const json& obj, const std::string& path, const char* key,
               double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> get_num_list(const json& obj, const std::string& path,
                                 const char* key, std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(path + "." + key + ": expected an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number())
      throw ConfigError(path + "." + key + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void require_positive(double v, const std::string& where) {
  if (!(v > 0.0)) throw ConfigError(where + ": must be > 0");
}

PumpSpec parse_pump(const json& obj, const std::string& path) {
  check_keys(obj, path, {"wavelength_m", "w0_m", "lc_m", "A"});
  const double wavelength = get_num(obj, path, "wavelength_m", 405e-9);
  const double w0 = get_num(obj, path, "w0_m", 2.3e-3);
  require_positive(wavelength, path + ".wavelength_m");
  require_positive(w0, path + ".w0_m");
  if (obj.contains("lc_m") && obj.contains("A"))
    throw ConfigError(path + ": specify either lc_m or A, not both");

  double lc;
  if (obj.contains("A")) {
    const double A = get_num(obj, path, "A", 0.99);
    if (!(A > 0.0 && A <= 1.0)) throw ConfigError(path + ".A: must be in (0,1]");
    lc = A == 1.0 ? std::numeric_limits<double>::infinity()
                  : coherence_length_for_A(w0, A);
  } else if (obj.contains("lc_m") && obj.at("lc_m").is_string()) {
    const std::string s = obj.at("lc_m").get<std::string>();
    if (s != "inf" && s != "+inf" && s != "infinity")
      throw ConfigError(path + ".lc_m: string value must be \"inf\"");
    lc = std::numeric_limits<double>::infinity();
  } else {
    lc = get_num(obj, path, "lc_m", coherence_length_for_A(w0, 0.99));
    require_positive(lc, path + ".lc_m");
  }
  return PumpSpec(wavelength, w0, lc);
}

LayoutSpec parse_layout(const json& obj, const std::string& path) {
  check_keys(obj, path, {"wavelength_si_m", "z0_m", "z1_m", "z_m"});
  const double lam = get_num(obj, path, "wavelength_si_m", 810e-9);
  const double z0 = get_num(obj, path, "z0_m", 0.1);
  const double z1 = get_num(obj, path, "z1_m", 0.2);
  const double z = get_num(obj, path, "z_m", z0);
  require_positive(lam, path + ".wavelength_si_m");
  require_positive(z0, path + ".z0_m");
  require_positive(z1, path + ".z1_m");
  require_positive(z, path + ".z_m");
  return LayoutSpec(lam, z0, z1, z);
}

ExperimentSpec parse_experiment(const json& obj, const std::string& path) {
  check_keys(obj, path,
             {"pump", "layout", "slit_width_m", "wire_width_m", "angles", "scan",
              "aperture_mapping"});
  ExperimentSpec spec;
  if (obj.contains("pump")) spec.pump = parse_pump(obj.at("pump"), path + ".pump");
  if (obj.contains("layout"))
    spec.layout = parse_layout(obj.at("layout"), path + ".layout");

  const double slit_w = get_num(obj, path, "slit_width_m", 0.55e-3);
  const double wire_w = get_num(obj, path, "wire_width_m", 80e-6);
  require_positive(slit_w, path + ".slit_width_m");
  require_positive(wire_w, path + ".wire_width_m");
  spec.slit = ApertureSpec::slit(slit_w);
  spec.wire = ApertureSpec::wire(wire_w);

  if (obj.contains("angles")) {
    const json& a = obj.at("angles");
    const std::string apath = path + ".angles";
    check_keys(a, apath, {"theta_s_rad", "theta_i_rad"});
    const double ts = get_num(a, apath, "theta_s_rad", kPi / 4);
    const double ti = get_num(a, apath, "theta_i_rad", kPi / 4);
    if (!(ts >= 0.0 && ts <= kPi / 2))
      throw ConfigError(apath + ".theta_s_rad: must be in [0, pi/2]");
    if (!(ti >= 0.0 && ti <= kPi / 2))
      throw ConfigError(apath + ".theta_i_rad: must be in [0, pi/2]");
    spec.angles = PolarizationAngles(ts, ti);
  }
  if (obj.contains("scan")) {
    const json& s = obj.at("scan");
    const std::string spath = path + ".scan";
    check_keys(s, spath, {"u1_m", "u2_min_m", "u2_max_m", "count"});
    spec.scan.u1 = get_num(s, spath, "u1_m", 0.0);
    spec.scan.u2_min = get_num(s, spath, "u2_min_m", -2.5e-3);
    spec.scan.u2_max = get_num(s, spath, "u2_max_m", 2.5e-3);
    spec.scan.count = get_int(s, spath, "count", 1001);
    if (!(spec.scan.u2_min < spec.scan.u2_max))
      throw ConfigError(spath + ": u2_min_m must be < u2_max_m");
    if (spec.scan.count < 2) throw ConfigError(spath + ".count: must be >= 2");
  }
  const std::string mapping = get_str(obj, path, "aperture_mapping", "fig2");
  if (mapping == "fig2") {
    spec.mapping = ApertureMapping::kFig2;
  } else if (mapping == "eq5") {
    spec.mapping = ApertureMapping::kEq5;
  } else {
    throw ConfigError(path + ".aperture_mapping: must be \"fig2\" or \"eq5\"");
  }
  return spec;
}

QuadratureConfig parse_quadrature(const json& obj, const std::string& path) {
  check_keys(obj, path,
             {"aperture_points", "rho_extent_m", "rho_points", "oscillation_guard",
              "kernel_power"});
  QuadratureConfig q;
  q.aperture_points = get_int(obj, path, "aperture_points", 0);
  q.rho_extent = get_num(obj, path, "rho_extent_m", 0.0);
  q.rho_points = get_int(obj, path, "rho_points", 0);
  q.oscillation_guard = get_int(obj, path, "oscillation_guard", 8);
  q.kernel_power = get_int(obj, path, "kernel_power", 1);
  try {
    q.validate();
  } catch (const std::exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
  return q;
}

DetectorModel parse_detector(const json& obj, const std::string& path) {
  check_keys(obj, path,
             {"quantum_efficiency", "dark_count_prob", "pixel_pitch_m", "width_px",
              "height_px"});
  DetectorModel d;
  d.quantum_efficiency = get_num(obj, path, "quantum_efficiency", 0.6);
  d.dark_count_prob = get_num(obj, path, "dark_count_prob", 1e-4);
  d.pixel_pitch = get_num(obj, path, "pixel_pitch_m", 16e-6);
  d.width = get_int(obj, path, "width_px", 128);
  d.height = get_int(obj, path, "height_px", 8);
  try {
    d.validate();
  } catch (const std::exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
  return d;
}

PixelRegion parse_region(const json& obj, const std::string& path,
                         PixelRegion fallback) {
  check_keys(obj, path, {"x0", "y", "count"});
  PixelRegion r;
  r.x0 = get_int(obj, path, "x0", fallback.x0);
  r.y = get_int(obj, path, "y", fallback.y);
  r.count = get_int(obj, path, "count", fallback.count);
  if (r.count < 1) throw ConfigError(path + ".count: must be >= 1");
  return r;
}

FramesRunConfig parse_frames(const json& obj, const std::string& path) {
  check_keys(obj, path,
             {"n_frames", "pairs_per_frame_mean", "region1", "region2",
              "fixed_pixel_index"});
  FramesRunConfig f;
  const int n = get_int(obj, path, "n_frames", 40000);
  if (n < 1) throw ConfigError(path + ".n_frames: must be >= 1");
  f.n_frames = static_cast<size_t>(n);
  f.pairs_per_frame_mean = get_num(obj, path, "pairs_per_frame_mean", 0.5);
  require_positive(f.pairs_per_frame_mean, path + ".pairs_per_frame_mean");
  if (obj.contains("region1"))
    f.region1 = parse_region(obj.at("region1"), path + ".region1", f.region1);
  if (obj.contains("region2"))
    f.region2 = parse_region(obj.at("region2"), path + ".region2", f.region2);
  f.fixed_pixel_index = get_int(obj, path, "fixed_pixel_index", -1);
  if (f.fixed_pixel_index < -1 || f.fixed_pixel_index >= f.region2.count)
    throw ConfigError(path + ".fixed_pixel_index: outside region2");
  return f;
}

SweepRunConfig parse_sweep(const json& obj, const std::string& path) {
  check_keys(obj, path, {"A_values", "slit_widths_m"});
  SweepRunConfig s;
  s.A_values = get_num_list(obj, path, "A_values", s.A_values);
  s.slit_widths = get_num_list(obj, path, "slit_widths_m", s.slit_widths);
  if (s.A_values.empty() || s.slit_widths.empty())
    throw ConfigError(path + ": A_values and slit_widths_m must be nonempty");
  for (double a : s.A_values) {
    if (!(a > 0.0 && a < 1.0))
      throw ConfigError(path + ".A_values: entries must be in (0,1)");
  }
  for (double w : s.slit_widths) {
    if (!(w > 0.0)) throw ConfigError(path + ".slit_widths_m: entries must be > 0");
  }
  return s;
}

CharacterizeRunConfig parse_characterize(const json& obj, const std::string& path) {
  check_keys(obj, path,
             {"focal_length_m", "slit_separations_m", "slit_width_m",
              "wavelength_m", "measurements_csv", "curve_spot_sizes_m", "fit"});
  CharacterizeRunConfig c;
  c.setup.focal_length = get_num(obj, path, "focal_length_m", 0.2);
  c.setup.d12 = get_num_list(obj, path, "slit_separations_m",
                             {0.25e-3, 0.5e-3, 0.75e-3, 1e-3});
  c.setup.slit_width = get_num(obj, path, "slit_width_m", 0.15e-3);
  c.setup.wavelength_pump = get_num(obj, path, "wavelength_m", 405e-9);
  c.measurements_csv = get_str(obj, path, "measurements_csv", "");
  c.curve_spot_sizes = get_num_list(obj, path, "curve_spot_sizes_m", {});
  if (obj.contains("fit")) {
    const json& f = obj.at("fit");
    const std::string fpath = path + ".fit";
    check_keys(f, fpath, {"a_min_m", "a_max_m", "scan_points"});
    c.fit.a_min = get_num(f, fpath, "a_min_m", 0.0);
    c.fit.a_max = get_num(f, fpath, "a_max_m", 0.0);
    c.fit.scan_points = get_int(f, fpath, "scan_points", 256);
  }
  try {
    c.setup.validate();
  } catch (const std::exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
  return c;
}

OracleRunConfig parse_oracle(const json& obj, const std::string& path) {
  check_keys(obj, path, {"scan_count", "linf_threshold", "probe_points_m"});
  OracleRunConfig o;
  o.scan_count = get_int(obj, path, "scan_count", 101);
  if (o.scan_count < 2) throw ConfigError(path + ".scan_count: must be >= 2");
  o.linf_threshold = get_num(obj, path, "linf_threshold", 0.1);
  require_positive(o.linf_threshold, path + ".linf_threshold");
  o.probe_points = get_num_list(obj, path, "probe_points_m", {});
  return o;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& ex) {
    throw ConfigError(origin + ": JSON parse error: " + ex.what());
  }
  check_keys(root, origin,
             {"experiment", "quadrature", "detector", "frames", "sweep",
              "characterize", "oracle", "seed", "output_dir"});
  RunConfig cfg;
  for (auto it = root.begin(); it != root.end(); ++it)
    cfg.sections_present.insert(it.key());

  if (root.contains("experiment"))
    cfg.experiment = parse_experiment(root.at("experiment"), "experiment");
  else
    cfg.experiment.pump =
        PumpSpec(405e-9, 2.3e-3, coherence_length_for_A(2.3e-3, 0.99));
  if (root.contains("quadrature"))
    cfg.quadrature = parse_quadrature(root.at("quadrature"), "quadrature");
  if (root.contains("detector"))
    cfg.detector = parse_detector(root.at("detector"), "detector");
  if (root.contains("frames"))
    cfg.frames = parse_frames(root.at("frames"), "frames");
  if (root.contains("sweep")) cfg.sweep = parse_sweep(root.at("sweep"), "sweep");
  if (root.contains("characterize"))
    cfg.characterize = parse_characterize(root.at("characterize"), "characterize");
  else
    cfg.characterize.setup.d12 = {0.25e-3, 0.5e-3, 0.75e-3, 1e-3};
  if (root.contains("oracle"))
    cfg.oracle = parse_oracle(root.at("oracle"), "oracle");
  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned())
      throw ConfigError("seed: expected an unsigned integer");
    cfg.seed = s.get<uint64_t>();
  }
  cfg.output_dir = get_str(root, "config", "output_dir", "out");

  try {
    cfg.frames.region1.validate(cfg.detector);
    cfg.frames.region2.validate(cfg.detector);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("frames: ") + ex.what());
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  return parse_config_text(read_text_file(path), path);
}

std::string resolved_config_json(const RunConfig& cfg) {
  json j;
  const auto& e = cfg.experiment;
  j["experiment"]["pump"]["wavelength_m"] = e.pump.wavelength;
  j["experiment"]["pump"]["w0_m"] = e.pump.w0;
  if (e.pump.coherent()) {
    j["experiment"]["pump"]["lc_m"] = "inf";
  } else {
    j["experiment"]["pump"]["lc_m"] = e.pump.lc;
  }
  j["experiment"]["pump"]["A"] = degree_of_coherence(e.pump);
  j["experiment"]["layout"]["wavelength_si_m"] = e.layout.wavelength_si;
  j["experiment"]["layout"]["z0_m"] = e.layout.z0;
  j["experiment"]["layout"]["z1_m"] = e.layout.z1;
  j["experiment"]["layout"]["z_m"] = e.layout.z;
  j["experiment"]["slit_width_m"] = e.slit.width();
  j["experiment"]["wire_width_m"] = e.wire.width();
  j["experiment"]["angles"]["theta_s_rad"] = e.angles.theta_s;
  j["experiment"]["angles"]["theta_i_rad"] = e.angles.theta_i;
  j["experiment"]["scan"]["u1_m"] = e.scan.u1;
  j["experiment"]["scan"]["u2_min_m"] = e.scan.u2_min;
  j["experiment"]["scan"]["u2_max_m"] = e.scan.u2_max;
  j["experiment"]["scan"]["count"] = e.scan.count;
  j["experiment"]["aperture_mapping"] =
      e.mapping == ApertureMapping::kFig2 ? "fig2" : "eq5";

  j["quadrature"]["aperture_points"] = cfg.quadrature.aperture_points;
  j["quadrature"]["rho_extent_m"] = cfg.quadrature.rho_extent;
  j["quadrature"]["rho_points"] = cfg.quadrature.rho_points;
  j["quadrature"]["oscillation_guard"] = cfg.quadrature.oscillation_guard;
  j["quadrature"]["kernel_power"] = cfg.quadrature.kernel_power;

  j["detector"]["quantum_efficiency"] = cfg.detector.quantum_efficiency;
  j["detector"]["dark_count_prob"] = cfg.detector.dark_count_prob;
  j["detector"]["pixel_pitch_m"] = cfg.detector.pixel_pitch;
  j["detector"]["width_px"] = cfg.detector.width;
  j["detector"]["height_px"] = cfg.detector.height;

  j["frames"]["n_frames"] = cfg.frames.n_frames;
  j["frames"]["pairs_per_frame_mean"] = cfg.frames.pairs_per_frame_mean;
  j["frames"]["region1"] = {{"x0", cfg.frames.region1.x0},
                            {"y", cfg.frames.region1.y},
                            {"count", cfg.frames.region1.count}};
  j["frames"]["region2"] = {{"x0", cfg.frames.region2.x0},
                            {"y", cfg.frames.region2.y},
                            {"count", cfg.frames.region2.count}};
  j["frames"]["fixed_pixel_index"] = cfg.frames.fixed_pixel_index;

  j["sweep"]["A_values"] = cfg.sweep.A_values;
  j["sweep"]["slit_widths_m"] = cfg.sweep.slit_widths;

  j["characterize"]["focal_length_m"] = cfg.characterize.setup.focal_length;
  j["characterize"]["slit_separations_m"] = cfg.characterize.setup.d12;
  j["characterize"]["slit_width_m"] = cfg.characterize.setup.slit_width;
  j["characterize"]["wavelength_m"] = cfg.characterize.setup.wavelength_pump;
  j["characterize"]["measurements_csv"] = cfg.characterize.measurements_csv;
  j["characterize"]["curve_spot_sizes_m"] = cfg.characterize.curve_spot_sizes;
  j["characterize"]["fit"] = {{"a_min_m", cfg.characterize.fit.a_min},
                              {"a_max_m", cfg.characterize.fit.a_max},
                              {"scan_points", cfg.characterize.fit.scan_points}};

  j["oracle"]["scan_count"] = cfg.oracle.scan_count;
  j["oracle"]["linf_threshold"] = cfg.oracle.linf_threshold;
  j["oracle"]["probe_points_m"] = cfg.oracle.probe_points;

  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  return j.dump(2) + "\n";
}

}  // namespace bpnld
