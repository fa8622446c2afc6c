// Command-line front end: reproducible closed-form scans, sweeps, the
// quadrature cross-check, pump characterization, and the photon-counting
// frame pipeline, all driven by one JSON config.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpnld/config.hpp"
#include "bpnld/errors.hpp"
#include "bpnld/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bpnld;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool overwrite = false;
};

int resolve_threads(const CommonOptions& opt) {
  if (opt.threads > 0) return opt.threads;
  if (const char* env = std::getenv("BPNLD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // modules fall back to hardware concurrency
}

RunConfig load_config(const CommonOptions& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) cfg = parse_config(opt.config_path);
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  if (opt.seed_set) cfg.seed = opt.seed;
  return cfg;
}

void prepare_out_dir(const RunConfig& cfg, bool overwrite) {
  const fs::path dir(cfg.output_dir);
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir))
      throw ConfigError(cfg.output_dir + " exists and is not a directory");
    if (!fs::is_empty(dir) && !overwrite)
      throw ConfigError(cfg.output_dir +
                        " is not empty; pass --overwrite to reuse it");
  } else {
    fs::create_directories(dir);
  }
}

void warn_unused_sections(const RunConfig& cfg,
                          const std::set<std::string>& used) {
  std::string unused;
  for (const auto& s : cfg.sections_present) {
    if (s == "seed" || s == "output_dir") continue;
    if (used.count(s)) continue;
    if (!unused.empty()) unused += ", ";
    unused += s;
  }
  if (!unused.empty())
    std::cerr << "warning: config sections not used by this subcommand: "
              << unused << "\n";
}

void write_provenance(const RunConfig& cfg, const std::string& subcommand,
                      int threads) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["subcommand"] = subcommand;
  j["seed"] = cfg.seed;
  j["threads_requested"] = threads;
  j["config"] = json::parse(resolved_config_json(cfg));
  write_text_file((fs::path(cfg.output_dir) / "provenance.json").string(),
                  j.dump(2) + "\n");
}

int run_pattern(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt);
  warn_unused_sections(cfg, {"experiment"});
  prepare_out_dir(cfg, opt.overwrite);
  const Pattern p = scan_pattern(cfg.experiment, resolve_threads(opt));
  write_text_file((fs::path(cfg.output_dir) / "pattern.csv").string(),
                  pattern_csv(p));
  write_provenance(cfg, "pattern", resolve_threads(opt));
  std::cout << "pattern: " << p.positions.size() << " points -> "
            << cfg.output_dir << "/pattern.csv\n";
  return 0;
}

int run_sweep(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt);
  warn_unused_sections(cfg, {"experiment", "sweep"});
  prepare_out_dir(cfg, opt.overwrite);

  std::vector<ExperimentSpec> specs;
  for (double A : cfg.sweep.A_values) {
    for (double bs : cfg.sweep.slit_widths) {
      ExperimentSpec s = cfg.experiment;
      s.pump = PumpSpec(s.pump.wavelength, s.pump.w0,
                        coherence_length_for_A(s.pump.w0, A));
      s.slit = ApertureSpec::slit(bs);
      specs.push_back(s);
    }
  }
  const auto rows = sweep(specs, resolve_threads(opt));
  write_text_file((fs::path(cfg.output_dir) / "sweep_summary.csv").string(),
                  sweep_summary_csv(rows));
  for (size_t i = 0; i < rows.size(); ++i) {
    const std::string name = "pattern_" + std::to_string(i) + ".csv";
    write_text_file((fs::path(cfg.output_dir) / name).string(),
                    pattern_csv(rows[i].pattern));
  }
  write_provenance(cfg, "sweep", resolve_threads(opt));
  std::cout << "sweep: " << rows.size() << " rows -> " << cfg.output_dir
            << "/sweep_summary.csv\n";
  return 0;
}

int run_oracle(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt);
  warn_unused_sections(cfg, {"experiment", "quadrature", "oracle"});
  prepare_out_dir(cfg, opt.overwrite);
  const int threads = resolve_threads(opt);
  const int count = cfg.oracle.scan_count;

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentSpec spec = cfg.experiment;
  spec.scan.count = count;
  const Pattern closed = scan_pattern(spec, threads);
  const auto t1 = std::chrono::steady_clock::now();
  const Pattern numeric = scan_numeric(spec, cfg.quadrature, count, threads);
  const auto t2 = std::chrono::steady_clock::now();

  const PatternComparison cmp = compare_patterns(closed, numeric);
  write_text_file((fs::path(cfg.output_dir) / "oracle.csv").string(),
                  oracle_csv(closed, numeric));

  std::vector<double> probes = cfg.oracle.probe_points;
  if (probes.empty()) {
    for (double f : {0.0, 0.12, 0.3, 0.55, 0.85})
      probes.push_back(spec.scan.u1 + f * (spec.scan.u2_max - spec.scan.u1));
  }
  const ConvergenceReport conv =
      convergence_check(spec, cfg.quadrature, probes, threads);
  const auto t3 = std::chrono::steady_clock::now();

  const double step =
      (spec.scan.u2_max - spec.scan.u2_min) / (spec.scan.count - 1);
  double worst_zero_offset = 0.0;
  for (const auto& [zero, offset] : cmp.zero_offsets)
    worst_zero_offset = std::max(worst_zero_offset, std::abs(offset));
  const bool zeros_ok = !cmp.zero_offsets.empty() &&
                        worst_zero_offset <= step * (1.0 + 1e-9);

  json rep;
  rep["linf"] = cmp.linf;
  rep["l2"] = cmp.l2;
  rep["grid_step_m"] = step;
  rep["zero_offsets"] = json::array();
  for (const auto& [zero, offset] : cmp.zero_offsets)
    rep["zero_offsets"].push_back({{"expected_zero_m", zero}, {"offset_m", offset}});
  rep["zeros_within_one_step"] = zeros_ok;
  rep["convergence"] = {
      {"rho_points_coarse", conv.rho_points_coarse},
      {"rho_points_fine", conv.rho_points_fine},
      {"max_rel_change", conv.max_rel_change},
      {"max_imag_residual", conv.max_imag_residual},
  };
  rep["convergence"]["probes"] = json::array();
  for (const auto& p : conv.probes) {
    rep["convergence"]["probes"].push_back({{"u2_m", p.u2},
                                            {"rate_coarse", p.rate_coarse},
                                            {"rate_fine", p.rate_fine},
                                            {"rel_change", p.rel_change},
                                            {"imag_residual", p.imag_residual}});
  }
  auto ms = [](auto a, auto b) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
  };
  rep["runtime_ms"] = {{"closed_form", ms(t0, t1)},
                       {"numeric_scan", ms(t1, t2)},
                       {"convergence", ms(t2, t3)}};
  write_text_file((fs::path(cfg.output_dir) / "convergence.json").string(),
                  rep.dump(2) + "\n");

  if (cmp.linf > cfg.oracle.linf_threshold) {
    json dev;
    dev["linf"] = cmp.linf;
    dev["linf_threshold"] = cfg.oracle.linf_threshold;
    dev["zeros_within_one_step"] = zeros_ok;
    dev["worst_zero_offset_m"] = worst_zero_offset;
    dev["note"] =
        "closed-form and direct-quadrature patterns disagree beyond the "
        "threshold. The analytic coefficient cascade contains a "
        "self-cancelling factor in B0 and dimensionally mixed sums in f, n, "
        "p and t, and its prefactor is complex; the quadrature route "
        "evaluates the defining integral directly. Fringe-zero agreement is "
        "the governing comparison.";
    write_text_file((fs::path(cfg.output_dir) / "deviation_report.json").string(),
                    dev.dump(2) + "\n");
    std::cerr << "oracle: L_inf " << cmp.linf << " exceeds threshold "
              << cfg.oracle.linf_threshold << "; deviation report written\n";
  }

  write_provenance(cfg, "oracle", threads);
  std::cout << "oracle: linf=" << cmp.linf
            << " zeros_within_one_step=" << (zeros_ok ? "yes" : "no")
            << " max_rel_change=" << conv.max_rel_change << " -> "
            << cfg.output_dir << "/oracle.csv\n";
  return 0;
}

int run_characterize(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt);
  warn_unused_sections(cfg, {"characterize", "experiment"});
  prepare_out_dir(cfg, opt.overwrite);
  const auto& cc = cfg.characterize;

  json result;
  if (!cc.measurements_csv.empty()) {
    const auto measurements = read_measurements_csv(cc.measurements_csv);
    const SpotFit fit = fit_spot_size(measurements, cc.setup, cc.fit);
    const double kp = cc.setup.pump_wavenumber();
    const double lc =
        transverse_coherence_length(cc.setup.focal_length, kp, fit.a_s);
    const double A = degree_of_coherence(
        PumpSpec(cc.setup.wavelength_pump, cfg.experiment.pump.w0, lc));
    result["fit"] = {{"a_s_m", fit.a_s},
                     {"residual", fit.residual},
                     {"lc_m", lc},
                     {"A", A}};
    std::cout << "characterize: a_s=" << fit.a_s << " m, lc=" << lc
              << " m, A=" << A << "\n";
  }

  std::vector<double> spots = cc.curve_spot_sizes;
  if (spots.empty()) {
    for (int i = 0; i < 24; ++i) spots.push_back(2e-6 + i * (38e-6 / 23.0));
  }
  const auto curve = coherence_curve(spots, cfg.experiment.pump.w0, cc.setup);
  write_text_file((fs::path(cfg.output_dir) / "coherence_curve.csv").string(),
                  coherence_curve_csv(curve));
  result["curve_rows"] = curve.size();
  write_text_file((fs::path(cfg.output_dir) / "characterize.json").string(),
                  result.dump(2) + "\n");
  write_provenance(cfg, "characterize", resolve_threads(opt));
  std::cout << "characterize: " << curve.size() << " curve rows -> "
            << cfg.output_dir << "/coherence_curve.csv\n";
  return 0;
}

int run_frames(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt);
  warn_unused_sections(cfg, {"experiment", "detector", "frames"});
  prepare_out_dir(cfg, opt.overwrite);

  const JointPdf pdf = discretize_joint(cfg.experiment, cfg.detector,
                                        cfg.frames.region1, cfg.frames.region2);
  const FrameStack stack =
      synthesize_frames(pdf, cfg.frames.pairs_per_frame_mean, cfg.detector,
                        cfg.frames.n_frames, cfg.seed);
  write_frames((fs::path(cfg.output_dir) / "frames.bpnf").string(), stack);

  const auto cmap =
      coincidence_map(stack, cfg.frames.region1, cfg.frames.region2);
  std::vector<double> upos1(cfg.frames.region1.count), upos2(cfg.frames.region2.count);
  for (int i = 0; i < cfg.frames.region1.count; ++i)
    upos1[i] = cfg.frames.region1.position(i, cfg.detector.pixel_pitch);
  for (int j = 0; j < cfg.frames.region2.count; ++j)
    upos2[j] = cfg.frames.region2.position(j, cfg.detector.pixel_pitch);
  write_text_file((fs::path(cfg.output_dir) / "coincidence_map.csv").string(),
                  coincidence_map_csv(cmap, upos1, upos2));

  int jstar = cfg.frames.fixed_pixel_index;
  if (jstar < 0) {
    double best = -1.0;
    for (int j = 0; j < pdf.region2.count; ++j) {
      double m = 0.0;
      for (int i = 0; i < pdf.region1.count; ++i) m += pdf.at(i, j);
      if (m > best) {
        best = m;
        jstar = j;
      }
    }
  }
  const Pattern p =
      pattern_from_frames(stack, cfg.frames.region1, cfg.frames.region2, jstar);
  write_text_file((fs::path(cfg.output_dir) / "frames_pattern.csv").string(),
                  pattern_csv(p, "u1_m"));
  write_provenance(cfg, "frames", resolve_threads(opt));
  std::cout << "frames: " << stack.n_frames() << " frames, fixed pixel "
            << jstar << " -> " << cfg.output_dir << "/frames_pattern.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal double-slit coincidence simulator"};
  app.require_subcommand(1);

  CommonOptions opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "random seed")
        ->each([&](const std::string&) { opt.seed_set = true; });
    sub->add_option("--threads", opt.threads,
                    "worker cap (default: hardware; env BPNLD_THREADS)");
    sub->add_flag("--overwrite", opt.overwrite,
                  "allow writing into a non-empty output directory");
  };

  CLI::App* pattern = app.add_subcommand("pattern", "closed-form scan CSV");
  CLI::App* sweepc = app.add_subcommand("sweep", "A x slit-width sweep tables");
  CLI::App* oracle =
      app.add_subcommand("oracle", "closed-form vs quadrature comparison");
  CLI::App* charac =
      app.add_subcommand("characterize", "pump visibility fit and curve");
  CLI::App* frames =
      app.add_subcommand("frames", "synthesize frames and reconstruct");
  for (CLI::App* sub : {pattern, sweepc, oracle, charac, frames}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (pattern->parsed()) return run_pattern(opt);
    if (sweepc->parsed()) return run_sweep(opt);
    if (oracle->parsed()) return run_oracle(opt);
    if (charac->parsed()) return run_characterize(opt);
    if (frames->parsed()) return run_frames(opt);
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
