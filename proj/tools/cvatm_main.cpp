// cvatm command-line front end: config-driven sweeps, preset listing, and
// config validation.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cvatm/config.hpp"
#include "cvatm/engine.hpp"
#include "cvatm/output.hpp"

namespace {

using namespace cvatm;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 uint64_t* seed, uint64_t* samples, int* threads) {
  RunConfig cfg = parse_config_file(config_path);
  if (!out_dir.empty()) cfg.output.directory = out_dir;
  if (seed) cfg.seed = *seed;
  if (samples) {
    if (*samples == 0) throw std::runtime_error("--samples: must be >= 1");
    cfg.n_samples = *samples;
  }
  if (threads) {
    if (*threads < 1) throw std::runtime_error("--threads: must be >= 1");
    cfg.threads = *threads;
  }

  EngineOptions opt;
  opt.n_samples = cfg.n_samples;
  opt.seed = cfg.seed;
  opt.workers = cfg.threads;
  opt.include_phase_noise = cfg.output.include_phase_noise;
  opt.include_broadening = cfg.output.include_broadening;

  SweepResult result = sweep(cfg.scenario, cfg.distances, cfg.detectors, opt);
  print_warnings(cfg.warnings);
  print_warnings(result.warnings);
  if (result.rows.empty()) {
    std::fprintf(stderr, "error: all sweep points failed\n");
    return 1;
  }

  std::vector<std::string> files = write_outputs(cfg, result);
  std::printf("%zu rows (%zu distances x %zu detectors requested)\n",
              result.rows.size(), cfg.distances.size(), cfg.detectors.size());
  for (const std::string& f : files) std::printf("wrote %s\n", f.c_str());
  return 0;
}

int run_presets_list() {
  std::printf("%-8s %-12s %-40s %s\n", "season", "cn2[m^-2/3]",
              "extinction per km (ms, ma, as, aa)", "note");
  for (const SeasonPreset& p : season_presets()) {
    char ext[128];
    std::snprintf(ext, sizeof(ext), "%.3g, %.3g, %.3g, %.3g",
                  p.extinction.mol_scatter * 1e3, p.extinction.mol_absorb * 1e3,
                  p.extinction.aer_scatter * 1e3, p.extinction.aer_absorb * 1e3);
    std::printf("%-8s %-12.3g %-40s %s\n", p.name.c_str(), p.cn2, ext,
                p.extinction_inherited ? p.extinction_note.c_str() : "");
  }
  return 0;
}

int run_validate(const std::string& config_path) {
  RunConfig cfg = parse_config_file(config_path);
  print_warnings(cfg.warnings);
  std::printf("OK: %s\n", config_path.c_str());
  std::printf("  season: %s\n", cfg.season ? cfg.season->c_str() : "(none)");
  std::printf("  distances: %zu point(s), %g m to %g m\n", cfg.distances.size(),
              cfg.distances.front(), cfg.distances.back());
  std::string dets;
  for (Detector d : cfg.detectors) {
    if (!dets.empty()) dets += ", ";
    dets += to_string(d);
  }
  std::printf("  detectors: %s\n", dets.c_str());
  std::printf("  n_samples: %llu, seed: %llu, threads: %d\n",
              static_cast<unsigned long long>(cfg.n_samples),
              static_cast<unsigned long long>(cfg.seed), cfg.threads);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvatm: atmospheric CVQKD link simulator"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run the sweep described by a config file");
  std::string sim_config;
  std::string sim_out;
  uint64_t sim_seed = 0;
  uint64_t sim_samples = 0;
  int sim_threads = 0;
  sim->add_option("config", sim_config, "Path to the JSON config file")->required();
  auto* opt_out = sim->add_option("--out", sim_out, "Output directory (overrides config)");
  auto* opt_seed = sim->add_option("--seed", sim_seed, "RNG seed (overrides config)");
  auto* opt_samples =
      sim->add_option("--samples", sim_samples, "Samples per sweep point (overrides config)");
  auto* opt_threads =
      sim->add_option("--threads", sim_threads, "Worker threads (overrides config)");

  auto* presets = app.add_subcommand("presets", "Season preset utilities");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "List the built-in season presets");

  auto* validate = app.add_subcommand("validate", "Parse and validate a config file");
  std::string val_config;
  validate->add_option("config", val_config, "Path to the JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return run_simulate(sim_config, opt_out->count() ? sim_out : "",
                          opt_seed->count() ? &sim_seed : nullptr,
                          opt_samples->count() ? &sim_samples : nullptr,
                          opt_threads->count() ? &sim_threads : nullptr);
    }
    if (presets->parsed()) {
      return run_presets_list();
    }
    if (validate->parsed()) {
      return run_validate(val_config);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
