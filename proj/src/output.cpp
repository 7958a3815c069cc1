#include "cvatm/output.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace cvatm {

using nlohmann::json;

namespace {

constexpr const char* kToolName = "cvatm";
constexpr const char* kToolVersion = "1.0.0";

json extinction_json(const ExtinctionCoeffs& c) {
  return json{{"mol_scatter", c.mol_scatter},
              {"mol_absorb", c.mol_absorb},
              {"aer_scatter", c.aer_scatter},
              {"aer_absorb", c.aer_absorb}};
}

json scenario_json(const LinkScenario& s) {
  return json{{"wavelength_m", s.wavelength},
              {"cn2", s.cn2},
              {"beam_waist_m", s.beam_waist},
              {"aperture_radius_m", s.aperture_radius},
              {"focal_length_m", s.focal_length},
              {"fiber_core_diameter_m", s.fiber_core_diameter},
              {"inner_scale_m", s.inner_scale},
              {"outer_scale_m", s.outer_scale},
              {"extinction_per_m", extinction_json(s.extinction)},
              {"prf_hz", s.prf},
              {"duty_ratio", s.duty_ratio},
              {"lo_correlation", s.lo_correlation},
              {"modulation_variance", s.modulation_variance},
              {"detection_efficiency", s.detection_efficiency},
              {"electronic_noise", s.electronic_noise},
              {"reconciliation_efficiency", s.reconciliation_efficiency},
              {"fixed_excess_noise", s.fixed_excess_noise}};
}

void write_file(const std::filesystem::path& path, const std::string& text,
                std::vector<std::string>* written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
  written->push_back(path.string());
}

std::string distance_tag(double meters) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", meters);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sweep_csv(const SweepResult& r) {
  std::string out =
      "detector,L_m,sigma1_sq,regime,mean_T,mean_sqrtT,var_sqrtT,"
      "P_interrupt,eps_theta,I_AB,chi_BE,K,K_atm\n";
  for (const SweepRow& row : r.rows) {
    const PointResult& p = row.point;
    out += to_string(row.detector);
    out += ',' + format_double(p.distance);
    out += ',' + format_double(p.rytov_sq);
    out += ',' + to_string(p.regime);
    out += ',' + format_double(p.tstats.mean_t);
    out += ',' + format_double(p.tstats.mean_sqrt_t);
    out += ',' + format_double(p.tstats.var_sqrt_t);
    out += ',' + format_double(p.interruption.probability);
    out += ',' + format_double(p.phase.excess_noise);
    out += ',' + format_double(p.keyrate.i_ab);
    out += ',' + format_double(p.keyrate.chi_be);
    out += ',' + format_double(p.keyrate.k);
    out += ',' + format_double(p.keyrate.k_atm);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const TransmittanceStats& t) {
  std::string out = "bin_left,bin_right,density\n";
  const int n = static_cast<int>(t.density.size());
  for (int i = 0; i < n; ++i) {
    out += format_double(static_cast<double>(i) / n);
    out += ',' + format_double(static_cast<double>(i + 1) / n);
    out += ',' + format_double(t.density[i]);
    out += '\n';
  }
  return out;
}

std::string metadata_json(const RunConfig& cfg, const SweepResult& r) {
  json detectors = json::array();
  for (Detector d : cfg.detectors) detectors.push_back(to_string(d));

  json warnings = json::array();
  for (const std::string& w : cfg.warnings) warnings.push_back(w);
  for (const std::string& w : r.warnings) warnings.push_back(w);

  json rows = json::array();
  for (const SweepRow& row : r.rows) {
    rows.push_back(json{{"detector", to_string(row.detector)},
                        {"L_m", row.point.distance},
                        {"n_samples", row.point.tstats.n_samples},
                        {"clamped_samples", row.point.tstats.clamp_count}});
  }

  json doc{
      {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
      {"config",
       {{"scenario", scenario_json(cfg.scenario)},
        {"season", cfg.season ? json(*cfg.season) : json(nullptr)},
        {"distances_m", cfg.distances},
        {"detectors", detectors},
        {"n_samples", cfg.n_samples},
        {"seed", cfg.seed},
        {"threads", cfg.threads},
        {"output",
         {{"directory", cfg.output.directory},
          {"write_csv", cfg.output.write_csv},
          {"write_json", cfg.output.write_json},
          {"histograms", cfg.output.write_histograms},
          {"include_phase_noise", cfg.output.include_phase_noise},
          {"include_broadening", cfg.output.include_broadening}}}}},
      {"sampling",
       {{"scheme", "counter-seeded per-block substreams, merged in block order"},
        {"samples_per_block", kSamplesPerBlock},
        {"histogram_bins", kHistogramBins}}},
      {"warnings", warnings},
      {"rows", rows},
  };
  return doc.dump(2) + "\n";
}

std::vector<std::string> write_outputs(const RunConfig& cfg,
                                       const SweepResult& r) {
  namespace fs = std::filesystem;
  std::string dir = cfg.output.directory;
  if (const char* env = std::getenv("CVATM_OUT_DIR")) {
    if (env[0] != '\0') dir = env;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);

  std::vector<std::string> written;
  if (cfg.output.write_csv) {
    write_file(fs::path(dir) / "results.csv", sweep_csv(r), &written);
  }
  if (cfg.output.write_histograms) {
    double last = -1.0;
    for (const SweepRow& row : r.rows) {
      if (row.point.distance == last) continue;  // stats shared across detectors
      last = row.point.distance;
      std::string name = "histogram_" + distance_tag(row.point.distance) + "m.csv";
      write_file(fs::path(dir) / name, histogram_csv(row.point.tstats), &written);
    }
  }
  if (cfg.output.write_json) {
    write_file(fs::path(dir) / "metadata.json", metadata_json(cfg, r), &written);
  }
  return written;
}

}  // namespace cvatm
