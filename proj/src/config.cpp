#include "cvatm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cvatm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

// --- seasonal presets -------------------------------------------------------

// Extinction coefficients are tabulated per kilometre; stored per metre.
ExtinctionCoeffs per_km(double ms, double ma, double as, double aa) {
  return {ms * 1e-3, ma * 1e-3, as * 1e-3, aa * 1e-3};
}

std::vector<SeasonPreset> make_presets() {
  ExtinctionCoeffs summer_ext = per_km(1.64e-4, 3.35e-3, 2.52e-2, 5.49e-3);
  ExtinctionCoeffs winter_ext = per_km(1.77e-4, 8.56e-4, 2.52e-2, 5.49e-3);
  std::vector<SeasonPreset> p;
  p.push_back({"spring", 2.03e-15, summer_ext, true,
               "no tabulated extinction row; summer coefficients applied"});
  p.push_back({"summer", 2.12e-15, summer_ext, false, ""});
  p.push_back({"autumn", 5.56e-15, summer_ext, true,
               "no tabulated extinction row; summer coefficients applied"});
  p.push_back({"winter", 7.46e-15, winter_ext, false, ""});
  return p;
}

// --- generic JSON helpers ---------------------------------------------------

// Wraps one JSON object; every key must be consumed exactly once, anything
// left over is reported as an unknown key naming the block it sits in.
class Block {
 public:
  Block(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj.is_object()) fail(path_ + ": must be an object");
  }

  bool has(const std::string& key) {
    if (obj_.contains(key)) {
      seen_.insert(key);
      return true;
    }
    return false;
  }

  const json& at(const std::string& key) { return obj_.at(key); }

  double number(const std::string& key) {
    const json& v = obj_.at(key);
    if (!v.is_number()) fail(path_ + "." + key + ": must be a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double dflt) {
    return has(key) ? number(key) : dflt;
  }

  uint64_t count(const std::string& key, uint64_t dflt) {
    if (!has(key)) return dflt;
    const json& v = obj_.at(key);
    if (!v.is_number_integer() || v.get<int64_t>() < 0)
      fail(path_ + "." + key + ": must be a nonnegative integer");
    return v.get<uint64_t>();
  }

  bool boolean(const std::string& key, bool dflt) {
    if (!has(key)) return dflt;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) fail(path_ + "." + key + ": must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    const json& v = obj_.at(key);
    if (!v.is_string()) fail(path_ + "." + key + ": must be a string");
    return v.get<std::string>();
  }

  // Length value given either in metres (bare key) or with a unit suffix.
  // At most one spelling may appear.
  bool length(const std::string& base, double* out) {
    static const std::pair<const char*, double> kUnits[] = {
        {"", 1.0}, {"_km", 1e3}, {"_mm", 1e-3}, {"_um", 1e-6}, {"_nm", 1e-9}};
    int found = 0;
    for (const auto& [suffix, factor] : kUnits) {
      std::string key = base + suffix;
      if (obj_.contains(key)) {
        if (++found > 1)
          fail(path_ + ": " + base + " given in more than one unit");
        seen_.insert(key);
        *out = number(key) * factor;
      }
    }
    return found > 0;
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key()))
        fail("unknown key \"" + item.key() + "\" in " + path_);
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

// --- block parsers ----------------------------------------------------------

Detector parse_detector(const std::string& name, const std::string& where) {
  if (name == "homodyne") return Detector::homodyne;
  if (name == "heterodyne") return Detector::heterodyne;
  fail(where + ": must be \"homodyne\" or \"heterodyne\", got \"" + name + "\"");
}

ExtinctionCoeffs parse_extinction(const json& obj, const std::string& path) {
  Block b(obj, path);
  ExtinctionCoeffs c;
  bool any = false;
  if (b.has("mol_scatter")) c.mol_scatter = b.number("mol_scatter") * 1e-3, any = true;
  if (b.has("mol_absorb")) c.mol_absorb = b.number("mol_absorb") * 1e-3, any = true;
  if (b.has("aer_scatter")) c.aer_scatter = b.number("aer_scatter") * 1e-3, any = true;
  if (b.has("aer_absorb")) c.aer_absorb = b.number("aer_absorb") * 1e-3, any = true;
  b.finish();
  if (!any) fail(path + ": must set at least one coefficient");
  return c;
}

void parse_scenario(const json& obj, RunConfig* cfg) {
  Block b(obj, "scenario");
  LinkScenario& s = cfg->scenario;

  // Preset expansion happens first so explicit keys can override it.
  if (b.has("season")) {
    std::string name = b.text("season");
    const SeasonPreset* p = find_preset(name);
    if (!p)
      fail("scenario.season: unknown preset \"" + name +
           "\" (valid: spring, summer, autumn, winter)");
    s.cn2 = p->cn2;
    s.extinction = p->extinction;
    cfg->season = name;
    if (p->extinction_inherited && !obj.contains("extinction_per_km")) {
      cfg->warnings.push_back("season \"" + name + "\": " + p->extinction_note);
    }
  }

  b.length("wavelength", &s.wavelength);
  b.length("distance", &s.distance);
  if (b.has("cn2")) s.cn2 = b.number("cn2");
  b.length("beam_waist", &s.beam_waist);
  b.length("aperture_radius", &s.aperture_radius);
  b.length("focal_length", &s.focal_length);
  b.length("fiber_core_diameter", &s.fiber_core_diameter);
  b.length("inner_scale", &s.inner_scale);
  b.length("outer_scale", &s.outer_scale);
  if (b.has("extinction_per_km"))
    s.extinction = parse_extinction(b.at("extinction_per_km"),
                                    "scenario.extinction_per_km");
  if (b.has("prf_hz")) s.prf = b.number("prf_hz");
  if (b.has("duty_ratio")) s.duty_ratio = b.number("duty_ratio");
  if (b.has("lo_correlation")) s.lo_correlation = b.number("lo_correlation");
  if (b.has("modulation_variance"))
    s.modulation_variance = b.number("modulation_variance");
  if (b.has("detector")) s.detector = parse_detector(b.text("detector"),
                                                     "scenario.detector");
  if (b.has("detection_efficiency"))
    s.detection_efficiency = b.number("detection_efficiency");
  if (b.has("electronic_noise")) s.electronic_noise = b.number("electronic_noise");
  if (b.has("reconciliation_efficiency"))
    s.reconciliation_efficiency = b.number("reconciliation_efficiency");
  if (b.has("fixed_excess_noise"))
    s.fixed_excess_noise = b.number("fixed_excess_noise");
  b.finish();
}

std::vector<double> parse_distance_array(const json& arr, const std::string& path,
                                         double factor) {
  if (!arr.is_array()) fail(path + ": must be an array of numbers");
  if (arr.empty()) fail(path + ": must not be empty");
  std::vector<double> out;
  for (const json& v : arr) {
    if (!v.is_number()) fail(path + ": must be an array of numbers");
    out.push_back(v.get<double>() * factor);
  }
  return out;
}

std::vector<double> parse_range(const json& obj, const std::string& path,
                                double factor) {
  Block b(obj, path);
  if (!b.has("start") || !b.has("stop") || !b.has("step"))
    fail(path + ": must set start, stop, and step");
  double start = b.number("start") * factor;
  double stop = b.number("stop") * factor;
  double step = b.number("step") * factor;
  b.finish();
  if (start <= 0.0) fail(path + ".start: must be > 0");
  if (step <= 0.0) fail(path + ".step: must be > 0");
  if (stop < start) fail(path + ".stop: must be >= start");
  std::vector<double> out;
  for (double d = start; d <= stop * (1.0 + 1e-12); d += step) out.push_back(d);
  return out;
}

void parse_sweep(const json& obj, RunConfig* cfg) {
  Block b(obj, "sweep");
  int sources = 0;
  if (b.has("distances_m")) {
    cfg->distances = parse_distance_array(b.at("distances_m"),
                                          "sweep.distances_m", 1.0);
    ++sources;
  }
  if (b.has("distances_km")) {
    cfg->distances = parse_distance_array(b.at("distances_km"),
                                          "sweep.distances_km", 1e3);
    ++sources;
  }
  if (b.has("range_m")) {
    cfg->distances = parse_range(b.at("range_m"), "sweep.range_m", 1.0);
    ++sources;
  }
  if (b.has("range_km")) {
    cfg->distances = parse_range(b.at("range_km"), "sweep.range_km", 1e3);
    ++sources;
  }
  if (sources > 1) fail("sweep: distances given in more than one form");
  cfg->n_samples = b.count("n_samples", cfg->n_samples);
  if (cfg->n_samples == 0) fail("sweep.n_samples: must be >= 1");
  cfg->seed = b.count("seed", cfg->seed);
  uint64_t threads = b.count("threads", static_cast<uint64_t>(cfg->threads));
  if (threads == 0 || threads > 4096) fail("sweep.threads: must be in [1, 4096]");
  cfg->threads = static_cast<int>(threads);
  if (b.has("detectors")) {
    const json& arr = b.at("detectors");
    if (!arr.is_array() || arr.empty())
      fail("sweep.detectors: must be a non-empty array");
    cfg->detectors.clear();
    for (const json& v : arr) {
      if (!v.is_string()) fail("sweep.detectors: entries must be strings");
      Detector d = parse_detector(v.get<std::string>(), "sweep.detectors");
      for (Detector prev : cfg->detectors)
        if (prev == d) fail("sweep.detectors: duplicate entry");
      cfg->detectors.push_back(d);
    }
  }
  b.finish();
}

void parse_output(const json& obj, RunConfig* cfg) {
  Block b(obj, "output");
  OutputOptions& o = cfg->output;
  if (b.has("directory")) o.directory = b.text("directory");
  if (b.has("formats")) {
    const json& arr = b.at("formats");
    if (!arr.is_array()) fail("output.formats: must be an array");
    o.write_csv = false;
    o.write_json = false;
    for (const json& v : arr) {
      std::string f = v.is_string() ? v.get<std::string>() : std::string();
      if (f == "csv")
        o.write_csv = true;
      else if (f == "json")
        o.write_json = true;
      else
        fail("output.formats: must contain only \"csv\" and \"json\"");
    }
  }
  o.write_histograms = b.boolean("histograms", o.write_histograms);
  o.include_phase_noise = b.boolean("include_phase_noise", o.include_phase_noise);
  o.include_broadening = b.boolean("include_broadening", o.include_broadening);
  b.finish();
}

}  // namespace

const std::vector<SeasonPreset>& season_presets() {
  static const std::vector<SeasonPreset> presets = make_presets();
  return presets;
}

const SeasonPreset* find_preset(const std::string& name) {
  for (const SeasonPreset& p : season_presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

RunConfig parse_config_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config parse error: ") + e.what());
  }

  RunConfig cfg;
  Block top(doc, "config");
  if (top.has("scenario")) parse_scenario(top.at("scenario"), &cfg);
  if (top.has("sweep")) parse_sweep(top.at("sweep"), &cfg);
  if (top.has("output")) parse_output(top.at("output"), &cfg);
  top.finish();

  if (cfg.distances.empty()) cfg.distances = {cfg.scenario.distance};
  if (cfg.detectors.empty()) cfg.detectors = {cfg.scenario.detector};

  for (double d : cfg.distances) {
    if (!(d > 0.0) || !std::isfinite(d)) fail("sweep distances: must be > 0");
  }
  try {
    LinkScenario probe = cfg.scenario;
    probe.distance = cfg.distances.front();
    probe.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("scenario: ") + e.what());
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace cvatm
