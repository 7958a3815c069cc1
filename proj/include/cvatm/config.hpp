#pragma once
// Batch-run configuration: JSON schema with unit-suffixed keys, seasonal
// presets, and validation with key-accurate error messages.
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvatm/channel.hpp"
#include "cvatm/engine.hpp"

namespace cvatm {

struct OutputOptions {
  std::string directory = "out";
  bool write_csv = true;
  bool write_json = true;
  bool write_histograms = false;
  bool include_phase_noise = false;
  bool include_broadening = false;
};

struct RunConfig {
  LinkScenario scenario;
  std::optional<std::string> season;  // preset name, if one was applied
  std::vector<double> distances;      // m, as given (engine sorts and dedupes)
  std::vector<Detector> detectors;
  uint64_t n_samples = 100000;
  uint64_t seed = 1;
  int threads = 1;
  OutputOptions output;
  std::vector<std::string> warnings;  // preset/validation warnings
};

struct SeasonPreset {
  std::string name;
  double cn2 = 0.0;                     // m^(-2/3)
  ExtinctionCoeffs extinction;          // per meter
  bool extinction_inherited = false;    // true when borrowed from another season
  std::string extinction_note;
};

// The four built-in seasonal presets.
const std::vector<SeasonPreset>& season_presets();
const SeasonPreset* find_preset(const std::string& name);

// Parse + validate a JSON config document. Unknown keys are rejected; error
// messages name the offending key. Throws std::runtime_error on any failure.
RunConfig parse_config_text(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);

}  // namespace cvatm
