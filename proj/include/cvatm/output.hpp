#pragma once
// Result writers: sweep CSV, per-distance histogram CSVs, and the JSON
// metadata document (config echo, seed, warnings, format notes).
#include <string>

#include "cvatm/config.hpp"
#include "cvatm/engine.hpp"

namespace cvatm {

// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

std::string sweep_csv(const SweepResult& r);
std::string histogram_csv(const TransmittanceStats& t);
std::string metadata_json(const RunConfig& cfg, const SweepResult& r);

// Writes results.csv, metadata.json, and (optionally) one
// histogram_<distance_m>m.csv per distance into cfg.output.directory.
// Returns the list of files written. Throws std::runtime_error on I/O errors.
std::vector<std::string> write_outputs(const RunConfig& cfg,
                                       const SweepResult& r);

}  // namespace cvatm
