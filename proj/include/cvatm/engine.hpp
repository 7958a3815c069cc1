#pragma once
// Monte Carlo driver: estimates transmittance statistics for a scenario,
// assembles the key-rate pipeline, and sweeps distances. Seeded runs are
// bit-identical for any worker count.
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cvatm/channel.hpp"
#include "cvatm/fading.hpp"
#include "cvatm/impairments.hpp"
#include "cvatm/keyrate.hpp"

namespace cvatm {

inline constexpr int kHistogramBins = 200;
inline constexpr uint64_t kSamplesPerBlock = 1024;

struct TransmittanceStats {
  uint64_t n_samples = 0;
  double mean_t = 0.0;
  double mean_sqrt_t = 0.0;
  double var_sqrt_t = 0.0;         // mean_t - mean_sqrt_t^2, floored at 0
  std::vector<double> density;     // kHistogramBins uniform bins on [0,1]
  uint64_t clamp_count = 0;
};

struct EngineOptions {
  uint64_t n_samples = 100000;
  uint64_t seed = 1;
  int workers = 1;
  uint64_t point_index = 0;        // substream selector (sweep row index)
  bool include_phase_noise = false;   // fold eps_theta into the excess noise
  bool include_broadening = false;    // multiply T0/T1 into each sample
  int n_annuli = 64;
  int n_sectors = 16;
};

// Draws n samples of total transmittance and accumulates moments + histogram.
TransmittanceStats estimate_transmittance(const LinkScenario& s,
                                          const EngineOptions& opt);

// Test hook: same accumulation pipeline over an injected sampler.
using SampleFn = std::function<double(RngStream&)>;
TransmittanceStats estimate_transmittance_with(const SampleFn& sample,
                                               uint64_t n, uint64_t seed,
                                               int workers,
                                               uint64_t point_index = 0);

// Debug cross-check: recompute the moments from retained samples with the
// same blocked summation order; must equal the streaming result bit-for-bit.
TransmittanceStats recompute_from_samples(const std::vector<double>& samples);

struct PointResult {
  double distance = 0.0;
  double rytov_sq = 0.0;
  Regime regime = Regime::weak;
  TransmittanceStats tstats;
  InterruptionResult interruption;
  PhaseNoiseResult phase;
  KeyRateResult keyrate;
  std::vector<std::string> warnings;
};

// Full pipeline for one scenario: derived params -> beam statistics ->
// transmittance Monte Carlo -> interruption -> phase noise -> key rate.
PointResult evaluate_point(const LinkScenario& s, const EngineOptions& opt);

struct SweepRow {
  Detector detector = Detector::homodyne;
  PointResult point;
};

struct SweepResult {
  std::vector<SweepRow> rows;             // sorted by distance, then detector
  std::vector<std::string> warnings;      // union of row warnings (deduplicated)
};

// One row per distance per detector. Transmittance statistics are estimated
// once per distance and shared across detectors (they do not depend on the
// detection scheme). Per-row failures are recorded as warnings and skipped.
SweepResult sweep(const LinkScenario& scenario_template,
                  const std::vector<double>& distances,
                  const std::vector<Detector>& detectors,
                  const EngineOptions& opt);

}  // namespace cvatm
