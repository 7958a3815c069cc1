// Monte Carlo engine tests: blocked accumulation, determinism across worker
// counts, and the full per-point pipeline. Pinned values computed with
// 40-digit arithmetic.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cvatm/engine.hpp"

using namespace cvatm;

namespace {

LinkScenario summer_scenario(double distance) {
  LinkScenario s;
  s.distance = distance;
  s.cn2 = 2.12e-15;
  s.extinction = {1.64e-7, 3.35e-6, 2.52e-5, 5.49e-6};  // per meter
  return s;
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::abs(b);
}

bool stats_identical(const TransmittanceStats& a, const TransmittanceStats& b) {
  if (a.n_samples != b.n_samples) return false;
  if (a.mean_t != b.mean_t) return false;
  if (a.mean_sqrt_t != b.mean_sqrt_t) return false;
  if (a.var_sqrt_t != b.var_sqrt_t) return false;
  if (a.clamp_count != b.clamp_count) return false;
  if (a.density.size() != b.density.size()) return false;
  for (size_t i = 0; i < a.density.size(); ++i) {
    if (a.density[i] != b.density[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("two-point channel statistics from the injected sampler") {
  SampleFn coin = [](RngStream& rng) {
    return rng.uniform() < 0.5 ? 0.0 : 1.0;
  };
  TransmittanceStats st = estimate_transmittance_with(coin, 1000000, 7, 1);
  CHECK(st.n_samples == 1000000u);
  CHECK(std::abs(st.mean_t - 0.5) < 0.005);
  CHECK(st.mean_sqrt_t == st.mean_t);  // sqrt(0)=0, sqrt(1)=1
  CHECK(std::abs(st.var_sqrt_t - 0.25) < 0.005);
  CHECK(st.clamp_count == 0u);
  // Histogram: only the two extreme bins are populated and the density
  // integrates to one.
  double integral = 0.0;
  for (int i = 0; i < kHistogramBins; ++i) {
    integral += st.density[i] / kHistogramBins;
    if (i != 0 && i != kHistogramBins - 1) CHECK(st.density[i] == 0.0);
  }
  CHECK(std::abs(integral - 1.0) < 1e-12);
  CHECK(st.density[0] > 90.0);
  CHECK(st.density[kHistogramBins - 1] > 90.0);
}

TEST_CASE("seeded runs are bit-identical for any worker count") {
  SampleFn noisy = [](RngStream& rng) {
    double t = 0.5 + 0.2 * rng.normal() + 0.05 * rng.gamma(2.0);
    return std::clamp(t, 0.0, 1.0);
  };
  TransmittanceStats w1 = estimate_transmittance_with(noisy, 50000, 42, 1);
  TransmittanceStats w4 = estimate_transmittance_with(noisy, 50000, 42, 4);
  TransmittanceStats w16 = estimate_transmittance_with(noisy, 50000, 42, 16);
  CHECK(stats_identical(w1, w4));
  CHECK(stats_identical(w1, w16));

  // Different seeds and different substream indices decorrelate the draws.
  TransmittanceStats other_seed = estimate_transmittance_with(noisy, 50000, 43, 1);
  CHECK(other_seed.mean_t != w1.mean_t);
  TransmittanceStats other_point =
      estimate_transmittance_with(noisy, 50000, 42, 1, /*point_index=*/3);
  CHECK(other_point.mean_t != w1.mean_t);

  // Real-kernel path: same invariance end to end (small n for speed).
  LinkScenario s = summer_scenario(5e3);
  EngineOptions opt;
  opt.n_samples = 5000;
  opt.seed = 11;
  TransmittanceStats k1 = estimate_transmittance(s, opt);
  opt.workers = 4;
  TransmittanceStats k4 = estimate_transmittance(s, opt);
  opt.workers = 16;
  TransmittanceStats k16 = estimate_transmittance(s, opt);
  CHECK(stats_identical(k1, k4));
  CHECK(stats_identical(k1, k16));
}

TEST_CASE("streaming accumulation equals blocked recomputation bit-for-bit") {
  LinkScenario s = summer_scenario(5e3);
  FadingKernel kernel = build_fading_kernel(s);
  const uint64_t n = 3000;  // two full blocks plus a partial one
  const uint64_t seed = 99;
  std::vector<double> samples;
  samples.reserve(n);
  for (uint64_t b = 0; b * kSamplesPerBlock < n; ++b) {
    uint64_t len = std::min(kSamplesPerBlock, n - b * kSamplesPerBlock);
    RngStream rng(seed, 0, b);
    for (uint64_t i = 0; i < len; ++i) {
      samples.push_back(total_transmittance_sample(kernel, rng));
    }
  }
  EngineOptions opt;
  opt.n_samples = n;
  opt.seed = seed;
  TransmittanceStats streamed = estimate_transmittance(s, opt);
  TransmittanceStats recomputed = recompute_from_samples(samples);
  CHECK(streamed.mean_t == recomputed.mean_t);
  CHECK(streamed.mean_sqrt_t == recomputed.mean_sqrt_t);
  CHECK(streamed.var_sqrt_t == recomputed.var_sqrt_t);
  for (int i = 0; i < kHistogramBins; ++i) {
    CHECK(streamed.density[i] == recomputed.density[i]);
  }
}

TEST_CASE("transmittance statistics of a real link are well-formed") {
  LinkScenario s = summer_scenario(10e3);
  EngineOptions opt;
  opt.n_samples = 20000;
  opt.seed = 5;
  TransmittanceStats st = estimate_transmittance(s, opt);
  CHECK(st.mean_t > 0.0);
  CHECK(st.mean_t < 1.0);
  CHECK(st.mean_sqrt_t * st.mean_sqrt_t <= st.mean_t + 1e-15);
  CHECK(st.var_sqrt_t >= 0.0);
  CHECK(st.clamp_count < st.n_samples / 100);  // clamping is rare
  double integral = 0.0;
  for (double d : st.density) integral += d / kHistogramBins;
  CHECK(std::abs(integral - 1.0) < 1e-12);
}

TEST_CASE("per-point pipeline assembles all diagnostics") {
  LinkScenario s = summer_scenario(10e3);
  EngineOptions opt;
  opt.n_samples = 20000;
  opt.seed = 17;
  PointResult r = evaluate_point(s, opt);
  CHECK(r.distance == 10e3);
  CHECK(rel_close(r.rytov_sq, 2.8756134367589232, 1e-12));
  CHECK(r.regime == Regime::strong_or_moderate);
  CHECK(rel_close(r.interruption.probability, 0.027537017318923263, 1e-10));
  CHECK(rel_close(r.phase.excess_noise, 0.036921365608808668, 2e-3));
  // Moments flow into the key rate with the interruption scaling.
  CHECK(r.keyrate.p_interrupt == r.interruption.probability);
  CHECK(rel_close(r.keyrate.k_atm_raw,
                  (1.0 - r.interruption.probability) * r.keyrate.k_raw,
                  1e-14));
  // The transition-regime and arrival-time-validity warnings are present.
  REQUIRE(r.warnings.size() == 2);
  CHECK(r.warnings[0].find("moderate") != std::string::npos);
  CHECK(r.warnings[1].find("arrival-time") != std::string::npos);

  // Folding the phase excess noise into epsilon can only reduce the rate.
  EngineOptions with_phase = opt;
  with_phase.include_phase_noise = true;
  PointResult rp = evaluate_point(s, with_phase);
  CHECK(rp.tstats.mean_t == r.tstats.mean_t);  // same seed, same samples
  CHECK(rp.keyrate.k_raw < r.keyrate.k_raw);
}

TEST_CASE("distance sweep shares statistics and orders rows") {
  LinkScenario s = summer_scenario(5e3);
  std::vector<double> distances = {10e3, 5e3};  // deliberately unsorted
  std::vector<Detector> detectors = {Detector::heterodyne, Detector::homodyne};
  EngineOptions opt;
  opt.n_samples = 2000;
  opt.seed = 23;
  SweepResult sw = sweep(s, distances, detectors, opt);
  REQUIRE(sw.rows.size() == 4);
  CHECK(sw.rows[0].point.distance == 5e3);
  CHECK(sw.rows[0].detector == Detector::homodyne);
  CHECK(sw.rows[1].point.distance == 5e3);
  CHECK(sw.rows[1].detector == Detector::heterodyne);
  CHECK(sw.rows[2].point.distance == 10e3);
  CHECK(sw.rows[3].point.distance == 10e3);
  // Shared transmittance statistics across detectors at each distance.
  CHECK(sw.rows[0].point.tstats.mean_t == sw.rows[1].point.tstats.mean_t);
  CHECK(sw.rows[2].point.tstats.mean_t == sw.rows[3].point.tstats.mean_t);
  // Different distances use different substreams and different physics.
  CHECK(sw.rows[0].point.tstats.mean_t != sw.rows[2].point.tstats.mean_t);
  // The 10 km transition-regime warning surfaces in the union, tagged with
  // the distance.
  bool found = false;
  for (const auto& w : sw.warnings) {
    if (w.find("moderate") != std::string::npos &&
        w.find("10000") != std::string::npos)
      found = true;
  }
  CHECK(found);
  // Key rates are finite and nonnegative everywhere.
  for (const auto& row : sw.rows) {
    CHECK(std::isfinite(row.point.keyrate.k_atm));
    CHECK(row.point.keyrate.k_atm >= 0.0);
  }

  CHECK_THROWS_AS(sweep(s, {}, detectors, opt), std::invalid_argument);
  CHECK_THROWS_AS(sweep(s, distances, {}, opt), std::invalid_argument);
}
