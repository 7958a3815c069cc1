#include "cvatm/engine.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace cvatm {

namespace {

struct BlockAccum {
  double sum_t = 0.0;
  double sum_sqrt = 0.0;
  std::array<uint64_t, kHistogramBins> hist{};
  uint64_t clamp = 0;
};

using ClampedSampleFn = std::function<double(RngStream&, bool&)>;

int bin_index(double t) {
  int idx = static_cast<int>(t * kHistogramBins);
  return std::clamp(idx, 0, kHistogramBins - 1);
}

// Runs the sampler over fixed-size blocks, each on its own substream, and
// merges the partial sums in block order: the result is bit-identical for
// any worker count.
TransmittanceStats run_blocked(const ClampedSampleFn& sample, uint64_t n,
                               uint64_t seed, int workers,
                               uint64_t point_index) {
  if (n == 0) throw std::invalid_argument("n_samples: must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers: must be >= 1");
  const uint64_t n_blocks = (n + kSamplesPerBlock - 1) / kSamplesPerBlock;
  std::vector<BlockAccum> blocks(n_blocks);

  std::atomic<uint64_t> next{0};
  auto work = [&]() {
    for (;;) {
      uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) break;
      uint64_t begin = b * kSamplesPerBlock;
      uint64_t len = std::min(kSamplesPerBlock, n - begin);
      RngStream rng(seed, point_index, b);
      BlockAccum& acc = blocks[b];
      for (uint64_t i = 0; i < len; ++i) {
        bool clipped = false;
        double t = sample(rng, clipped);
        acc.sum_t += t;
        acc.sum_sqrt += std::sqrt(t);
        acc.hist[bin_index(t)] += 1;
        acc.clamp += clipped ? 1 : 0;
      }
    }
  };
  if (workers == 1 || n_blocks == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    int count = static_cast<int>(
        std::min<uint64_t>(static_cast<uint64_t>(workers), n_blocks));
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  TransmittanceStats out;
  out.n_samples = n;
  double sum_t = 0.0;
  double sum_sqrt = 0.0;
  std::array<uint64_t, kHistogramBins> hist{};
  uint64_t clamp = 0;
  for (uint64_t b = 0; b < n_blocks; ++b) {
    sum_t += blocks[b].sum_t;
    sum_sqrt += blocks[b].sum_sqrt;
    for (int i = 0; i < kHistogramBins; ++i) hist[i] += blocks[b].hist[i];
    clamp += blocks[b].clamp;
  }
  out.mean_t = sum_t / static_cast<double>(n);
  out.mean_sqrt_t = sum_sqrt / static_cast<double>(n);
  out.var_sqrt_t =
      std::max(0.0, out.mean_t - out.mean_sqrt_t * out.mean_sqrt_t);
  out.density.resize(kHistogramBins);
  for (int i = 0; i < kHistogramBins; ++i) {
    out.density[i] = static_cast<double>(hist[i]) *
                     static_cast<double>(kHistogramBins) /
                     static_cast<double>(n);
  }
  out.clamp_count = clamp;
  return out;
}

TransmittanceStats run_kernel(const FadingKernel& kernel,
                              const EngineOptions& opt) {
  ClampedSampleFn fn = [&kernel](RngStream& rng, bool& clipped) {
    return total_transmittance_sample(kernel, rng, &clipped);
  };
  return run_blocked(fn, opt.n_samples, opt.seed, opt.workers,
                     opt.point_index);
}

}  // namespace

TransmittanceStats estimate_transmittance(const LinkScenario& s,
                                          const EngineOptions& opt) {
  FadingKernel kernel = build_fading_kernel(s, opt.include_broadening,
                                            opt.n_annuli, opt.n_sectors);
  return run_kernel(kernel, opt);
}

TransmittanceStats estimate_transmittance_with(const SampleFn& sample,
                                               uint64_t n, uint64_t seed,
                                               int workers,
                                               uint64_t point_index) {
  ClampedSampleFn fn = [&sample](RngStream& rng, bool& clipped) {
    clipped = false;
    return sample(rng);
  };
  return run_blocked(fn, n, seed, workers, point_index);
}

TransmittanceStats recompute_from_samples(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("n_samples: must be >= 1");
  const uint64_t n = samples.size();
  const uint64_t n_blocks = (n + kSamplesPerBlock - 1) / kSamplesPerBlock;
  TransmittanceStats out;
  out.n_samples = n;
  double sum_t = 0.0;
  double sum_sqrt = 0.0;
  std::array<uint64_t, kHistogramBins> hist{};
  // Per-block partial sums merged in block order, mirroring the streaming
  // accumulation exactly.
  for (uint64_t b = 0; b < n_blocks; ++b) {
    uint64_t begin = b * kSamplesPerBlock;
    uint64_t len = std::min(kSamplesPerBlock, n - begin);
    double bs_t = 0.0;
    double bs_sqrt = 0.0;
    for (uint64_t i = 0; i < len; ++i) {
      double t = samples[begin + i];
      bs_t += t;
      bs_sqrt += std::sqrt(t);
      hist[bin_index(t)] += 1;
    }
    sum_t += bs_t;
    sum_sqrt += bs_sqrt;
  }
  out.mean_t = sum_t / static_cast<double>(n);
  out.mean_sqrt_t = sum_sqrt / static_cast<double>(n);
  out.var_sqrt_t =
      std::max(0.0, out.mean_t - out.mean_sqrt_t * out.mean_sqrt_t);
  out.density.resize(kHistogramBins);
  for (int i = 0; i < kHistogramBins; ++i) {
    out.density[i] = static_cast<double>(hist[i]) *
                     static_cast<double>(kHistogramBins) /
                     static_cast<double>(n);
  }
  return out;
}

namespace {

PointResult evaluate_point_with_kernel(const LinkScenario& s,
                                       const FadingKernel& kernel,
                                       const TransmittanceStats& tstats,
                                       const EngineOptions& opt) {
  PointResult r;
  r.distance = s.distance;
  ChannelParams p = derive_params(s);
  r.rytov_sq = p.rytov_sq;
  r.regime = p.regime;
  r.tstats = tstats;
  r.warnings = kernel.warnings;

  r.interruption = interruption_probability(s, kernel.stats);

  PulseShape pulse =
      broadened_half_width(pulse_half_width(s.prf, s.duty_ratio), s);
  r.phase = phase_excess_noise(s, pulse);
  if (p.regime == Regime::strong_or_moderate) {
    r.warnings.push_back(
        "arrival-time variance uses the weak-fluctuation form (rytov_sq >= "
        "1): phase-noise figures are indicative only");
  }

  FadingMoments m{tstats.mean_t, tstats.mean_sqrt_t};
  ProtocolParams prot = ProtocolParams::from_scenario(
      s, opt.include_phase_noise ? r.phase.excess_noise : 0.0);
  r.keyrate = secret_key_rate(m, prot, r.interruption.probability);
  return r;
}

}  // namespace

PointResult evaluate_point(const LinkScenario& s, const EngineOptions& opt) {
  FadingKernel kernel = build_fading_kernel(s, opt.include_broadening,
                                            opt.n_annuli, opt.n_sectors);
  TransmittanceStats tstats = run_kernel(kernel, opt);
  return evaluate_point_with_kernel(s, kernel, tstats, opt);
}

SweepResult sweep(const LinkScenario& scenario_template,
                  const std::vector<double>& distances,
                  const std::vector<Detector>& detectors,
                  const EngineOptions& opt) {
  if (distances.empty())
    throw std::invalid_argument("distances: must not be empty");
  if (detectors.empty())
    throw std::invalid_argument("detectors: must not be empty");

  std::vector<double> dist_sorted = distances;
  std::sort(dist_sorted.begin(), dist_sorted.end());
  dist_sorted.erase(std::unique(dist_sorted.begin(), dist_sorted.end()),
                    dist_sorted.end());
  std::vector<Detector> det_sorted;
  for (Detector d : {Detector::homodyne, Detector::heterodyne}) {
    if (std::find(detectors.begin(), detectors.end(), d) != detectors.end())
      det_sorted.push_back(d);
  }

  SweepResult result;
  auto add_warning = [&result](const std::string& w) {
    if (std::find(result.warnings.begin(), result.warnings.end(), w) ==
        result.warnings.end())
      result.warnings.push_back(w);
  };
  auto distance_tag = [](double meters) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", meters);
    return std::string(buf);
  };

  for (size_t i = 0; i < dist_sorted.size(); ++i) {
    LinkScenario s = scenario_template;
    s.distance = dist_sorted[i];
    EngineOptions point_opt = opt;
    point_opt.point_index = opt.point_index + i;
    try {
      // Transmittance statistics do not depend on the detection scheme:
      // estimate once per distance and share across detectors.
      FadingKernel kernel = build_fading_kernel(
          s, point_opt.include_broadening, point_opt.n_annuli,
          point_opt.n_sectors);
      TransmittanceStats tstats = run_kernel(kernel, point_opt);
      for (Detector det : det_sorted) {
        LinkScenario sd = s;
        sd.detector = det;
        SweepRow row;
        row.detector = det;
        row.point = evaluate_point_with_kernel(sd, kernel, tstats, point_opt);
        for (const auto& w : row.point.warnings) {
          add_warning("L=" + distance_tag(dist_sorted[i]) + " m: " + w);
        }
        result.rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      add_warning("L=" + distance_tag(dist_sorted[i]) +
                  " m: skipped: " + e.what());
    }
  }
  return result;
}

}  // namespace cvatm
