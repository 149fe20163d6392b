#pragma once

// Groupwise alignment of a sample to its amplitude Karcher mean.

#include <cstddef>
#include <limits>
#include <vector>

#include "elastic_tb/align.hpp"
#include "elastic_tb/parallel.hpp"
#include "elastic_tb/phase.hpp"
#include "elastic_tb/srsf.hpp"

namespace elastic_tb {

struct AlignmentOptions {
  std::size_t grid_size = 101;
  double tolerance = 1e-4;
  std::size_t max_iterations = 20;
  /// Compose every warp with the inverse warp mean so the phase sample is
  /// centered at the identity.
  bool center_warps = true;
  SrsfOptions srsf{};
  KarcherOptions karcher{};
};

struct AmplitudeMean {
  Srsf mean;
  std::vector<WarpingFunction> warps;
  std::vector<double> distances;  ///< d_a of each input to the mean it was aligned to
  bool converged = true;
  std::size_t iterations = 0;
};

struct AlignmentResult {
  Vec grid;
  std::vector<SampledFunction> functions;  ///< inputs on the common grid
  std::vector<SampledFunction> aligned_functions;
  std::vector<Srsf> aligned_srsfs;
  std::vector<WarpingFunction> warps;
  Srsf amplitude_mean;
  SqrtDensity warp_mean_psi;
  WarpingFunction warp_mean;
  std::vector<ShootingVector> shooting_vectors;
  bool converged = true;
  std::size_t iterations = 0;

  [[nodiscard]] std::size_t size() const { return warps.size(); }
};

/// Index of the SRSF with the smallest summed L2 distance to the others.
inline std::size_t srsf_medoid(const std::vector<Srsf>& qs) {
  std::size_t best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < qs.size(); ++j)
      if (i != j) s += l2_distance(qs[i].grid, qs[i].q, qs[j].q);
    if (s < best_sum) {
      best_sum = s;
      best = i;
    }
  }
  return best;
}

inline std::vector<Alignment> align_all_to(const Srsf& target, const std::vector<Srsf>& qs) {
  std::vector<Alignment> out(qs.size());
  parallel_for(qs.size(), [&](std::size_t i) { out[i] = pairwise_align(target, qs[i]); });
  return out;
}

/// Alternates aligning every SRSF to the current mean and re-averaging until
/// the mean moves by at most `tolerance`. Without convergence the iterate with
/// the smallest summed squared distance is returned with converged = false.
inline AmplitudeMean amplitude_karcher_mean(const std::vector<Srsf>& qs, const AlignmentOptions& options = {}) {
  if (qs.empty()) throw SizeError("amplitude_karcher_mean: empty sample");
  for (const auto& q : qs)
    if (q.grid != qs.front().grid) throw SizeError("amplitude_karcher_mean: SRSFs must share a grid");

  const Vec& grid = qs.front().grid;
  Srsf mu = qs[srsf_medoid(qs)];
  AmplitudeMean best;
  double best_objective = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    const std::vector<Alignment> aligned = align_all_to(mu, qs);
    std::vector<Vec> warped(qs.size());
    AmplitudeMean current;
    current.iterations = iter;
    double objective = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      warped[i] = warp_srsf(qs[i], aligned[i].warp).q;
      current.warps.push_back(aligned[i].warp);
      current.distances.push_back(aligned[i].distance);
      objective += aligned[i].distance * aligned[i].distance;
    }
    current.mean = {grid, pointwise_mean(warped)};
    const double change = l2_distance(grid, current.mean.q, mu.q);
    if (objective < best_objective) {
      best_objective = objective;
      best = current;
    }
    if (change <= options.tolerance) {
      current.converged = true;
      return current;
    }
    mu = current.mean;
  }
  best.converged = false;
  return best;
}

inline double mean_initial_value(const std::vector<SampledFunction>& fs) {
  double s = 0.0;
  for (const auto& f : fs) s += f.values.front();
  return s / static_cast<double>(fs.size());
}

/// Full phase-amplitude separation of a sample.
inline AlignmentResult align_sample(const std::vector<SampledFunction>& fs, const AlignmentOptions& options = {}) {
  if (fs.empty()) throw SizeError("align_sample: empty sample");
  AlignmentResult out;
  out.grid = uniform_grid(options.grid_size);
  for (const auto& f : fs) {
    validate(f);
    out.functions.push_back(f.grid == out.grid ? f : resample(f, out.grid));
  }
  std::vector<Srsf> qs;
  qs.reserve(fs.size());
  for (const auto& f : out.functions) qs.push_back(to_srsf(f, options.srsf));

  if (qs.size() == 1) {
    out.aligned_functions = out.functions;
    out.aligned_srsfs = qs;
    out.warps = {identity_warp(out.grid)};
    out.amplitude_mean = qs.front();
  } else {
    const AmplitudeMean am = amplitude_karcher_mean(qs, options);
    out.converged = am.converged;
    out.iterations = am.iterations;
    out.warps = am.warps;
    if (options.center_warps) {
      const WarpMean center = karcher_mean_warps(out.warps, options.karcher);
      const WarpingFunction inverse = invert(center.gamma);
      for (auto& g : out.warps) g = repair_warp(compose(g, inverse));
    }
    for (std::size_t i = 0; i < qs.size(); ++i) {
      out.aligned_functions.push_back(apply_warp(out.functions[i], out.warps[i]));
      out.aligned_srsfs.push_back(warp_srsf(qs[i], out.warps[i]));
    }
    std::vector<Vec> aligned_q;
    for (const auto& q : out.aligned_srsfs) aligned_q.push_back(q.q);
    out.amplitude_mean = {out.grid, pointwise_mean(aligned_q)};
  }

  WarpMean wm = karcher_mean_warps(out.warps, options.karcher);
  out.warp_mean_psi = std::move(wm.psi);
  out.warp_mean = std::move(wm.gamma);
  out.shooting_vectors = std::move(wm.shooting_vectors);
  return out;
}

}  // namespace elastic_tb
