#pragma once

// Geometric quantiles of amplitudes (SRSFs modulo warping) and of warps (psi
// on the sphere). A sample is split by the sign of each residual's projection
// onto the leading residual direction; on each side members are ranked by
// their distance to the geometric median.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "elastic_tb/align.hpp"
#include "elastic_tb/groupwise.hpp"
#include "elastic_tb/phase.hpp"

namespace elastic_tb {

enum class RankRule {
  half_tail,  ///< 1-based index from the outermost member: ceil((p/2) n_side)
  side_tail,  ///< ceil(p n_side), i.e. a p/2 tail of the whole sample
};

struct QuantileOptions {
  RankRule rank_rule = RankRule::half_tail;
  double median_tolerance = 1e-6;
  std::size_t median_max_iterations = 50;
};

struct AmplitudeQuantiles {
  Srsf lower, median, upper;  ///< lower/upper are sample members aligned to the median
  std::size_t lower_index = 0, upper_index = 0;
  std::vector<double> distances;    ///< d_a of each member to the median
  std::vector<double> projections;  ///< signed projection on the leading direction
};

struct PhaseQuantiles {
  WarpingFunction lower, median, upper;
  SqrtDensity lower_psi, median_psi, upper_psi;
  std::size_t lower_index = 0, upper_index = 0;
  std::vector<double> distances;
  std::vector<double> projections;
};

namespace detail {

/// Leading right singular vector of the stacked residuals.
inline Vec leading_direction(const std::vector<Vec>& residuals) {
  const auto n = static_cast<Eigen::Index>(residuals.size());
  const auto d = static_cast<Eigen::Index>(residuals.front().size());
  Eigen::MatrixXd r(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index t = 0; t < d; ++t) r(i, t) = residuals[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
  Eigen::BDCSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinV);
  Vec u(static_cast<std::size_t>(d));
  for (Eigen::Index t = 0; t < d; ++t) u[static_cast<std::size_t>(t)] = svd.matrixV()(t, 0);
  return u;
}

inline std::size_t side_rank(RankRule rule, double p, std::size_t side_size) {
  const double depth = rule == RankRule::half_tail ? 0.5 * p : p;
  const auto idx = static_cast<std::size_t>(std::ceil(depth * static_cast<double>(side_size) - 1e-12));
  return std::clamp<std::size_t>(idx, 1, side_size);
}

struct SidePick {
  std::optional<std::size_t> lower, upper;
};

inline SidePick pick_sides(const std::vector<double>& proj, const std::vector<double>& dist, double p, RankRule rule) {
  std::vector<std::size_t> neg, pos;
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (proj[i] < 0.0) neg.push_back(i);
    else if (proj[i] > 0.0) pos.push_back(i);
  }
  auto outermost_first = [&](std::vector<std::size_t>& side) {
    std::stable_sort(side.begin(), side.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
  };
  outermost_first(neg);
  outermost_first(pos);
  SidePick pick;
  if (!neg.empty()) pick.lower = neg[side_rank(rule, p, neg.size()) - 1];
  if (!pos.empty()) pick.upper = pos[side_rank(rule, p, pos.size()) - 1];
  return pick;
}

inline void check_quantile_args(std::size_t n, double p) {
  if (n < 3) throw SizeError("geometric quantiles: need at least 3 members");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("geometric quantiles: p must lie in (0, 1)");
}

/// Weiszfeld iteration for the L2 geometric median of fixed points.
inline Vec weiszfeld(const Vec& grid, const std::vector<const Vec*>& xs, Vec mu, double tolerance,
                     std::size_t max_iterations) {
  const std::size_t T = grid.size();
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    Vec step(T, 0.0);
    double weight = 0.0;
    for (const Vec* x : xs) {
      const double d = l2_distance(grid, *x, mu);
      if (d < 1e-12) continue;
      for (std::size_t t = 0; t < T; ++t) step[t] += ((*x)[t] - mu[t]) / d;
      weight += 1.0 / d;
    }
    if (weight == 0.0) break;
    for (auto& v : step) v /= weight;
    for (std::size_t t = 0; t < T; ++t) mu[t] += step[t];
    if (l2_norm(grid, step) <= tolerance) break;
  }
  return mu;
}

}  // namespace detail

/// Geometric median in the amplitude space. Alternates aligning the members to
/// the current estimate with a Weiszfeld solve on the aligned members, starting
/// at the medoid. Returns the median and every member aligned to it.
inline std::pair<Srsf, std::vector<Srsf>> amplitude_median(const std::vector<Srsf>& qs,
                                                           const QuantileOptions& options = {}) {
  Srsf mu = qs[srsf_medoid(qs)];
  const Vec& grid = mu.grid;
  std::vector<Srsf> aligned(qs.size());
  auto align_members = [&] {
    const std::vector<Alignment> a = align_all_to(mu, qs);
    for (std::size_t i = 0; i < qs.size(); ++i) aligned[i] = warp_srsf(qs[i], a[i].warp);
  };
  for (std::size_t iter = 0; iter < options.median_max_iterations; ++iter) {
    align_members();
    std::vector<const Vec*> xs;
    for (const auto& q : aligned) xs.push_back(&q.q);
    Vec next = detail::weiszfeld(grid, xs, mu.q, options.median_tolerance, options.median_max_iterations);
    const double change = l2_distance(grid, next, mu.q);
    mu.q = std::move(next);
    if (change <= options.median_tolerance) break;
  }
  align_members();
  return {std::move(mu), std::move(aligned)};
}

inline AmplitudeQuantiles geometric_quantiles_amplitude(const std::vector<Srsf>& qs, double p,
                                                        const QuantileOptions& options = {}) {
  detail::check_quantile_args(qs.size(), p);
  auto [median, aligned] = amplitude_median(qs, options);
  const Vec& grid = median.grid;
  std::vector<Vec> residuals;
  AmplitudeQuantiles out;
  for (const auto& q : aligned) {
    Vec r(q.q);
    for (std::size_t t = 0; t < r.size(); ++t) r[t] -= median.q[t];
    out.distances.push_back(l2_norm(grid, r));
    residuals.push_back(std::move(r));
  }
  out.median = median;
  out.lower = out.upper = median;
  const double spread = *std::max_element(out.distances.begin(), out.distances.end());
  out.projections.assign(qs.size(), 0.0);
  if (spread < 1e-12) return out;

  Vec u = detail::leading_direction(residuals);
  if (std::accumulate(u.begin(), u.end(), 0.0) < 0.0)
    for (auto& e : u) e = -e;
  for (std::size_t i = 0; i < qs.size(); ++i)
    out.projections[i] = std::inner_product(u.begin(), u.end(), residuals[i].begin(), 0.0);

  const detail::SidePick pick = detail::pick_sides(out.projections, out.distances, p, options.rank_rule);
  if (pick.lower) {
    out.lower_index = *pick.lower;
    out.lower = aligned[*pick.lower];
  }
  if (pick.upper) {
    out.upper_index = *pick.upper;
    out.upper = aligned[*pick.upper];
  }
  return out;
}

inline PhaseQuantiles geometric_quantiles_phase(const std::vector<WarpingFunction>& gs, double p,
                                                const QuantileOptions& options = {}) {
  detail::check_quantile_args(gs.size(), p);
  std::vector<SqrtDensity> ps;
  for (const auto& g : gs) ps.push_back(to_psi(g));
  const SqrtDensity median = karcher_median_psi(ps, {options.median_tolerance, options.median_max_iterations});
  const Vec& grid = median.grid;

  PhaseQuantiles out;
  std::vector<Vec> residuals;
  for (const auto& p_i : ps) {
    ShootingVector sv = inv_exp_map(median, p_i);
    out.distances.push_back(l2_norm(grid, sv.v));
    residuals.push_back(std::move(sv.v));
  }
  out.median_psi = out.lower_psi = out.upper_psi = median;
  out.median = out.lower = out.upper = from_psi(median);
  out.projections.assign(gs.size(), 0.0);
  const double spread = *std::max_element(out.distances.begin(), out.distances.end());
  if (spread < 1e-12) return out;

  // Orient so that the positive side lifts the warp above the median on average.
  Vec u = detail::leading_direction(residuals);
  Vec lift(u.size());
  for (std::size_t t = 0; t < u.size(); ++t) lift[t] = 2.0 * median.psi[t] * u[t];
  const Vec dgamma = cumtrapz(grid, lift);
  if (trapz(grid, dgamma) < 0.0)
    for (auto& e : u) e = -e;
  for (std::size_t i = 0; i < gs.size(); ++i)
    out.projections[i] = std::inner_product(u.begin(), u.end(), residuals[i].begin(), 0.0);

  const detail::SidePick pick = detail::pick_sides(out.projections, out.distances, p, options.rank_rule);
  if (pick.lower) {
    out.lower_index = *pick.lower;
    out.lower = gs[*pick.lower];
    out.lower_psi = ps[*pick.lower];
  }
  if (pick.upper) {
    out.upper_index = *pick.upper;
    out.upper = gs[*pick.upper];
    out.upper_psi = ps[*pick.upper];
  }
  return out;
}

}  // namespace elastic_tb
