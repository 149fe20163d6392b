#pragma once

// Warping functions as points psi = sqrt(gamma') on the positive orthant of
// the unit Hilbert sphere, with the sphere's exponential and log maps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "elastic_tb/errors.hpp"
#include "elastic_tb/numerics.hpp"
#include "elastic_tb/srsf.hpp"

namespace elastic_tb {

struct SqrtDensity {
  Vec grid;
  Vec psi;
};

/// Tangent vector at `base`.
struct ShootingVector {
  Vec grid;
  Vec v;
  SqrtDensity base;
};

inline constexpr double kSmallAngle = 1e-10;

inline SqrtDensity normalized(SqrtDensity p) {
  const double norm = l2_norm(p.grid, p.psi);
  if (norm > 0.0)
    for (auto& v : p.psi) v /= norm;
  return p;
}

inline SqrtDensity to_psi(const WarpingFunction& g) {
  validate(g);
  Vec slope = gradient(g.grid, g.gamma);
  for (auto& v : slope) {
    if (v < -kMonotoneTolerance) throw DomainError("to_psi: warp is decreasing");
    v = std::sqrt(std::max(0.0, v));
  }
  return normalized({g.grid, std::move(slope)});
}

/// gamma(t) = integral_0^t psi^2, renormalized so gamma(1) = 1.
inline WarpingFunction from_psi(const SqrtDensity& p) {
  Vec sq(p.psi.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = p.psi[i] * p.psi[i];
  Vec gamma = cumtrapz(p.grid, sq);
  const double end = gamma.back();
  if (!(end > 0.0)) return identity_warp(p.grid);
  for (auto& v : gamma) v /= end;
  gamma.front() = 0.0;
  gamma.back() = 1.0;
  return repair_warp({p.grid, std::move(gamma)});
}

/// Clamps negative samples to zero and renormalizes. Returns true when a
/// clamp was needed.
inline bool project_to_orthant(SqrtDensity& p) {
  bool clamped = false;
  for (auto& v : p.psi) {
    if (v < 0.0) {
      v = 0.0;
      clamped = true;
    }
  }
  if (clamped) p = normalized(std::move(p));
  return clamped;
}

inline double sphere_angle(const SqrtDensity& a, const SqrtDensity& b) {
  return std::acos(std::clamp(inner(a.grid, a.psi, b.psi), -1.0, 1.0));
}

/// Arc length between the psi representations of two warps.
inline double phase_distance(const WarpingFunction& g1, const WarpingFunction& g2) {
  return sphere_angle(to_psi(g1), to_psi(g2));
}

inline SqrtDensity exp_map(const SqrtDensity& base, std::span<const double> v) {
  const double norm = l2_norm(base.grid, v);
  if (norm < kSmallAngle) return base;
  const double c = std::cos(norm);
  const double s = std::sin(norm) / norm;
  SqrtDensity out{base.grid, Vec(base.psi.size())};
  for (std::size_t i = 0; i < out.psi.size(); ++i) out.psi[i] = c * base.psi[i] + s * v[i];
  return out;
}

inline SqrtDensity exp_map(const SqrtDensity& base, const ShootingVector& sv) { return exp_map(base, sv.v); }

inline ShootingVector inv_exp_map(const SqrtDensity& base, const SqrtDensity& target) {
  const double theta = sphere_angle(base, target);
  ShootingVector out{base.grid, Vec(base.psi.size(), 0.0), base};
  if (theta < kSmallAngle) return out;
  if (theta >= std::numbers::pi - 1e-6) throw DomainError("inv_exp_map: antipodal points");
  const double c = std::cos(theta);
  const double scale = theta / std::sin(theta);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = scale * (target.psi[i] - c * base.psi[i]);
  return out;
}

/// Removes the component of v along base.
inline Vec project_to_tangent(const SqrtDensity& base, std::span<const double> v) {
  const double along = inner(base.grid, base.psi, v);
  Vec out(v.begin(), v.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= along * base.psi[i];
  return out;
}

struct KarcherOptions {
  double step = 0.3;
  double tolerance = 1e-6;
  std::size_t max_iterations = 50;
};

struct WarpMean {
  WarpingFunction gamma;
  SqrtDensity psi;
  std::vector<ShootingVector> shooting_vectors;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

inline SqrtDensity extrinsic_start(const std::vector<SqrtDensity>& ps) {
  SqrtDensity mean{ps.front().grid, Vec(ps.front().psi.size(), 0.0)};
  for (const auto& p : ps)
    for (std::size_t i = 0; i < mean.psi.size(); ++i) mean.psi[i] += p.psi[i];
  return normalized(std::move(mean));
}

}  // namespace detail

/// Intrinsic mean on the sphere by gradient steps along the mean shooting
/// vector, started from the normalized extrinsic average.
inline WarpMean karcher_mean_psi(const std::vector<SqrtDensity>& ps, const KarcherOptions& options = {}) {
  if (ps.empty()) throw SizeError("karcher_mean: empty sample");
  SqrtDensity mu = ps.size() == 1 ? ps.front() : detail::extrinsic_start(ps);
  const std::size_t n = mu.psi.size();
  double gnorm = 0.0;
  for (std::size_t iter = 0;; ++iter) {
    Vec mean_v(n, 0.0);
    for (const auto& p : ps) {
      const ShootingVector sv = inv_exp_map(mu, p);
      for (std::size_t i = 0; i < n; ++i) mean_v[i] += sv.v[i];
    }
    for (auto& v : mean_v) v /= static_cast<double>(ps.size());
    gnorm = l2_norm(mu.grid, mean_v);
    if (gnorm <= options.tolerance) {
      WarpMean out{from_psi(mu), mu, {}, gnorm, iter};
      out.shooting_vectors.reserve(ps.size());
      for (const auto& p : ps) out.shooting_vectors.push_back(inv_exp_map(mu, p));
      return out;
    }
    if (iter >= options.max_iterations)
      throw ConvergenceError("karcher_mean: no convergence after " + std::to_string(options.max_iterations) +
                                 " iterations",
                             gnorm);
    for (auto& v : mean_v) v *= options.step;
    mu = normalized(exp_map(mu, mean_v));
  }
}

inline WarpMean karcher_mean_warps(const std::vector<WarpingFunction>& gs, const KarcherOptions& options = {}) {
  std::vector<SqrtDensity> ps;
  ps.reserve(gs.size());
  for (const auto& g : gs) ps.push_back(to_psi(g));
  return karcher_mean_psi(ps, options);
}

struct MedianOptions {
  double tolerance = 1e-6;
  std::size_t max_iterations = 50;
};

/// Geometric median on the sphere: Weiszfeld iteration, each step moving to the
/// inverse-distance weighted mean of the shooting vectors. Points coinciding
/// with the current estimate get no weight.
inline SqrtDensity karcher_median_psi(const std::vector<SqrtDensity>& ps, const MedianOptions& options = {}) {
  if (ps.empty()) throw SizeError("karcher_median: empty sample");
  if (ps.size() == 1) return ps.front();
  SqrtDensity mu = detail::extrinsic_start(ps);
  const std::size_t n = mu.psi.size();
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    Vec step(n, 0.0);
    double weight = 0.0;
    for (const auto& p : ps) {
      const ShootingVector sv = inv_exp_map(mu, p);
      const double d = l2_norm(mu.grid, sv.v);
      if (d < kSmallAngle) continue;
      for (std::size_t i = 0; i < n; ++i) step[i] += sv.v[i] / d;
      weight += 1.0 / d;
    }
    if (weight == 0.0) break;
    for (auto& v : step) v /= weight;
    if (l2_norm(mu.grid, step) <= options.tolerance) break;
    mu = normalized(exp_map(mu, step));
  }
  return mu;
}

}  // namespace elastic_tb
