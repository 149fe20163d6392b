#pragma once

// Square-root slope functions and the warping group acting on them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "elastic_tb/errors.hpp"
#include "elastic_tb/numerics.hpp"

namespace elastic_tb {

/// A real function sampled on a grid over [0, 1].
struct SampledFunction {
  Vec grid;
  Vec values;
};

/// q = sign(f') sqrt(|f'|) on the same grid as the function it came from.
struct Srsf {
  Vec grid;
  Vec q;
};

/// Boundary-preserving, nondecreasing reparametrization of [0, 1].
struct WarpingFunction {
  Vec grid;
  Vec gamma;
};

inline constexpr double kMonotoneTolerance = 1e-8;

inline void validate_grid(std::span<const double> grid, const char* what) {
  if (grid.size() < 3) throw SizeError(std::string(what) + ": need at least 3 grid points");
  if (!is_strictly_increasing(grid)) throw DomainError(std::string(what) + ": grid must be strictly increasing");
  if (std::abs(grid.front()) > 1e-12 || std::abs(grid.back() - 1.0) > 1e-12)
    throw DomainError(std::string(what) + ": grid must span [0, 1]");
}

inline void validate(const SampledFunction& f) {
  validate_grid(f.grid, "function");
  require_same_size(f.grid, f.values, "function");
  if (!all_finite(f.values)) throw DomainError("function: non-finite value");
}

inline void validate(const Srsf& q) {
  validate_grid(q.grid, "srsf");
  require_same_size(q.grid, q.q, "srsf");
  if (!all_finite(q.q)) throw DomainError("srsf: non-finite value");
}

inline void validate(const WarpingFunction& g) {
  validate_grid(g.grid, "warp");
  require_same_size(g.grid, g.gamma, "warp");
  if (std::abs(g.gamma.front()) > 1e-12 || std::abs(g.gamma.back() - 1.0) > 1e-12)
    throw DomainError("warp: endpoints must be 0 and 1");
  for (std::size_t i = 0; i < g.gamma.size(); ++i) {
    if (!std::isfinite(g.gamma[i]) || g.gamma[i] < -1e-12 || g.gamma[i] > 1.0 + 1e-12)
      throw DomainError("warp: values must lie in [0, 1]");
    if (i > 0 && g.gamma[i] < g.gamma[i - 1] - kMonotoneTolerance)
      throw DomainError("warp: not monotone at index " + std::to_string(i));
  }
}

inline WarpingFunction identity_warp(const Vec& grid) { return {grid, grid}; }

/// Affinely rescales an arbitrary compact domain onto [0, 1].
inline SampledFunction normalize_domain(std::span<const double> grid, std::span<const double> values) {
  if (grid.size() < 3) throw SizeError("normalize_domain: need at least 3 points");
  require_same_size(grid, values, "normalize_domain");
  if (!is_strictly_increasing(grid)) throw DomainError("normalize_domain: grid must be strictly increasing");
  if (!all_finite(values)) throw DomainError("normalize_domain: non-finite value");
  const double a = grid.front();
  const double width = grid.back() - a;
  Vec t(grid.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = (grid[i] - a) / width;
  t.front() = 0.0;
  t.back() = 1.0;
  return {std::move(t), Vec(values.begin(), values.end())};
}

inline SampledFunction resample(const SampledFunction& f, const Vec& grid) {
  return {grid, interp(f.grid, f.values, grid)};
}

inline Srsf resample(const Srsf& q, const Vec& grid) { return {grid, interp(q.grid, q.q, grid)}; }

struct SrsfOptions {
  /// Half-width (in samples) of a moving-average pre-smoother; 0 disables it.
  std::size_t smoothing_half_width = 0;
};

inline Vec moving_average(std::span<const double> y, std::size_t half_width) {
  const std::size_t n = y.size();
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half_width ? i - half_width : 0;
    const std::size_t hi = std::min(n - 1, i + half_width);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += y[j];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

inline double signed_sqrt(double x) { return std::copysign(std::sqrt(std::abs(x)), x); }

inline Srsf to_srsf(const SampledFunction& f, const SrsfOptions& options = {}) {
  validate(f);
  const Vec smoothed =
      options.smoothing_half_width > 0 ? moving_average(f.values, options.smoothing_half_width) : f.values;
  Vec q = gradient(f.grid, smoothed);
  for (auto& v : q) v = signed_sqrt(v);
  return {f.grid, std::move(q)};
}

/// f(t) = f0 + integral_0^t q|q|.
inline SampledFunction from_srsf(const Srsf& q, double f0) {
  Vec integrand(q.q.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] = q.q[i] * std::abs(q.q[i]);
  Vec f = cumtrapz(q.grid, integrand);
  for (auto& v : f) v += f0;
  return {q.grid, std::move(f)};
}

/// f o gamma, by linear interpolation of f.
inline SampledFunction apply_warp(const SampledFunction& f, const WarpingFunction& g) {
  require_same_size(f.grid, g.gamma, "apply_warp");
  return {f.grid, interp(f.grid, f.values, g.gamma)};
}

/// (q o gamma) sqrt(gamma'), the isometric group action on SRSFs.
inline Srsf warp_srsf(const Srsf& q, const WarpingFunction& g) {
  require_same_size(q.grid, g.gamma, "warp_srsf");
  const Vec slope = gradient(g.grid, g.gamma);
  Vec qq(q.q.size());
  for (std::size_t i = 0; i < qq.size(); ++i) qq[i] = q.q[i] * std::abs(q.q[i]);
  // q|q| is the slope of the underlying function and far smoother than q
  // itself, so interpolate it and take the signed root afterwards.
  Vec out = interp(q.grid, qq, g.gamma);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = signed_sqrt(out[i]) * std::sqrt(std::max(0.0, slope[i]));
  return {q.grid, std::move(out)};
}

/// Composition (g1 o g2)(t) = g1(g2(t)).
inline WarpingFunction compose(const WarpingFunction& g1, const WarpingFunction& g2) {
  return {g2.grid, interp(g1.grid, g1.gamma, g2.gamma)};
}

/// Makes a warp strictly increasing with exact endpoints: flat spots below the
/// monotone tolerance are lifted by adding 1e-8 t and renormalizing.
inline WarpingFunction repair_warp(WarpingFunction g) {
  const std::size_t n = g.gamma.size();
  for (auto& v : g.gamma) v = std::clamp(v, 0.0, 1.0);
  for (std::size_t i = 1; i < n; ++i) g.gamma[i] = std::max(g.gamma[i], g.gamma[i - 1]);
  bool flat = false;
  for (std::size_t i = 1; i < n; ++i)
    if (g.gamma[i] - g.gamma[i - 1] < kMonotoneTolerance * (g.grid[i] - g.grid[i - 1])) flat = true;
  if (flat) {
    constexpr double delta = 1e-8;
    for (std::size_t i = 0; i < n; ++i) g.gamma[i] = (g.gamma[i] + delta * g.grid[i]) / (1.0 + delta);
  }
  const double first = g.gamma.front();
  const double span = g.gamma.back() - first;
  for (auto& v : g.gamma) v = (v - first) / span;
  g.gamma.front() = 0.0;
  g.gamma.back() = 1.0;
  return g;
}

/// gamma^{-1}, by swapping the roles of grid and values.
inline WarpingFunction invert(const WarpingFunction& g) {
  const WarpingFunction strict = repair_warp(g);
  WarpingFunction out{g.grid, interp(strict.gamma, strict.grid, g.grid)};
  out.gamma.front() = 0.0;
  out.gamma.back() = 1.0;
  return out;
}

}  // namespace elastic_tb
