#pragma once

// Grid helpers shared by every module: quadrature, interpolation and finite
// differences on a (possibly non-uniform) strictly increasing grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "elastic_tb/errors.hpp"

namespace elastic_tb {

using Vec = std::vector<double>;

inline Vec uniform_grid(std::size_t points) {
  if (points < 2) throw SizeError("uniform grid needs at least 2 points");
  Vec t(points);
  const double h = 1.0 / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) t[i] = static_cast<double>(i) * h;
  t.back() = 1.0;
  return t;
}

inline bool is_strictly_increasing(std::span<const double> x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) return false;
  return true;
}

inline bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

inline void require_same_size(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size())
    throw SizeError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
}

inline double trapz(std::span<const double> t, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

/// Trapezoid-rule inner product of two sampled functions.
inline double inner(std::span<const double> t, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    s += 0.5 * (t[i] - t[i - 1]) * (a[i] * b[i] + a[i - 1] * b[i - 1]);
  return s;
}

inline double l2_norm(std::span<const double> t, std::span<const double> a) {
  return std::sqrt(std::max(0.0, inner(t, a, a)));
}

inline double l2_distance(std::span<const double> t, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double d1 = a[i] - b[i];
    const double d0 = a[i - 1] - b[i - 1];
    s += 0.5 * (t[i] - t[i - 1]) * (d1 * d1 + d0 * d0);
  }
  return std::sqrt(std::max(0.0, s));
}

inline Vec cumtrapz(std::span<const double> t, std::span<const double> y) {
  Vec out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return out;
}

/// Linear interpolation; x outside the grid is clamped to the end values.
inline double interp(std::span<const double> t, std::span<const double> y, double x) {
  if (x <= t.front()) return y.front();
  if (x >= t.back()) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const auto i = static_cast<std::size_t>(it - t.begin());
  const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
  return y[i - 1] + w * (y[i] - y[i - 1]);
}

inline Vec interp(std::span<const double> t, std::span<const double> y, std::span<const double> xs) {
  Vec out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = interp(t, y, xs[i]);
  return out;
}

/// Centered differences in the interior, one-sided first order at the ends.
inline Vec gradient(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  Vec d(n, 0.0);
  if (n < 2) return d;
  d[0] = (y[1] - y[0]) / (t[1] - t[0]);
  d[n - 1] = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
  return d;
}

inline Vec axpy(double a, std::span<const double> x, std::span<const double> y) {
  Vec out(y.begin(), y.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
  return out;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline Vec pointwise_mean(const std::vector<Vec>& xs) {
  Vec m(xs.front().size(), 0.0);
  for (const auto& x : xs)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += x[i];
  for (auto& v : m) v /= static_cast<double>(xs.size());
  return m;
}

/// Sample quantile with linear interpolation between order statistics
/// (the "type 7" rule). `sorted` must be ascending.
inline double quantile_sorted(std::span<const double> sorted, double level) {
  if (sorted.size() == 1) return sorted.front();
  const double h = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(Vec values, double level) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, level);
}

}  // namespace elastic_tb
