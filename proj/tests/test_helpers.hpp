#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "elastic_tb/align.hpp"
#include "elastic_tb/random.hpp"
#include "elastic_tb/srsf.hpp"

namespace tb_test {

using elastic_tb::Vec;

inline elastic_tb::SampledFunction sample(std::size_t points, const std::function<double(double)>& f) {
  Vec t = elastic_tb::uniform_grid(points);
  Vec y(points);
  for (std::size_t i = 0; i < points; ++i) y[i] = f(t[i]);
  return {t, y};
}

inline elastic_tb::WarpingFunction warp_from(std::size_t points, const std::function<double(double)>& g) {
  Vec t = elastic_tb::uniform_grid(points);
  Vec y(points);
  for (std::size_t i = 0; i < points; ++i) y[i] = g(t[i]);
  y.front() = 0.0;
  y.back() = 1.0;
  return {t, y};
}

/// The simulation family rescaled to [0,1]: (e^{a t} - 1) / (e^a - 1).
inline elastic_tb::WarpingFunction exp_warp(std::size_t points, double a) {
  if (a == 0.0) return elastic_tb::identity_warp(elastic_tb::uniform_grid(points));
  return warp_from(points, [a](double t) { return std::expm1(a * t) / std::expm1(a); });
}

/// Random smooth warp: normalized integral of exp(sum of a few random sines).
inline elastic_tb::WarpingFunction random_warp(std::size_t points, elastic_tb::Rng& rng, double scale = 0.5) {
  const double c1 = scale * rng.normal();
  const double c2 = 0.5 * scale * rng.normal();
  Vec t = elastic_tb::uniform_grid(points);
  Vec dens(points);
  for (std::size_t i = 0; i < points; ++i)
    dens[i] = std::exp(c1 * std::sin(M_PI * t[i]) + c2 * std::sin(2.0 * M_PI * t[i]) - 0.0);
  Vec g = elastic_tb::cumtrapz(t, dens);
  for (auto& v : g) v /= g.back();
  return {t, g};
}

/// Exhaustive search over every monotone lattice path built from the same
/// segment set as the DP. Costs accumulate in path order.
inline double brute_force_lattice_cost(const elastic_tb::Srsf& q1, const elastic_tb::Srsf& q2) {
  const std::size_t n = q1.grid.size();
  const elastic_tb::detail::SegmentCoster cost(q1.grid);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
    if (i == n - 1 && j == n - 1) {
      best = std::min(best, acc);
      return;
    }
    for (std::size_t s = 0; s < elastic_tb::detail::kLatticeSteps.size(); ++s) {
      const auto [a, b] = elastic_tb::detail::kLatticeSteps[s];
      if (i + a > n - 1 || j + b > n - 1) continue;
      walk(i + a, j + b, acc + cost(q1.q, q2.q, i, j, s));
    }
  };
  walk(0, 0, 0.0);
  return best;
}

inline std::size_t count_interior_maxima(const Vec& y, double rel_prominence = 1e-3) {
  double lo = y.front(), hi = y.front();
  for (double v : y) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double eps = rel_prominence * (hi - lo);
  // Collapse plateaus, then count strict peaks that rise eps above both neighbours' valleys.
  std::size_t count = 0;
  std::size_t n = y.size();
  double last_valley = y.front();
  bool rising = false;
  double peak = y.front();
  for (std::size_t i = 1; i < n; ++i) {
    if (!rising) {
      if (y[i] < last_valley) last_valley = y[i];
      if (y[i] > last_valley + eps) {
        rising = true;
        peak = y[i];
      }
    } else {
      if (y[i] > peak) peak = y[i];
      if (y[i] < peak - eps) {
        ++count;
        rising = false;
        last_valley = y[i];
      }
    }
  }
  return count;
}

}  // namespace tb_test
