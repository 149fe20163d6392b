#pragma once

// Pairwise elastic alignment by dynamic programming over a monotone lattice.
//
// The lattice is the common grid on both axes. A path runs from (0,0) to
// (T-1,T-1) through segments (k,l) -> (k+a, l+b) with (a,b) co-prime in 1..3,
// along which the warp is linear. A segment costs the trapezoid rule applied
// to |q1(t) - q2(gamma(t)) sqrt(gamma'(t))|^2 at the q1 grid points it covers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "elastic_tb/srsf.hpp"

namespace elastic_tb {

struct Alignment {
  WarpingFunction warp;
  double distance = 0.0;  ///< sqrt of the optimal lattice cost
};

namespace detail {

inline constexpr std::array<std::pair<std::size_t, std::size_t>, 7> kLatticeSteps{
    {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 3}, {3, 2}}};

inline bool is_uniform(std::span<const double> t) {
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * h) return false;
  return true;
}

/// Segment costs on a fixed grid. On a uniform grid the interpolation offsets
/// and weights of each lattice step are the same everywhere and are tabulated
/// once; other grids fall back to locating each point.
class SegmentCoster {
public:
  explicit SegmentCoster(std::span<const double> t) : t_(t), uniform_(is_uniform(t)) {
    if (!uniform_) return;
    h_ = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t s = 0; s < kLatticeSteps.size(); ++s) {
      const auto [a, b] = kLatticeSteps[s];
      Pattern& pat = patterns_[s];
      pat.root = std::sqrt(static_cast<double>(b) / static_cast<double>(a));
      for (std::size_t m = 0; m <= a; ++m) {
        const std::size_t num = m * b;
        std::size_t off = num / a;
        double w = static_cast<double>(num % a) / static_cast<double>(a);
        if (m == a) {
          off = b - 1;
          w = 1.0;
        }
        pat.offset[m] = off;
        pat.weight[m] = w;
      }
    }
  }

  /// Cost of the segment leaving (k, l) along lattice step s.
  [[nodiscard]] double operator()(std::span<const double> q1, std::span<const double> q2, std::size_t k,
                                  std::size_t l, std::size_t s) const {
    const auto [a, b] = kLatticeSteps[s];
    if (!uniform_) return general(q1, q2, k, l, k + a, l + b);
    const Pattern& pat = patterns_[s];
    double sum = 0.0;
    for (std::size_t m = 0; m <= a; ++m) {
      const std::size_t p = l + pat.offset[m];
      const double r = q1[k + m] - pat.root * (q2[p] + pat.weight[m] * (q2[p + 1] - q2[p]));
      sum += (m == 0 || m == a) ? 0.5 * r * r : r * r;
    }
    return h_ * sum;
  }

  /// Cost computed by locating every point on the grid; valid on any grid.
  [[nodiscard]] double located(std::span<const double> q1, std::span<const double> q2, std::size_t k,
                               std::size_t l, std::size_t s) const {
    const auto [a, b] = kLatticeSteps[s];
    return general(q1, q2, k, l, k + a, l + b);
  }

private:
  struct Pattern {
    double root = 1.0;
    std::array<std::size_t, 4> offset{};
    std::array<double, 4> weight{};
  };

  [[nodiscard]] double general(std::span<const double> q1, std::span<const double> q2, std::size_t k,
                               std::size_t l, std::size_t i, std::size_t j) const {
    const double slope = (t_[j] - t_[l]) / (t_[i] - t_[k]);
    const double root = std::sqrt(slope);
    double cost = 0.0;
    double prev = 0.0;
    std::size_t p = l;
    for (std::size_t m = k; m <= i; ++m) {
      const double y = m == i ? t_[j] : t_[l] + (t_[m] - t_[k]) * slope;
      while (p + 1 < j && t_[p + 1] <= y) ++p;
      const double w = (y - t_[p]) / (t_[p + 1] - t_[p]);
      const double r = q1[m] - root * (q2[p] + w * (q2[p + 1] - q2[p]));
      const double r2 = r * r;
      if (m > k) cost += 0.5 * (t_[m] - t_[m - 1]) * (prev + r2);
      prev = r2;
    }
    return cost;
  }

  std::span<const double> t_;
  bool uniform_;
  double h_ = 0.0;
  std::array<Pattern, kLatticeSteps.size()> patterns_{};
};

}  // namespace detail

/// Finds gamma minimizing ||q1 - (q2 o gamma) sqrt(gamma')|| over the lattice.
inline Alignment pairwise_align(const Srsf& q1, const Srsf& q2) {
  if (q1.grid.size() != q2.grid.size() || q1.q.size() != q1.grid.size() || q2.q.size() != q2.grid.size())
    throw SizeError("pairwise_align: SRSFs must share a grid");
  for (std::size_t i = 0; i < q1.grid.size(); ++i)
    if (q1.grid[i] != q2.grid[i]) throw SizeError("pairwise_align: SRSFs must share a grid");

  const std::span<const double> t = q1.grid;
  const std::size_t n = t.size();
  const detail::SegmentCoster cost(t);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> energy(n * n, inf);
  std::vector<unsigned char> step(n * n, 0);
  energy[0] = 0.0;

  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) {
      double best = inf;
      unsigned char arg = 0;
      for (unsigned char s = 0; s < detail::kLatticeSteps.size(); ++s) {
        const auto [a, b] = detail::kLatticeSteps[s];
        if (a > i || b > j) continue;
        const double base = energy[(i - a) * n + (j - b)];
        if (base == inf) continue;
        const double e = base + cost(q1.q, q2.q, i - a, j - b, s);
        if (e < best) {
          best = e;
          arg = s;
        }
      }
      energy[i * n + j] = best;
      step[i * n + j] = arg;
    }
  }

  std::vector<double> xs{t[n - 1]};
  std::vector<double> ys{t[n - 1]};
  for (std::size_t i = n - 1, j = n - 1; i > 0 || j > 0;) {
    const auto [a, b] = detail::kLatticeSteps[step[i * n + j]];
    i -= a;
    j -= b;
    xs.push_back(t[i]);
    ys.push_back(t[j]);
  }
  std::reverse(xs.begin(), xs.end());
  std::reverse(ys.begin(), ys.end());

  WarpingFunction warp{q1.grid, interp(xs, ys, t)};
  warp = repair_warp(std::move(warp));
  return {std::move(warp), std::sqrt(std::max(0.0, energy[n * n - 1]))};
}

struct AmplitudeOptions {
  std::size_t grid_size = 101;  ///< common grid used when the inputs' grids differ
  SrsfOptions srsf{};
};

/// Elastic amplitude distance d_a(f1, f2) = inf_gamma ||q1 - (q2 o gamma) sqrt(gamma')||.
inline double amplitude_distance(const SampledFunction& f1, const SampledFunction& f2,
                                 const AmplitudeOptions& options = {}) {
  validate(f1);
  validate(f2);
  if (f1.grid == f2.grid) return pairwise_align(to_srsf(f1, options.srsf), to_srsf(f2, options.srsf)).distance;
  const Vec grid = uniform_grid(options.grid_size);
  return pairwise_align(to_srsf(resample(f1, grid), options.srsf), to_srsf(resample(f2, grid), options.srsf))
      .distance;
}

}  // namespace elastic_tb
