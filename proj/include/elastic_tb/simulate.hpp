#pragma once

// Dataset container and the synthetic generators used by the examples and the
// acceptance suite.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elastic_tb/errors.hpp"
#include "elastic_tb/numerics.hpp"
#include "elastic_tb/random.hpp"
#include "elastic_tb/srsf.hpp"

namespace elastic_tb {

/// Functions sharing one grid; one value vector per function.
struct DatasetTable {
  Vec grid;
  std::vector<Vec> functions;
  std::vector<std::string> labels;  ///< empty or one per function

  [[nodiscard]] std::size_t size() const { return functions.size(); }

  void validate() const {
    if (grid.size() < 3) throw SizeError("dataset: need at least 3 grid points");
    if (!is_strictly_increasing(grid)) throw DomainError("dataset: grid must be strictly increasing");
    for (std::size_t i = 0; i < functions.size(); ++i) {
      if (functions[i].size() != grid.size())
        throw SizeError("dataset: function " + std::to_string(i) + " has " + std::to_string(functions[i].size()) +
                        " values for " + std::to_string(grid.size()) + " grid points");
      if (!all_finite(functions[i])) throw DomainError("dataset: function " + std::to_string(i) + " is not finite");
    }
    if (!labels.empty() && labels.size() != functions.size()) throw SizeError("dataset: label count mismatch");
  }

  /// The functions with the grid rescaled to [0, 1].
  [[nodiscard]] std::vector<SampledFunction> to_functions() const {
    validate();
    std::vector<SampledFunction> out;
    out.reserve(functions.size());
    for (const auto& f : functions) out.push_back(normalize_domain(grid, f));
    return out;
  }

  static DatasetTable from_functions(const std::vector<SampledFunction>& fs) {
    if (fs.empty()) throw SizeError("dataset: no functions");
    DatasetTable out{fs.front().grid, {}, {}};
    for (const auto& f : fs) {
      if (f.grid != out.grid) throw SizeError("dataset: functions must share a grid");
      out.functions.push_back(f.values);
    }
    return out;
  }
};

struct TwoBumpOptions {
  std::size_t points = 301;
  double z_mean = 1.0;
  double z_sd = 0.25;
  double a_min = -1.0;  ///< warp parameters are equally spaced over [a_min, a_max]
  double a_max = 1.0;
};

/// Warp of [-3, 3] used by the two-bump generator; a = 0 is the identity.
inline double two_bump_warp(double a, double t) {
  if (a == 0.0) return t;
  return 6.0 * std::expm1(a * (t + 3.0) / 6.0) / std::expm1(a) - 3.0;
}

/// y_i(t) = z1 exp(-(t-1.5)^2/2) + z2 exp(-(t+1.5)^2/2) on [-3, 3], composed
/// with the warp of parameter a_i and rescaled to [0, 1].
inline DatasetTable simulate_two_bump(std::size_t n, std::uint64_t seed, const TwoBumpOptions& options = {}) {
  if (n < 2) throw SizeError("simulate_two_bump: need n >= 2");
  if (options.points < 3) throw SizeError("simulate_two_bump: need at least 3 points");
  Rng rng(seed, 0);
  DatasetTable out;
  const Vec t = uniform_grid(options.points);
  out.grid = t;
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = rng.normal(options.z_mean, options.z_sd);
    const double z2 = rng.normal(options.z_mean, options.z_sd);
    const double a =
        options.a_min + (options.a_max - options.a_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    Vec f(options.points);
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double s = two_bump_warp(a, -3.0 + 6.0 * t[j]);
      f[j] = z1 * std::exp(-0.5 * (s - 1.5) * (s - 1.5)) + z2 * std::exp(-0.5 * (s + 1.5) * (s + 1.5));
    }
    out.functions.push_back(std::move(f));
  }
  return out;
}

struct UnimodalOptions {
  std::size_t points = 301;
  double z_mean = 1.0;
  double z_sd = 0.05;
  double a_sd = 1.25;
  double t_min = -5.0;  ///< rendering window, rescaled to [0, 1]
  double t_max = 5.0;
};

/// y_i(t) = z_i exp(-(t - a_i)^2 / 2) with random height and location.
inline DatasetTable simulate_unimodal_toy(std::size_t n = 29, std::uint64_t seed = 0, const UnimodalOptions& options = {}) {
  if (n < 1) throw SizeError("simulate_unimodal_toy: need n >= 1");
  if (options.points < 3) throw SizeError("simulate_unimodal_toy: need at least 3 points");
  Rng rng(seed, 0);
  DatasetTable out;
  const Vec t = uniform_grid(options.points);
  out.grid = t;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.normal(options.z_mean, options.z_sd);
    const double a = rng.normal(0.0, options.a_sd);
    Vec f(options.points);
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double s = options.t_min + (options.t_max - options.t_min) * t[j];
      f[j] = z * std::exp(-0.5 * (s - a) * (s - a));
    }
    out.functions.push_back(std::move(f));
  }
  return out;
}

}  // namespace elastic_tb
