#pragma once

// Joint amplitude-phase functional PCA on g = [q*, C v] in R^{2T}, and the
// Gaussian model it induces on principal coefficients.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "elastic_tb/errors.hpp"
#include "elastic_tb/groupwise.hpp"
#include "elastic_tb/phase.hpp"
#include "elastic_tb/random.hpp"
#include "elastic_tb/srsf.hpp"

namespace elastic_tb {

/// One function in the joint representation. The phase block is stored
/// unscaled; flatten() applies C.
struct JointVector {
  Vec amplitude;  ///< aligned SRSF q*
  Vec phase;      ///< shooting vector v at the warp mean
  double scale_c = 1.0;

  [[nodiscard]] Vec flatten() const {
    Vec out(amplitude);
    out.reserve(amplitude.size() + phase.size());
    for (double v : phase) out.push_back(scale_c * v);
    return out;
  }
};

struct JointFpcaModel {
  Vec grid;
  Vec mean;                ///< [mean q*, 0], length 2T
  std::vector<Vec> basis;  ///< retained principal directions, each length 2T
  Vec variances;           ///< retained covariance eigenvalues (coefficient variances)
  Vec spectrum;            ///< every nonzero covariance eigenvalue, descending
  double scale_c = 1.0;
  std::size_t retained_k = 0;
  SqrtDensity warp_mean_psi;
  std::size_t sample_size_n = 0;
  double initial_value = 0.0;  ///< f(0) used when integrating SRSFs back to functions
  bool degenerate = false;     ///< no variance above the numerical floor

  [[nodiscard]] std::size_t points() const { return grid.size(); }

  [[nodiscard]] Srsf amplitude_mean() const {
    return {grid, Vec(mean.begin(), mean.begin() + static_cast<std::ptrdiff_t>(points()))};
  }

  [[nodiscard]] double explained_fraction() const {
    double total = 0.0;
    for (double v : spectrum) total += v;
    double kept = 0.0;
    for (double v : variances) kept += v;
    return total > 0.0 ? kept / total : 1.0;
  }
};

/// Retain a fixed number of components, or the fewest reaching `threshold` of
/// the total variance.
struct ComponentRule {
  std::optional<std::size_t> components;
  double threshold = 0.9;
};

inline constexpr double kSpectrumFloor = 1e-12;

namespace detail {

inline double total_sample_variance(const std::vector<const Vec*>& rows) {
  const std::size_t n = rows.size();
  const std::size_t d = rows.front()->size();
  double total = 0.0;
  for (std::size_t t = 0; t < d; ++t) {
    double mean = 0.0;
    for (const Vec* r : rows) mean += (*r)[t];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const Vec* r : rows) ss += ((*r)[t] - mean) * ((*r)[t] - mean);
    total += ss / static_cast<double>(n - 1);
  }
  return total;
}

}  // namespace detail

/// C = sqrt(trace cov(q*) / trace cov(v)); 1 when either block has no variance.
inline double estimate_scale_c(const AlignmentResult& ar) {
  if (ar.size() < 2) throw SizeError("estimate_scale_c: need at least 2 functions");
  std::vector<const Vec*> amp;
  std::vector<const Vec*> ph;
  for (std::size_t i = 0; i < ar.size(); ++i) {
    amp.push_back(&ar.aligned_srsfs[i].q);
    ph.push_back(&ar.shooting_vectors[i].v);
  }
  const double ta = detail::total_sample_variance(amp);
  const double tp = detail::total_sample_variance(ph);
  if (!(ta > 1e-24) || !(tp > 1e-24)) return 1.0;
  return std::sqrt(ta / tp);
}

inline std::vector<JointVector> build_joint(const AlignmentResult& ar, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("build_joint: C must be positive and finite");
  std::vector<JointVector> out;
  out.reserve(ar.size());
  for (std::size_t i = 0; i < ar.size(); ++i) out.push_back({ar.aligned_srsfs[i].q, ar.shooting_vectors[i].v, c});
  return out;
}

/// What fit() needs besides the joint vectors.
struct FitContext {
  Vec grid;
  SqrtDensity warp_mean_psi;
  double initial_value = 0.0;
};

/// Eigen-decomposition of the sample covariance through a thin SVD of the
/// centered n x 2T data matrix. The phase block of the mean is fixed at zero.
inline JointFpcaModel fit(const std::vector<JointVector>& gs, const FitContext& ctx, const ComponentRule& rule = {}) {
  const std::size_t n = gs.size();
  if (n < 2) throw SizeError("fit: need at least 2 joint vectors");
  const std::size_t T = ctx.grid.size();
  const std::size_t dim = 2 * T;
  for (const auto& g : gs)
    if (g.amplitude.size() != T || g.phase.size() != T) throw SizeError("fit: joint vector length mismatch");
  if (!rule.components && !(rule.threshold > 0.0 && rule.threshold <= 1.0))
    throw ConfigError("fit: variance threshold must lie in (0, 1]");
  if (rule.components && *rule.components == 0) throw ConfigError("fit: component count must be positive");

  JointFpcaModel m;
  m.grid = ctx.grid;
  m.warp_mean_psi = ctx.warp_mean_psi;
  m.initial_value = ctx.initial_value;
  m.sample_size_n = n;
  m.scale_c = gs.front().scale_c;
  m.mean.assign(dim, 0.0);
  for (const auto& g : gs)
    for (std::size_t t = 0; t < T; ++t) m.mean[t] += g.amplitude[t];
  for (std::size_t t = 0; t < T; ++t) m.mean[t] /= static_cast<double>(n);

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec flat = gs[i].flatten();
    for (std::size_t t = 0; t < dim; ++t)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = (flat[t] - m.mean[t]) * scale;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();

  const double largest = sv.size() > 0 ? sv(0) * sv(0) : 0.0;
  std::size_t rank = 0;
  for (Eigen::Index j = 0; j < sv.size(); ++j) {
    const double lambda = sv(j) * sv(j);
    if (largest > 0.0 && lambda > kSpectrumFloor * largest && lambda > 0.0) {
      m.spectrum.push_back(lambda);
      ++rank;
    }
  }

  auto direction = [&](std::size_t j) {
    Vec u(dim);
    std::size_t arg = 0;
    for (std::size_t t = 0; t < dim; ++t) {
      u[t] = v(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
      if (std::abs(u[t]) > std::abs(u[arg])) arg = t;
    }
    if (u[arg] < 0.0)
      for (auto& e : u) e = -e;
    return u;
  };

  if (rank == 0) {
    m.degenerate = true;
    m.retained_k = 1;
    m.variances = {0.0};
    Vec u(dim, 0.0);
    u[0] = 1.0;
    m.basis = {std::move(u)};
    return m;
  }

  std::size_t k = 0;
  if (rule.components) {
    k = std::min(*rule.components, rank);
  } else {
    double total = 0.0;
    for (double l : m.spectrum) total += l;
    double cum = 0.0;
    for (k = 0; k < rank;) {
      cum += m.spectrum[k++];
      if (cum >= rule.threshold * total * (1.0 - 1e-12)) break;
    }
  }
  m.retained_k = k;
  for (std::size_t j = 0; j < k; ++j) {
    m.variances.push_back(m.spectrum[j]);
    m.basis.push_back(direction(j));
  }
  return m;
}

struct FitOptions {
  ComponentRule components{};
  std::optional<double> scale_c;  ///< overrides the variance-balancing rule
};

inline JointFpcaModel fit_model(const AlignmentResult& ar, const FitOptions& options = {}) {
  const double c = options.scale_c ? *options.scale_c : estimate_scale_c(ar);
  return fit(build_joint(ar, c), {ar.grid, ar.warp_mean_psi, mean_initial_value(ar.aligned_functions)},
             options.components);
}

inline Vec coefficients(const JointFpcaModel& m, const JointVector& g) {
  if (g.amplitude.size() != m.points() || g.phase.size() != m.points())
    throw SizeError("coefficients: joint vector does not match the model grid");
  JointVector scaled = g;
  scaled.scale_c = m.scale_c;
  const Vec flat = scaled.flatten();
  Vec c(m.retained_k, 0.0);
  for (std::size_t j = 0; j < m.retained_k; ++j)
    for (std::size_t t = 0; t < flat.size(); ++t) c[j] += (flat[t] - m.mean[t]) * m.basis[j][t];
  return c;
}

/// mean + sum_j c_j U_j, returned with the phase block divided back by C.
inline JointVector reconstruct(const JointFpcaModel& m, const Vec& c) {
  const std::size_t T = m.points();
  JointVector g{Vec(m.mean.begin(), m.mean.begin() + static_cast<std::ptrdiff_t>(T)), Vec(T, 0.0), m.scale_c};
  for (std::size_t j = 0; j < std::min(c.size(), m.retained_k); ++j) {
    for (std::size_t t = 0; t < T; ++t) {
      g.amplitude[t] += c[j] * m.basis[j][t];
      g.phase[t] += c[j] * m.basis[j][T + t] / m.scale_c;
    }
  }
  return g;
}

struct Decomposed {
  Srsf amplitude;
  WarpingFunction warp;
  bool clamped = false;  ///< psi left the positive orthant and was projected back
};

/// Splits a joint vector into its aligned SRSF and the warp exp_{mu_psi}(v).
inline Decomposed decompose_sample(const JointFpcaModel& m, const JointVector& g) {
  if (g.amplitude.size() != m.points() || g.phase.size() != m.points())
    throw SizeError("decompose_sample: joint vector does not match the model grid");
  Decomposed out{{m.grid, g.amplitude}, {}, false};
  SqrtDensity psi = normalized(exp_map(m.warp_mean_psi, g.phase));
  out.clamped = project_to_orthant(psi);
  out.warp = from_psi(psi);
  return out;
}

struct PrincipalPath {
  Srsf amplitude_srsf;
  SampledFunction amplitude;  ///< integrated aligned function
  WarpingFunction warp;
  SampledFunction joint;  ///< amplitude composed with warp
};

/// Point at tau standard deviations along principal direction j (0-based).
inline PrincipalPath principal_path(const JointFpcaModel& m, std::size_t j, double tau) {
  if (j >= m.retained_k) throw SizeError("principal_path: direction index out of range");
  Vec c(m.retained_k, 0.0);
  c[j] = tau * std::sqrt(m.variances[j]);
  const JointVector g = reconstruct(m, c);
  Decomposed d = decompose_sample(m, g);
  PrincipalPath p;
  p.amplitude_srsf = d.amplitude;
  p.amplitude = from_srsf(d.amplitude, m.initial_value);
  p.warp = d.warp;
  p.joint = apply_warp(p.amplitude, p.warp);
  return p;
}

/// Draws c ~ N_k(0, diag(variances)) and maps each draw to a joint vector.
inline std::vector<JointVector> sample_model(const JointFpcaModel& m, std::size_t count, Rng& rng) {
  std::vector<JointVector> out;
  out.reserve(count);
  Vec c(m.retained_k);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < m.retained_k; ++j) c[j] = std::sqrt(std::max(0.0, m.variances[j])) * rng.normal();
    out.push_back(reconstruct(m, c));
  }
  return out;
}

inline std::vector<JointVector> sample_model(const JointFpcaModel& m, std::size_t count, std::uint64_t seed,
                                             std::uint64_t stream = 0) {
  Rng rng(seed, stream);
  return sample_model(m, count, rng);
}

/// Registers a new function against the model: align its SRSF to the model's
/// amplitude mean, then map the warp to the tangent space at the warp mean.
inline JointVector project_function(const JointFpcaModel& m, const SampledFunction& f, const SrsfOptions& srsf = {}) {
  const SampledFunction on_grid = f.grid == m.grid ? f : resample(f, m.grid);
  const Srsf q = to_srsf(on_grid, srsf);
  const Alignment a = pairwise_align(m.amplitude_mean(), q);
  const ShootingVector v = inv_exp_map(m.warp_mean_psi, to_psi(a.warp));
  return {warp_srsf(q, a.warp).q, v.v, m.scale_c};
}

/// The observable function behind a joint vector: integrate q* and apply the warp.
inline SampledFunction synthesize_function(const JointFpcaModel& m, const Decomposed& d) {
  return apply_warp(from_srsf(d.amplitude, m.initial_value), invert(d.warp));
}

}  // namespace elastic_tb
