#pragma once

// Multivariate-normal tolerance regions on the principal coefficients.
//
// The tolerance factor b satisfies
//   P_{xbar,A}( P_x( (n-1)(x - xbar)' A^{-1} (x - xbar) <= b ) >= p ) = beta
// and is estimated by Monte Carlo following Krishnamoorthy & Mondal (2006),
// Algorithm 2: per draw, the content condition is solved through a
// three-moment chi-square approximation given simulated xbar and Wishart
// eigenvalues, and b is the beta-quantile of the per-draw solutions.

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "elastic_tb/bootstrap.hpp"
#include "elastic_tb/errors.hpp"
#include "elastic_tb/joint_fpca.hpp"
#include "elastic_tb/numerics.hpp"
#include "elastic_tb/parallel.hpp"
#include "elastic_tb/random.hpp"

namespace elastic_tb {

/// Quantile of the chi-square distribution with (possibly fractional) dof.
inline double chi_squared_quantile(double probability, double dof) {
  if (!(probability > 0.0 && probability < 1.0)) throw DomainError("chi_squared_quantile: probability outside (0, 1)");
  if (!(dof > 0.0)) throw DomainError("chi_squared_quantile: dof must be positive");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), probability);
}

struct ToleranceFactor {
  double b = 0.0;
  std::size_t dim_k = 0;
  std::size_t sample_n = 0;
  double coverage_p = 0.0;
  double confidence_beta = 0.0;
  std::size_t mc_iterations = 0;
  std::uint64_t seed = 0;
};

struct FactorOptions {
  std::size_t iterations = 100000;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinFactorIterations = 10000;
inline constexpr std::size_t kFactorChunk = 1000;

namespace detail {

/// Eigenvalues of a W_k(dof, I) draw through the Bartlett decomposition.
inline Eigen::VectorXd wishart_eigenvalues(Rng& rng, std::size_t k, double dof) {
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kk, kk);
  for (Eigen::Index i = 0; i < kk; ++i) {
    a(i, i) = std::sqrt(rng.chi_squared(dof - static_cast<double>(i)));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  const Eigen::MatrixXd w = a * a.transpose();
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(w, Eigen::EigenvaluesOnly).eigenvalues();
}

/// One Monte Carlo solution of the content condition.
inline double factor_draw(Rng& rng, std::size_t n, std::size_t k, double p) {
  const double nd = static_cast<double>(n);
  const Eigen::VectorXd lambda = wishart_eigenvalues(rng, k, nd - 1.0);
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double q2 = rng.chi_squared(1.0) / nd;
    const double l = lambda(static_cast<Eigen::Index>(j));
    c1 += (1.0 + q2) / l;
    c2 += (1.0 + 2.0 * q2) / (l * l);
    c3 += (1.0 + 3.0 * q2) / (l * l * l);
  }
  const double a = c2 * c2 * c2 / (c3 * c3);
  return (nd - 1.0) * (std::sqrt(c2 / a) * (chi_squared_quantile(p, a) - a) + c1);
}

}  // namespace detail

/// Monte Carlo tolerance factor. Draws are split into fixed chunks with their
/// own substreams, so the result does not depend on the thread count.
inline ToleranceFactor tolerance_factor(std::size_t n, std::size_t k, double p, double beta,
                                        const FactorOptions& options = {}) {
  if (k < 1) throw DomainError("tolerance_factor: dimension must be positive");
  if (n < k + 2) throw DomainError("tolerance_factor: need n >= k + 2");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("tolerance_factor: coverage must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("tolerance_factor: confidence must lie in (0, 1)");
  if (options.iterations < kMinFactorIterations)
    throw ConfigError("tolerance_factor: need at least " + std::to_string(kMinFactorIterations) + " iterations");

  Vec draws(options.iterations);
  const std::size_t chunks = (options.iterations + kFactorChunk - 1) / kFactorChunk;
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(options.seed, stream_id(StreamFamily::factor, c));
    const std::size_t end = std::min(options.iterations, (c + 1) * kFactorChunk);
    for (std::size_t i = c * kFactorChunk; i < end; ++i) draws[i] = detail::factor_draw(rng, n, k, p);
  });
  return {quantile(std::move(draws), beta), k, n, p, beta, options.iterations, options.seed};
}

struct ToleranceScore {
  double score = 0.0;
  bool inside = false;
};

/// sum_j c_j^2 / sigma_j^2: the region statistic with xbar = 0 and
/// A = (n - 1) diag(sigma^2).
inline double tolerance_score(const JointFpcaModel& m, const Vec& c) {
  if (c.size() != m.retained_k) throw SizeError("tolerance_score: coefficient count does not match the model");
  double s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!(m.variances[j] > 0.0)) throw ConfigError("tolerance_score: model retains a zero-variance direction");
    s += c[j] * c[j] / m.variances[j];
  }
  return s;
}

inline double tolerance_score(const JointFpcaModel& m, const JointVector& g) {
  return tolerance_score(m, coefficients(m, g));
}

inline ToleranceScore score_against(const JointFpcaModel& m, const JointVector& g, const ToleranceFactor& f) {
  const double s = tolerance_score(m, g);
  return {s, s <= f.b};
}

/// Joint vector of a registered test function.
inline JointVector joint_of(const JointFpcaModel& m, const TestFunction& tf) {
  return {tf.aligned.q, inv_exp_map(m.warp_mean_psi, to_psi(tf.warp)).v, m.scale_c};
}

struct RegionCoverageOptions {
  double coverage = 0.90;
  std::vector<double> confidences{0.99, 0.95, 0.90};
  std::size_t replicates = 500;
  std::size_t functions_per_replicate = 100;
  FactorOptions factor{};
  std::uint64_t seed = 0;
};

struct RegionCoverageRow {
  double confidence = 0.0;
  double b = 0.0;
  double rate = 0.0;         ///< fraction of replicates with at least `coverage` inside
  double mean_inside = 0.0;  ///< average fraction of functions inside
};

struct RegionCoverageReport {
  RegionCoverageOptions options;
  std::vector<RegionCoverageRow> rows;
};

/// Estimates the confidence achieved by tolerance regions of each requested
/// confidence on fresh functions drawn from the model and registered again.
inline RegionCoverageReport coverage_experiment_fpca(const JointFpcaModel& m, const RegionCoverageOptions& options) {
  if (options.replicates < 1 || options.functions_per_replicate < 1)
    throw ConfigError("coverage: replicate and function counts must be positive");
  RegionCoverageReport report;
  report.options = options;
  if (!has_variance(m)) {
    for (double conf : options.confidences) report.rows.push_back({conf, 0.0, 1.0, 1.0});
    return report;
  }
  std::vector<double> bs;
  for (double conf : options.confidences)
    bs.push_back(tolerance_factor(m.sample_size_n, m.retained_k, options.coverage, conf, options.factor).b);

  const std::size_t nb = bs.size();
  std::vector<std::size_t> inside(options.replicates * nb, 0);
  parallel_for(options.replicates, [&](std::size_t r) {
    Rng rng(options.seed, stream_id(StreamFamily::region_coverage, r));
    const std::vector<JointVector> gs = sample_model(m, options.functions_per_replicate, rng);
    for (const auto& g : gs) {
      const double s = tolerance_score(m, joint_of(m, make_test_function(m, g)));
      for (std::size_t b = 0; b < nb; ++b) inside[r * nb + b] += s <= bs[b];
    }
  });
  const double need = options.coverage * static_cast<double>(options.functions_per_replicate) - 1e-9;
  for (std::size_t b = 0; b < nb; ++b) {
    RegionCoverageRow row{options.confidences[b], bs[b], 0.0, 0.0};
    for (std::size_t r = 0; r < options.replicates; ++r) {
      row.rate += static_cast<double>(inside[r * nb + b]) >= need;
      row.mean_inside += static_cast<double>(inside[r * nb + b]);
    }
    row.rate /= static_cast<double>(options.replicates);
    row.mean_inside /= static_cast<double>(options.replicates * options.functions_per_replicate);
    report.rows.push_back(row);
  }
  return report;
}

struct Histogram {
  Vec edges;                        ///< bins + 1 edges
  std::vector<std::size_t> counts;  ///< one per bin
};

struct ScoreSummary {
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation; 0 for a single score
  Histogram histogram;
};

/// Sturges-rule histogram; equal values collapse to one bin.
inline Histogram histogram(const Vec& values) {
  Histogram h;
  if (values.empty()) return h;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    h.edges = {lo, hi};
    h.counts = {values.size()};
    return h;
  }
  const auto bins =
      static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(values.size())))) + 1;
  h.counts.assign(bins, 0);
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins));
  h.edges.back() = hi;
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    h.counts[std::min(idx, bins - 1)] += 1;
  }
  return h;
}

inline ScoreSummary summarize_scores(const Vec& scores) {
  if (scores.empty()) throw SizeError("summarize_scores: no scores");
  ScoreSummary s;
  for (double v : scores) s.mean += v;
  s.mean /= static_cast<double>(scores.size());
  if (scores.size() > 1) {
    double ss = 0.0;
    for (double v : scores) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(scores.size() - 1));
  }
  s.histogram = histogram(scores);
  return s;
}

/// Scores of functions registered against the model.
inline Vec score_functions(const JointFpcaModel& m, const std::vector<SampledFunction>& fs,
                           const SrsfOptions& srsf = {}) {
  Vec out(fs.size());
  parallel_for(fs.size(), [&](std::size_t i) { out[i] = tolerance_score(m, project_function(m, fs[i], srsf)); });
  return out;
}

/// Scores of the training sample from its own alignment.
inline Vec training_scores(const JointFpcaModel& m, const AlignmentResult& ar) {
  Vec out;
  for (std::size_t i = 0; i < ar.size(); ++i)
    out.push_back(tolerance_score(m, JointVector{ar.aligned_srsfs[i].q, ar.shooting_vectors[i].v, m.scale_c}));
  return out;
}

}  // namespace elastic_tb
