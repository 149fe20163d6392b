#include <catch2/catch_amalgamated.hpp>

#include "elastic_tb/simulate.hpp"
#include "elastic_tb/tolerance_region.hpp"

#include <cmath>

using namespace elastic_tb;

namespace {

// Regularized lower incomplete gamma P(a, x): series below a + 1, Lentz
// continued fraction above.
double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(log_prefix);
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_prefix) * h;
}

double chi2_quantile_oracle(double p, double dof) {
  double lo = 0.0, hi = 1.0;
  while (gamma_p(0.5 * dof, 0.5 * hi) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gamma_p(0.5 * dof, 0.5 * mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

JointFpcaModel diagonal_model(const Vec& variances) {
  JointFpcaModel m;
  m.grid = uniform_grid(3);
  m.mean.assign(6, 0.0);
  m.variances = variances;
  m.spectrum = variances;
  m.retained_k = variances.size();
  m.sample_size_n = 20;
  for (std::size_t j = 0; j < variances.size(); ++j) {
    Vec u(6, 0.0);
    u[j] = 1.0;
    m.basis.push_back(u);
  }
  return m;
}

}  // namespace

TEST_CASE("chi-square quantiles agree with an independent incomplete-gamma oracle", "[region][oracle]") {
  for (double dof : {0.7, 1.0, 2.5, 4.0, 10.0, 37.3}) {
    for (double p : {0.01, 0.5, 0.9, 0.99}) {
      REQUIRE(chi_squared_quantile(p, dof) == Catch::Approx(chi2_quantile_oracle(p, dof)).epsilon(1e-9));
    }
  }
  // Two degrees of freedom are exponential with mean 2.
  REQUIRE(chi_squared_quantile(0.9, 2.0) == Catch::Approx(-2.0 * std::log(0.1)).epsilon(1e-12));
  REQUIRE_THROWS_AS(chi_squared_quantile(1.0, 2.0), DomainError);
  REQUIRE_THROWS_AS(chi_squared_quantile(0.5, 0.0), DomainError);
}

TEST_CASE("tolerance factor argument checks", "[region][errors]") {
  REQUIRE_THROWS_AS(tolerance_factor(5, 4, 0.9, 0.95), DomainError);
  REQUIRE_THROWS_AS(tolerance_factor(20, 0, 0.9, 0.95), DomainError);
  REQUIRE_THROWS_AS(tolerance_factor(20, 2, 1.0, 0.95), DomainError);
  REQUIRE_THROWS_AS(tolerance_factor(20, 2, 0.9, 0.0), DomainError);
  REQUIRE_THROWS_AS(tolerance_factor(20, 2, 0.9, 0.95, {100, 0}), ConfigError);
}

TEST_CASE("tolerance factor is reproducible and records its inputs", "[region][random]") {
  const ToleranceFactor a = tolerance_factor(21, 4, 0.99, 0.95, {10000, 3});
  const ToleranceFactor b = tolerance_factor(21, 4, 0.99, 0.95, {10000, 3});
  REQUIRE(a.b == b.b);
  REQUIRE(a.dim_k == 4);
  REQUIRE(a.sample_n == 21);
  REQUIRE(a.mc_iterations == 10000);
  REQUIRE(a.seed == 3);
  REQUIRE(tolerance_factor(21, 4, 0.99, 0.95, {10000, 4}).b != a.b);
}

TEST_CASE("tolerance factor approaches the chi-square quantile for large n", "[region][oracle]") {
  const double b = tolerance_factor(100000, 3, 0.95, 0.95, {10000, 1}).b;
  REQUIRE(b == Catch::Approx(chi_squared_quantile(0.95, 3.0)).epsilon(0.01));
}

TEST_CASE("tolerance factor orders with confidence, content and n", "[region]") {
  const FactorOptions o{10000, 2};
  const double base = tolerance_factor(30, 3, 0.9, 0.95, o).b;
  REQUIRE(tolerance_factor(30, 3, 0.9, 0.99, o).b > base);
  REQUIRE(tolerance_factor(30, 3, 0.95, 0.95, o).b > base);
  REQUIRE(tolerance_factor(60, 3, 0.9, 0.95, o).b < base);
  REQUIRE(base > chi_squared_quantile(0.9, 3.0));
}

TEST_CASE("tolerance score is the variance-weighted squared norm", "[region]") {
  const JointFpcaModel m = diagonal_model({2.0, 0.5});
  JointVector g{Vec{1.0, 0.0, 0.0}, Vec{0.0, 0.0, 0.0}, 1.0};
  REQUIRE(tolerance_score(m, g) == Catch::Approx(0.5).epsilon(1e-14));
  g.amplitude = {1.0, 1.0, 0.0};
  REQUIRE(tolerance_score(m, Vec{1.0, 1.0}) == Catch::Approx(0.5 + 2.0).epsilon(1e-14));
  REQUIRE(tolerance_score(m, g) == Catch::Approx(2.5).epsilon(1e-14));
  REQUIRE(score_against(m, g, ToleranceFactor{2.0}).inside == false);
  REQUIRE(score_against(m, g, ToleranceFactor{3.0}).inside == true);
  REQUIRE_THROWS_AS(tolerance_score(m, Vec{1.0}), SizeError);
  REQUIRE_THROWS_AS(tolerance_score(diagonal_model({1.0, 0.0}), Vec{1.0, 1.0}), ConfigError);
}

TEST_CASE("histogram and summary statistics", "[region][scores]") {
  const Histogram h = histogram({1, 2, 3, 4, 5, 6, 7, 8});
  REQUIRE(h.counts.size() == 4);  // ceil(log2 8) + 1
  REQUIRE(h.edges.size() == 5);
  REQUIRE(h.edges.front() == 1.0);
  REQUIRE(h.edges.back() == 8.0);
  REQUIRE(h.counts == std::vector<std::size_t>{2, 2, 2, 2});
  REQUIRE(histogram({3.0, 3.0}).counts == std::vector<std::size_t>{2});
  REQUIRE(histogram({}).counts.empty());
  const ScoreSummary s = summarize_scores({1, 2, 3, 4});
  REQUIRE(s.mean == 2.5);
  REQUIRE(s.sd == Catch::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-14));
  REQUIRE(summarize_scores({7.0}).sd == 0.0);
  REQUIRE_THROWS_AS(summarize_scores({}), SizeError);
}

TEST_CASE("two-bump training scores fall inside the region", "[region][integration]") {
  const AlignmentResult ar = align_sample(simulate_two_bump(21, 7).to_functions());
  FitOptions o;
  o.components.components = 4;
  const JointFpcaModel m = fit_model(ar, o);
  const Vec train = training_scores(m, ar);
  const double b = tolerance_factor(m.sample_size_n, m.retained_k, 0.99, 0.95, {10000, 0}).b;
  for (double s : train) REQUIRE(s < b);
  // Scores of the training functions registered as new data stay close to their own.
  const Vec again = score_functions(m, ar.functions);
  for (std::size_t i = 0; i < again.size(); ++i) REQUIRE(again[i] < b);
}

TEST_CASE("region coverage experiment shape and determinism", "[region][coverage]") {
  const JointFpcaModel m = [] {
    FitOptions o;
    o.components.components = 3;
    return fit_model(align_sample(simulate_two_bump(21, 8).to_functions()), o);
  }();
  RegionCoverageOptions o;
  o.replicates = 4;
  o.functions_per_replicate = 10;
  o.factor = {10000, 0};
  const RegionCoverageReport a = coverage_experiment_fpca(m, o);
  const RegionCoverageReport b = coverage_experiment_fpca(m, o);
  REQUIRE(a.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(a.rows[i].rate == b.rows[i].rate);
    REQUIRE(a.rows[i].mean_inside == b.rows[i].mean_inside);
    if (i > 0) REQUIRE(a.rows[i].b <= a.rows[i - 1].b);
  }
}
