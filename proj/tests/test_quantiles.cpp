#include <catch2/catch_amalgamated.hpp>

#include "elastic_tb/quantiles.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace elastic_tb;

namespace {

// Constant SRSFs c = 1..101: warping cannot reduce their mutual distances, so
// the geometric median and quantiles reduce to one-dimensional order statistics.
std::vector<Srsf> constant_family() {
  const Vec t = uniform_grid(21);
  std::vector<Srsf> qs;
  for (int c = 101; c >= 1; --c) qs.push_back({t, Vec(21, static_cast<double>(c))});
  return qs;
}

double level(const Srsf& q) { return q.q[10]; }

}  // namespace

TEST_CASE("side ranks follow the documented rules", "[quantiles]") {
  REQUIRE(detail::side_rank(RankRule::half_tail, 0.5, 50) == 13);
  REQUIRE(detail::side_rank(RankRule::side_tail, 0.5, 50) == 25);
  REQUIRE(detail::side_rank(RankRule::half_tail, 0.01, 15) == 1);
  REQUIRE(detail::side_rank(RankRule::half_tail, 0.2, 10) == 1);
  REQUIRE(detail::side_rank(RankRule::side_tail, 0.99, 3) == 3);
}

TEST_CASE("amplitude quantiles of constant SRSFs are order statistics", "[quantiles][oracle]") {
  const auto qs = constant_family();
  const AmplitudeQuantiles half = geometric_quantiles_amplitude(qs, 0.5);
  REQUIRE(level(half.median) == Catch::Approx(51.0).margin(1e-9));
  REQUIRE(level(half.lower) == Catch::Approx(13.0).margin(1e-9));
  REQUIRE(level(half.upper) == Catch::Approx(89.0).margin(1e-9));

  QuantileOptions side;
  side.rank_rule = RankRule::side_tail;
  const AmplitudeQuantiles s = geometric_quantiles_amplitude(qs, 0.5, side);
  REQUIRE(level(s.lower) == Catch::Approx(25.0).margin(1e-9));
  REQUIRE(level(s.upper) == Catch::Approx(77.0).margin(1e-9));

  const AmplitudeQuantiles extreme = geometric_quantiles_amplitude(qs, 0.01);
  REQUIRE(level(extreme.lower) == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(level(extreme.upper) == Catch::Approx(101.0).margin(1e-9));
}

TEST_CASE("amplitude median of a pure phase family sits among its members", "[quantiles]") {
  std::vector<Srsf> qs;
  for (double a : {-0.6, -0.3, 0.0, 0.3, 0.6}) {
    const WarpingFunction g = tb_test::exp_warp(101, a);
    Vec y(101);
    for (std::size_t i = 0; i < 101; ++i) y[i] = std::sin(3.0 * g.gamma[i]) + g.gamma[i];
    qs.push_back(to_srsf({g.grid, y}));
  }
  const auto [med, aligned] = amplitude_median(qs);
  double before = 0.0;
  for (const auto& q : qs) before = std::max(before, l2_distance(med.grid, q.q, qs[2].q));
  for (const auto& q : aligned) REQUIRE(l2_distance(med.grid, q.q, med.q) <= 0.25 * before);
}

TEST_CASE("identical amplitudes collapse every quantile to the median", "[quantiles]") {
  const Srsf q = to_srsf(tb_test::sample(51, [](double t) { return t * t; }));
  const AmplitudeQuantiles out = geometric_quantiles_amplitude({q, q, q, q}, 0.1);
  REQUIRE(out.lower.q == out.median.q);
  REQUIRE(out.upper.q == out.median.q);
}

TEST_CASE("phase quantiles of an exponential warp family", "[quantiles][oracle]") {
  // a < 0 lifts the warp above the identity; distances grow with |a|.
  std::vector<WarpingFunction> gs;
  std::vector<double> as;
  for (int i = -10; i <= 10; ++i) {
    as.push_back(0.1 * i);
    gs.push_back(tb_test::exp_warp(201, 0.1 * i));
  }
  const PhaseQuantiles pq = geometric_quantiles_phase(gs, 0.5);
  REQUIRE(as[pq.upper_index] == Catch::Approx(-0.8));
  REQUIRE(as[pq.lower_index] == Catch::Approx(0.8));
  const Vec& t = pq.median.grid;
  REQUIRE(sphere_angle(pq.median_psi, to_psi(identity_warp(t))) <= 1e-3);
  for (std::size_t i = 1; i + 1 < t.size(); ++i) REQUIRE(pq.upper.gamma[i] >= t[i]);
}

TEST_CASE("quantile arguments are validated", "[quantiles][errors]") {
  const auto qs = constant_family();
  REQUIRE_THROWS_AS(geometric_quantiles_amplitude({qs[0], qs[1]}, 0.1), SizeError);
  REQUIRE_THROWS_AS(geometric_quantiles_amplitude(qs, 0.0), ConfigError);
  REQUIRE_THROWS_AS(geometric_quantiles_amplitude(qs, 1.0), ConfigError);
}
