#include <catch2/catch_amalgamated.hpp>

#include "elastic_tb/bootstrap.hpp"
#include "elastic_tb/simulate.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace elastic_tb;

namespace {

const JointFpcaModel& model() {
  static const JointFpcaModel m = [] {
    FitOptions o;
    o.components.components = 4;
    return fit_model(align_sample(simulate_two_bump(21, 7).to_functions()), o);
  }();
  return m;
}

BandOptions small_options() {
  BandOptions o;
  o.replicates = 12;
  o.per_replicate_n = 30;
  o.seed = 5;
  return o;
}

const std::vector<ReplicateQuantiles>& replicates() {
  static const std::vector<ReplicateQuantiles> r = run_replicates(model(), small_options());
  return r;
}

}  // namespace

TEST_CASE("outward_pick counts from the farthest candidate", "[bootstrap][oracle]") {
  std::vector<double> d(100);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<double>(i + 1);
  REQUIRE(detail::outward_pick(d, 0.10) == 95);  // rank 5 from the top: distance 96
  REQUIRE(detail::outward_pick(d, 0.05) == 97);  // rank ceil(2.5) = 3: distance 98
  REQUIRE(detail::outward_pick(d, 0.01) == 99);  // rank 1: the farthest
}

TEST_CASE("pointwise_quantile works column by column", "[bootstrap]") {
  const Vec a{0.0, 10.0}, b{1.0, 20.0}, c{2.0, 30.0};
  const Vec q = detail::pointwise_quantile({&a, &b, &c}, 0.5);
  REQUIRE(q == Vec{1.0, 20.0});
}

TEST_CASE("option parsing and validation", "[bootstrap][errors]") {
  REQUIRE(parse_aggregation("pointwise") == Aggregation::pointwise);
  REQUIRE(parse_inclusion("envelope") == InclusionRule::envelope);
  REQUIRE(parse_surface_mode("phase") == SurfaceMode::phase);
  REQUIRE_THROWS_AS(parse_aggregation("mean"), ConfigError);
  REQUIRE_THROWS_AS(parse_inclusion("box"), ConfigError);
  REQUIRE_THROWS_AS(parse_surface_mode("joint"), ConfigError);
  BandOptions o;
  o.coverage = 1.0;
  REQUIRE_THROWS_AS(o.validate(), ConfigError);
  o = {};
  o.per_replicate_n = 2;
  REQUIRE_THROWS_AS(o.validate(), ConfigError);
  o = {};
  o.replicates = 0;
  REQUIRE_THROWS_AS(o.validate(), ConfigError);
}

TEST_CASE("replicates are reproducible per index", "[bootstrap][random]") {
  const ReplicateQuantiles a = run_replicate(model(), small_options(), 3);
  const auto& all = replicates();
  REQUIRE(a.amplitude_lower.q == all[3].amplitude_lower.q);
  REQUIRE(a.phase_upper.psi == all[3].phase_upper.psi);
  REQUIRE(all[3].amplitude_lower.q != all[4].amplitude_lower.q);
}

TEST_CASE("geometric band bounds move outward as confidence grows", "[bootstrap]") {
  BandOptions o = small_options();
  std::vector<ToleranceBand> bands;
  for (double c : {0.90, 0.95, 0.99}) {
    o.confidence = c;
    bands.push_back(aggregate_band(model(), replicates(), o));
  }
  for (std::size_t i = 1; i < bands.size(); ++i) {
    const auto& a = bands[i - 1];
    const auto& b = bands[i];
    const Vec& t = a.grid;
    REQUIRE(l2_distance(t, b.amplitude_lower_srsf.q, b.amplitude_median_srsf.q) >=
            l2_distance(t, a.amplitude_lower_srsf.q, a.amplitude_median_srsf.q));
    REQUIRE(l2_distance(t, b.amplitude_upper_srsf.q, b.amplitude_median_srsf.q) >=
            l2_distance(t, a.amplitude_upper_srsf.q, a.amplitude_median_srsf.q));
    REQUIRE(sphere_angle(b.phase_lower_psi, b.phase_median_psi) >= sphere_angle(a.phase_lower_psi, a.phase_median_psi));
    REQUIRE(sphere_angle(b.phase_upper_psi, b.phase_median_psi) >= sphere_angle(a.phase_upper_psi, a.phase_median_psi));
  }
}

TEST_CASE("band curves are consistent with their representations", "[bootstrap]") {
  BandOptions o = small_options();
  const ToleranceBand b = aggregate_band(model(), replicates(), o);
  REQUIRE(b.replicates == 12);
  REQUIRE(b.grid == model().grid);
  validate(b.phase_lower);
  validate(b.phase_upper);
  REQUIRE(max_abs_diff(b.amplitude_lower.values, from_srsf(b.amplitude_lower_srsf, model().initial_value).values) == 0.0);
  REQUIRE(max_abs_diff(b.phase_upper.gamma, from_psi(b.phase_upper_psi).gamma) == 0.0);
  o.aggregation = Aggregation::pointwise;
  const ToleranceBand p = aggregate_band(model(), replicates(), o);
  REQUIRE(std::abs(l2_norm(p.grid, p.phase_lower_psi.psi) - 1.0) <= 1e-12);
  validate(p.phase_lower);
}

TEST_CASE("band testers accept the median and the bounds", "[bootstrap][inclusion]") {
  BandOptions o = small_options();
  const ToleranceBand b = aggregate_band(model(), replicates(), o);
  for (InclusionRule rule : {InclusionRule::distance, InclusionRule::envelope}) {
    const BandTester tester(b, rule);
    REQUIRE(tester.amplitude_contains_aligned(b.amplitude_median, b.amplitude_median_srsf));
    REQUIRE(tester.phase_contains(b.phase_median));
    REQUIRE(tester.phase_contains(b.phase_lower));
    REQUIRE(tester.phase_contains(b.phase_upper));
    REQUIRE(tester.amplitude_contains_aligned(b.amplitude_upper, b.amplitude_upper_srsf));
  }
  SampledFunction far = b.amplitude_median;
  for (auto& v : far.values) v *= 5.0;
  Srsf far_q = b.amplitude_median_srsf;
  for (auto& v : far_q.q) v *= std::sqrt(5.0);
  REQUIRE_FALSE(BandTester(b).amplitude_contains_aligned(far, far_q));
  REQUIRE_FALSE(BandTester(b).phase_contains(tb_test::exp_warp(b.grid.size(), 6.0)));
}

TEST_CASE("degenerate models give a band collapsed on the mean", "[bootstrap]") {
  JointFpcaModel m = model();
  m.degenerate = true;
  const ToleranceBand b = bootstrap_bands(m, small_options());
  REQUIRE(b.degenerate);
  REQUIRE(b.amplitude_lower.values == b.amplitude_upper.values);
  REQUIRE(b.phase_lower.gamma == b.phase_median.gamma);
  CoverageOptions c;
  c.replicates = 2;
  c.functions_per_replicate = 3;
  const BandCoverageReport r = coverage_experiment(m, c);
  for (const auto& row : r.rows) REQUIRE(row.joint == 1.0);
}

TEST_CASE("surface coordinates lay curves out by distance", "[bootstrap][surface]") {
  const ToleranceBand b = aggregate_band(model(), replicates(), small_options());
  const SurfacePlotData a = surface_coords(b, SurfaceMode::amplitude);
  REQUIRE(a.positions[0] == 0.0);
  REQUIRE(a.positions[1] == Catch::Approx(pairwise_align(b.amplitude_median_srsf, b.amplitude_lower_srsf).distance));
  REQUIRE(a.positions[2] >= a.positions[1]);
  REQUIRE(a.curves[1] == b.amplitude_median.values);
  const SurfacePlotData p = surface_coords(b, SurfaceMode::phase);
  REQUIRE(p.positions[1] == Catch::Approx(sphere_angle(b.phase_lower_psi, b.phase_median_psi)));
  REQUIRE(p.curves[0].front() == 0.0);
  REQUIRE(p.curves[0].back() == 0.0);
}

TEST_CASE("small coverage experiment is reproducible", "[bootstrap][coverage]") {
  CoverageOptions c;
  c.replicates = 3;
  c.functions_per_replicate = 10;
  c.band_replicates = 6;
  c.seed = 11;
  const BandCoverageReport a = coverage_experiment(model(), c);
  const BandCoverageReport b = coverage_experiment(model(), c);
  REQUIRE(a.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(a.rows[i].amplitude == b.rows[i].amplitude);
    REQUIRE(a.rows[i].mean_inside_phase == b.rows[i].mean_inside_phase);
    REQUIRE(a.rows[i].joint <= std::min(a.rows[i].amplitude, a.rows[i].phase));
  }
}
