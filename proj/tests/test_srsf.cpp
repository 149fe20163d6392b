#include <catch2/catch_amalgamated.hpp>

#include "elastic_tb/align.hpp"
#include "elastic_tb/srsf.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <numbers>

using namespace elastic_tb;
using tb_test::sample;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TEST_CASE("normalize_domain rescales the grid affinely", "[srsf][normalize]") {
  const Vec values{1.0, 2.0, 3.0};
  const auto a = normalize_domain(Vec{-3.0, 0.0, 3.0}, values);
  REQUIRE(a.grid == Vec{0.0, 0.5, 1.0});
  REQUIRE(a.values == values);

  const auto b = normalize_domain(Vec{2.0, 3.0, 5.0}, values);
  REQUIRE(b.grid[1] == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  REQUIRE(b.grid.back() == 1.0);

  const auto c = normalize_domain(Vec{0.0, 0.25, 1.0}, values);
  REQUIRE(c.grid == Vec{0.0, 0.25, 1.0});
}

TEST_CASE("normalize_domain rejects bad grids", "[srsf][normalize][errors]") {
  REQUIRE_THROWS_AS(normalize_domain(Vec{0.0, 2.0, 1.0}, Vec{1, 2, 3}), DomainError);
  REQUIRE_THROWS_AS(normalize_domain(Vec{0.0, 1.0}, Vec{1, 2}), SizeError);
  REQUIRE_THROWS_AS(normalize_domain(Vec{0.0, 1.0, 2.0}, Vec{1, 2}), SizeError);
}

TEST_CASE("to_srsf on closed-form slopes", "[srsf]") {
  const auto line = to_srsf(sample(101, [](double t) { return t; }));
  for (std::size_t i = 1; i + 1 < line.q.size(); ++i) REQUIRE(std::abs(line.q[i] - 1.0) <= 1e-8);

  const auto flat = to_srsf(sample(101, [](double) { return 3.0; }));
  for (double v : flat.q) REQUIRE(v == 0.0);

  // centered differences are exact for a quadratic, so q(0.5) = sqrt(2 * 0.5)
  const auto quad = to_srsf(sample(101, [](double t) { return t * t; }));
  REQUIRE(quad.q[50] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("from_srsf integrates q|q|", "[srsf]") {
  const Vec t = uniform_grid(101);
  const auto line = from_srsf({t, Vec(101, 1.0)}, 0.0);
  REQUIRE(max_abs_diff(line.values, t) <= 1e-14);

  const auto flat = from_srsf({t, Vec(101, 0.0)}, 2.0);
  for (double v : flat.values) REQUIRE(v == 2.0);
}

TEST_CASE("SRSF round trip stays within the scheme bound", "[srsf][roundtrip]") {
  const auto f = sample(201, [](double t) { return std::sin(two_pi * t); });
  const auto back = from_srsf(to_srsf(f), f.values.front());
  REQUIRE(max_abs_diff(back.values, f.values) <= 1e-3);
}

TEST_CASE("apply_warp composes by interpolation", "[srsf][warp]") {
  const auto f = sample(201, [](double t) { return std::sin(two_pi * t); });
  const Vec& t = f.grid;
  REQUIRE(apply_warp(f, identity_warp(t)).values == f.values);

  const auto id_fn = sample(201, [](double x) { return x; });
  const auto g = tb_test::warp_from(201, [](double x) { return x * x; });
  REQUIRE(max_abs_diff(apply_warp(id_fn, g).values, g.gamma) <= 1e-15);

  const auto fg = apply_warp(f, g);
  for (std::size_t i = 0; i < t.size(); ++i)
    REQUIRE(std::abs(fg.values[i] - std::sin(two_pi * t[i] * t[i])) <= 2e-4);
}

TEST_CASE("warp_srsf is the isometric group action", "[srsf][warp]") {
  const Vec t = uniform_grid(201);
  const Srsf one{t, Vec(201, 1.0)};
  REQUIRE(warp_srsf(one, identity_warp(t)).q == one.q);

  const auto sq = tb_test::warp_from(201, [](double x) { return x * x; });
  const auto warped = warp_srsf(one, sq);
  for (std::size_t i = 1; i + 1 < t.size(); ++i) REQUIRE(warped.q[i] == Catch::Approx(std::sqrt(2.0 * t[i])));

  const auto q = to_srsf(sample(201, [](double x) { return std::sin(two_pi * x); }));
  REQUIRE(std::abs(l2_norm(t, warp_srsf(q, sq).q) - l2_norm(t, q.q)) <= 1e-4);
}

TEST_CASE("warp_srsf preserves the norm for random warps", "[srsf][property]") {
  Rng rng(11);
  const auto q = to_srsf(sample(201, [](double x) { return std::sin(two_pi * x) + 0.3 * x; }));
  const double norm = l2_norm(q.grid, q.q);
  for (int rep = 0; rep < 100; ++rep) {
    const auto g = tb_test::random_warp(201, rng);
    // the kinks of |f'| at its zeros leave an O(h^2) trapezoid defect;
    // measured worst case over these warps: 2.2e-4 at h = 1/200
    REQUIRE(std::abs(l2_norm(q.grid, warp_srsf(q, g).q) - norm) <= 3e-4);
  }
  const auto fine = to_srsf(sample(401, [](double x) { return std::sin(two_pi * x) + 0.3 * x; }));
  const double fine_norm = l2_norm(fine.grid, fine.q);
  for (int rep = 0; rep < 100; ++rep) {
    const auto g = tb_test::random_warp(401, rng);
    REQUIRE(std::abs(l2_norm(fine.grid, warp_srsf(fine, g).q) - fine_norm) <= 1e-4);
  }
}

TEST_CASE("warp_srsf norm defect shrinks under grid refinement", "[srsf][property]") {
  const auto defect = [](std::size_t points) {
    const auto q = to_srsf(sample(points, [](double x) { return std::sin(two_pi * x) + 0.3 * x; }));
    const auto g = tb_test::exp_warp(points, 1.5);
    return std::abs(l2_norm(q.grid, warp_srsf(q, g).q) - l2_norm(q.grid, q.q));
  };
  // kink placement relative to the grid makes single steps noisy; quadrupling
  // the resolution must still cut the defect well below first order
  REQUIRE(defect(401) < 0.125 * defect(101));
  REQUIRE(defect(801) < 0.125 * defect(201));
}

TEST_CASE("pairwise_align of identical SRSFs is the identity", "[align]") {
  const auto q = to_srsf(sample(101, [](double t) { return std::sin(two_pi * t) + t; }));
  const auto a = pairwise_align(q, q);
  REQUIRE(a.distance <= 1e-6);
  REQUIRE(max_abs_diff(a.warp.gamma, q.grid) <= 0.01 + 1e-12);
  validate(a.warp);
}

TEST_CASE("pairwise_align recovers a known warp", "[align]") {
  const auto f = sample(101, [](double t) { return std::exp(-std::pow((t - 0.4) / 0.12, 2)); });
  const auto q1 = to_srsf(f);
  const auto g = tb_test::warp_from(101, [](double t) { return std::expm1(t) / std::expm1(1.0); });
  const auto q2 = warp_srsf(q1, g);
  const auto a = pairwise_align(q1, q2);
  const double before = l2_distance(q1.grid, q1.q, q2.q);
  const double residual = l2_distance(q1.grid, q1.q, warp_srsf(q2, a.warp).q);
  // measured on the 101-point lattice: distance 0.117, residual 0.113,
  // unaligned 1.75, sup error against the true inverse warp 0.0148
  REQUIRE(a.distance <= 0.15);
  REQUIRE(residual <= 0.15);
  REQUIRE(residual < 0.1 * before);
  REQUIRE(max_abs_diff(a.warp.gamma, invert(g).gamma) <= 0.02);
}

TEST_CASE("DP optimum equals exhaustive monotone-path search on 16 points", "[align][oracle]") {
  Rng rng(2024);
  const Vec t = uniform_grid(16);
  for (int rep = 0; rep < 50; ++rep) {
    Srsf q1{t, Vec(16)};
    Srsf q2{t, Vec(16)};
    for (std::size_t i = 0; i < 16; ++i) {
      q1.q[i] = rng.normal();
      q2.q[i] = rng.normal();
    }
    const auto a = pairwise_align(q1, q2);
    const double brute = tb_test::brute_force_lattice_cost(q1, q2);
    REQUIRE(a.distance * a.distance == Catch::Approx(brute).epsilon(1e-14));
    REQUIRE(std::sqrt(brute) == a.distance);
  }
}

TEST_CASE("pairwise_align rejects mismatched grids", "[align][errors]") {
  const Srsf a{uniform_grid(11), Vec(11, 1.0)};
  const Srsf b{uniform_grid(12), Vec(12, 1.0)};
  REQUIRE_THROWS_AS(pairwise_align(a, b), SizeError);
}

TEST_CASE("amplitude_distance basics", "[align][distance]") {
  const auto bump = [](double z) {
    return sample(101, [z](double t) { return z * std::exp(-0.5 * std::pow((t - 0.5) / 0.15, 2)); });
  };
  const auto f = bump(1.0);
  REQUIRE(amplitude_distance(f, f) <= 1e-8);

  const double d1 = amplitude_distance(bump(0.8), bump(1.0));
  const double d2 = amplitude_distance(bump(0.8), bump(1.2));
  REQUIRE(d1 > 0.0);
  REQUIRE(d2 > d1);
}

TEST_CASE("tabulated segment costs match per-point location", "[align][oracle]") {
  elastic_tb::Rng rng(11, 0);
  const Vec t = elastic_tb::uniform_grid(41);
  Vec q1(t.size()), q2(t.size());
  for (auto& v : q1) v = rng.normal();
  for (auto& v : q2) v = rng.normal();
  const elastic_tb::detail::SegmentCoster cost(t);
  for (std::size_t s = 0; s < elastic_tb::detail::kLatticeSteps.size(); ++s) {
    const auto [a, b] = elastic_tb::detail::kLatticeSteps[s];
    for (std::size_t k = 0; k + a < t.size(); k += 3)
      for (std::size_t l = 0; l + b < t.size(); l += 5)
        REQUIRE(cost(q1, q2, k, l, s) == Catch::Approx(cost.located(q1, q2, k, l, s)).epsilon(1e-12).margin(1e-14));
  }
}
