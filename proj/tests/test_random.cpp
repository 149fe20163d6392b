#include <catch2/catch_amalgamated.hpp>

#include "elastic_tb/parallel.hpp"
#include "elastic_tb/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

using namespace elastic_tb;

TEST_CASE("Philox4x32-10 known-answer vectors", "[random][oracle]") {
  using B = Philox4x32::Block;
  using K = Philox4x32::Key;
  REQUIRE(Philox4x32::generate(B{0, 0, 0, 0}, K{0, 0}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  REQUIRE(Philox4x32::generate(B{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, K{0xffffffffu, 0xffffffffu}) ==
          B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  REQUIRE(Philox4x32::generate(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, K{0xa4093822u, 0x299f31d0u}) ==
          B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct", "[random]") {
  Rng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    REQUIRE(x == b.uniform());
    REQUIRE(x != c.uniform());
    REQUIRE(x != d.uniform());
  }
  REQUIRE(stream_id(StreamFamily::factor, 5) == ((std::uint64_t{3} << 40) | 5));
  REQUIRE(stream_id(StreamFamily::generator, 5) != stream_id(StreamFamily::band_replicate, 5));
}

TEST_CASE("variates have the right first two moments", "[random]") {
  Rng rng(1, 0);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sc = 0, sc2 = 0, sg = 0, umin = 1, umax = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    const double c = rng.chi_squared(3.5);
    sc += c;
    sc2 += c * c;
    sg += rng.gamma(0.4);
  }
  REQUIRE(umin >= 0.0);
  REQUIRE(umax < 1.0);
  // Tolerances are about five standard errors.
  REQUIRE(su / n == Catch::Approx(0.5).margin(5 * std::sqrt(1.0 / 12 / n)));
  REQUIRE(sn / n == Catch::Approx(0.0).margin(5 / std::sqrt(n)));
  REQUIRE(sn2 / n == Catch::Approx(1.0).margin(5 * std::sqrt(2.0 / n)));
  REQUIRE(sc / n == Catch::Approx(3.5).margin(5 * std::sqrt(7.0 / n)));
  REQUIRE(sc2 / n - (sc / n) * (sc / n) == Catch::Approx(7.0).margin(0.2));
  REQUIRE(sg / n == Catch::Approx(0.4).margin(5 * std::sqrt(0.4 / n)));
}

TEST_CASE("parallel_for matches a sequential loop and propagates errors", "[parallel]") {
  std::vector<double> out(1000);
  parallel_for(out.size(), [&](std::size_t i) {
    Rng rng(9, i);
    out[i] = rng.normal();
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    Rng rng(9, i);
    REQUIRE(out[i] == rng.normal());
  }
  REQUIRE_THROWS_AS(parallel_for(10, [](std::size_t i) {
                      if (i == 3) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  std::size_t inner_calls = 0;
  parallel_for(1, [&](std::size_t) { parallel_for(5, [&](std::size_t) { ++inner_calls; }); });
  REQUIRE(inner_calls == 5);
}

TEST_CASE("ELASTIC_TB_THREADS caps the worker count", "[parallel]") {
  ::setenv("ELASTIC_TB_THREADS", "1", 1);
  REQUIRE(worker_count() == 1);
  ::setenv("ELASTIC_TB_THREADS", "junk", 1);
  REQUIRE(worker_count() >= 1);
  ::unsetenv("ELASTIC_TB_THREADS");
}
