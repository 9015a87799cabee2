#include <doctest.h>

#include <cmath>

#include "aepp/analysis.hpp"
#include "aepp/entropy.hpp"
#include "aepp/parity.hpp"
#include "aepp/protocols.hpp"

using namespace aepp;

TEST_CASE("grid") {
  const auto g = Grid::parse("0.5:1.0:200");
  CHECK(g == Grid{0.5, 1.0, 200});
  const auto pts = g.points();
  CHECK(pts.size() == 200);
  CHECK(pts.front() == 0.5);
  CHECK(pts.back() == 1.0);
  CHECK(Grid::parse("0.9:0.9:1").points() == std::vector<double>{0.9});
  for (const char* bad : {"0.5:1.0", "a:1:3", "0.5:1.0:0", "0.5:1.0:2.5", "0.9:0.5:3", "0.5:1.5:3", "0.5:1:3:4"})
    CHECK_THROWS_AS(Grid::parse(bad), std::invalid_argument);
}

TEST_CASE("sweep is deterministic and ordered") {
  const Grid g{0.5, 1.0, 21};
  const auto a = sweep(ProtocolSpec::aepp_a(2), g, 1);
  const auto b = sweep(ProtocolSpec::aepp_a(2), g, 3);
  CHECK(a.points == b.points);
  CHECK(a.protocol == "aepp-a-n2");
  CHECK(a.points.back().fidelity == 1.0);
  CHECK(a.points.back().yield == doctest::Approx(0.75));
}

TEST_CASE("envelopes dominate their members") {
  for (double f : Grid{0.5, 1.0, 41}.points()) {
    const double env = aepp_envelope(f, 6);
    for (int n = 1; n <= 6; ++n) CHECK(env >= yield_of(ProtocolSpec::aepp_a(n), f));
    CHECK(aepp_family_envelope(f, 6) >= env);
    CHECK(aepp_family_envelope(f, 6) >= aepp_star_4(f).yield);
  }
}

TEST_CASE("crossover") {
  const auto env = find_crossover("envelope", [](double f) { return aepp_envelope(f, 6); });
  REQUIRE(env);
  CHECK(env->bracket_hi - env->bracket_lo <= 1e-6);
  CHECK(env->bracket_lo <= env->f_cross);
  CHECK(env->f_cross <= env->bracket_hi);
  CHECK(std::abs(env->f_cross - 0.993) <= 0.002);

  CHECK_FALSE(find_crossover(ProtocolSpec::hashing()));

  // Per-n crossovers move toward 1 with n.
  double prev = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const auto c = find_crossover(ProtocolSpec::aepp_a(n), {0.8, 0.9999, 1e-7});
    REQUIRE(c);
    CHECK(c->f_cross > prev);
    prev = c->f_cross;
  }
}

TEST_CASE("asymptotic table") {
  const auto rows = asymptotic_check(22);
  CHECK(rows.front().p == doctest::Approx(5.0 / 9.0));
  CHECK(std::abs(rows[11].deviation) < 1e-3);
  CHECK(std::abs(rows[21].deviation) < 1e-6);
  CHECK_THROWS(asymptotic_check(0));
  CHECK_THROWS(asymptotic_check(61));
}

TEST_CASE("near-perfect advantage") {
  CHECK(limit_gain() > 0.0);
  const double p = parity_limit();
  CHECK(limit_gain() == doctest::Approx(binary_entropy(p) - p));
  const auto first = hashing_advantage_bound(1);
  CHECK(first.informational);
  for (int n = 2; n <= 10; ++n) {
    const auto row = hashing_advantage_bound(n);
    CHECK_FALSE(row.informational);
    CHECK(row.margin() > 0.0);
  }
}
