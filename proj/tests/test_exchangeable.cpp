#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "aepp/exchangeable.hpp"
#include "aepp/parity.hpp"

using namespace aepp;

namespace {

// Brute force over all 4^K input tuples. Survivor labels follow directly from
// the bit map of the fan-in, without the dense engine.
double oracle_entropy(const PairDistribution& base, int K, Axis axis, unsigned parity) {
  std::map<std::uint64_t, double> law;
  double total = 0.0;
  const std::uint64_t n = std::uint64_t{1} << (2 * K);
  std::vector<BellLabel> l(K);
  for (std::uint64_t x = 0; x < n; ++x) {
    double p = 1.0;
    unsigned check = 0;
    for (int i = 0; i < K; ++i) {
      l[i] = BellLabel::from_index((x >> (2 * i)) & 3);
      p *= base[l[i]];
      check ^= axis == Axis::Z ? l[i].b : l[i].a;
    }
    if (check != parity || p == 0.0) continue;
    std::uint64_t key = 0;
    for (int i = 0; i < K - 1; ++i) {
      const BellLabel s = axis == Axis::Z ? BellLabel(l[i].a ^ l[K - 1].a, l[i].b) : BellLabel(l[i].a, l[i].b ^ l[K - 1].b);
      key = (key << 2) | s.index();
    }
    law[key] += p;
    total += p;
  }
  double h = 0.0;
  for (const auto& [k, p] : law) {
    const double q = p / total;
    h -= q * std::log2(q);
  }
  return h;
}

}  // namespace

TEST_CASE("S entropy matches brute force for Werner inputs") {
  for (int K : {2, 4, 8})
    for (double f : {0.6, 0.75, 0.9, 0.99})
      for (unsigned parity : {0u, 1u}) {
        CAPTURE(K);
        CAPTURE(f);
        CAPTURE(parity);
        CHECK(std::abs(s_entropy(K, f, parity) - oracle_entropy(werner(f), K, Axis::Z, parity)) < 1e-10);
      }
}

TEST_CASE("general bases and the phase axis") {
  const PairDistribution bases[] = {{0.7, 0.1, 0.15, 0.05}, {0.55, 0.05, 0.3, 0.1}, {0.9, 0.0, 0.1, 0.0}};
  for (const auto& base : bases)
    for (int K : {2, 3, 5})
      for (Axis axis : {Axis::Z, Axis::X})
        for (unsigned parity : {0u, 1u}) {
          const ExchangeableDistribution ex(base, K, axis, parity);
          if (ex.condition_probability() == 0.0) {
            CHECK_THROWS_AS(ex.entropy(), std::domain_error);
            continue;
          }
          CHECK(std::abs(ex.entropy() - oracle_entropy(base, K, axis, parity)) < 1e-10);
          CHECK(std::abs(ex.entropy() - entropy(ex.to_dense())) < 1e-10);
        }
}

TEST_CASE("examples") {
  CHECK(s_entropy(2, 1.0, 0) == doctest::Approx(0.0));
  CHECK(std::abs(s_entropy(4, 0.9, 0) - 1.194224) < 1e-6);
  CHECK(std::abs(s_entropy(4, 0.9, 1) - 3.696) < 1e-3);
  CHECK_THROWS_AS(ExchangeableDistribution(werner(1.0), 4, Axis::Z, 1).entropy(), std::domain_error);
  CHECK_THROWS(ExchangeableDistribution(werner(0.9), 1));
}

TEST_CASE("large blocks stay finite and bounded") {
  for (int n : {6, 8, 10}) {
    const int K = 1 << n;
    const double f = (K - 1.0) / K;
    const double s = s_entropy(K, f);
    CHECK(std::isfinite(s));
    CHECK(s > 0.0);
    CHECK(s < 2.0 * (K - 1));
  }
}

TEST_CASE("tuple probabilities agree with the dense table") {
  const ExchangeableDistribution ex(werner(0.8), 4, Axis::Z, 1);
  const auto dense = ex.to_dense();
  double total = 0.0;
  for (Eigen::Index i = 0; i < dense.size(); ++i) {
    const BellLabel l[3] = {dense.label_at(i, 0), dense.label_at(i, 1), dense.label_at(i, 2)};
    CHECK(ex.probability(l) == doctest::Approx(dense(i)).epsilon(1e-12));
    total += ex.probability(l);
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(ex.condition_probability() == doctest::Approx(1.0 - parity_prob(0.8, 4)));
}
