#include <doctest.h>

#include <cmath>
#include <map>

#include "aepp/montecarlo.hpp"
#include "aepp/parity.hpp"
#include "aepp/protocols.hpp"

using namespace aepp;

namespace {

const McBranch* find_leaf(const McReport& r, const std::string& leaf) {
  for (const auto& b : r.branches)
    if (b.leaf == leaf) return &b;
  return nullptr;
}

bool within(double freq, double p, std::uint64_t n, double sigmas) {
  return std::abs(freq - p) <= sigmas * std::sqrt(p * (1 - p) / double(n));
}

}  // namespace

TEST_CASE("sampling") {
  Rng rng = derive_stream(3, 0);
  for (int i = 0; i < 1000; ++i) CHECK(sample_label(werner(1.0), rng) == kPhiPlus);

  const std::uint64_t n = 1000000;
  std::map<unsigned, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < n; ++i) ++counts[sample_label(werner(0.25), rng).index()];
  for (unsigned l = 0; l < 4; ++l) CHECK(within(double(counts[l]) / n, 0.25, n, 3));

  std::uint64_t good = 0;
  for (std::uint64_t i = 0; i < n; ++i) good += sample_label(werner(0.85), rng) == kPhiPlus;
  CHECK(within(double(good) / n, 0.85, n, 3));
}

TEST_CASE("trajectory examples") {
  const BellLabel clean[] = {kPhiPlus, kPhiPlus};
  CHECK(run_trajectory(ProtocolSpec::aepp_a(1), clean).leaf() == "0");

  // One amplitude error on pair 3: disagree, then the pair-1/2 comparison agrees and pair 2 is hashed.
  const BellLabel one_error[] = {kPhiPlus, kPhiPlus, kPsiPlus, kPhiPlus};
  const auto t = run_trajectory(ProtocolSpec::aepp_a(2), one_error);
  CHECK(t.leaf() == "10");
  CHECK(t.group_sizes == std::vector<int>{1});
  CHECK(t.discarded == 1);
  CHECK(t.measured == 2);

  const BellLabel wrong_size[] = {kPhiPlus};
  CHECK_THROWS_AS(run_trajectory(ProtocolSpec::aepp_a(2), wrong_size), std::invalid_argument);
}

TEST_CASE("AEPP(a,8) trajectories land in leaves of the exact tree") {
  const auto tree = aepp_a_tree(3, 0.8);
  std::map<std::string, const ProtocolOutcome*> leaves;
  for (const auto& l : tree) leaves[l.record] = &l;
  Rng rng = derive_stream(99, 0);
  for (int i = 0; i < 100000; ++i) {
    const auto labels = sample_block(0.8, 8, rng);
    const auto t = run_trajectory(ProtocolSpec::aepp_a(3), labels);
    REQUIRE(leaves.count(t.branch_path));
    const auto& leaf = *leaves[t.branch_path];
    CHECK(t.measured == leaf.measurements_spent);
    CHECK(t.discarded == leaf.discarded);
    int hashed = 0;
    for (int g : t.group_sizes) hashed += g;
    CHECK(hashed == leaf.hashed_pairs());
  }
}

TEST_CASE("frequencies match closed forms") {
  const auto r = estimate(ProtocolSpec::aepp_a(2), 0.9, 1000000, 17);
  const auto* agree = find_leaf(r, "0");
  REQUIRE(agree);
  CHECK(within(agree->frequency(), parity_prob(0.9, 4), r.shots, 4));

  const auto ms = estimate(ProtocolSpec::maneva_smolin(3), 0.8, 1000000, 5);
  std::uint64_t discards = 0;
  for (const auto& b : ms.branches)
    if (b.leaf != "0") discards += b.count;
  CHECK(within(double(discards) / ms.shots, 1 - parity_prob(0.8, 8), ms.shots, 4));

  const auto perfect = estimate(ProtocolSpec::aepp_a(3), 1.0, 10000, 1);
  CHECK(find_leaf(perfect, "0")->count == 10000);
}

TEST_CASE("determinism and thread independence") {
  const auto spec = ProtocolSpec::leung_shor();
  const auto a = estimate(spec, 0.85, 100000, 42, 1);
  const auto b = estimate(spec, 0.85, 100000, 42, 4);
  REQUIRE(a.branches.size() == b.branches.size());
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    CHECK(a.branches[i].leaf == b.branches[i].leaf);
    CHECK(a.branches[i].count == b.branches[i].count);
  }
  CHECK(a.empirical_yield_bound == b.empirical_yield_bound);
  const auto c = estimate(spec, 0.85, 100000, 43, 1);
  bool differs = false;
  for (std::size_t i = 0; i < a.branches.size(); ++i) differs |= a.branches[i].count != c.branches[i].count;
  CHECK(differs);

  const auto ra = estimate(ProtocolSpec::recurrence_method(), 0.7, 50000, 8, 1);
  const auto rb = estimate(ProtocolSpec::recurrence_method(), 0.7, 50000, 8, 3);
  CHECK(ra.empirical_yield_bound == rb.empirical_yield_bound);
}

TEST_CASE("empirical yield tracks exact yield") {
  for (const auto& spec : {ProtocolSpec::aepp_a(2), ProtocolSpec::aepp_star_4(), ProtocolSpec::aepp_p(3)}) {
    const auto r = estimate(spec, 0.9, 400000, 3);
    CHECK(r.empirical_yield_bound == doctest::Approx(yield_of(spec, 0.9)).epsilon(5e-3));
    CHECK(check_concordance(r).concordant);
  }
}

TEST_CASE("concordance flags a wrong reference") {
  auto r = estimate(ProtocolSpec::aepp_a(2), 0.9, 100000, 1);
  r.branches.front().exact += 0.05;
  const auto c = check_concordance(r);
  CHECK_FALSE(c.concordant);
  CHECK(c.failures.size() == 1);
  CHECK_THROWS(estimate(ProtocolSpec::aepp_a(2), 0.9, 0, 1));
}
