#include "aepp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "aepp/executors.hpp"
#include "aepp/parallel.hpp"
#include "aepp/protocols.hpp"

namespace aepp {

namespace {

constexpr std::uint64_t kBatchShots = 1u << 15;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

using Counts = std::map<std::string, std::uint64_t>;

double leaf_ebits(const LeafSummary& leaf) {
  double v = 0.0;
  for (double g : leaf.group_values) v += g;
  return v;
}

McReport estimate_block(const ProtocolSpec& spec, double fidelity, std::uint64_t shots, std::uint64_t seed,
                        unsigned threads) {
  const PairDistribution base = werner(fidelity);
  const StarPlan plan = spec.family == Family::aepp_star_4 ? aepp_star_4_plan(fidelity) : StarPlan{};
  const int block = spec.block_size();
  const std::uint64_t batches = (shots + kBatchShots - 1) / kBatchShots;
  std::vector<Counts> per_batch(batches);
  parallel_for(batches, threads, [&](std::uint64_t b) {
    Rng rng = derive_stream(seed, b);
    const std::uint64_t n = std::min(kBatchShots, shots - b * kBatchShots);
    Counts& counts = per_batch[b];
    for (std::uint64_t s = 0; s < n; ++s) {
      const auto labels = sample_block(base, block, rng);
      ++counts[run_trajectory(spec, labels, plan).leaf()];
    }
  });
  Counts counts;
  for (const auto& c : per_batch)
    for (const auto& [leaf, k] : c) counts[leaf] += k;

  McReport report{spec, fidelity, shots, seed, {}, 0.0};
  const YieldResult exact = evaluate_yield(block_tree(spec, fidelity, plan), block);
  std::map<std::string, double> value;
  std::map<std::string, double> probability;
  for (const auto& leaf : exact.branches) {
    const std::string id = leaf.record.empty() ? "root" : leaf.record;
    value[id] = leaf_ebits(leaf);
    probability[id] = leaf.probability;
    if (!counts.count(id)) counts[id] = 0;
  }
  double ebits = 0.0;
  for (const auto& [leaf, k] : counts) {
    report.branches.push_back({"block", leaf, k, shots, probability.count(leaf) ? probability[leaf] : 0.0});
    if (value.count(leaf)) ebits += double(k) / double(shots) * value[leaf];
  }
  report.empirical_yield_bound = ebits / block;
  return report;
}

// Survivors of a recurrence round are i.i.d. across blocks, so the run pairs
// consecutive survivors of each round, starting from 2*shots Werner pairs.
McReport estimate_recurrence(const ProtocolSpec& spec, double fidelity, std::uint64_t shots, std::uint64_t seed,
                             unsigned threads) {
  const YieldResult exact = evaluate(spec, fidelity);
  const PairDistribution base = werner(fidelity);
  const std::uint64_t pairs = 2 * shots;
  std::vector<BellLabel> population(pairs);
  const std::uint64_t batches = (pairs + kBatchShots - 1) / kBatchShots;
  parallel_for(batches, threads, [&](std::uint64_t b) {
    Rng rng = derive_stream(seed, b);
    const std::uint64_t end = std::min(pairs, (b + 1) * kBatchShots);
    for (std::uint64_t i = b * kBatchShots; i < end; ++i) population[i] = sample_label(base, rng);
  });

  McReport report{spec, fidelity, shots, seed, {}, 0.0};
  double survival = 1.0;
  for (std::size_t r = 0; r < exact.rounds.size(); ++r) {
    const Axis axis = exact.rounds[r].axis;
    std::vector<BellLabel> next;
    std::uint64_t agree = 0;
    const std::uint64_t tests = population.size() / 2;
    for (std::uint64_t t = 0; t < tests; ++t) {
      const BellLabel two[] = {population[2 * t], population[2 * t + 1]};
      BitRunner runner(two);
      scripts::adaptive_block(runner, scripts::iota_block(2), axis, true);
      if (runner.record() == "0") {
        ++agree;
        next.push_back(runner.labels()[0]);
      }
    }
    const std::string decision = "round" + std::to_string(r + 1);
    const double pass = exact.rounds[r].pass_probability;
    report.branches.push_back({decision, "0", agree, tests, pass});
    report.branches.push_back({decision, "1", tests - agree, tests, 1.0 - pass});
    survival *= tests ? 0.5 * double(agree) / double(tests) : 0.0;
    population = std::move(next);
  }
  PairDistribution final_pair = base;
  for (const auto& round : exact.rounds) final_pair = purify_round(final_pair, round.axis).survivor;
  report.empirical_yield_bound = survival * hashing_yield(final_pair);
  return report;
}

}  // namespace

Rng derive_stream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t k = splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ull));
  std::seed_seq seq{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

BellLabel sample_label(const PairDistribution& base, Rng& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double cumulative = 0.0;
  for (unsigned l = 0; l < 3; ++l) {
    cumulative += base(l);
    if (u < cumulative) return BellLabel::from_index(l);
  }
  return BellLabel::from_index(3);
}

std::vector<BellLabel> sample_block(const PairDistribution& base, int pairs, Rng& rng) {
  std::vector<BellLabel> out(static_cast<std::size_t>(pairs));
  for (auto& l : out) l = sample_label(base, rng);
  return out;
}

std::vector<BellLabel> sample_block(double fidelity, int pairs, Rng& rng) {
  return sample_block(werner(fidelity), pairs, rng);
}

Trajectory run_trajectory(const ProtocolSpec& spec, std::span<const BellLabel> labels, const StarPlan& plan) {
  if (static_cast<int>(labels.size()) != spec.block_size())
    throw std::invalid_argument(spec.name() + " needs " + std::to_string(spec.block_size()) + " labels");
  BitRunner runner(labels);
  scripts::run_block(runner, spec, plan);
  if (!runner.all_accounted()) throw StructuralError("trajectory leaves pairs unaccounted for");
  return {runner.labels(), runner.record(), runner.measured(), runner.discarded(), runner.group_sizes()};
}

double McBranch::sigmas() const {
  if (trials == 0) return 0.0;
  const double sd = std::sqrt(exact * (1.0 - exact) / double(trials));
  const double diff = std::abs(frequency() - exact);
  if (sd == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / sd;
}

std::vector<ExactBranch> exact_branches(const ProtocolSpec& spec, double fidelity) {
  std::vector<ExactBranch> out;
  if (!spec.is_block_protocol()) {
    const YieldResult r = evaluate(spec, fidelity);
    for (std::size_t i = 0; i < r.rounds.size(); ++i) {
      const std::string decision = "round" + std::to_string(i + 1);
      out.push_back({decision, "0", r.rounds[i].pass_probability});
      out.push_back({decision, "1", 1.0 - r.rounds[i].pass_probability});
    }
    return out;
  }
  const StarPlan plan = spec.family == Family::aepp_star_4 ? aepp_star_4_plan(fidelity) : StarPlan{};
  for (const auto& leaf : block_tree(spec, fidelity, plan))
    out.push_back({"block", leaf.record.empty() ? "root" : leaf.record, leaf.branch_probability});
  return out;
}

McReport estimate(const ProtocolSpec& spec, double fidelity, std::uint64_t shots, std::uint64_t seed,
                  unsigned threads) {
  if (shots < 1) throw std::domain_error("shots must be at least 1");
  return spec.is_block_protocol() ? estimate_block(spec, fidelity, shots, seed, threads)
                                  : estimate_recurrence(spec, fidelity, shots, seed, threads);
}

Concordance check_concordance(const McReport& report, double sigmas) {
  Concordance c;
  for (const auto& b : report.branches) {
    const double z = b.sigmas();
    c.worst_sigmas = std::max(c.worst_sigmas, z);
    if (!(z <= sigmas)) {
      c.concordant = false;
      c.failures.push_back(b.decision + "/" + b.leaf + ": frequency " + std::to_string(b.frequency()) +
                           " vs exact " + std::to_string(b.exact) + " (" + std::to_string(z) + " sigma)");
    }
  }
  return c;
}

}  // namespace aepp
