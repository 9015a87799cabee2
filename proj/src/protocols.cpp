#include "aepp/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aepp/entropy.hpp"
#include "aepp/executors.hpp"
#include "aepp/parity.hpp"

namespace aepp {

double HashGroup::entropy() const {
  return std::visit([](const auto& law) { return aepp::entropy(law); }, law);
}

int ProtocolOutcome::hashed_pairs() const {
  int total = 0;
  for (const auto& g : groups) total += g.size;
  return total;
}

double group_value(double pairs, double entropy, HashingPolicy policy) {
  const double v = pairs - entropy;
  return policy == HashingPolicy::raw ? v : std::max(0.0, v);
}

namespace {

// Each level of the localization splits a parity-1 block into two halves;
// whichever half turns out clean is a parity-0 block whose fan-in member has
// been consumed, i.e. exactly an exchangeable group of size half - 1.
void descend(ProtocolTree& tree, const PairDistribution& base, Axis axis, std::uint64_t size, ProtocolOutcome at) {
  if (size == 2) {
    at.discarded += 1;
    tree.push_back(std::move(at));
    return;
  }
  const std::uint64_t half = size / 2;
  const double e = base.error(axis);
  const double block_odd = block_parity_prob(e, size, 1);
  for (unsigned outcome = 0; outcome < 2; ++outcome) {
    // P(probe half parity = outcome | block parity 1); the other half then
    // has parity 1 - outcome.
    const double split = block_parity_prob(e, half, outcome) * block_parity_prob(e, half, 1 - outcome) / block_odd;
    if (!(split > 0.0)) continue;
    ProtocolOutcome next = at;
    next.branch_probability *= split;
    next.record += static_cast<char>('0' + outcome);
    next.measurements_spent += 1;
    if (half > 1)
      next.groups.push_back({static_cast<int>(half - 1), ExchangeableDistribution(base, static_cast<int>(half), axis, 0)});
    descend(tree, base, axis, half, std::move(next));
  }
}

ProtocolTree structured_tree(int n, const PairDistribution& base, Axis axis, bool localize_errors) {
  const std::uint64_t size = std::uint64_t{1} << n;
  const double e = base.error(axis);
  ProtocolTree tree;
  const double agree = block_parity_prob(e, size, 0);
  if (agree > 0.0) {
    ProtocolOutcome leaf{agree, "0", 1, 0, {}};
    leaf.groups.push_back({static_cast<int>(size - 1), ExchangeableDistribution(base, static_cast<int>(size), axis, 0)});
    tree.push_back(std::move(leaf));
  }
  const double disagree = block_parity_prob(e, size, 1);
  if (disagree > 0.0) {
    if (localize_errors)
      descend(tree, base, axis, size, ProtocolOutcome{disagree, "1", 1, 0, {}});
    else
      tree.push_back(ProtocolOutcome{disagree, "1", 1, static_cast<int>(size - 1), {}});
  }
  return tree;
}

ProtocolTree adaptive_tree(int n, const PairDistribution& base, Axis axis, bool localize_errors, TreeEngine engine) {
  if (n < 1 || n > 30) throw std::domain_error("block exponent must lie in [1, 30]");
  const int size = 1 << n;
  const bool dense = engine == TreeEngine::dense || (engine == TreeEngine::automatic && size <= kDenseMaxPairs);
  if (!dense) return structured_tree(n, base, axis, localize_errors);
  return build_dense_tree(product(base, size), [&](auto& ex) {
    scripts::adaptive_block(ex, scripts::iota_block(size), axis, localize_errors);
  });
}

ProtocolTree small_block_tree(const ProtocolSpec& spec, const PairDistribution& base, const StarPlan& plan) {
  return build_dense_tree(product(base, spec.block_size()), [&](auto& ex) { scripts::run_block(ex, spec, plan); });
}

}  // namespace

ProtocolTree aepp_a_tree(int n, const PairDistribution& base, TreeEngine engine) {
  return adaptive_tree(n, base, Axis::Z, true, engine);
}

ProtocolTree aepp_p_tree(int n, const PairDistribution& base, TreeEngine engine) {
  return adaptive_tree(n, base, Axis::X, true, engine);
}

ProtocolTree maneva_smolin_tree(int n, const PairDistribution& base, TreeEngine engine) {
  return adaptive_tree(n, base, Axis::Z, false, engine);
}

ProtocolTree block_tree(const ProtocolSpec& spec, double fidelity, const StarPlan& plan) {
  const PairDistribution base = werner(fidelity);
  switch (spec.family) {
    case Family::aepp_a:
      return aepp_a_tree(spec.n_exponent, base);
    case Family::aepp_p:
      return aepp_p_tree(spec.n_exponent, base);
    case Family::maneva_smolin:
      return maneva_smolin_tree(spec.n_exponent, base);
    case Family::leung_shor:
    case Family::aepp_star_4:
    case Family::hashing:
      return small_block_tree(spec, base, plan);
    case Family::recurrence:
    case Family::modified_recurrence:
      break;
  }
  throw std::invalid_argument(spec.name() + " is not a single-block protocol");
}

void validate_tree(const ProtocolTree& tree, int block_size) {
  double total = 0.0;
  for (const auto& leaf : tree) {
    if (!(leaf.branch_probability >= 0.0)) throw StructuralError("negative branch probability at '" + leaf.record + "'");
    total += leaf.branch_probability;
    const int accounted = leaf.measurements_spent + leaf.discarded + leaf.hashed_pairs();
    if (accounted != block_size)
      throw StructuralError("leaf '" + leaf.record + "' accounts for " + std::to_string(accounted) + " of " +
                            std::to_string(block_size) + " pairs");
  }
  if (std::abs(total - 1.0) > 1e-10) throw StructuralError("leaf probabilities sum to " + std::to_string(total));
}

YieldResult evaluate_yield(const ProtocolTree& tree, int block_size, HashingPolicy policy) {
  validate_tree(tree, block_size);
  YieldResult result;
  double ebits = 0.0;
  for (const auto& leaf : tree) {
    LeafSummary s;
    s.record = leaf.record;
    s.probability = leaf.branch_probability;
    s.measured = leaf.measurements_spent;
    s.discarded = leaf.discarded;
    for (const auto& g : leaf.groups) {
      const double h = g.entropy();
      const double v = group_value(g.size, h, policy);
      s.group_sizes.push_back(g.size);
      s.group_entropies.push_back(h);
      s.group_values.push_back(v);
      ebits += leaf.branch_probability * v;
    }
    result.branches.push_back(std::move(s));
  }
  result.yield = ebits / block_size;
  return result;
}

double theorem_yield(int n, double fidelity, HashingPolicy policy) {
  if (n < 1 || n > 30) throw std::domain_error("block exponent must lie in [1, 30]");
  const int size = 1 << n;
  const double p = parity_prob(fidelity, static_cast<std::uint64_t>(size));
  const double s_full = s_entropy(size, fidelity, 0);
  double s_sum = 0.0;
  double floored_sum = 0.0;
  for (int k = 1; k < n; ++k) {
    const int block = 1 << k;
    const double s = s_entropy(block, fidelity, 0);
    s_sum += s;
    floored_sum += group_value(block - 1, s, HashingPolicy::floored);
  }
  if (policy == HashingPolicy::raw)
    return 1.0 - p / size * (1.0 + s_full) - (1.0 - p) / size * (n + 1 + s_sum);
  return (p * group_value(size - 1, s_full, HashingPolicy::floored) + (1.0 - p) * floored_sum) / size;
}

double hashing_yield(const PairDistribution& dist) { return std::max(0.0, 1.0 - entropy(dist)); }

YieldResult maneva_smolin(int n, double fidelity) {
  const auto spec = ProtocolSpec::maneva_smolin(n);
  YieldResult r = evaluate_yield(block_tree(spec, fidelity), spec.block_size());
  r.fidelity = fidelity;
  r.protocol = spec;
  return r;
}

YieldResult leung_shor(double fidelity) {
  const auto spec = ProtocolSpec::leung_shor();
  YieldResult r = evaluate_yield(block_tree(spec, fidelity), spec.block_size());
  r.fidelity = fidelity;
  r.protocol = spec;
  return r;
}

StarPlan aepp_star_4_plan(double fidelity) {
  // Residual groups are independent given the record, so each one is
  // decided on its own: hash it, or run the phase-dual step and hash what
  // that leaves.
  StarPlan plan;
  for (const auto& leaf : aepp_a_tree(2, werner(fidelity), TreeEngine::dense)) {
    for (const auto& g : leaf.groups) {
      if (g.size < 3) continue;
      const auto& law = std::get<DenseJoint>(g.law);
      const double hashed = group_value(g.size, entropy(law), HashingPolicy::floored);
      const auto refined_tree = build_dense_tree(law, [&](auto& ex) {
        scripts::PhaseRefine{}(ex, scripts::iota_block(g.size));
      });
      const double refined = evaluate_yield(refined_tree, g.size).yield * g.size;
      if (refined > hashed) plan.refine_at.insert(leaf.record);
    }
  }
  return plan;
}

YieldResult aepp_star_4(double fidelity) {
  const auto spec = ProtocolSpec::aepp_star_4();
  YieldResult r = evaluate_yield(block_tree(spec, fidelity, aepp_star_4_plan(fidelity)), spec.block_size());
  r.fidelity = fidelity;
  r.protocol = spec;
  return r;
}

RoundResult purify_round(const PairDistribution& pair, Axis axis) {
  const auto tree = build_dense_tree(product(pair, 2), [&](auto& ex) {
    scripts::adaptive_block(ex, scripts::iota_block(2), axis, true);
  });
  for (const auto& leaf : tree)
    if (leaf.record == "0") return {leaf.branch_probability, pair_marginal(std::get<DenseJoint>(leaf.groups.at(0).law), 0)};
  return {0.0, pair};
}

namespace {

YieldResult run_recurrence(const ProtocolSpec& spec, double fidelity, bool alternate) {
  const RecurrenceOptions& options = spec.recurrence;
  if (options.max_depth < 1) throw std::domain_error("recurrence depth cap must be positive");
  if (options.fixed_rounds && (*options.fixed_rounds < 0 || *options.fixed_rounds > options.max_depth))
    throw std::domain_error("fixed round count outside [0, max_depth]");

  YieldResult result;
  result.fidelity = fidelity;
  result.protocol = spec;
  PairDistribution current = werner(fidelity);
  double survival = 1.0;
  const int limit = options.fixed_rounds ? *options.fixed_rounds : options.max_depth;
  std::vector<PairDistribution> states{current};
  std::size_t best = 0;
  double best_yield = -1.0;
  for (int round = 0; round < limit; ++round) {
    const Axis axis = alternate && round % 2 == 1 ? Axis::X : Axis::Z;
    const RoundResult step = purify_round(current, axis);
    if (!(step.pass_probability > 0.0)) break;
    // The first AEPP(a,2) round is part of the method.
    if (!options.fixed_rounds && options.rule == SwitchRule::greedy && round >= 1) {
      const double hash_now = hashing_yield(current);
      const double one_more = 0.5 * step.pass_probability * hashing_yield(step.survivor);
      if (!(one_more > hash_now)) break;
    }
    survival *= 0.5 * step.pass_probability;
    current = step.survivor;
    states.push_back(current);
    result.rounds.push_back({axis, step.pass_probability, current.fidelity(), survival});
    const double y = survival * hashing_yield(current);
    if (y > best_yield) {
      best_yield = y;
      best = result.rounds.size();
    }
  }
  if (!options.fixed_rounds && options.rule == SwitchRule::best && best > 0) result.rounds.resize(best);
  const std::size_t done = result.rounds.size();
  result.yield = done ? result.rounds.back().survival * hashing_yield(states[done]) : hashing_yield(states[0]);
  return result;
}

}  // namespace

YieldResult recurrence(double fidelity, const RecurrenceOptions& options) {
  return run_recurrence(ProtocolSpec::recurrence_method(options), fidelity, false);
}

YieldResult modified_recurrence(double fidelity, const RecurrenceOptions& options) {
  return run_recurrence(ProtocolSpec::modified_recurrence(options), fidelity, true);
}

YieldResult evaluate(const ProtocolSpec& spec, double fidelity) {
  switch (spec.family) {
    case Family::recurrence:
      return run_recurrence(spec, fidelity, false);
    case Family::modified_recurrence:
      return run_recurrence(spec, fidelity, true);
    case Family::aepp_star_4:
      return aepp_star_4(fidelity);
    default:
      break;
  }
  YieldResult r = evaluate_yield(block_tree(spec, fidelity), spec.block_size());
  r.fidelity = fidelity;
  r.protocol = spec;
  return r;
}

}  // namespace aepp
