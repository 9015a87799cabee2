#pragma once

#include "aepp/exchangeable.hpp"
#include "aepp/outcome.hpp"
#include "aepp/pair_distribution.hpp"
#include "aepp/protocol_spec.hpp"
#include "aepp/scripts.hpp"

namespace aepp {

/// How an adaptive block tree is built.
///  dense:      runs the protocol script on the full 4^N table (N <= 10).
///  structured: closed-form branch probabilities with exchangeable groups.
///  automatic:  dense when it fits, structured otherwise.
enum class TreeEngine { automatic, dense, structured };

/// Full AEPP(a,2^n) decision tree on i.i.d. `base` pairs.
ProtocolTree aepp_a_tree(int n, const PairDistribution& base, TreeEngine engine = TreeEngine::automatic);
inline ProtocolTree aepp_a_tree(int n, double fidelity, TreeEngine engine = TreeEngine::automatic) {
  return aepp_a_tree(n, werner(fidelity), engine);
}

/// AEPP(p,2^n): amplitude and phase roles exchanged, X-axis measurements.
ProtocolTree aepp_p_tree(int n, const PairDistribution& base, TreeEngine engine = TreeEngine::automatic);
inline ProtocolTree aepp_p_tree(int n, double fidelity, TreeEngine engine = TreeEngine::automatic) {
  return aepp_p_tree(n, werner(fidelity), engine);
}

/// First step of AEPP(a,2^n) only; the block is dropped on disagreement.
ProtocolTree maneva_smolin_tree(int n, const PairDistribution& base, TreeEngine engine = TreeEngine::automatic);

/// Exact tree of any block protocol on Werner(F) input. AEPP* uses `plan`.
ProtocolTree block_tree(const ProtocolSpec& spec, double fidelity, const StarPlan& plan = {});

/// Checks leaf probabilities sum to 1 and every leaf accounts for all N
/// pairs; throws StructuralError otherwise.
void validate_tree(const ProtocolTree& tree, int block_size);

/// Yield per input pair: (1/N) sum over leaves and groups of P(leaf) (m - S).
YieldResult evaluate_yield(const ProtocolTree& tree, int block_size, HashingPolicy policy = HashingPolicy::floored);

/// Closed-form AEPP(a,2^n) yield on Werner(F):
///   1 - p/N (1 + S_{N-1}) - (1-p)/N (n + 1 + S_{N/2-1} + ... + S_3 + S_1).
/// Under the floored policy each (K-1) - S_{K-1} term is floored at zero,
/// which is what evaluate_yield computes on the tree.
double theorem_yield(int n, double fidelity, HashingPolicy policy = HashingPolicy::raw);

/// max(0, 1 - H(dist)).
double hashing_yield(const PairDistribution& dist);

YieldResult maneva_smolin(int n, double fidelity);
YieldResult leung_shor(double fidelity);

/// Best per-group choice between hashing and the phase-dual step.
StarPlan aepp_star_4_plan(double fidelity);
YieldResult aepp_star_4(double fidelity);

/// One recurrence round on two i.i.d. copies of `pair`.
struct RoundResult {
  double pass_probability;
  PairDistribution survivor;
};
RoundResult purify_round(const PairDistribution& pair, Axis axis);

YieldResult recurrence(double fidelity, const RecurrenceOptions& options = {});
YieldResult modified_recurrence(double fidelity, const RecurrenceOptions& options = {});

/// Exact yield of any protocol on Werner(F).
YieldResult evaluate(const ProtocolSpec& spec, double fidelity);
inline double yield_of(const ProtocolSpec& spec, double fidelity) { return evaluate(spec, fidelity).yield; }

}  // namespace aepp
