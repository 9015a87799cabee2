#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "aepp/bell_label.hpp"
#include "aepp/pair_distribution.hpp"
#include "aepp/protocol_spec.hpp"
#include "aepp/scripts.hpp"

namespace aepp {

using Rng = std::mt19937_64;

/// Independent stream for batch `index` of a run seeded with `seed`.
Rng derive_stream(std::uint64_t seed, std::uint64_t index);

BellLabel sample_label(const PairDistribution& base, Rng& rng);
std::vector<BellLabel> sample_block(const PairDistribution& base, int pairs, Rng& rng);
std::vector<BellLabel> sample_block(double fidelity, int pairs, Rng& rng);

/// One block protocol executed on concrete labels.
struct Trajectory {
  std::vector<BellLabel> labels;
  std::string branch_path;
  int measured = 0;
  int discarded = 0;
  std::vector<int> group_sizes;

  /// Leaf identifier shared with the exact tree ("root" for no measurement).
  std::string leaf() const { return branch_path.empty() ? "root" : branch_path; }
};

Trajectory run_trajectory(const ProtocolSpec& spec, std::span<const BellLabel> labels, const StarPlan& plan = {});

/// Empirical count for one outcome of one decision point. Block protocols
/// have a single decision point ("block") whose outcomes are the leaves;
/// recurrence families have one per round ("round1", ...).
struct McBranch {
  std::string decision;
  std::string leaf;
  std::uint64_t count = 0;
  std::uint64_t trials = 0;
  double exact = 0.0;

  double frequency() const { return trials ? double(count) / double(trials) : 0.0; }
  /// Deviation from the exact probability in binomial standard deviations.
  double sigmas() const;
};

struct McReport {
  ProtocolSpec protocol;
  double fidelity = 0.0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<McBranch> branches;
  /// Yield with exact group entropies weighted by empirical frequencies.
  double empirical_yield_bound = 0.0;
};

struct ExactBranch {
  std::string decision;
  std::string leaf;
  double probability;
};

std::vector<ExactBranch> exact_branches(const ProtocolSpec& spec, double fidelity);

/// Samples `shots` blocks (or, for recurrence, 2*shots initial pairs).
/// Results depend only on (spec, fidelity, shots, seed), not on `threads`.
McReport estimate(const ProtocolSpec& spec, double fidelity, std::uint64_t shots, std::uint64_t seed,
                  unsigned threads = 0);

struct Concordance {
  bool concordant = true;
  double worst_sigmas = 0.0;
  std::vector<std::string> failures;
};

Concordance check_concordance(const McReport& report, double sigmas = 4.0);

}  // namespace aepp
