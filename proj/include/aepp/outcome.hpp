#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "aepp/bell_label.hpp"
#include "aepp/dense_joint.hpp"
#include "aepp/exchangeable.hpp"
#include "aepp/protocol_spec.hpp"

namespace aepp {

/// Exact conditional law of a residual group handed to universal hashing.
using GroupLaw = std::variant<DenseJoint, ExchangeableDistribution>;

struct HashGroup {
  int size = 0;
  GroupLaw law;

  double entropy() const;
};

/// One leaf of a protocol decision tree.
struct ProtocolOutcome {
  double branch_probability = 0.0;
  /// Comparison outcomes in the order they were revealed, '0' = agree.
  std::string record;
  int measurements_spent = 0;
  int discarded = 0;
  std::vector<HashGroup> groups;

  int hashed_pairs() const;
};

using ProtocolTree = std::vector<ProtocolOutcome>;

/// Raw applies the closed-form accounting m - S literally; floored hashes a
/// group only when that is profitable.
enum class HashingPolicy { floored, raw };

double group_value(double pairs, double entropy, HashingPolicy policy);

struct LeafSummary {
  std::string record;
  double probability = 0.0;
  int measured = 0;
  int discarded = 0;
  std::vector<int> group_sizes;
  std::vector<double> group_entropies;
  /// Expected ebits contributed by each group (after the per-group choice).
  std::vector<double> group_values;
};

/// One recurrence round: the pass probability and the per-pair law after it.
struct RoundSummary {
  Axis axis = Axis::Z;
  double pass_probability = 0.0;
  double fidelity_after = 0.0;
  double survival = 0.0;
};

struct YieldResult {
  double fidelity = 0.0;
  ProtocolSpec protocol;
  double yield = 0.0;
  std::vector<LeafSummary> branches;
  std::vector<RoundSummary> rounds;
};

/// Thrown when a tree violates probability or pair-accounting invariants.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace aepp
