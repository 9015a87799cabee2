#pragma once

#include <span>

#include "aepp/bell_label.hpp"
#include "aepp/dense_joint.hpp"
#include "aepp/pair_distribution.hpp"

namespace aepp {

/// Law of the K-1 survivors of a parity check on K i.i.d. pairs.
///
/// With axis Z, pairs 1..K-1 are BXOR sources into pair K, which is then
/// measured along Z with the stated outcome. The survivors carry labels
/// (a_i ^ a_K, b_i) conditioned on b_1 ^ ... ^ b_K = parity. Axis X is the
/// phase dual: pair K is the source, the survivors carry (a_i, b_i ^ b_K)
/// and the condition is on the a-parity.
///
/// The joint depends on a tuple only through its type counts, so the
/// entropy is a sum over count vectors with multinomial weights and never
/// touches the 4^(K-1) table.
class ExchangeableDistribution {
 public:
  ExchangeableDistribution(PairDistribution base, int block_size, Axis axis = Axis::Z, unsigned parity = 0);

  int block_size() const { return block_; }
  int pairs() const { return block_ - 1; }
  const PairDistribution& base() const { return base_; }
  Axis axis() const { return axis_; }
  unsigned parity() const { return parity_; }

  /// Probability of the conditioning event.
  double condition_probability() const;

  /// Conditional probability of one survivor tuple (length K-1).
  double probability(std::span<const BellLabel> labels) const;

  /// Shannon entropy in bits of the survivor tuple.
  double entropy() const;

  /// Explicit construction through the dense engine; K <= kDenseMaxPairs.
  DenseJoint to_dense() const;

 private:
  PairDistribution base_;
  int block_;
  Axis axis_;
  unsigned parity_;
};

/// S_{K-1}: entropy of (a_1^a_K, b_1, ..., a_{K-1}^a_K, b_{K-1}) under i.i.d.
/// Werner(F) pairs given b_1 ^ ... ^ b_K = parity.
double s_entropy(int block_size, double fidelity, unsigned parity = 0);

inline double entropy(const ExchangeableDistribution& d) { return d.entropy(); }

}  // namespace aepp
