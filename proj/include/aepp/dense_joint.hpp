#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aepp/bell_label.hpp"
#include "aepp/entropy.hpp"
#include "aepp/pair_distribution.hpp"

namespace aepp {

/// Largest pair count for which a dense 4^k table may be built.
inline constexpr int kDenseMaxPairs = 10;

// Pairs are numbered 1..k in prose and 0..k-1 in code. The table index is the
// base-4 number whose most significant digit is pair 0, so iterating indices
// visits label tuples (a1 b1, a2 b2, ...) in lexicographic order.

/// Exact probability table over all Bell-label tuples of k pairs.
template <typename Scalar>
class BasicDenseJoint {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  /// The empty joint: zero pairs, one outcome with probability 1.
  BasicDenseJoint() : k_(0), probs_(Array::Ones(1)) {}

  BasicDenseJoint(int pairs, Array probs) : k_(pairs), probs_(std::move(probs)) {
    if (pairs < 0 || pairs > kDenseMaxPairs)
      throw std::length_error("dense joint limited to " + std::to_string(kDenseMaxPairs) +
                              " pairs, requested " + std::to_string(pairs));
    if (probs_.size() != table_size(pairs))
      throw std::invalid_argument("dense joint table has the wrong size");
    if ((probs_ < Scalar(0)).any()) throw std::domain_error("dense joint has a negative entry");
    using std::abs;
    if (abs(probs_.sum() - Scalar(1)) > Scalar(1e-10))
      throw std::domain_error("dense joint does not sum to 1");
  }

  static constexpr Eigen::Index table_size(int pairs) { return Eigen::Index(1) << (2 * pairs); }

  int pairs() const { return k_; }
  Eigen::Index size() const { return probs_.size(); }
  const Array& probs() const { return probs_; }
  Scalar operator()(Eigen::Index index) const { return probs_(index); }

  int shift(int pair) const { return 2 * (k_ - 1 - pair); }
  BellLabel label_at(Eigen::Index index, int pair) const {
    return BellLabel::from_index(static_cast<unsigned>((index >> shift(pair)) & 3));
  }

  Eigen::Index index_of(std::span<const BellLabel> labels) const {
    if (static_cast<int>(labels.size()) != k_) throw std::invalid_argument("label tuple has the wrong length");
    Eigen::Index idx = 0;
    for (BellLabel l : labels) idx = (idx << 2) | l.index();
    return idx;
  }

  Scalar probability(std::span<const BellLabel> labels) const { return probs_(index_of(labels)); }

 private:
  int k_;
  Array probs_;
};

using DenseJoint = BasicDenseJoint<double>;

namespace detail {

template <typename Scalar>
void check_pair(const BasicDenseJoint<Scalar>& d, int pair) {
  if (pair < 0 || pair >= d.pairs())
    throw std::out_of_range("pair index " + std::to_string(pair) + " outside [0, " +
                            std::to_string(d.pairs()) + ")");
}

}  // namespace detail

/// Joint of k independent copies of `base`.
template <typename Scalar>
BasicDenseJoint<Scalar> product(const BasicPairDistribution<Scalar>& base, int pairs) {
  using Array = typename BasicDenseJoint<Scalar>::Array;
  if (pairs < 0 || pairs > kDenseMaxPairs) throw std::length_error("pair count out of dense range");
  Array probs = Array::Ones(1);
  for (int p = 0; p < pairs; ++p) {
    Array next(probs.size() * 4);
    for (Eigen::Index i = 0; i < probs.size(); ++i)
      for (unsigned l = 0; l < 4; ++l) next(i * 4 + l) = probs(i) * base(l);
    probs = std::move(next);
  }
  return BasicDenseJoint<Scalar>(pairs, std::move(probs));
}

/// Independent juxtaposition: pairs of `lhs` first, then pairs of `rhs`.
template <typename Scalar>
BasicDenseJoint<Scalar> tensor(const BasicDenseJoint<Scalar>& lhs, const BasicDenseJoint<Scalar>& rhs) {
  using Array = typename BasicDenseJoint<Scalar>::Array;
  Array probs(lhs.size() * rhs.size());
  for (Eigen::Index i = 0; i < lhs.size(); ++i)
    probs.segment(i * rhs.size(), rhs.size()) = lhs(i) * rhs.probs();
  return BasicDenseJoint<Scalar>(lhs.pairs() + rhs.pairs(), std::move(probs));
}

template <typename Scalar = double>
BasicDenseJoint<Scalar> point_mass(std::span<const BellLabel> labels) {
  using Array = typename BasicDenseJoint<Scalar>::Array;
  const int k = static_cast<int>(labels.size());
  Array probs = Array::Zero(BasicDenseJoint<Scalar>::table_size(k));
  Eigen::Index idx = 0;
  for (BellLabel l : labels) idx = (idx << 2) | l.index();
  probs(idx) = Scalar(1);
  return BasicDenseJoint<Scalar>(k, std::move(probs));
}

template <typename Scalar = double>
BasicDenseJoint<Scalar> uniform_joint(int pairs) {
  using Array = typename BasicDenseJoint<Scalar>::Array;
  const auto n = BasicDenseJoint<Scalar>::table_size(pairs);
  return BasicDenseJoint<Scalar>(pairs, Array::Constant(n, Scalar(1) / Scalar(n)));
}

/// BXOR(source, target): a_source ^= a_target, b_target ^= b_source.
template <typename Scalar>
BasicDenseJoint<Scalar> bxor(const BasicDenseJoint<Scalar>& dist, int source, int target) {
  detail::check_pair(dist, source);
  detail::check_pair(dist, target);
  if (source == target) throw std::out_of_range("bxor source and target must differ");
  using Array = typename BasicDenseJoint<Scalar>::Array;
  const int ss = dist.shift(source);
  const int ts = dist.shift(target);
  Array out = Array::Zero(dist.size());
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    const Eigen::Index a_target = (i >> (ts + 1)) & 1;
    const Eigen::Index b_source = (i >> ss) & 1;
    const Eigen::Index j = i ^ (a_target << (ss + 1)) ^ (b_source << ts);
    out(j) = dist(i);
  }
  return BasicDenseJoint<Scalar>(dist.pairs(), std::move(out));
}

/// Sequential BXOR(t, common) for every t in `targets` (each t is a source).
template <typename Scalar>
BasicDenseJoint<Scalar> bxor_fanout(const BasicDenseJoint<Scalar>& dist, std::span<const int> targets, int common) {
  if (std::find(targets.begin(), targets.end(), common) != targets.end())
    throw std::out_of_range("fan-out common pair must not be among the targets");
  BasicDenseJoint<Scalar> out = dist;
  for (int t : targets) out = bxor(out, t, common);
  return out;
}

template <typename Scalar>
struct BasicMeasurement {
  Scalar probability;
  /// Conditioned joint over the remaining pairs; empty when probability is 0.
  std::optional<BasicDenseJoint<Scalar>> state;
};

using Measurement = BasicMeasurement<double>;

/// Bilateral measurement of `pair` along `axis` with the stated comparison outcome.
/// The measured pair is consumed: its unrevealed bit is summed over.
template <typename Scalar>
BasicMeasurement<Scalar> measure(const BasicDenseJoint<Scalar>& dist, int pair, Axis axis, unsigned outcome) {
  detail::check_pair(dist, pair);
  using Array = typename BasicDenseJoint<Scalar>::Array;
  const int s = dist.shift(pair);
  const int bit_shift = axis == Axis::Z ? s : s + 1;
  const Eigen::Index low_mask = (Eigen::Index(1) << s) - 1;
  Array out = Array::Zero(BasicDenseJoint<Scalar>::table_size(dist.pairs() - 1));
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    if (static_cast<unsigned>((i >> bit_shift) & 1) != (outcome & 1u)) continue;
    const Eigen::Index j = ((i >> (s + 2)) << s) | (i & low_mask);
    out(j) += dist(i);
  }
  const Scalar total = out.sum();
  if (total <= Scalar(0)) return {Scalar(0), std::nullopt};
  out /= total;
  return {total, BasicDenseJoint<Scalar>(dist.pairs() - 1, std::move(out))};
}

/// Marginal over the listed pairs, in the listed order.
template <typename Scalar>
BasicDenseJoint<Scalar> marginal(const BasicDenseJoint<Scalar>& dist, std::span<const int> pairs) {
  if (pairs.empty()) throw std::domain_error("marginal over an empty pair set");
  for (std::size_t x = 0; x < pairs.size(); ++x) {
    detail::check_pair(dist, pairs[x]);
    for (std::size_t y = 0; y < x; ++y)
      if (pairs[x] == pairs[y]) throw std::domain_error("marginal pair set has duplicates");
  }
  using Array = typename BasicDenseJoint<Scalar>::Array;
  const int m = static_cast<int>(pairs.size());
  Array out = Array::Zero(BasicDenseJoint<Scalar>::table_size(m));
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    Eigen::Index j = 0;
    for (int p : pairs) j = (j << 2) | ((i >> dist.shift(p)) & 3);
    out(j) += dist(i);
  }
  out /= out.sum();
  return BasicDenseJoint<Scalar>(m, std::move(out));
}

template <typename Scalar>
BasicPairDistribution<Scalar> pair_marginal(const BasicDenseJoint<Scalar>& dist, int pair) {
  const int p[] = {pair};
  const auto m = marginal(dist, std::span<const int>(p));
  return BasicPairDistribution<Scalar>(typename BasicPairDistribution<Scalar>::Vector(m.probs()));
}

template <typename Scalar>
Scalar entropy(const BasicDenseJoint<Scalar>& dist) {
  return shannon_entropy(dist.probs());
}

template <typename Scalar>
Scalar entropy(const BasicPairDistribution<Scalar>& dist) {
  return shannon_entropy(dist.probs());
}

}  // namespace aepp
