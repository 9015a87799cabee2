#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aepp/dense_joint.hpp"
#include "aepp/outcome.hpp"

namespace aepp {

// Protocol scripts are written once against the executor interface below and
// run either on an exact dense joint (which forks at every measurement) or on
// one concrete tuple of sampled labels (which follows the realized outcome).
//
//   bxor(source, target)
//   measure(pair, axis, fn)   calls fn(outcome, executor&) per live branch
//   hash(group)
//   discard(pair)
//   record()
//
// Pairs are addressed by stable ids 0..N-1 assigned at the start of the run.

/// Exact executor: one branch of a dense decision tree.
class DenseBranch {
 public:
  DenseBranch(DenseJoint joint, ProtocolTree* sink) : joint_(std::move(joint)), sink_(sink) {
    ids_.resize(joint_.pairs());
    std::iota(ids_.begin(), ids_.end(), 0);
  }

  void bxor(int source, int target) { joint_ = aepp::bxor(joint_, free_position(source), free_position(target)); }

  template <typename Fn>
  void measure(int pair, Axis axis, Fn&& fn) {
    branched_ = true;
    const int pos = free_position(pair);
    for (unsigned outcome = 0; outcome < 2; ++outcome) {
      auto m = aepp::measure(joint_, pos, axis, outcome);
      if (!(m.probability > 0.0)) continue;
      DenseBranch child(*this, *std::move(m.state));
      child.ids_.erase(child.ids_.begin() + pos);
      child.probability_ *= m.probability;
      child.record_ += static_cast<char>('0' + outcome);
      ++child.measured_;
      fn(outcome, child);
      if (!child.branched_) sink_->push_back(child.finish());
    }
  }

  void hash(std::vector<int> group) {
    if (!group.empty()) groups_.push_back(std::move(group));
  }

  void discard(int pair) {
    const int pos = free_position(pair);
    std::vector<int> keep;
    for (int p = 0; p < joint_.pairs(); ++p)
      if (p != pos) keep.push_back(p);
    joint_ = keep.empty() ? DenseJoint() : marginal(joint_, std::span<const int>(keep));
    ids_.erase(ids_.begin() + pos);
    ++discarded_;
  }

  const std::string& record() const { return record_; }
  bool branched() const { return branched_; }

  ProtocolOutcome finish() const {
    ProtocolOutcome out;
    out.branch_probability = probability_;
    out.record = record_;
    out.measurements_spent = measured_;
    out.discarded = discarded_;
    std::size_t assigned = 0;
    for (const auto& g : groups_) {
      std::vector<int> pos;
      for (int id : g) pos.push_back(position(id));
      out.groups.push_back({static_cast<int>(g.size()), marginal(joint_, std::span<const int>(pos))});
      assigned += g.size();
    }
    if (assigned != ids_.size())
      throw StructuralError("leaf '" + record_ + "' leaves pairs neither hashed, measured nor discarded");
    return out;
  }

 private:
  DenseBranch(const DenseBranch& parent, DenseJoint joint)
      : joint_(std::move(joint)),
        ids_(parent.ids_),
        sink_(parent.sink_),
        probability_(parent.probability_),
        record_(parent.record_),
        measured_(parent.measured_),
        discarded_(parent.discarded_),
        groups_(parent.groups_) {}

  int position(int id) const {
    const auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) throw StructuralError("pair " + std::to_string(id) + " is no longer available");
    return static_cast<int>(it - ids_.begin());
  }

  int free_position(int id) const {
    for (const auto& g : groups_)
      if (std::find(g.begin(), g.end(), id) != g.end())
        throw StructuralError("pair " + std::to_string(id) + " was already handed to hashing");
    return position(id);
  }

  DenseJoint joint_;
  std::vector<int> ids_;
  ProtocolTree* sink_;
  double probability_ = 1.0;
  std::string record_;
  int measured_ = 0;
  int discarded_ = 0;
  std::vector<std::vector<int>> groups_;
  bool branched_ = false;
};

/// Runs `script(executor)` over every branch of `initial` and returns the leaves.
template <typename Script>
ProtocolTree build_dense_tree(DenseJoint initial, Script&& script) {
  ProtocolTree tree;
  DenseBranch root(std::move(initial), &tree);
  script(root);
  if (!root.branched()) tree.push_back(root.finish());
  return tree;
}

/// Concrete executor: applies the bit maps to one tuple of labels.
class BitRunner {
 public:
  explicit BitRunner(std::span<const BellLabel> labels)
      : labels_(labels.begin(), labels.end()), state_(labels.size(), kLive) {}

  void bxor(int source, int target) {
    require_live(source);
    require_live(target);
    bxor_labels(labels_[source], labels_[target]);
  }

  template <typename Fn>
  void measure(int pair, Axis axis, Fn&& fn) {
    require_live(pair);
    const unsigned outcome = revealed_bit(labels_[pair], axis);
    state_[pair] = kMeasured;
    ++measured_;
    record_ += static_cast<char>('0' + outcome);
    fn(outcome, *this);
  }

  void hash(const std::vector<int>& group) {
    if (group.empty()) return;
    for (int id : group) {
      require_live(id);
      state_[id] = kHashed;
    }
    group_sizes_.push_back(static_cast<int>(group.size()));
  }

  void discard(int pair) {
    require_live(pair);
    state_[pair] = kDiscarded;
    ++discarded_;
  }

  const std::string& record() const { return record_; }
  int measured() const { return measured_; }
  int discarded() const { return discarded_; }
  const std::vector<int>& group_sizes() const { return group_sizes_; }
  const std::vector<BellLabel>& labels() const { return labels_; }
  bool all_accounted() const {
    return std::none_of(state_.begin(), state_.end(), [](char s) { return s == kLive; });
  }

 private:
  static constexpr char kLive = 0, kMeasured = 1, kHashed = 2, kDiscarded = 3;

  void require_live(int id) const {
    if (id < 0 || id >= static_cast<int>(state_.size()) || state_[id] != kLive)
      throw StructuralError("pair " + std::to_string(id) + " is no longer available");
  }

  std::vector<BellLabel> labels_;
  std::vector<char> state_;
  std::string record_;
  int measured_ = 0;
  int discarded_ = 0;
  std::vector<int> group_sizes_;
};

}  // namespace aepp
