#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "aepp/bell_label.hpp"
#include "aepp/protocol_spec.hpp"

namespace aepp {

/// Placeholder for a block slot with no physical pair (blocks of 2^k - 1).
inline constexpr int kAbsent = -1;

/// Per-group choices for AEPP*(a,4): groups handed to hashing at a listed
/// record with at least three pairs run the phase-dual step instead.
struct StarPlan {
  std::set<std::string> refine_at;

  friend bool operator==(const StarPlan&, const StarPlan&) = default;
};

namespace scripts {

inline std::vector<int> present(const std::vector<int>& block, int excluding = kAbsent) {
  std::vector<int> out;
  for (int id : block)
    if (id != kAbsent && id != excluding) out.push_back(id);
  return out;
}

inline bool contains(const std::vector<int>& block, int id) {
  return std::find(block.begin(), block.end(), id) != block.end();
}

/// Accumulate the parity of every present member of `block` onto `common`.
/// Axis Z: members are sources (b parity flows into common, common's a flows
/// out). Axis X: the dual, common is the source.
template <typename Ex>
void fan_in(Ex& ex, const std::vector<int>& block, int common, Axis axis) {
  for (int id : block) {
    if (id == kAbsent || id == common) continue;
    if (axis == Axis::Z)
      ex.bxor(id, common);
    else
      ex.bxor(common, id);
  }
}

struct HashGroup {
  template <typename Ex>
  void operator()(Ex& ex, const std::vector<int>& group) const {
    ex.hash(group);
  }
};

/// Locate the single error known to sit in `block` (parity 1), whose member
/// `consumed` has already been measured. Each level halves the block: the
/// half without the consumed member is measured; its outcome says which half
/// is clean, that half is hashed and the other half is searched further.
template <typename Ex, typename OnGroup>
void localize(Ex& ex, const std::vector<int>& block, int consumed, Axis axis, const OnGroup& on_group) {
  if (block.size() <= 2) {
    for (int id : present(block, consumed)) ex.discard(id);
    return;
  }
  const auto half = static_cast<std::ptrdiff_t>(block.size() / 2);
  std::vector<int> lo(block.begin(), block.begin() + half);
  std::vector<int> hi(block.begin() + half, block.end());
  const bool consumed_low = contains(lo, consumed);
  const std::vector<int>& probe = consumed_low ? hi : lo;
  const std::vector<int>& rest = consumed_low ? lo : hi;

  const std::vector<int> probe_members = present(probe);
  if (probe_members.empty()) {
    // A half with no physical pair has known parity 0.
    localize(ex, rest, consumed, axis, on_group);
    return;
  }
  const int head = probe_members.front();
  fan_in(ex, probe, head, axis);
  ex.measure(head, axis, [&](unsigned outcome, auto& sub) {
    if (outcome == 1) {
      const auto clean = present(rest, consumed);
      if (!clean.empty()) on_group(sub, clean);
      localize(sub, probe, head, axis, on_group);
    } else {
      const auto clean = present(probe, head);
      if (!clean.empty()) on_group(sub, clean);
      localize(sub, rest, consumed, axis, on_group);
    }
  });
}

/// One adaptive block: fan the parity of every member into the last present
/// member and measure it. Agreement hands the rest to `on_group`; on
/// disagreement the error is localized, or the block is dropped when
/// `localize_errors` is false (the Maneva-Smolin variant).
template <typename Ex, typename OnGroup>
void adaptive_block(Ex& ex, const std::vector<int>& block, Axis axis, bool localize_errors,
                    const OnGroup& on_group) {
  const std::vector<int> members = present(block);
  if (members.empty()) return;
  const int common = members.back();
  fan_in(ex, block, common, axis);
  ex.measure(common, axis, [&](unsigned outcome, auto& sub) {
    const auto survivors = present(block, common);
    if (outcome == 0) {
      if (!survivors.empty()) on_group(sub, survivors);
    } else if (localize_errors) {
      localize(sub, block, common, axis, on_group);
    } else {
      for (int id : survivors) sub.discard(id);
    }
  });
}

template <typename Ex>
void adaptive_block(Ex& ex, const std::vector<int>& block, Axis axis, bool localize_errors) {
  adaptive_block(ex, block, axis, localize_errors, HashGroup{});
}

/// Pads a group of 2^k - 1 pairs to a 2^k block (absent last slot).
inline std::vector<int> padded_block(const std::vector<int>& group) {
  std::size_t size = 1;
  while (size < group.size()) size <<= 1;
  std::vector<int> block = group;
  block.resize(size, kAbsent);
  return block;
}

inline std::vector<int> iota_block(int n) {
  std::vector<int> block(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) block[i] = i;
  return block;
}

/// Phase-dual adaptive step on a residual group, hashing what remains.
struct PhaseRefine {
  template <typename Ex>
  void operator()(Ex& ex, const std::vector<int>& group) const {
    adaptive_block(ex, padded_block(group), Axis::X, true, HashGroup{});
  }
};

/// AEPP(a,4) whose residual groups follow `plan`.
struct StarGroup {
  const StarPlan* plan;
  template <typename Ex>
  void operator()(Ex& ex, const std::vector<int>& group) const {
    if (group.size() >= 3 && plan->refine_at.count(ex.record()))
      PhaseRefine{}(ex, group);
    else
      ex.hash(group);
  }
};

/// Runs one block of a block protocol. Recurrence families run a single
/// round of their first step (AEPP(a,2)).
template <typename Ex>
void run_block(Ex& ex, const ProtocolSpec& spec, const StarPlan& plan = {}) {
  const int n = spec.block_size();
  switch (spec.family) {
    case Family::aepp_a:
      adaptive_block(ex, iota_block(n), Axis::Z, true);
      return;
    case Family::aepp_p:
      adaptive_block(ex, iota_block(n), Axis::X, true);
      return;
    case Family::maneva_smolin:
      adaptive_block(ex, iota_block(n), Axis::Z, false);
      return;
    case Family::leung_shor:
      adaptive_block(ex, iota_block(4), Axis::Z, false, PhaseRefine{});
      return;
    case Family::aepp_star_4:
      adaptive_block(ex, iota_block(4), Axis::Z, true, StarGroup{&plan});
      return;
    case Family::recurrence:
    case Family::modified_recurrence:
      adaptive_block(ex, iota_block(2), Axis::Z, true);
      return;
    case Family::hashing:
      ex.hash({0});
      return;
  }
}

}  // namespace scripts

}  // namespace aepp
