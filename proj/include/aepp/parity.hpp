#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "aepp/pair_distribution.hpp"

namespace aepp {

/// P(XOR of `axis` bits over k i.i.d. pairs == parity).
///
/// Each bit is set independently with probability e, so the parity bias is
/// (1 - 2e)^k. Evaluated through log1p so that k up to 2^60 stays accurate.
inline double block_parity_prob(double error, std::uint64_t k, unsigned parity = 0) {
  if (k == 0) return parity == 0 ? 1.0 : 0.0;
  const double r = 1.0 - 2.0 * error;
  double bias;
  if (r == 0.0) {
    bias = 0.0;
  } else {
    const double mag = std::exp(static_cast<double>(k) * std::log1p(-2.0 * std::min(error, 1.0 - error)));
    bias = (r < 0.0 && (k & 1u)) ? -mag : mag;
  }
  return parity == 0 ? 0.5 * (1.0 + bias) : 0.5 * (1.0 - bias);
}

inline double block_parity_prob(const PairDistribution& base, Axis axis, std::uint64_t k, unsigned parity = 0) {
  return block_parity_prob(base.error(axis), k, parity);
}

/// Probability that b_1 xor ... xor b_K = 0 on K copies of the Werner state.
inline double parity_prob(double fidelity, std::uint64_t pairs) {
  if (pairs < 1) throw std::domain_error("parity_prob needs at least one pair");
  return block_parity_prob(werner(fidelity), Axis::Z, pairs, 0);
}

/// Limit of parity_prob along F = (2^n - 1)/2^n, K = 2^n.
inline double parity_limit() { return 0.5 * (1.0 + std::exp(-4.0 / 3.0)); }

}  // namespace aepp
