#pragma once

#include <Eigen/Core>

#include <cmath>
#include <initializer_list>

namespace aepp {

/// Shannon entropy in bits of a probability array, with 0 log 0 = 0.
template <typename Derived>
typename Derived::Scalar shannon_entropy(const Eigen::ArrayBase<Derived>& probs) {
  using Scalar = typename Derived::Scalar;
  using std::log2;
  Scalar h(0);
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const Scalar p = probs(i);
    if (p > Scalar(0)) h -= p * log2(p);
  }
  return h;
}

inline double shannon_entropy(std::initializer_list<double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

/// Binary entropy h(p).
inline double binary_entropy(double p) { return shannon_entropy({p, 1.0 - p}); }

}  // namespace aepp
