#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

#include "aepp/bell_label.hpp"

namespace aepp {

inline constexpr double kNormTolerance = 1e-12;

/// Probability vector over the four Bell labels of a single pair.
template <typename Scalar>
class BasicPairDistribution {
 public:
  using Vector = Eigen::Array<Scalar, 4, 1>;

  BasicPairDistribution() : probs_(Vector::Zero()) { probs_(0) = Scalar(1); }

  explicit BasicPairDistribution(const Vector& probs) : probs_(probs) {
    if ((probs_ < Scalar(0)).any())
      throw std::domain_error("pair distribution has a negative entry");
    using std::abs;
    if (abs(probs_.sum() - Scalar(1)) > Scalar(kNormTolerance))
      throw std::domain_error("pair distribution does not sum to 1");
  }

  BasicPairDistribution(Scalar p00, Scalar p01, Scalar p10, Scalar p11)
      : BasicPairDistribution(Vector(p00, p01, p10, p11)) {}

  Scalar operator[](BellLabel l) const { return probs_(l.index()); }
  Scalar operator()(unsigned index) const { return probs_(index); }
  const Vector& probs() const { return probs_; }

  Scalar fidelity() const { return probs_(0); }
  /// Probability that the amplitude bit is set.
  Scalar amplitude_error() const { return probs_(1) + probs_(3); }
  /// Probability that the phase bit is set.
  Scalar phase_error() const { return probs_(2) + probs_(3); }
  Scalar error(Axis axis) const { return axis == Axis::Z ? amplitude_error() : phase_error(); }

  friend bool operator==(const BasicPairDistribution& x, const BasicPairDistribution& y) {
    return (x.probs_ == y.probs_).all();
  }

 private:
  Vector probs_;
};

using PairDistribution = BasicPairDistribution<double>;

/// Generalized Werner state: F on Phi+ and (1-F)/3 on each other label.
template <typename Scalar = double>
BasicPairDistribution<Scalar> werner(Scalar fidelity) {
  if (!(fidelity >= Scalar(0) && fidelity <= Scalar(1)))
    throw std::domain_error("fidelity must lie in [0, 1], got " + std::to_string(double(fidelity)));
  const Scalar g = (Scalar(1) - fidelity) / Scalar(3);
  return BasicPairDistribution<Scalar>(fidelity, g, g, g);
}

/// Exchanges the roles of the phase and amplitude bits (01 <-> 10).
template <typename Scalar>
BasicPairDistribution<Scalar> swap_roles(const BasicPairDistribution<Scalar>& d) {
  return BasicPairDistribution<Scalar>(d(0), d(2), d(1), d(3));
}

}  // namespace aepp
