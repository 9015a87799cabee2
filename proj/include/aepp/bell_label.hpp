#pragma once

#include <cstdint>
#include <ostream>

namespace aepp {

/// Two classical bits naming a Bell state relative to |Phi+>.
///
///   a  b   state
///   0  0   Phi+
///   0  1   Psi+
///   1  0   Phi-
///   1  1   Psi-
///
/// `a` flags a phase error and `b` an amplitude error. The packed index
/// 2a+b is the storage order used by every distribution in this library.
struct BellLabel {
  std::uint8_t a = 0;
  std::uint8_t b = 0;

  constexpr BellLabel() = default;
  constexpr BellLabel(unsigned phase, unsigned amplitude)
      : a(static_cast<std::uint8_t>(phase & 1u)), b(static_cast<std::uint8_t>(amplitude & 1u)) {}

  static constexpr BellLabel from_index(unsigned index) { return {index >> 1, index & 1u}; }
  constexpr unsigned index() const { return (static_cast<unsigned>(a) << 1) | b; }

  friend constexpr bool operator==(BellLabel, BellLabel) = default;
};

inline constexpr BellLabel kPhiPlus{0, 0};
inline constexpr BellLabel kPsiPlus{0, 1};
inline constexpr BellLabel kPhiMinus{1, 0};
inline constexpr BellLabel kPsiMinus{1, 1};

/// Which bit a bilateral projective measurement reveals.
/// Z compares amplitudes (reveals b), X compares phases (reveals a).
enum class Axis { Z, X };

constexpr unsigned revealed_bit(BellLabel l, Axis axis) { return axis == Axis::Z ? l.b : l.a; }

/// Bit action of BXOR(source, target) on a pair of labels.
constexpr void bxor_labels(BellLabel& source, BellLabel& target) {
  source.a ^= target.a;
  target.b ^= source.b;
}

inline std::ostream& operator<<(std::ostream& os, BellLabel l) {
  return os << int(l.a) << int(l.b);
}

}  // namespace aepp
