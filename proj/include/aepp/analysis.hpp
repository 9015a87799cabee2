#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aepp/protocol_spec.hpp"

namespace aepp {

/// Uniform fidelity grid, both endpoints included.
struct Grid {
  double min = 0.5;
  double max = 1.0;
  int count = 200;

  std::vector<double> points() const;

  /// Parses "min:max:count"; throws std::invalid_argument when malformed.
  static Grid parse(std::string_view text);

  friend bool operator==(const Grid&, const Grid&) = default;
};

struct CurvePoint {
  double fidelity;
  double yield;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct YieldCurve {
  std::string protocol;
  Grid grid;
  std::vector<CurvePoint> points;
};

using YieldFunction = std::function<double(double)>;

YieldCurve sweep(const ProtocolSpec& spec, const Grid& grid, unsigned threads = 0);
YieldCurve sweep(std::string name, const YieldFunction& yield, const Grid& grid, unsigned threads = 0);

/// max over n = 1..n_max of the AEPP(a,2^n) yield.
double aepp_envelope(double fidelity, int n_max);

/// aepp_envelope together with the optimized AEPP*(a,4).
double aepp_family_envelope(double fidelity, int n_max);

struct CrossoverSearch {
  double lo = 0.9;
  double hi = 0.9999;
  double tolerance = 1e-6;
};

struct CrossoverResult {
  std::string protocol;
  double f_cross = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
};

/// Bisection on yield(F) - hashing(F). Empty when there is no sign change
/// across the search range.
std::optional<CrossoverResult> find_crossover(std::string name, const YieldFunction& yield,
                                              const CrossoverSearch& search = {});
std::optional<CrossoverResult> find_crossover(const ProtocolSpec& spec, const CrossoverSearch& search = {});

struct AsymptoticRow {
  int n;
  double fidelity;   // (2^n - 1) / 2^n
  double p;          // parity_prob(F, 2^n)
  double deviation;  // p - p*
};

std::vector<AsymptoticRow> asymptotic_check(int n_max);

/// H(p*) - p*, the per-block gain in the near-F=1 bound.
double limit_gain();

struct AdvantageRow {
  int n;
  double fidelity;
  double theorem_yield;  // raw closed form
  double hashing;        // 1 - H(F,G,G,G), unfloored
  double bound;          // 1 - H(F,G,G,G) + (H(p*) - p*)/N
  bool informational;    // n = 1 is degenerate

  double margin() const { return theorem_yield - hashing; }
  double bound_margin() const { return theorem_yield - bound; }
};

AdvantageRow hashing_advantage_bound(int n);

}  // namespace aepp
