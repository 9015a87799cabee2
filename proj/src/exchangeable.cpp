#include "aepp/exchangeable.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace aepp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// n * log(q) with 0 * log(0) = 0.
double xlog(int n, double log_q) { return n == 0 ? 0.0 : n * log_q; }

// Amplitude-form view of the distribution. The phase form is the same law
// with the a and b roles exchanged on the base and on every survivor label.
struct TypeSum {
  int k;            // survivors
  unsigned parity;  // required b-parity of the whole block
  double lq[2][2];  // log q(a, b)
  bool l_free;      // q(0,1) == q(1,1): weight does not depend on l
  std::vector<double> lfact;

  TypeSum(const PairDistribution& base, int survivors, unsigned par)
      : k(survivors), parity(par), l_free(base(1) == base(3)), lfact(survivors + 1, 0.0) {
    for (unsigned a = 0; a < 2; ++a)
      for (unsigned b = 0; b < 2; ++b) {
        const double q = base(2 * a + b);
        lq[a][b] = q > 0.0 ? std::log(q) : kNegInf;
      }
    for (int i = 1; i <= k; ++i) lfact[i] = lfact[i - 1] + std::log(double(i));
  }

  double log_choose(int n, int r) const { return lfact[n] - lfact[r] - lfact[n - r]; }

  // m: survivors with b=1, j: survivors with (c,b)=(1,0), l: with (1,1).
  double log_weight(int m, int j, int l) const {
    const unsigned b_last = parity ^ static_cast<unsigned>(m & 1);
    double acc = kNegInf;
    for (unsigned a = 0; a < 2; ++a) {
      if (lq[a][b_last] == kNegInf) continue;
      const double t = lq[a][b_last] + xlog(k - m - j, lq[a][0]) + xlog(j, lq[a ^ 1u][0]) +
                       xlog(m - l, lq[a][1]) + xlog(l, lq[a ^ 1u][1]);
      acc = log_sum_exp(acc, t);
    }
    return acc;
  }

  double log_count(int m, int j, int l) const {
    return log_choose(k, m) + log_choose(k - m, j) + log_choose(m, l);
  }

  template <typename Fn>
  void for_each_type(Fn&& fn) const {
    for (int m = 0; m <= k; ++m)
      for (int j = 0; j <= k - m; ++j) {
        if (l_free) {
          fn(log_choose(k, m) + log_choose(k - m, j) + m * std::numbers::ln2, log_weight(m, j, 0));
        } else {
          for (int l = 0; l <= m; ++l) fn(log_count(m, j, l), log_weight(m, j, l));
        }
      }
  }

  double log_total() const {
    double acc = kNegInf;
    for_each_type([&](double lc, double lw) { acc = log_sum_exp(acc, lc + lw); });
    return acc;
  }
};

}  // namespace

ExchangeableDistribution::ExchangeableDistribution(PairDistribution base, int block_size, Axis axis,
                                                   unsigned parity)
    : base_(base), block_(block_size), axis_(axis), parity_(parity & 1u) {
  if (block_size < 2) throw std::domain_error("exchangeable block needs at least 2 pairs");
}

namespace {

TypeSum amplitude_form(const ExchangeableDistribution& d) {
  const PairDistribution base = d.axis() == Axis::Z ? d.base() : swap_roles(d.base());
  return TypeSum(base, d.pairs(), d.parity());
}

}  // namespace

double ExchangeableDistribution::condition_probability() const {
  return std::exp(amplitude_form(*this).log_total());
}

double ExchangeableDistribution::probability(std::span<const BellLabel> labels) const {
  if (static_cast<int>(labels.size()) != pairs())
    throw std::invalid_argument("tuple length does not match survivor count");
  const TypeSum ts = amplitude_form(*this);
  const double lp = ts.log_total();
  if (lp == kNegInf) throw std::domain_error("conditioning event has probability zero");
  int m = 0, j = 0, l = 0;
  for (BellLabel x : labels) {
    const unsigned c = axis_ == Axis::Z ? x.a : x.b;
    const unsigned b = axis_ == Axis::Z ? x.b : x.a;
    if (b) {
      ++m;
      if (c) ++l;
    } else if (c) {
      ++j;
    }
  }
  return std::exp(ts.log_weight(m, j, ts.l_free ? 0 : l) - lp);
}

double ExchangeableDistribution::entropy() const {
  const TypeSum ts = amplitude_form(*this);
  const double lp = ts.log_total();
  if (lp == kNegInf) throw std::domain_error("conditioning event has probability zero");
  double h = 0.0;
  ts.for_each_type([&](double lc, double lw) {
    if (lw == kNegInf) return;
    const double lcond = lw - lp;
    h -= std::exp(lc + lcond) * lcond;
  });
  return h / std::numbers::ln2;
}

DenseJoint ExchangeableDistribution::to_dense() const {
  if (block_ > kDenseMaxPairs) throw std::length_error("block too large for the dense engine");
  DenseJoint joint = product(base_, block_);
  const int common = block_ - 1;
  for (int t = 0; t < common; ++t)
    joint = axis_ == Axis::Z ? bxor(joint, t, common) : bxor(joint, common, t);
  auto m = measure(joint, common, axis_, parity_);
  if (!m.state) throw std::domain_error("conditioning event has probability zero");
  return *std::move(m.state);
}

double s_entropy(int block_size, double fidelity, unsigned parity) {
  return ExchangeableDistribution(werner(fidelity), block_size, Axis::Z, parity).entropy();
}

}  // namespace aepp
