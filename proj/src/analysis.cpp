#include "aepp/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aepp/entropy.hpp"
#include "aepp/parallel.hpp"
#include "aepp/parity.hpp"
#include "aepp/protocols.hpp"

namespace aepp {

std::vector<double> Grid::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = min;
    return out;
  }
  for (int i = 0; i < count; ++i) out[i] = i == count - 1 ? max : min + (max - min) * i / (count - 1);
  return out;
}

namespace {

double parse_double(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("malformed grid '" + std::string(whole) + "'; expected min:max:count");
  return v;
}

}  // namespace

Grid Grid::parse(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
    throw std::invalid_argument("malformed grid '" + std::string(text) + "'; expected min:max:count");
  Grid g;
  g.min = parse_double(text.substr(0, c1), text);
  g.max = parse_double(text.substr(c1 + 1, c2 - c1 - 1), text);
  const double count = parse_double(text.substr(c2 + 1), text);
  if (count < 1 || count != std::floor(count) || count > 1e7)
    throw std::invalid_argument("grid count must be a positive integer");
  g.count = static_cast<int>(count);
  if (!(g.min >= 0.0 && g.max <= 1.0 && g.min <= g.max) || (g.count > 1 && g.min == g.max))
    throw std::invalid_argument("grid must satisfy 0 <= min < max <= 1");
  return g;
}

YieldCurve sweep(std::string name, const YieldFunction& yield, const Grid& grid, unsigned threads) {
  YieldCurve curve{std::move(name), grid, {}};
  const auto fs = grid.points();
  curve.points.resize(fs.size());
  parallel_for(fs.size(), threads, [&](std::uint64_t i) { curve.points[i] = {fs[i], yield(fs[i])}; });
  return curve;
}

YieldCurve sweep(const ProtocolSpec& spec, const Grid& grid, unsigned threads) {
  return sweep(spec.name(), [&](double f) { return yield_of(spec, f); }, grid, threads);
}

double aepp_envelope(double fidelity, int n_max) {
  double best = 0.0;
  for (int n = 1; n <= n_max; ++n) best = std::max(best, yield_of(ProtocolSpec::aepp_a(n), fidelity));
  return best;
}

double aepp_family_envelope(double fidelity, int n_max) {
  return std::max(aepp_envelope(fidelity, n_max), aepp_star_4(fidelity).yield);
}

std::optional<CrossoverResult> find_crossover(std::string name, const YieldFunction& yield,
                                              const CrossoverSearch& search) {
  auto gap = [&](double f) { return yield(f) - hashing_yield(werner(f)); };
  double lo = search.lo;
  double hi = search.hi;
  const double g_lo = gap(lo);
  const double g_hi = gap(hi);
  if (!(g_lo != 0.0 && g_hi != 0.0 && std::signbit(g_lo) != std::signbit(g_hi))) return std::nullopt;
  int iterations = 0;
  while (hi - lo > search.tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    ++iterations;
    if (g == 0.0) {
      lo = hi = mid;
      break;
    }
    if (std::signbit(g) == std::signbit(g_lo))
      lo = mid;
    else
      hi = mid;
  }
  return CrossoverResult{std::move(name), 0.5 * (lo + hi), lo, hi, iterations};
}

std::optional<CrossoverResult> find_crossover(const ProtocolSpec& spec, const CrossoverSearch& search) {
  return find_crossover(spec.name(), [&](double f) { return yield_of(spec, f); }, search);
}

std::vector<AsymptoticRow> asymptotic_check(int n_max) {
  if (n_max < 1 || n_max > 60) throw std::domain_error("n_max must lie in [1, 60]");
  std::vector<AsymptoticRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    const double size = std::ldexp(1.0, n);
    const double f = (size - 1.0) / size;
    const double p = parity_prob(f, std::uint64_t{1} << n);
    rows.push_back({n, f, p, p - parity_limit()});
  }
  return rows;
}

double limit_gain() {
  const double p = parity_limit();
  return binary_entropy(p) - p;
}

AdvantageRow hashing_advantage_bound(int n) {
  if (n < 1) throw std::domain_error("n must be positive");
  const double size = std::ldexp(1.0, n);
  const double f = (size - 1.0) / size;
  const double hashing = 1.0 - entropy(werner(f));
  return {n, f, theorem_yield(n, f, HashingPolicy::raw), hashing, hashing + limit_gain() / size, n == 1};
}

}  // namespace aepp
