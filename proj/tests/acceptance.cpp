// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--known-red N[,N...]]
//
// Exit status is the number of failing criteria not listed as known red.
// Known-red criteria still print FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aepp/analysis.hpp"
#include "aepp/dense_joint.hpp"
#include "aepp/exchangeable.hpp"
#include "aepp/montecarlo.hpp"
#include "aepp/parity.hpp"
#include "aepp/protocols.hpp"

using namespace aepp;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

const Grid kGrid{0.5, 1.0, 200};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Contiguous grid ranges where `bad` holds.
std::string bands(const std::vector<double>& fs, const std::vector<bool>& bad) {
  std::string out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!bad[i] || (i > 0 && bad[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < fs.size() && bad[j + 1]) ++j;
    if (!out.empty()) out += ", ";
    out += "[" + fmt("%.4f", fs[i]) + ", " + fmt("%.4f", fs[j]) + "]";
  }
  return out;
}

Verdict theorem_check() {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (double f : kGrid.points()) {
      const auto tree = aepp_a_tree(n, f);
      for (auto policy : {HashingPolicy::floored, HashingPolicy::raw})
        worst = std::max(worst, std::abs(evaluate_yield(tree, 1 << n, policy).yield - theorem_yield(n, f, policy)));
    }
  return {worst <= 1e-9, "max |tree - closed form| = " + fmt("%.3g", worst) + " (tol 1e-9)"};
}

Verdict crossover_check() {
  const auto c = find_crossover("envelope", [](double f) { return aepp_envelope(f, 6); }, {0.9, 0.9999, 1e-6});
  if (!c) return {false, "no sign change in (0.9, 0.9999)"};
  const double width = c->bracket_hi - c->bracket_lo;
  return {std::abs(c->f_cross - 0.993) <= 0.002 && width <= 1e-6,
          "F_cross = " + fmt("%.6f", c->f_cross) + ", bracket width " + fmt("%.2g", width) + " (target 0.993 +- 0.002)"};
}

Verdict asymptote_check() {
  const auto rows = asymptotic_check(22);
  const double d12 = std::abs(rows[11].deviation);
  const double d22 = std::abs(rows[21].deviation);
  return {d12 < 1e-3 && d22 < 1e-6, "|p - p*| = " + fmt("%.3g", d12) + " at n=12, " + fmt("%.3g", d22) + " at n=22"};
}

Verdict advantage_check() {
  bool ok = true;
  double smallest = 1.0;
  for (int n = 2; n <= 10; ++n) {
    const auto row = hashing_advantage_bound(n);
    ok = ok && row.margin() > 0.0;
    smallest = std::min(smallest, row.margin());
  }
  return {ok, "smallest margin over n=2..10: " + fmt("%.3g", smallest)};
}

Verdict engine_check() {
  double worst = 0.0;
  for (int K : {2, 4, 8})
    for (double f : {0.6, 0.75, 0.9, 0.99}) {
      std::vector<int> src(K - 1);
      for (int i = 0; i < K - 1; ++i) src[i] = i;
      const auto fanned = bxor_fanout(product(werner(f), K), std::span<const int>(src), K - 1);
      const double dense = entropy(*measure(fanned, K - 1, Axis::Z, 0).state);
      worst = std::max(worst, std::abs(dense - s_entropy(K, f, 0)));
    }
  return {worst <= 1e-10, "max |exchangeable - dense| = " + fmt("%.3g", worst) + " (tol 1e-10)"};
}

Verdict mc_check() {
  const char* names[] = {"aepp-a-n2", "aepp-a-n3", "aepp-p-n2", "maneva-smolin-n2", "leung-shor",
                         "aepp-star-4", "recurrence", "modified-recurrence", "hashing"};
  bool ok = true;
  double worst = 0.0;
  std::string failures;
  std::uint64_t seed = 1;
  for (const char* name : names)
    for (double f : {0.7, 0.85, 0.95}) {
      const auto c = check_concordance(estimate(ProtocolSpec::parse(name), f, 1000000, seed++));
      worst = std::max(worst, c.worst_sigmas);
      if (!c.concordant) {
        ok = false;
        failures += std::string(" ") + name + "@" + fmt("%.2f", f);
      }
    }
  return {ok, "9 protocols x 3 fidelities x 1e6 shots, worst deviation " + fmt("%.2f", worst) + " sigma" +
                  (ok ? "" : "; discordant:" + failures)};
}

Verdict ordering_check() {
  const auto fs = kGrid.points();
  std::vector<std::string> problems;
  for (int n = 1; n <= 6; ++n) {
    std::vector<bool> bad(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i)
      bad[i] = yield_of(ProtocolSpec::aepp_a(n), fs[i]) < yield_of(ProtocolSpec::maneva_smolin(n), fs[i]) - 1e-12;
    if (std::count(bad.begin(), bad.end(), true)) problems.push_back("maneva-smolin-n" + std::to_string(n) + " above aepp-a " + bands(fs, bad));
  }
  std::vector<double> env(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) env[i] = aepp_family_envelope(fs[i], 6);
  for (const auto& spec : {ProtocolSpec::recurrence_method(), ProtocolSpec::modified_recurrence(), ProtocolSpec::leung_shor()}) {
    std::vector<bool> bad(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) bad[i] = yield_of(spec, fs[i]) > env[i] + 1e-12;
    const auto count = std::count(bad.begin(), bad.end(), true);
    if (count) problems.push_back(spec.name() + " above envelope at " + std::to_string(count) + " points " + bands(fs, bad));
  }
  std::string detail;
  for (const auto& p : problems) detail += (detail.empty() ? "" : "; ") + p;
  return {problems.empty(), problems.empty() ? "all orderings hold on the 200-point grid" : detail};
}

Verdict star_check() {
  bool dominated = true;
  double best_gain = 0.0;
  double where = 0.0;
  for (double f : kGrid.points()) {
    const double star = aepp_star_4(f).yield;
    const double base = yield_of(ProtocolSpec::aepp_a(2), f);
    dominated = dominated && star >= base - 1e-12;
    if (f > 0.74 && star - base > best_gain) {
      best_gain = star - base;
      where = f;
    }
  }
  return {dominated && best_gain > 1e-12,
          std::string(dominated ? "never below AEPP(a,4)" : "falls below AEPP(a,4)") + ", largest gain for F>0.74: " +
              fmt("%.4g", best_gain) + " at F=" + fmt("%.4f", where)};
}

void check_tree(const ProtocolTree& tree, int N, std::string& err) {
  double total = 0.0;
  for (const auto& leaf : tree) {
    total += leaf.branch_probability;
    if (leaf.measurements_spent + leaf.discarded + leaf.hashed_pairs() != N) err = "pair accounting at leaf " + leaf.record;
    for (const auto& g : leaf.groups) {
      const double s = g.entropy();
      if (!(s >= -1e-12 && s <= 2.0 * g.size + 1e-12)) err = "entropy bound at leaf " + leaf.record;
      if (const auto* d = std::get_if<DenseJoint>(&g.law)) {
        if (std::abs(d->probs().sum() - 1.0) > 1e-12) err = "group normalization at leaf " + leaf.record;
      } else {
        const double c = std::get<ExchangeableDistribution>(g.law).condition_probability();
        if (!(c > 0.0 && c <= 1.0)) err = "conditioning probability at leaf " + leaf.record;
      }
    }
  }
  if (std::abs(total - 1.0) > 1e-12) err = "leaf probabilities sum to " + fmt("%.15g", total);
  const double y = evaluate_yield(tree, N).yield;
  if (!(y >= 0.0 && y <= 1.0)) err = "yield outside [0,1]";
}

Verdict conservation_check() {
  int trees = 0;
  std::string err;
  const PairDistribution extra[] = {{0.7, 0.1, 0.15, 0.05}, {0.62, 0.2, 0.08, 0.1}};
  for (double f : Grid{0.3, 1.0, 15}.points()) {
    for (int n = 1; n <= 4; ++n) {
      for (const auto& spec : {ProtocolSpec::aepp_a(n), ProtocolSpec::aepp_p(n), ProtocolSpec::maneva_smolin(n)}) {
        check_tree(block_tree(spec, f), 1 << n, err);
        ++trees;
      }
      for (auto engine : {TreeEngine::dense, TreeEngine::structured}) {
        if (engine == TreeEngine::dense && n > 3) continue;
        check_tree(aepp_a_tree(n, werner(f), engine), 1 << n, err);
        ++trees;
      }
    }
    check_tree(block_tree(ProtocolSpec::leung_shor(), f), 4, err);
    for (const StarPlan& plan : {StarPlan{}, StarPlan{{"0"}}}) check_tree(block_tree(ProtocolSpec::aepp_star_4(), f, plan), 4, err);
    trees += 3;
    const auto pass = purify_round(werner(f), Axis::Z);
    if (std::abs(pass.survivor.probs().sum() - 1.0) > 1e-12) err = "recurrence survivor normalization";
  }
  for (const auto& base : extra)
    for (int n = 1; n <= 4; ++n) {
      check_tree(aepp_a_tree(n, base), 1 << n, err);
      check_tree(aepp_p_tree(n, base), 1 << n, err);
      trees += 2;
    }
  return {err.empty(), err.empty() ? std::to_string(trees) + " trees checked" : err};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> known_red;
  app.add_option("--known-red", known_red, "Criteria expected to fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"cross-evaluator theorem check", theorem_check},
      {"crossover reproduction", crossover_check},
      {"asymptotic parity limit", asymptote_check},
      {"near-F=1 advantage over hashing", advantage_check},
      {"exchangeable vs dense entropies", engine_check},
      {"Monte-Carlo concordance", mc_check},
      {"generalization ordering", ordering_check},
      {"AEPP*(a,4) improvement", star_check},
      {"conservation suite", conservation_check},
  };
  const std::set<int> red(known_red.begin(), known_red.end());
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.2fs]%s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first,
                v.detail.c_str(), secs, !v.pass && red.count(id) ? " (known red)" : "");
    std::fflush(stdout);
    if (!v.pass && !red.count(id)) ++unexpected;
  }
  return unexpected;
}
