#include "aepp/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "aepp/io.hpp"
#include "aepp/montecarlo.hpp"
#include "aepp/protocols.hpp"

namespace aepp {

namespace {

constexpr int kUsageExit = 2;
constexpr int kMaxCurveExponent = 10;
constexpr int kMaxAdvantageExponent = 10;

const std::set<std::string> kSizedFamilies = {"aepp-a", "aepp-p", "maneva-smolin"};

std::string valid_selectors() {
  std::string s;
  for (const auto& f : family_names()) s += f + (kSizedFamilies.count(f) ? "[-n<k>]" : "") + ", ";
  return s + "envelope, family-envelope";
}

struct Shared {
  std::vector<std::string> protocols;
  std::vector<int> ns;
  double fidelity = -1.0;
  std::string grid;
  std::string out;
  std::string format = "csv";
  int n_max = 6;
  std::uint64_t shots = 1000000;
  std::uint64_t seed = 1;
  double lo = 0.9;
  double hi = 0.9999;
  double tol = 1e-6;
  bool check = false;
  unsigned threads = 0;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Shared& s) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("--protocol,-p", s.protocols, "Protocol selector(s): " + valid_selectors())->delimiter(',');
  sub->add_option("--n", s.ns, "Block exponents for sized families, e.g. 2,3,4")->delimiter(',');
  sub->add_option("--n-max", s.n_max, "Largest exponent for envelopes / asymptote table");
  sub->add_option("--out,-o", s.out, "Output path ('-' or empty: stdout)");
  sub->add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", s.threads, "Worker threads (0 = all cores)");
  sub->add_flag("--check", s.check, "Run cross-evaluator and Monte-Carlo self checks first");
  return sub;
}

bool has(const CLI::App* sub, const char* opt) { return sub->count(opt) > 0; }

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::sweep: return "sweep";
    case Command::yield: return "yield";
    case Command::crossover: return "crossover";
    case Command::mc: return "mc";
    case Command::asymptote: return "asymptote";
    case Command::compare: return "compare";
  }
  return "";
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Adaptive entanglement purification yields: sweeps, crossovers, Monte-Carlo checks", "aepp"};
  app.require_subcommand(1, 1);
  Shared s;
  auto* sweep = add_command(app, "sweep", "Yield curves over a fidelity grid", s);
  auto* yield = add_command(app, "yield", "Yield at a single fidelity", s);
  auto* crossover = add_command(app, "crossover", "Fidelity where a curve meets hashing", s);
  auto* mc = add_command(app, "mc", "Monte-Carlo branch frequencies vs exact probabilities", s);
  add_command(app, "asymptote", "Parity limit and near-F=1 advantage tables", s);
  auto* compare = add_command(app, "compare", "Curves for the comparison protocol set", s);
  for (auto* sub : {sweep, compare}) sub->add_option("--grid", s.grid, "min:max:count (default 0.5:1.0:200)");
  for (auto* sub : {yield, mc}) sub->add_option("--f", s.fidelity, "Input fidelity")->check(CLI::Range(0.0, 1.0))->required();
  mc->add_option("--shots", s.shots, "Sampled blocks")->check(CLI::PositiveNumber);
  mc->add_option("--seed", s.seed, "Base seed");
  crossover->add_option("--lo", s.lo, "Search range start")->check(CLI::Range(0.0, 1.0));
  crossover->add_option("--hi", s.hi, "Search range end")->check(CLI::Range(0.0, 1.0));
  crossover->add_option("--tol", s.tol, "Bracket width")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help(), 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\nRun with --help for usage.", kUsageExit);
  }

  RunConfig c;
  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  for (Command cmd : {Command::sweep, Command::yield, Command::crossover, Command::mc, Command::asymptote, Command::compare})
    if (command_name(cmd) == name) c.command = cmd;
  c.protocols = s.protocols;
  c.ns = s.ns;
  if (s.fidelity >= 0.0) c.fidelity = s.fidelity;
  c.shots = s.shots;
  c.seed = s.seed;
  c.out = s.out;
  c.format = s.format == "json" ? Format::json : Format::csv;
  c.n_max = s.n_max;
  c.check = s.check;
  c.threads = s.threads;
  c.search = {s.lo, s.hi, s.tol};

  try {
    if (!s.grid.empty()) c.grid = Grid::parse(s.grid);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what(), kUsageExit);
  }
  if (c.command == Command::asymptote && !has(sub, "--n-max")) c.n_max = 22;
  const int n_limit = c.command == Command::asymptote ? 60 : kMaxCurveExponent;
  if (c.n_max < 1 || c.n_max > n_limit)
    throw UsageError("--n-max must lie in [1, " + std::to_string(n_limit) + "]", kUsageExit);
  for (int n : c.ns)
    if (n < 1 || n > kMaxCurveExponent)
      throw UsageError("--n values must lie in [1, " + std::to_string(kMaxCurveExponent) + "]", kUsageExit);
  if (!(c.search.lo < c.search.hi)) throw UsageError("--lo must be below --hi", kUsageExit);

  if (c.protocols.empty()) {
    if (c.command == Command::crossover) c.protocols = {"envelope"};
    else if (c.command == Command::compare) c.protocols = comparison_set();
    else if (c.command == Command::asymptote) c.protocols = {"aepp-a"};
    else throw UsageError(name + " requires --protocol; valid: " + valid_selectors(), kUsageExit);
  }
  std::vector<NamedProtocol> resolved;
  try {
    resolved = resolve_protocols(c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what(), kUsageExit);
  }
  if (c.command == Command::mc && (resolved.size() != 1 || !resolved.front().spec))
    throw UsageError("mc takes exactly one concrete protocol (not an envelope)", kUsageExit);
  return c;
}

std::vector<NamedProtocol> resolve_protocols(const RunConfig& config) {
  std::vector<NamedProtocol> out;
  std::set<std::string> seen;
  auto add_spec = [&](const ProtocolSpec& spec) {
    if (spec.is_block_protocol() && spec.family != Family::hashing && spec.n_exponent > kMaxCurveExponent)
      throw std::invalid_argument("block exponent above " + std::to_string(kMaxCurveExponent) + " in " + spec.name());
    if (seen.insert(spec.name()).second)
      out.push_back({spec.name(), [spec](double f) { return yield_of(spec, f); }, spec});
  };
  const int n_max = config.n_max;
  for (const auto& sel : config.protocols) {
    if (sel == "envelope" || sel == "family-envelope") {
      if (!seen.insert(sel).second) continue;
      if (sel == "envelope")
        out.push_back({sel, [n_max](double f) { return aepp_envelope(f, n_max); }, std::nullopt});
      else
        out.push_back({sel, [n_max](double f) { return aepp_family_envelope(f, n_max); }, std::nullopt});
    } else if (kSizedFamilies.count(sel)) {
      const std::vector<int> ns = config.ns.empty() ? std::vector<int>{2} : config.ns;
      for (int n : ns) add_spec(ProtocolSpec::parse(sel + "-n" + std::to_string(n)));
    } else {
      try {
        add_spec(ProtocolSpec::parse(sel));
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("unknown protocol '" + sel + "'; valid: " + valid_selectors());
      }
    }
  }
  return out;
}

std::vector<std::string> comparison_set() {
  return {"aepp-a-n1",   "aepp-a-n2",   "aepp-a-n3",  "aepp-a-n4",           "aepp-a-n5",
          "aepp-a-n6",   "maneva-smolin-n2",          "maneva-smolin-n3",    "leung-shor",
          "aepp-star-4", "recurrence",  "modified-recurrence",                 "hashing",
          "envelope",    "family-envelope"};
}

CheckReport self_check(unsigned threads) {
  CheckReport r;
  auto note = [&](bool ok, const std::string& what) {
    r.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    r.passed = r.passed && ok;
  };
  const auto fs = Grid{0.5, 1.0, 26}.points();

  for (int n = 1; n <= 3; ++n) {
    double worst = 0.0;
    double engines = 0.0;
    for (double f : fs) {
      const auto tree = aepp_a_tree(n, f);
      validate_tree(tree, 1 << n);
      for (auto policy : {HashingPolicy::floored, HashingPolicy::raw})
        worst = std::max(worst, std::abs(evaluate_yield(tree, 1 << n, policy).yield - theorem_yield(n, f, policy)));
      const double dense = evaluate_yield(aepp_a_tree(n, f, TreeEngine::dense), 1 << n).yield;
      const double structured = evaluate_yield(aepp_a_tree(n, f, TreeEngine::structured), 1 << n).yield;
      engines = std::max(engines, std::abs(dense - structured));
    }
    std::ostringstream line;
    line << "aepp-a-n" << n << " tree vs closed form: max |diff| " << worst << ", dense vs structured " << engines;
    note(worst <= 1e-9 && engines <= 1e-10, line.str());
  }

  for (const char* name : {"aepp-a-n2", "aepp-p-n2", "maneva-smolin-n2", "leung-shor", "aepp-star-4", "hashing",
                           "recurrence", "modified-recurrence"}) {
    const auto spec = ProtocolSpec::parse(name);
    const McReport rep = estimate(spec, 0.85, 20000, 7, threads);
    const Concordance c = check_concordance(rep);
    std::ostringstream line;
    line << name << " Monte-Carlo at F=0.85: worst " << c.worst_sigmas << " sigma";
    note(c.concordant, line.str());
  }
  return r;
}

int execute(const RunConfig& config, std::ostream& err) {
  int status = 0;
  if (config.check) {
    const CheckReport r = self_check(config.threads);
    for (const auto& l : r.lines) err << l << '\n';
    if (!r.passed) status = 1;
  }

  std::filesystem::path path = config.out;
  if (!path.empty() && path != "-" && path.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      std::filesystem::create_directories(dir);
      path = std::filesystem::path(dir) / path;
    }
  }
  const bool json = config.format == Format::json;
  const auto protocols = resolve_protocols(config);
  std::string text;

  switch (config.command) {
    case Command::sweep:
    case Command::compare:
    case Command::yield: {
      const Grid grid = config.command == Command::yield ? Grid{*config.fidelity, *config.fidelity, 1} : config.grid;
      std::vector<YieldCurve> curves;
      for (const auto& p : protocols) curves.push_back(sweep(p.name, p.yield, grid, config.threads));
      if (config.command == Command::compare) {
        const auto it = std::find_if(curves.begin(), curves.end(), [](const auto& c) { return c.protocol == "family-envelope"; });
        if (it != curves.end()) {
          for (const auto& c : curves) {
            int above = 0;
            for (std::size_t i = 0; i < c.points.size(); ++i)
              if (c.points[i].yield > it->points[i].yield + 1e-12) ++above;
            if (above) err << c.protocol << " exceeds family-envelope at " << above << " grid points\n";
          }
        }
      }
      text = json ? io::dump(io::curves_json(curves, command_name(config.command))) : io::curves_csv(curves);
      break;
    }
    case Command::crossover: {
      std::vector<CrossoverResult> found;
      for (const auto& p : protocols) {
        if (auto r = find_crossover(p.name, p.yield, config.search)) {
          found.push_back(*r);
        } else {
          err << p.name << ": no crossover with hashing in [" << config.search.lo << ", " << config.search.hi << "]\n";
          status = 1;
        }
      }
      text = json ? io::dump(io::crossover_json(found, config.search)) : io::crossover_csv(found);
      break;
    }
    case Command::mc: {
      const McReport rep = estimate(*protocols.front().spec, *config.fidelity, config.shots, config.seed, config.threads);
      const Concordance c = check_concordance(rep);
      for (const auto& f : c.failures) err << "discordant: " << f << '\n';
      if (!c.concordant) status = 1;
      text = json ? io::dump(io::mc_json(rep)) : io::mc_csv(rep);
      break;
    }
    case Command::asymptote: {
      const auto rows = asymptotic_check(config.n_max);
      std::vector<AdvantageRow> adv;
      for (int n = 1; n <= std::min(config.n_max, kMaxAdvantageExponent); ++n) adv.push_back(hashing_advantage_bound(n));
      text = json ? io::dump(io::asymptote_json(rows, adv)) : io::asymptote_csv(rows, adv);
      break;
    }
  }
  io::write_output(path, text);
  return status;
}

}  // namespace aepp
