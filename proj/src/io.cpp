#include "aepp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include "aepp/parity.hpp"

namespace aepp::io {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("malformed number '" + std::string(s) + "'");
  return v;
}

// Non-finite values have no JSON literal.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json header(const std::string& command) { return {{"version", kSchemaVersion}, {"command", command}}; }

void check_version(const Json& doc) {
  if (doc.at("version").get<int>() != kSchemaVersion)
    throw std::runtime_error("unsupported schema version " + doc.at("version").dump());
}

Json grid_json(const Grid& g) { return {{"min", g.min}, {"max", g.max}, {"count", g.count}}; }

Grid grid_from(const Json& j) { return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("count").get<int>()}; }

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kCsvDigits, v);
  std::string s = buf;
  if (s == "-0") s = "0";
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string curves_csv(const std::vector<YieldCurve>& curves) {
  std::string out = "F,protocol,yield\n";
  for (const auto& c : curves)
    for (const auto& p : c.points) out += format_number(p.fidelity) + ',' + c.protocol + ',' + format_number(p.yield) + '\n';
  return out;
}

std::vector<YieldCurve> parse_curves_csv(std::string_view text) {
  const auto rows = lines(text);
  if (rows.empty() || rows.front() != "F,protocol,yield") throw std::runtime_error("missing header F,protocol,yield");
  std::vector<YieldCurve> curves;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i], ',');
    if (cells.size() != 3) throw std::runtime_error("malformed row: " + std::string(rows[i]));
    const std::string protocol(cells[1]);
    if (curves.empty() || curves.back().protocol != protocol) curves.push_back({protocol, {}, {}});
    curves.back().points.push_back({to_double(cells[0]), to_double(cells[2])});
  }
  for (auto& c : curves) {
    c.grid.min = c.points.front().fidelity;
    c.grid.max = c.points.back().fidelity;
    c.grid.count = static_cast<int>(c.points.size());
  }
  return curves;
}

Json curves_json(const std::vector<YieldCurve>& curves, const std::string& command) {
  Json doc = header(command);
  Json protocols = Json::array();
  Json points = Json::array();
  for (const auto& c : curves) {
    protocols.push_back(c.protocol);
    for (const auto& p : c.points) points.push_back({{"F", p.fidelity}, {"protocol", c.protocol}, {"yield", number(p.yield)}});
  }
  doc["protocol"] = protocols;
  doc["params"] = {{"grid", curves.empty() ? Json(nullptr) : grid_json(curves.front().grid)}};
  doc["points"] = points;
  return doc;
}

std::vector<YieldCurve> parse_curves_json(const Json& doc) {
  check_version(doc);
  const Json& g = doc.at("params").at("grid");
  const Grid grid = g.is_null() ? Grid{} : grid_from(g);
  std::vector<YieldCurve> curves;
  std::map<std::string, std::size_t> index;
  for (const auto& name : doc.at("protocol")) {
    index[name.get<std::string>()] = curves.size();
    curves.push_back({name.get<std::string>(), grid, {}});
  }
  for (const auto& p : doc.at("points")) {
    auto& c = curves.at(index.at(p.at("protocol").get<std::string>()));
    const auto& y = p.at("yield");
    c.points.push_back({p.at("F").get<double>(), y.is_null() ? NAN : y.get<double>()});
  }
  return curves;
}

std::string crossover_csv(const std::vector<CrossoverResult>& results) {
  std::string out = "protocol,f_cross,bracket_lo,bracket_hi,iterations\n";
  for (const auto& r : results)
    out += r.protocol + ',' + format_number(r.f_cross) + ',' + format_number(r.bracket_lo) + ',' +
           format_number(r.bracket_hi) + ',' + std::to_string(r.iterations) + '\n';
  return out;
}

Json crossover_json(const std::vector<CrossoverResult>& results, const CrossoverSearch& search) {
  Json doc = header("crossover");
  Json protocols = Json::array();
  Json rows = Json::array();
  for (const auto& r : results) {
    protocols.push_back(r.protocol);
    rows.push_back({{"protocol", r.protocol},
                    {"f_cross", r.f_cross},
                    {"bracket", {r.bracket_lo, r.bracket_hi}},
                    {"width", r.bracket_hi - r.bracket_lo},
                    {"iterations", r.iterations}});
  }
  doc["protocol"] = protocols;
  doc["params"] = {{"lo", search.lo}, {"hi", search.hi}, {"tolerance", search.tolerance}};
  doc["points"] = rows;
  return doc;
}

std::vector<CrossoverResult> parse_crossover_json(const Json& doc) {
  check_version(doc);
  std::vector<CrossoverResult> out;
  for (const auto& r : doc.at("points"))
    out.push_back({r.at("protocol").get<std::string>(), r.at("f_cross").get<double>(), r.at("bracket").at(0).get<double>(),
                   r.at("bracket").at(1).get<double>(), r.at("iterations").get<int>()});
  return out;
}

std::string mc_csv(const McReport& report) {
  std::string out = "protocol,F,shots,seed,decision,leaf,count,trials,frequency,exact\n";
  const std::string prefix = report.protocol.name() + ',' + format_number(report.fidelity) + ',' +
                             std::to_string(report.shots) + ',' + std::to_string(report.seed) + ',';
  for (const auto& b : report.branches)
    out += prefix + b.decision + ',' + b.leaf + ',' + std::to_string(b.count) + ',' + std::to_string(b.trials) + ',' +
           format_number(b.frequency()) + ',' + format_number(b.exact) + '\n';
  return out;
}

Json mc_json(const McReport& report) {
  Json doc = header("mc");
  doc["protocol"] = report.protocol.name();
  doc["params"] = {{"F", report.fidelity}, {"shots", report.shots}, {"seed", report.seed}};
  Json branches = Json::array();
  for (const auto& b : report.branches)
    branches.push_back({{"decision", b.decision},
                        {"leaf", b.leaf},
                        {"count", b.count},
                        {"trials", b.trials},
                        {"frequency", b.frequency()},
                        {"exact", b.exact},
                        {"sigmas", number(b.sigmas())}});
  doc["branches"] = branches;
  doc["empirical_yield_bound"] = report.empirical_yield_bound;
  return doc;
}

McReport parse_mc_json(const Json& doc) {
  check_version(doc);
  McReport r;
  r.protocol = ProtocolSpec::parse(doc.at("protocol").get<std::string>());
  const Json& p = doc.at("params");
  r.fidelity = p.at("F").get<double>();
  r.shots = p.at("shots").get<std::uint64_t>();
  r.seed = p.at("seed").get<std::uint64_t>();
  for (const auto& b : doc.at("branches"))
    r.branches.push_back({b.at("decision").get<std::string>(), b.at("leaf").get<std::string>(),
                          b.at("count").get<std::uint64_t>(), b.at("trials").get<std::uint64_t>(),
                          b.at("exact").get<double>()});
  r.empirical_yield_bound = doc.at("empirical_yield_bound").get<double>();
  return r;
}

std::string asymptote_csv(const std::vector<AsymptoticRow>& rows, const std::vector<AdvantageRow>& advantage) {
  std::string out = "n,F,p,deviation,theorem_yield,hashing,bound,margin,informational\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += std::to_string(r.n) + ',' + format_number(r.fidelity) + ',' + format_number(r.p) + ',' +
           format_number(r.deviation);
    if (i < advantage.size()) {
      const auto& a = advantage[i];
      out += ',' + format_number(a.theorem_yield) + ',' + format_number(a.hashing) + ',' + format_number(a.bound) + ',' +
             format_number(a.margin()) + ',' + (a.informational ? "1" : "0");
    } else {
      out += ",,,,,";
    }
    out += '\n';
  }
  return out;
}

Json asymptote_json(const std::vector<AsymptoticRow>& rows, const std::vector<AdvantageRow>& advantage) {
  Json doc = header("asymptote");
  doc["protocol"] = "aepp-a";
  doc["params"] = {{"n_max", rows.empty() ? 0 : rows.back().n}, {"p_star", parity_limit()}, {"gain", limit_gain()}};
  Json points = Json::array();
  for (const auto& r : rows) points.push_back({{"n", r.n}, {"F", r.fidelity}, {"p", r.p}, {"deviation", r.deviation}});
  doc["points"] = points;
  Json adv = Json::array();
  for (const auto& a : advantage)
    adv.push_back({{"n", a.n},
                   {"F", a.fidelity},
                   {"theorem_yield", a.theorem_yield},
                   {"hashing", a.hashing},
                   {"bound", a.bound},
                   {"margin", a.margin()},
                   {"informational", a.informational}});
  doc["advantage"] = adv;
  return doc;
}

std::vector<AsymptoticRow> parse_asymptote_rows(const Json& doc) {
  check_version(doc);
  std::vector<AsymptoticRow> out;
  for (const auto& r : doc.at("points"))
    out.push_back({r.at("n").get<int>(), r.at("F").get<double>(), r.at("p").get<double>(), r.at("deviation").get<double>()});
  return out;
}

std::vector<AdvantageRow> parse_advantage_rows(const Json& doc) {
  check_version(doc);
  std::vector<AdvantageRow> out;
  for (const auto& a : doc.at("advantage"))
    out.push_back({a.at("n").get<int>(), a.at("F").get<double>(), a.at("theorem_yield").get<double>(),
                   a.at("hashing").get<double>(), a.at("bound").get<double>(), a.at("informational").get<bool>()});
  return out;
}

std::string dump(const Json& doc) { return doc.dump(2) + '\n'; }

void write_output(const std::filesystem::path& path, std::string_view text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw std::runtime_error("failed writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace aepp::io
