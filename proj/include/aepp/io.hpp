#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aepp/analysis.hpp"
#include "aepp/montecarlo.hpp"

namespace aepp::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kCsvDigits = 12;

/// 12 significant digits; integral values keep a trailing ".0".
std::string format_number(double v);

// Sweep / yield / compare: header F,protocol,yield.
std::string curves_csv(const std::vector<YieldCurve>& curves);
/// Grids are rebuilt from the rows (min, max, count per protocol).
std::vector<YieldCurve> parse_curves_csv(std::string_view text);

Json curves_json(const std::vector<YieldCurve>& curves, const std::string& command);
std::vector<YieldCurve> parse_curves_json(const Json& doc);

std::string crossover_csv(const std::vector<CrossoverResult>& results);
Json crossover_json(const std::vector<CrossoverResult>& results, const CrossoverSearch& search);
std::vector<CrossoverResult> parse_crossover_json(const Json& doc);

std::string mc_csv(const McReport& report);
Json mc_json(const McReport& report);
McReport parse_mc_json(const Json& doc);

std::string asymptote_csv(const std::vector<AsymptoticRow>& rows, const std::vector<AdvantageRow>& advantage);
Json asymptote_json(const std::vector<AsymptoticRow>& rows, const std::vector<AdvantageRow>& advantage);
std::vector<AsymptoticRow> parse_asymptote_rows(const Json& doc);
std::vector<AdvantageRow> parse_advantage_rows(const Json& doc);

/// Two-space indented, trailing newline.
std::string dump(const Json& doc);

/// Writes `text` to `path`, or to stdout when path is empty or "-".
/// Throws std::runtime_error on I/O failure.
void write_output(const std::filesystem::path& path, std::string_view text);

}  // namespace aepp::io
