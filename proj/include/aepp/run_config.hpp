#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aepp/analysis.hpp"
#include "aepp/protocol_spec.hpp"

namespace aepp {

enum class Command { sweep, yield, crossover, mc, asymptote, compare };
enum class Format { csv, json };

std::string command_name(Command c);

struct RunConfig {
  Command command = Command::sweep;
  /// Selectors as given: a family ("aepp-a"), a full name ("aepp-a-n3"),
  /// "envelope" (AEPP(a,2^n), n <= n_max) or "family-envelope" (plus AEPP*).
  std::vector<std::string> protocols;
  std::vector<int> ns;
  std::optional<double> fidelity;
  Grid grid;
  CrossoverSearch search;
  std::uint64_t shots = 1000000;
  std::uint64_t seed = 1;
  std::filesystem::path out;  // empty: standard output
  Format format = Format::csv;
  int n_max = 6;
  bool check = false;
  unsigned threads = 0;
};

/// Parse failure or help request. `code` is the process exit status.
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string message, int code) : std::runtime_error(std::move(message)), code(code) {}
  int code;
};

/// Environment variable naming the directory for relative --out paths.
inline constexpr const char* kOutputDirEnv = "AEPP_OUTPUT_DIR";

RunConfig parse_args(int argc, const char* const* argv);

/// Protocol selected on the command line, expanded to something evaluable.
struct NamedProtocol {
  std::string name;
  YieldFunction yield;
  std::optional<ProtocolSpec> spec;  // empty for envelopes
};

/// Expands selectors with --n / --n-max. Throws std::invalid_argument.
std::vector<NamedProtocol> resolve_protocols(const RunConfig& config);

/// Protocol set used by `compare` when none is given.
std::vector<std::string> comparison_set();

struct CheckReport {
  bool passed = true;
  std::vector<std::string> lines;
};

/// Tree vs closed form (n = 1..3), dense vs structured engines, and a short
/// Monte-Carlo concordance run per family.
CheckReport self_check(unsigned threads = 0);

/// Runs the command; returns the exit status. Diagnostics go to `err`.
int execute(const RunConfig& config, std::ostream& err);

}  // namespace aepp
