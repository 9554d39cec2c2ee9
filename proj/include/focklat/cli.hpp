#pragma once

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace focklat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// "N" or "a..b" (inclusive).
struct PhotonRange {
  int first = 1;
  int last = 1;

  static PhotonRange parse(std::string_view text);
  bool single() const { return first == last; }
  std::string to_string() const;
  bool operator==(const PhotonRange&) const = default;
};

struct Encoding {
  int n = 1;
  int m = 1;
  bool operator==(const Encoding&) const = default;
};

/// "N=1,M=2" (either order, both keys required).
Encoding parse_encoding(std::string_view text);

/// Everything a subcommand needs. Unset optionals take per-subcommand
/// defaults at dispatch.
struct RunConfig {
  std::string subcommand;
  std::string lattice = "rhomboidal";
  std::optional<PhotonRange> photons;
  double kappa = 1.0;
  double epsilon = 0.0;
  std::optional<double> zmax;
  std::optional<int> zsteps;
  double gamma = 0.0;
  std::string format = "csv";
  std::string out;  ///< empty: stdout
  std::uint64_t seed = 0;
  std::optional<Encoding> encode;
  double alpha = 0.70710678118654752;  ///< qubit amplitude; beta = sqrt(1 - alpha^2)
  std::string layout = "four";         ///< four, sixteen, hexagonal or a JSON file
  double diagonal = 0.0;
  int channel = 0;
  std::string input = "localized";  ///< localized or site
  int samples = 0;
  int ksamples = 64;
  double tolerance = 1e-12;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  bool operator==(const RunConfig&) const = default;
};

/// Subcommand names in help order.
const std::vector<std::string>& subcommands();

/// Parses `args` (without the program name), runs the subcommand and writes
/// the artifact to `out` or to the --out file. Errors go to `err` as a JSON
/// record {"error": {...}}. Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CommandResult {
  std::string artifact;
  int exit_code = kExitOk;
  std::optional<nlohmann::json> error;
};

/// Runs a validated config without touching any stream.
CommandResult execute(const RunConfig& config);

}  // namespace focklat::cli
