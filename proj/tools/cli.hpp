#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace coboson::cli {

inline constexpr const char* kToolName = "coboson";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Mode { rational, floating };
enum class Format { csv, json };

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPrecision = 3;

struct NRange {
  int lo = 1;
  int hi = 1;
  int stride = 1;
};

/// Parses "LO..HI" or "LO..HI:STRIDE".
NRange parse_n_range(const std::string& text);

struct RunConfig {
  std::string profile_spec;  // uniform:M | hydrogenic:A_OVER_L | file:PATH
  NRange n_range;
  std::optional<Mode> mode;  // default: rational, float for hydrogenic
  Format format = Format::csv;
  std::optional<std::string> out_path;
  std::uint64_t seed = 0;

  std::optional<int> lambda_max;  // hydrogenic sweeps: cap the lambda list
  std::optional<int> n_max;       // lambdas table depth / verify depth
  std::optional<int> random_count;  // verify: number of sampled profiles
  int random_modes = 6;             // verify: modes per sampled profile
};

/// Exchange weight table, one row per n.
int run_lambdas(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Moment sweep over the requested N range; one row per N with the exact
/// values, the guessed approximations and the elementary baselines. Blocked
/// rows carry status=blocked, rows past the reliable float range carry
/// status=precision_loss and make the run exit with kExitPrecision.
int run_stats(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Exact-oracle verification: operator-identity suite plus recursion/oracle
/// equivalence, on one discrete profile or on a seeded random batch. Any
/// failing row makes the run exit with kExitVerifyFailure.
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point (subcommands: lambdas, stats, verify).
int main_entry(int argc, char** argv);

}  // namespace coboson::cli
