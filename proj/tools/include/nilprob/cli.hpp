#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace nilprob::cli {

inline constexpr std::uint64_t kDefaultSeed = 0x6e696c70;  // "nilp"
inline constexpr std::uint64_t kDefaultSamples = 100'000;

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kCapExceeded = 3 };

enum class Format { json, csv, text };

struct Caps {
  std::uint64_t exact = 0;     // 0 keeps the library default for the statistic
  std::uint64_t pairs = std::uint64_t{1} << 22;
  std::uint64_t orbit = std::uint64_t{1} << 16;
  std::uint64_t exhaustive = std::uint64_t{1} << 24;
};

struct RunConfig {
  std::string command;

  // Group source: the algebra family (p, n, optional form) or a Cayley table.
  bool family = false;
  unsigned p = 2;
  unsigned n = 1;
  std::optional<std::string> form;
  std::optional<std::string> table;

  bool exact = true;  // d1/d2: exact versus Monte Carlo
  bool sampled = false;  // cover/bias: sampled instead of exhaustive
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
  Caps caps;
  unsigned threads = 1;

  // cover
  std::uint64_t n_bound = 0;
  std::string s_spec = "identity";  // "identity" or a path
  bool minimal = false;

  // probe-class3
  bool exhaustive_hyperplanes = false;

  // series
  std::size_t baer_s = 0;
  std::size_t baer_t = 0;

  // neumann
  std::string norm = "conjugacy";
  double C = 1.0;

  // bias
  bool verify_quad = false;
  bool trilinear_bound = false;

  Format format = Format::json;
  std::optional<std::string> output;
};

/// Thread count from the flag, else NILPROB_THREADS, else hardware concurrency.
unsigned resolve_threads(std::optional<unsigned> flag);

/// Parses argv into a config. On failure or --help returns an exit code
/// after writing the message to `out` (help) or `err` (errors).
struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kOk;
};
ParseResult parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs one subcommand, writing the report to config.output or `out` and
/// diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nilprob::cli
