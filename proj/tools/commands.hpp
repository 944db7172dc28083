#pragma once

// The photonstats command-line front end, kept in a library so tests can
// drive it without spawning processes.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace photonstats::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInput = 2,
  kExitResource = 3,
  kExitMismatch = 4,
};

/// Tolerance of `cumulant --method both` on |a - b| / max(1, |a|, |b|).
inline constexpr double kCumulantAgreement = 1e-6;
/// Relative tolerance of the mtl_ref / mtl_fast cross-check during `bench`.
inline constexpr double kBenchAgreement = 1e-9;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::optional<std::filesystem::path> out_dir;
};

struct MomentArgs {
  std::filesystem::path state;
  std::vector<int> pattern;
  std::string method = "hafnian";
};

struct CumulantArgs {
  std::filesystem::path state;
  std::vector<int> modes;
  std::string method = "montrealer";
};

struct MonteCarloArgs {
  std::filesystem::path config;
};

struct BenchArgs {
  int ell_min = 1;
  int ell_max = 8;
  int reps = 5;
  /// Minimum wall time of one timed batch; calls repeat until it is reached.
  double min_batch_seconds = 2e-3;
};

int cmd_moment(const GlobalOptions& global, const MomentArgs& args, std::ostream& out);
int cmd_cumulant(const GlobalOptions& global, const CumulantArgs& args, std::ostream& out);
int cmd_montecarlo(const GlobalOptions& global, const MonteCarloArgs& args, std::ostream& out);
int cmd_bench(const GlobalOptions& global, const BenchArgs& args, std::ostream& out);

/// Parses the command line, dispatches, and maps library exceptions to exit
/// codes (input 2, resource 3). Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace photonstats::cli
