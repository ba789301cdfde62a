#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lnorm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConsistency = 3;

inline constexpr double kDefaultMinSpeedup = 50.0;

/// Environment lookup, injectable for tests.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

[[nodiscard]] std::optional<std::string> system_env(const std::string& name);

/// Runs one command line (without the program name). Records go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = system_env);

struct BenchRow {
  std::size_t M = 0;
  double structured_s = 0.0;           ///< seconds per matvec
  std::optional<double> dense_s;       ///< absent above the dense cap
};

struct BenchResult {
  std::vector<BenchRow> rows;
  /// Least-squares slope of log(time) against log(M) for the structured path.
  std::optional<double> exponent;
};

/// Best-of-`reps` timing of structured and dense matvecs on A_1 (L-shape).
[[nodiscard]] BenchResult bench_matvec(std::span<const std::size_t> sizes, std::size_t reps, std::size_t dense_cap);

[[nodiscard]] std::optional<double> fit_exponent(std::span<const std::size_t> sizes, std::span<const double> times);

}  // namespace lnorm::cli
