#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lnorm {

/// CERTIFIED_ABOVE: a concrete vector has Rayleigh quotient > target.
/// BELOW_EVIDENCE: every truncated estimate stays below target - margin AND an
/// analytic upper bound equals target. Evidence, not proof.
enum class Verdict { certified_above, below_evidence, inconclusive };

[[nodiscard]] std::string to_string(Verdict v);

struct CriticalPoint {
  double s = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::optional<double> witness_ratio;   ///< Gamma-ratio witness (p = 2, 1/4 < s < s*)
  std::optional<double> witness_eps;
  double sweep_max = 0.0;                ///< largest truncated estimate over the sweep
  std::size_t sweep_max_truncation = 0;
  std::optional<double> upper_bound;     ///< upper_bound_of_record(p, s)
  std::string certificate;               ///< which route decided the verdict
};

struct CriticalScan {
  double p = 2.0;
  double target = 4.0;
  std::vector<double> grid;
  std::vector<CriticalPoint> per_s;
  /// Largest CERTIFIED_ABOVE s and smallest BELOW_EVIDENCE s.
  std::optional<double> bracket_low;
  std::optional<double> bracket_high;
  /// False when a CERTIFIED_ABOVE s lay above a BELOW_EVIDENCE s; the
  /// offending points are downgraded to INCONCLUSIVE.
  bool verdicts_monotone = true;
};

struct ScanOptions {
  std::size_t M_max = std::size_t{1} << 16;
  double margin = 1e-3;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::size_t witness_M = 100000;
  unsigned threads = 1;
};

/// Best analytic upper bound on ||A_s||_p available: max{f(s), 4} for p = 2,
/// p + q for s >= 1. nullopt when no bound is proven for (p, s).
[[nodiscard]] std::optional<double> upper_bound_of_record(double p, double s);

/// Truncation sizes 2^8, 2^10, ... up to and including M_max.
[[nodiscard]] std::vector<std::size_t> scan_sizes(std::size_t M_max);

/// 0.25 to 0.40 step 0.005, plus s* and 1/(2 sqrt 2), sorted.
[[nodiscard]] std::vector<double> default_grid_p2();

/// Grid lo, lo+step, ..., <= hi; values rounded to 12 decimals.
[[nodiscard]] std::vector<double> make_grid(double lo, double hi, double step);

[[nodiscard]] CriticalScan scan_critical(double p, std::span<const double> s_grid, const ScanOptions& opts = {});

}  // namespace lnorm
