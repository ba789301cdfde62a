#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lnorm/generators.hpp"

namespace lnorm {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr std::size_t kDefaultMaxIter = 100000;

/// Estimated norm of the leading M x M section of a structured matrix.
struct NormEstimate {
  double value = 0.0;  ///< reported estimate (a lower bound on the section norm up to rounding)
  double p = 2.0;
  std::size_t truncation = 0;
  std::size_t iterations = 0;
  double residual = 0.0;           ///< last quotient increment; large when max_iter was hit
  double lower_certificate = 0.0;  ///< ||A x||_p / ||x||_p of the final iterate
  bool converged = false;
  std::vector<double> iterate;  ///< final iterate, normalized in l^p
};

/// Start-vector provider for sweeps; receives the truncation size.
using StartVectorFn = std::function<std::vector<double>(std::size_t)>;

struct PowerOptions {
  double tol = kDefaultTol;
  std::size_t max_iter = kDefaultMaxIter;
  /// Positive start vector; a uniform vector when empty. Shorter vectors are
  /// zero padded, longer ones truncated.
  std::vector<double> start;
};

/// Power iteration on A^T A using only structured matvecs. value is
/// sqrt(||A^T A x||_2) for the final unit iterate x, lower_certificate is
/// ||A x||_2.
[[nodiscard]] NormEstimate norm2_power(const StructuredMatrix& mat, std::size_t M, const PowerOptions& opts = {});
[[nodiscard]] NormEstimate norm2_power(const StructuredMatrix& mat, std::size_t M, double tol,
                                       std::size_t max_iter);

/// Boyd's nonlinear power method for the l^p norm of a nonnegative matrix.
/// The l^p quotient is nondecreasing across iterations; a decrease beyond
/// rounding raises ConsistencyError.
[[nodiscard]] NormEstimate normp_boyd(const StructuredMatrix& mat, std::size_t M, double p,
                                      const PowerOptions& opts = {});
[[nodiscard]] NormEstimate normp_boyd(const StructuredMatrix& mat, std::size_t M, double p, double tol,
                                      std::size_t max_iter);

/// Dispatches to norm2_power for p == 2 and to normp_boyd otherwise.
[[nodiscard]] NormEstimate estimate_norm(const StructuredMatrix& mat, std::size_t M, double p,
                                         const PowerOptions& opts = {});

struct SweepOptions {
  double tol = kDefaultTol;
  std::size_t max_iter = kDefaultMaxIter;
  StartVectorFn start;     ///< optional
  unsigned threads = 1;    ///< sizes are evaluated concurrently when > 1
  bool keep_iterates = false;
};

/// One estimate per size (sizes strictly increasing). Throws ConsistencyError
/// if a value falls below its predecessor by more than tol.
[[nodiscard]] std::vector<NormEstimate> truncation_sweep(const StructuredMatrix& mat, double p,
                                                         std::span<const std::size_t> sizes,
                                                         const SweepOptions& opts = {});

/// ||A x||_p / ||x||_p over the truncation M = x.size().
[[nodiscard]] double rayleigh_p(const StructuredMatrix& mat, const TruncatedVector& x, double p);

/// l^p norm with overflow-safe scaling and compensated accumulation.
[[nodiscard]] double norm_p(std::span<const double> x, double p);

/// Heuristic limit of a sweep: least-squares fit value = limit - slope / log(M).
/// Not a bound of any kind.
struct LogFitExtrapolation {
  double limit = 0.0;
  double slope = 0.0;
};
[[nodiscard]] std::optional<LogFitExtrapolation> log_fit_extrapolation(std::span<const NormEstimate> sweep);

/// ||A^T||_p computed directly next to ||A||_q (q the Hoelder conjugate);
/// the two coincide for every finite section.
struct DualityCheck {
  NormEstimate transpose_p;
  NormEstimate direct_q;
  double difference = 0.0;
};
[[nodiscard]] DualityCheck duality_check(const StructuredMatrix& mat, std::size_t M, double p,
                                         const PowerOptions& opts = {});

}  // namespace lnorm
