#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lnorm/analytic.hpp"
#include "lnorm/generators.hpp"

namespace lnorm {

// ---------------------------------------------------------------------------
// Gamma-ratio witness for ||A_s||_2 > 4 on 1/4 < s < s*.
//
//   x_0 = 1,  x_n = s (n+s) K_n  (n >= 1),
//   K_n = Gamma(beta) Gamma(n+beta-alpha) / (Gamma(n+beta+1) Gamma(beta-alpha+1)).
//
// A_s x has the closed form y_n = (4+eps) s R_n / (n+s) with
// R_n = Gamma(n+beta-alpha+1) Gamma(beta) / (Gamma(n+beta) Gamma(beta-alpha+1)),
// so y_n / x_n = (4+eps) (n+beta-alpha)(n+beta)/(n+s)^2 for n >= 1, and the
// witness certifies ||A_s|| >= 4+eps whenever h_{eps,s}(n) >= 0 for all n >= 1.
// ---------------------------------------------------------------------------

/// Margin required of h_{eps,s}(1) so the entrywise comparison y_n >= (4+eps) x_n
/// is decided well above rounding.
inline constexpr double kWitnessMargin = 1e-9;

struct AsWitness {
  WitnessParams params;
  std::size_t M = 0;
  TruncatedVector x;
  /// K_n by the ratio recurrence; K[0] holds Gamma(beta-alpha)/(Gamma(beta+1) Gamma(beta-alpha+1))
  /// for completeness (x_0 is fixed to 1, not s^2 K_0).
  std::vector<double> K;
};

/// True when eps makes the witness valid at s: g > 0, h(1) >= kWitnessMargin
/// and 1 + beta - alpha > 0 (positive K_n).
[[nodiscard]] bool witness_conditions_hold(double s, double eps);

/// Largest eps in (0, 1] satisfying witness_conditions_hold, by 60 bisection
/// steps. Throws NoValidEpsilon when even eps -> 0 fails (s >= s*).
[[nodiscard]] double find_auto_epsilon(double s);

/// eps = nullopt selects the automatic search. Throws NoValidEpsilon when s is
/// outside (1/4, s*) or an explicit eps does not satisfy the conditions.
[[nodiscard]] AsWitness build_as_witness(double s, std::size_t M, std::optional<double> eps = std::nullopt);

/// K_n = exp(log Gamma differences), the cross-check for the recurrence.
[[nodiscard]] double witness_K_log_gamma(const WitnessParams& params, std::size_t n);

/// Largest relative difference between the recurrence K_n and the log-Gamma
/// K_n over 1 <= n < w.M.
[[nodiscard]] double witness_K_crosscheck(const AsWitness& w);

struct AsCertificate {
  double ratio = 0.0;           ///< ||y||_2/||x||_2 over the truncation, y in closed form
  bool pointwise_ok = false;    ///< y_n >= (4+eps) x_n for every n < M
  double min_pointwise_margin = 0.0;  ///< min_n y_n / ((4+eps) x_n) - 1
  double matvec_ratio = 0.0;    ///< ||A_M x||_2/||x||_2 from the structured matvec alone (rigorous)
  double tail = 0.0;            ///< sum_{j >= M} a_j x_j, telescoped exactly
  double consistency_error = 0.0;  ///< max_n |y_closed - (y_matvec + tail)| / y_closed
  double decay_band_low = 0.0;  ///< min of x_n n^alpha on [M/2, M)
  double decay_band_high = 0.0; ///< max of x_n n^alpha on [M/2, M)
};

/// Relative tolerance of the closed-form vs matvec-plus-tail comparison.
inline constexpr double kWitnessConsistencyTol = 1e-9;

/// Evaluates the witness both in closed form and through the structured
/// matvec. Throws ConsistencyError if the two routes disagree beyond
/// kWitnessConsistencyTol.
[[nodiscard]] AsCertificate certify_as_witness(const AsWitness& w);

// ---------------------------------------------------------------------------
// p-norm witness x_m = ((k+s)^{-1/p})_{k<=m} for ||A_s||_p >= p^2/(p-1), s >= 1.
// ---------------------------------------------------------------------------

struct PnormWitness {
  double s = 1.0;
  double p = 2.0;
  std::size_t m = 0;
  TruncatedVector x_m;  ///< length m+1; zero beyond
};

[[nodiscard]] PnormWitness build_pnorm_witness(double s, double p, std::size_t m);

struct PnormCertificate {
  double ratio = 0.0;           ///< ||A_s x_m||_p / ||x_m||_p on the 4(m+1) section
  std::size_t truncation = 0;
  double norm_p_pow = 0.0;      ///< ||x_m||_p^p
  double gamma_m = 0.0;
  double lower_bound_pow = 0.0; ///< (pq)^p - gamma_m / ||x_m||_p^p
  double slack = 0.0;           ///< ratio^p - lower_bound_pow
  bool self_bound_ok = false;   ///< slack >= -1e-8
  bool upper_ok = false;        ///< ratio <= pq (1 + 1e-9)
};

[[nodiscard]] PnormCertificate certify_pnorm_witness(const PnormWitness& w);

// ---------------------------------------------------------------------------
// Piecewise-constant extremal vector for the lacunary C-matrix:
//   x_k = 1 on 0..N, x_k = N^{-n/2} on (N^n, N^{n+1}] for n = 1..levels-1.
// ---------------------------------------------------------------------------

/// Largest levels for which the vector is materialized by default.
inline constexpr std::uint64_t kLacunaryMaterializeCap = std::uint64_t{1} << 24;

struct LacunaryWitness {
  std::int64_t N = 2;
  std::size_t levels = 1;
  double norm2_sq_closed = 0.0;  ///< 2 + (N-1) levels
  std::vector<double> y_closed;  ///< y_{N^n}, n = 1..levels, closed form

  /// Support end N^levels as an integer; throws std::overflow_error when it
  /// does not fit in 64 bits.
  [[nodiscard]] std::uint64_t support_end() const;
  /// Dense x_0 .. x_{N^levels} (length N^levels + 1, optionally padded).
  /// Throws on overflow or when the length exceeds `cap`.
  [[nodiscard]] TruncatedVector materialize(std::uint64_t length = 0,
                                            std::uint64_t cap = kLacunaryMaterializeCap) const;
};

[[nodiscard]] LacunaryWitness build_lacunary_witness(std::int64_t N, std::size_t levels);

struct LacunaryCertificate {
  double ratio_sq = 0.0;         ///< ||C x||_2^2 / ||x||_2^2 for the infinite matrix
  double ratio_sq_blocks = 0.0;  ///< same quantity from block-aggregated prefix sums
  double norm2_sq_blocks = 0.0;  ///< ||x||_2^2 by direct block summation
  double ratio_sq_bound = 0.0;   ///< ((sqrt N + 1)^2 L + c) / (2 + (N-1) L), c = -2 (sqrt N + 1)
  double limit = 0.0;            ///< (N-1)/(sqrt N - 1)^2
  bool bound_ok = false;         ///< ratio_sq_bound <= ratio_sq
};

/// Exact ratio via the closed forms, cross-checked against block sums.
/// Throws ConsistencyError when the two disagree beyond 1e-12 relative.
[[nodiscard]] LacunaryCertificate certify_lacunary_witness(const LacunaryWitness& w);

}  // namespace lnorm
