#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lnorm/generators.hpp"

namespace lnorm {

/// delta_n = alpha_delta / (n + beta_delta), strictly decreasing and positive
/// when both parameters are positive.
struct DeltaBoundParams {
  double s = 1.0;
  double alpha_delta = 1.0;
  double beta_delta = 1.5;
  std::size_t n_max = 1000000;
  /// Keep the first this-many per-n terms in BoundReport::detail.
  std::size_t record_terms = 0;

  /// delta_n = 1/(n + s + 1/2).
  [[nodiscard]] static DeltaBoundParams standard(double s, std::size_t n_max = 1000000);
  [[nodiscard]] double delta(std::size_t n) const;
  /// delta_{n-1} - delta_n in closed form (no subtraction of nearby values).
  [[nodiscard]] double delta_gap(std::size_t n) const;
};

enum class BoundKind { delta_upper, sandwich_p, lacunary_upper, lacunary_lower, critical_constants };

[[nodiscard]] std::string to_string(BoundKind kind);

struct BoundReport {
  BoundKind kind = BoundKind::delta_upper;
  double value = 0.0;
  std::map<std::string, double> params;
  std::vector<double> detail;
  /// Set when the finite-horizon supremum was attained at the horizon, i.e.
  /// the terms were still increasing when the search stopped.
  bool sup_at_horizon = false;
};

/// Upper bound max{delta_0 + |a_0|, Delta} on the l^2 norm of the L-matrix
/// generated by `a`, where
///   Delta = sup_{n>=1} (|a_n| + delta_{n-1})(|a_n| + delta_n) / (delta_{n-1} - delta_n).
/// The supremum is taken over [1, n_max]; for the As/Cesaro generators the
/// closed-form limit (1 + alpha_delta)^2 / alpha_delta of the terms is folded in.
[[nodiscard]] BoundReport delta_upper_bound(const DeltaBoundParams& params, const GeneratorSequence& a);

/// The n-th term inside the supremum above.
[[nodiscard]] double delta_term(const DeltaBoundParams& params, const GeneratorSequence& a, std::size_t n);

/// Grid-plus-refine search over (alpha_delta, beta_delta) minimising the delta
/// bound for A_s. Numerical exploration only.
struct DeltaFamilyOptimum {
  double alpha_delta = 0.0;
  double beta_delta = 0.0;
  double bound = 0.0;
};
[[nodiscard]] DeltaFamilyOptimum optimize_delta_family(double s, std::size_t n_max = 10000);

/// f(s) = 1/(s + 1/2) + 1/s.
[[nodiscard]] double f_of_s(double s);

/// (sqrt(6(8 + 3 sqrt 3)) - sqrt 3 - 3) / 12 ~ 0.347174.
[[nodiscard]] double s_star();

/// 1/(2 sqrt 2), the s at which f(s) = 4.
[[nodiscard]] double s_upper();

/// -24 s^4 - 24 s^3 + 8 s^2 + 4 s - 1.
[[nodiscard]] double quartic_numerator(double s);

/// quartic_numerator(s) / (2 (4s - 1)^2): the value of h_{eps,s}(1) as eps -> 0.
[[nodiscard]] double f0_quartic(double s);

/// Parameters of the Gamma-ratio witness. alpha and beta are always derived
/// from (s, eps):
///   alpha = 2 / (4 + eps - sqrt((4 + eps) eps)),
///   beta  = s^2 / (alpha ((4 + eps) s - 1)).
class WitnessParams {
 public:
  WitnessParams(double s, double eps);

  [[nodiscard]] double s() const { return s_; }
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double beta() const { return beta_; }

 private:
  double s_;
  double eps_;
  double alpha_;
  double beta_;
};

struct LinearCondition {
  double g;  ///< 2(beta - s) - alpha, the slope of h in n
  double h;  ///< h_{eps,s}(n) = g n + beta (beta - alpha) - s^2
};

[[nodiscard]] LinearCondition g_and_h(const WitnessParams& params, std::size_t n);

/// lim_{eps -> 0} g = (1 - 8 s^2) / (2 (4 s - 1)).
[[nodiscard]] double g0_limit(double s);

/// sum_{j=1}^{n} Gamma(j+b)/Gamma(j+c) in closed form,
///   Gamma(n+b+1)/((1+b-c) Gamma(n+c)) - Gamma(b+1)/((1+b-c) Gamma(c)),
/// evaluated through log-Gamma differences. When 1+b-c = 0 the closed form
/// is replaced by its limit psi(n+b+1) - psi(b+1). Requires b > -1, c > 0.
[[nodiscard]] double gamma_ratio_sum(double b, double c, std::size_t n);

/// Constants of the lacunary C-matrix with a_{N^j} = N^{-j/2}.
struct LacunaryConstants {
  double B_n = 0.0;
  double eta0 = 0.0;
  /// eta_k = eta_k_limit + eta_k_correction; the correction is kept apart so
  /// the gap to the limit survives for large k.
  double eta_k = 0.0;
  double eta_k_limit = 0.0;
  double eta_k_correction = 0.0;
  double t_opt = 0.0;
  double norm_formula = 0.0;
};

/// B_n = (N+1)^t + sqrt(N-1) (sqrt(N)^n - sqrt(N)) / (sqrt(N) - 1), eta_0 and
/// eta_k for the given t (n_or_k indexes both B and eta), the optimal
/// t = 1 - log_{N+1} sqrt(N-1) and the norm sqrt(N-1)/(sqrt(N)-1).
[[nodiscard]] LacunaryConstants lacunary_constants(std::int64_t N, double t, std::size_t n_or_k);
[[nodiscard]] double lacunary_t_opt(std::int64_t N);
[[nodiscard]] double lacunary_norm(std::int64_t N);
/// (N - 1) / (sqrt(N) - 1)^2, the squared norm.
[[nodiscard]] double lacunary_norm_squared(std::int64_t N);

/// p^2/(p-1) = p + q = p q. Throws ConsistencyError if the three forms disagree.
[[nodiscard]] double pq_constant(double p);
[[nodiscard]] double holder_conjugate(double p);

/// gamma_m = (pq)^p sum_{n=0}^m (1/(n+s)) ((s/(n+s))^{1/q} + (p/q) ((m+s+1)/(n+s))^{-1/p}).
[[nodiscard]] double gamma_m(double s, double p, std::size_t m);

/// sum_{n=0}^m 1/(n+s), which equals ||x_m||_p^p for the p-norm witness.
[[nodiscard]] double shifted_harmonic(double s, std::size_t m);

}  // namespace lnorm
