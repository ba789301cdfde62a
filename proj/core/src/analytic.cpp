#include "lnorm/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lnorm/compensated_sum.hpp"
#include "lnorm/errors.hpp"
#include "lnorm/special_functions.hpp"

namespace lnorm {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string{what} + " must be a positive finite real");
}

void require_exponent(double p, const char* where) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument(std::string{where} + ": p must satisfy 1 < p < inf");
}

void require_base(std::int64_t N) {
  if (N < 2) throw std::invalid_argument("lacunary: N must be >= 2");
}

double raw_delta_bound(double s, double alpha, double beta, std::size_t n_max) {
  const DeltaBoundParams params{s, alpha, beta, n_max, 0};
  return delta_upper_bound(params, GeneratorSequence::as(s)).value;
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::delta_upper:
      return "delta_upper";
    case BoundKind::sandwich_p:
      return "sandwich_p";
    case BoundKind::lacunary_upper:
      return "lacunary_upper";
    case BoundKind::lacunary_lower:
      return "lacunary_lower";
    case BoundKind::critical_constants:
      return "critical_constants";
  }
  return "?";
}

DeltaBoundParams DeltaBoundParams::standard(double s, std::size_t n_max) {
  return DeltaBoundParams{s, 1.0, s + 0.5, n_max, 0};
}

double DeltaBoundParams::delta(std::size_t n) const { return alpha_delta / (static_cast<double>(n) + beta_delta); }

double DeltaBoundParams::delta_gap(std::size_t n) const {
  const double x = static_cast<double>(n) + beta_delta;
  return alpha_delta / ((x - 1.0) * x);
}

double delta_term(const DeltaBoundParams& params, const GeneratorSequence& a, std::size_t n) {
  if (n == 0) throw std::invalid_argument("delta_term: n must be >= 1");
  const double an = std::fabs(a(n));
  return (an + params.delta(n - 1)) * (an + params.delta(n)) / params.delta_gap(n);
}

BoundReport delta_upper_bound(const DeltaBoundParams& params, const GeneratorSequence& a) {
  if (!(params.alpha_delta > 0.0) || !(params.beta_delta > 0.0)) {
    throw std::invalid_argument("delta_upper_bound: delta_n must be positive and strictly decreasing "
                                "(alpha_delta > 0, beta_delta > 0)");
  }
  if (params.n_max < 1) throw std::invalid_argument("delta_upper_bound: n_max must be >= 1");

  BoundReport report;
  report.kind = BoundKind::delta_upper;

  double sup = -std::numeric_limits<double>::infinity();
  std::size_t argmax = 1;
  for (std::size_t n = 1; n <= params.n_max; ++n) {
    const double term = delta_term(params, a, n);
    if (term > sup) {
      sup = term;
      argmax = n;
    }
    if (n <= params.record_terms) report.detail.push_back(term);
  }
  report.sup_at_horizon = argmax == params.n_max;

  double Delta = sup;
  const bool closed_form_tail =
      a.kind() == GeneratorKind::as || a.kind() == GeneratorKind::cesaro;
  if (closed_form_tail) {
    // a_n ~ 1/n and delta_n ~ alpha/n give terms tending to (1 + alpha)^2 / alpha.
    const double limit = (1.0 + params.alpha_delta) * (1.0 + params.alpha_delta) / params.alpha_delta;
    report.params["Delta_limit"] = limit;
    Delta = std::max(Delta, limit);
  }

  const double head = params.delta(0) + std::fabs(a(0));
  report.value = std::max(head, Delta);
  report.params["s"] = params.s;
  report.params["alpha_delta"] = params.alpha_delta;
  report.params["beta_delta"] = params.beta_delta;
  report.params["n_max"] = static_cast<double>(params.n_max);
  report.params["delta0_plus_a0"] = head;
  report.params["Delta_finite"] = sup;
  report.params["argmax"] = static_cast<double>(argmax);
  report.params["Delta"] = Delta;
  return report;
}

DeltaFamilyOptimum optimize_delta_family(double s, std::size_t n_max) {
  require_positive(s, "optimize_delta_family: s");
  DeltaFamilyOptimum best{1.0, s + 0.5, raw_delta_bound(s, 1.0, s + 0.5, n_max)};

  auto search_box = [&](double alo, double ahi, double blo, double bhi, int steps) {
    for (int i = 0; i <= steps; ++i) {
      const double alpha = alo * std::pow(ahi / alo, static_cast<double>(i) / steps);
      for (int j = 0; j <= steps; ++j) {
        const double beta = blo * std::pow(bhi / blo, static_cast<double>(j) / steps);
        const double bound = raw_delta_bound(s, alpha, beta, n_max);
        if (bound < best.bound) best = {alpha, beta, bound};
      }
    }
  };

  search_box(0.2, 5.0, 0.05, 10.0, 40);
  double span = 2.0;
  for (int round = 0; round < 25; ++round) {
    search_box(best.alpha_delta / span, best.alpha_delta * span, best.beta_delta / span, best.beta_delta * span, 10);
    span = std::sqrt(span);
  }
  return best;
}

double f_of_s(double s) {
  require_positive(s, "f_of_s: s");
  return 1.0 / (s + 0.5) + 1.0 / s;
}

double s_star() {
  const double r3 = std::sqrt(3.0);
  return (std::sqrt(6.0 * (8.0 + 3.0 * r3)) - r3 - 3.0) / 12.0;
}

double s_upper() { return 1.0 / (2.0 * std::sqrt(2.0)); }

double quartic_numerator(double s) { return (((-24.0 * s - 24.0) * s + 8.0) * s + 4.0) * s - 1.0; }

double f0_quartic(double s) {
  if (s == 0.25) throw std::invalid_argument("f0_quartic: pole at s = 1/4");
  const double d = 4.0 * s - 1.0;
  return quartic_numerator(s) / (2.0 * d * d);
}

WitnessParams::WitnessParams(double s, double eps) : s_{s}, eps_{eps} {
  require_positive(s, "WitnessParams: s");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("WitnessParams: eps must be >= 0");
  alpha_ = 2.0 / (4.0 + eps - std::sqrt((4.0 + eps) * eps));
  const double denom = (4.0 + eps) * s - 1.0;
  if (!(denom > 0.0)) throw std::invalid_argument("WitnessParams: (4 + eps) s must exceed 1");
  beta_ = s * s / (alpha_ * denom);
}

LinearCondition g_and_h(const WitnessParams& params, std::size_t n) {
  const double s = params.s();
  const double alpha = params.alpha();
  const double beta = params.beta();
  const double g = 2.0 * (beta - s) - alpha;
  return {g, g * static_cast<double>(n) + beta * (beta - alpha) - s * s};
}

double g0_limit(double s) {
  if (s == 0.25) throw std::invalid_argument("g0_limit: pole at s = 1/4");
  return (1.0 - 8.0 * s * s) / (2.0 * (4.0 * s - 1.0));
}

double gamma_ratio_sum(double b, double c, std::size_t n) {
  if (!(b > -1.0) || !(c > 0.0) || !std::isfinite(b) || !std::isfinite(c)) {
    throw std::invalid_argument("gamma_ratio_sum: requires b > -1 and c > 0");
  }
  if (n == 0) return 0.0;
  const double nn = static_cast<double>(n);
  const double d = 1.0 + b - c;
  if (d == 0.0) {
    // Gamma(j+b)/Gamma(j+b+1) = 1/(j+b): the limit of the closed form.
    return special::digamma(nn + b + 1.0) - special::digamma(b + 1.0);
  }
  const double upper = special::log_gamma_ratio(nn, b + 1.0, c);  // log Gamma(n+b+1) - log Gamma(n+c)
  const double lower = special::log_gamma_ratio(0.0, b + 1.0, c);  // log Gamma(b+1) - log Gamma(c)
  return std::exp(lower) * std::expm1(upper - lower) / d;
}

double lacunary_t_opt(std::int64_t N) {
  require_base(N);
  const double n = static_cast<double>(N);
  return 1.0 - std::log(std::sqrt(n - 1.0)) / std::log(n + 1.0);
}

double lacunary_norm(std::int64_t N) {
  require_base(N);
  const double n = static_cast<double>(N);
  return std::sqrt(n - 1.0) / (std::sqrt(n) - 1.0);
}

double lacunary_norm_squared(std::int64_t N) {
  require_base(N);
  const double n = static_cast<double>(N);
  const double d = std::sqrt(n) - 1.0;
  return (n - 1.0) / (d * d);
}

LacunaryConstants lacunary_constants(std::int64_t N, double t, std::size_t n_or_k) {
  require_base(N);
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("lacunary_constants: t must lie in [0, 1]");
  const double n = static_cast<double>(N);
  const double rn = std::sqrt(n);
  const double rm = std::sqrt(n - 1.0);
  const double head = std::pow(n + 1.0, t);
  const double k = static_cast<double>(n_or_k);

  LacunaryConstants out;
  out.B_n = head + rm * (std::pow(rn, k) - rn) / (rn - 1.0);
  out.eta0 = std::pow(n + 1.0, 1.0 - t) * (head * (rn - 1.0) + rm) / ((rn - 1.0) * (n - 1.0));
  out.eta_k_limit = lacunary_norm_squared(N);
  if (n_or_k == 0) {
    out.eta_k = out.eta0;
    out.eta_k_correction = out.eta0 - out.eta_k_limit;
  } else {
    out.eta_k_correction = (head / rm - rn / (rn - 1.0)) / std::pow(rn, k);
    out.eta_k = out.eta_k_limit + out.eta_k_correction;
  }
  out.t_opt = lacunary_t_opt(N);
  out.norm_formula = lacunary_norm(N);
  return out;
}

double holder_conjugate(double p) {
  require_exponent(p, "holder_conjugate");
  return p / (p - 1.0);
}

double pq_constant(double p) {
  require_exponent(p, "pq_constant");
  const double q = holder_conjugate(p);
  const double ratio_form = p * p / (p - 1.0);
  const double sum_form = p + q;
  const double product_form = p * q;
  const double spread = std::max({std::fabs(ratio_form - sum_form), std::fabs(ratio_form - product_form),
                                  std::fabs(sum_form - product_form)});
  if (spread > 1e-14 * ratio_form) {
    std::ostringstream os;
    os.precision(17);
    os << "pq_constant: p^2/(p-1) = " << ratio_form << ", p+q = " << sum_form << ", pq = " << product_form;
    throw ConsistencyError(os.str());
  }
  return ratio_form;
}

double gamma_m(double s, double p, std::size_t m) {
  require_positive(s, "gamma_m: s");
  const double q = holder_conjugate(p);
  const double tail = static_cast<double>(m) + s + 1.0;
  CompensatedSum acc;
  for (std::size_t n = 0; n <= m; ++n) {
    const double ns = static_cast<double>(n) + s;
    acc.add((std::pow(s / ns, 1.0 / q) + (p / q) * std::pow(tail / ns, -1.0 / p)) / ns);
  }
  return std::pow(p * q, p) * acc.value();
}

double shifted_harmonic(double s, std::size_t m) {
  require_positive(s, "shifted_harmonic: s");
  CompensatedSum acc;
  for (std::size_t n = 0; n <= m; ++n) acc.add(1.0 / (static_cast<double>(n) + s));
  return acc.value();
}

}  // namespace lnorm
