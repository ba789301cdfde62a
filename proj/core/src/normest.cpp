#include "lnorm/normest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lnorm/compensated_sum.hpp"
#include "lnorm/errors.hpp"
#include "parallel.hpp"

namespace lnorm {

namespace {

// Relative rounding slack allowed when asserting the Boyd ascent property.
constexpr double kAscentSlack = 1e-12;
constexpr double kDualityTolerance = 1e-6;

void check_common(std::size_t M, double tol) {
  if (M == 0) throw std::invalid_argument("norm estimate: truncation M must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("norm estimate: tol must be > 0");
}

std::vector<double> start_vector(const std::vector<double>& start, std::size_t M) {
  std::vector<double> x(M, 1.0);
  if (!start.empty()) {
    std::fill(x.begin(), x.end(), 0.0);
    std::copy_n(start.begin(), std::min(M, start.size()), x.begin());
    for (double v : x) {
      if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("start vector must be finite and nonnegative");
    }
  }
  return x;
}

void scale(std::span<double> x, double factor) {
  for (double& v : x) v *= factor;
}

}  // namespace

double norm_p(std::span<const double> x, double p) {
  double largest = 0.0;
  for (double v : x) largest = std::max(largest, std::fabs(v));
  if (largest == 0.0) return 0.0;
  CompensatedSum acc;
  if (p == 2.0) {
    for (double v : x) {
      const double t = v / largest;
      acc.add(t * t);
    }
    return largest * std::sqrt(acc.value());
  }
  for (double v : x) acc.add(std::pow(std::fabs(v) / largest, p));
  return largest * std::pow(acc.value(), 1.0 / p);
}

NormEstimate norm2_power(const StructuredMatrix& mat, std::size_t M, const PowerOptions& opts) {
  check_common(M, opts.tol);
  const TruncatedOperator op{mat, M};

  std::vector<double> x = start_vector(opts.start, M);
  const double x_norm = norm_p(x, 2.0);
  if (x_norm == 0.0) throw std::invalid_argument("norm2_power: start vector is zero");
  scale(x, 1.0 / x_norm);

  std::vector<double> w(M);
  std::vector<double> v(M);
  NormEstimate est;
  est.p = 2.0;
  est.truncation = M;
  double previous = 0.0;

  for (std::size_t k = 1; k <= opts.max_iter; ++k) {
    op.apply(x, w);
    op.apply_transpose(w, v);
    const double certificate = norm_p(w, 2.0);
    const double v_norm = norm_p(v, 2.0);
    // ||A^T A x|| >= ||A x||^2 for unit x; both roots are lower bounds on ||A||.
    const double value = std::max(std::sqrt(v_norm), certificate);

    est.iterations = k;
    est.value = value;
    est.lower_certificate = certificate;
    est.residual = std::fabs(value - previous);
    if (v_norm == 0.0 || (k > 1 && est.residual < opts.tol)) {
      est.converged = true;
      break;
    }
    previous = value;
    std::swap(x, v);
    scale(x, 1.0 / v_norm);
  }
  est.iterate = std::move(x);
  return est;
}

NormEstimate norm2_power(const StructuredMatrix& mat, std::size_t M, double tol, std::size_t max_iter) {
  return norm2_power(mat, M, PowerOptions{tol, max_iter, {}});
}

NormEstimate normp_boyd(const StructuredMatrix& mat, std::size_t M, double p, const PowerOptions& opts) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("normp_boyd: p must satisfy 1 < p < inf");
  check_common(M, opts.tol);
  if (!mat.generator().nonnegative_prefix(M)) {
    throw std::invalid_argument("normp_boyd: matrix has negative entries in the truncation");
  }
  const TruncatedOperator op{mat, M};
  const double dual_exponent = 1.0 / (p - 1.0);

  std::vector<double> x = start_vector(opts.start, M);
  const double x_norm = norm_p(x, p);
  if (x_norm == 0.0) throw std::invalid_argument("normp_boyd: start vector is zero");
  scale(x, 1.0 / x_norm);

  std::vector<double> y(M);
  std::vector<double> z(M);
  NormEstimate est;
  est.p = p;
  est.truncation = M;
  double previous = 0.0;

  for (std::size_t k = 1; k <= opts.max_iter; ++k) {
    op.apply(x, y);
    const double quotient = norm_p(y, p);

    if (k > 1 && quotient < previous * (1.0 - kAscentSlack)) {
      std::ostringstream os;
      os.precision(17);
      os << "normp_boyd: l^p quotient decreased from " << previous << " to " << quotient << " at iteration " << k;
      throw ConsistencyError(os.str());
    }
    est.iterations = k;
    est.value = quotient;
    est.lower_certificate = quotient;
    est.residual = std::fabs(quotient - previous);
    if (quotient == 0.0 || (k > 1 && est.residual < opts.tol)) {
      est.converged = true;
      break;
    }
    previous = quotient;

    // x <- dual(A^T dual(A x)); scaling before the powers keeps them in range.
    double y_max = *std::max_element(y.begin(), y.end());
    for (double& v : y) v = std::pow(std::max(v, 0.0) / y_max, p - 1.0);
    op.apply_transpose(y, z);
    const double z_max = *std::max_element(z.begin(), z.end());
    if (!(z_max > 0.0)) break;
    for (std::size_t i = 0; i < M; ++i) x[i] = std::pow(std::max(z[i], 0.0) / z_max, dual_exponent);
    scale(x, 1.0 / norm_p(x, p));
  }
  est.iterate = std::move(x);
  return est;
}

NormEstimate normp_boyd(const StructuredMatrix& mat, std::size_t M, double p, double tol, std::size_t max_iter) {
  return normp_boyd(mat, M, p, PowerOptions{tol, max_iter, {}});
}

NormEstimate estimate_norm(const StructuredMatrix& mat, std::size_t M, double p, const PowerOptions& opts) {
  return p == 2.0 ? norm2_power(mat, M, opts) : normp_boyd(mat, M, p, opts);
}

std::vector<NormEstimate> truncation_sweep(const StructuredMatrix& mat, double p,
                                           std::span<const std::size_t> sizes, const SweepOptions& opts) {
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("truncation_sweep: sizes must be strictly increasing");
  }
  std::vector<NormEstimate> out(sizes.size());
  detail::parallel_for(sizes.size(), opts.threads, [&](std::size_t i) {
    PowerOptions po{opts.tol, opts.max_iter, {}};
    if (opts.start) po.start = opts.start(sizes[i]);
    out[i] = estimate_norm(mat, sizes[i], p, po);
    if (!opts.keep_iterates) {
      out[i].iterate.clear();
      out[i].iterate.shrink_to_fit();
    }
  });

  // Principal sections of a nonnegative matrix have nondecreasing norms.
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].converged && out[i].value < out[i - 1].value - opts.tol) {
      std::ostringstream os;
      os.precision(17);
      os << "truncation_sweep: estimate at M=" << out[i].truncation << " (" << out[i].value
         << ") is below the estimate at M=" << out[i - 1].truncation << " (" << out[i - 1].value << ")";
      throw ConsistencyError(os.str());
    }
  }
  return out;
}

double rayleigh_p(const StructuredMatrix& mat, const TruncatedVector& x, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("rayleigh_p: p must be >= 1");
  const double x_norm = norm_p(x.span(), p);
  if (x_norm == 0.0) throw std::invalid_argument("rayleigh_p: zero vector");
  const TruncatedVector y = matvec(mat, x);
  return norm_p(y.span(), p) / x_norm;
}

std::optional<LogFitExtrapolation> log_fit_extrapolation(std::span<const NormEstimate> sweep) {
  std::vector<double> u;
  std::vector<double> v;
  for (const auto& e : sweep) {
    if (e.truncation < 2) continue;
    u.push_back(1.0 / std::log(static_cast<double>(e.truncation)));
    v.push_back(e.value);
  }
  if (u.size() < 2) return std::nullopt;
  const double n = static_cast<double>(u.size());
  double su = 0, sv = 0, suu = 0, suv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    su += u[i];
    sv += v[i];
    suu += u[i] * u[i];
    suv += u[i] * v[i];
  }
  const double denom = n * suu - su * su;
  if (denom == 0.0) return std::nullopt;
  const double b = (n * suv - su * sv) / denom;
  const double intercept = (sv - b * su) / n;
  return LogFitExtrapolation{intercept, -b};
}

DualityCheck duality_check(const StructuredMatrix& mat, std::size_t M, double p, const PowerOptions& opts) {
  if (!(p > 1.0)) throw std::invalid_argument("duality_check: p must be > 1");
  const double q = p / (p - 1.0);
  DualityCheck out{normp_boyd(mat.transposed(), M, p, opts), normp_boyd(mat, M, q, opts), 0.0};
  out.difference = std::fabs(out.transpose_p.value - out.direct_q.value);
  if (out.difference > kDualityTolerance * std::max(1.0, out.direct_q.value)) {
    std::ostringstream os;
    os.precision(17);
    os << "duality_check: ||A^T||_p = " << out.transpose_p.value << " but ||A||_q = " << out.direct_q.value;
    throw ConsistencyError(os.str());
  }
  return out;
}

}  // namespace lnorm
