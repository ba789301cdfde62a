#include "lnorm/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lnorm/compensated_sum.hpp"
#include "lnorm/errors.hpp"
#include "lnorm/normest.hpp"
#include "lnorm/special_functions.hpp"

namespace lnorm {

namespace {

constexpr int kBisectionSteps = 60;
constexpr double kSmallestEpsilon = 1e-12;

std::string describe_s(double s) {
  std::ostringstream os;
  os.precision(17);
  os << s;
  return os.str();
}

}  // namespace

bool witness_conditions_hold(double s, double eps) {
  if (!(eps > 0.0)) return false;
  try {
    const WitnessParams params{s, eps};
    const auto cond = g_and_h(params, 1);
    return cond.g > 0.0 && cond.h >= kWitnessMargin && 1.0 + params.beta() - params.alpha() > 0.0;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

double find_auto_epsilon(double s) {
  if (!(s > 0.25) || !(s < s_star())) {
    throw NoValidEpsilon("no valid epsilon: s = " + describe_s(s) + " lies outside (1/4, s*)");
  }
  double lo = kSmallestEpsilon;
  if (!witness_conditions_hold(s, lo)) {
    throw NoValidEpsilon("no valid epsilon: conditions fail as eps -> 0 at s = " + describe_s(s));
  }
  double hi = 1.0;
  if (witness_conditions_hold(s, hi)) return hi;
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    (witness_conditions_hold(s, mid) ? lo : hi) = mid;
  }
  return lo;
}

AsWitness build_as_witness(double s, std::size_t M, std::optional<double> eps) {
  if (M < 2) throw std::invalid_argument("build_as_witness: M must be >= 2");
  double e = 0.0;
  if (eps) {
    if (!(s > 0.25) || !(s < s_star())) {
      throw NoValidEpsilon("no valid epsilon: s = " + describe_s(s) + " lies outside (1/4, s*)");
    }
    if (!witness_conditions_hold(s, *eps)) {
      throw NoValidEpsilon("no valid epsilon: eps = " + describe_s(*eps) + " violates the witness conditions");
    }
    e = *eps;
  } else {
    e = find_auto_epsilon(s);
  }

  const WitnessParams params{s, e};
  const double alpha = params.alpha();
  const double beta = params.beta();

  std::vector<double> K(M);
  K[0] = beta > alpha ? 1.0 / (beta * (beta - alpha)) : std::numeric_limits<double>::quiet_NaN();
  K[1] = 1.0 / (beta * (beta + 1.0));
  for (std::size_t n = 1; n + 1 < M; ++n) {
    const double nn = static_cast<double>(n);
    K[n + 1] = K[n] * (nn + beta - alpha) / (nn + beta + 1.0);
  }

  std::vector<double> x(M);
  x[0] = 1.0;
  for (std::size_t n = 1; n < M; ++n) x[n] = s * (static_cast<double>(n) + s) * K[n];

  return AsWitness{params, M, TruncatedVector{std::move(x)}, std::move(K)};
}

double witness_K_log_gamma(const WitnessParams& params, std::size_t n) {
  if (n == 0) throw std::invalid_argument("witness_K_log_gamma: n must be >= 1");
  const double alpha = params.alpha();
  const double beta = params.beta();
  const double constant = special::log_gamma(beta) - special::log_gamma(beta - alpha + 1.0);
  return std::exp(constant + special::log_gamma_ratio(static_cast<double>(n), beta - alpha, beta + 1.0));
}

double witness_K_crosscheck(const AsWitness& w) {
  const double alpha = w.params.alpha();
  const double beta = w.params.beta();
  const double constant = special::log_gamma(beta) - special::log_gamma(beta - alpha + 1.0);
  double worst = 0.0;
  for (std::size_t n = 1; n < w.M; ++n) {
    const double reference =
        std::exp(constant + special::log_gamma_ratio(static_cast<double>(n), beta - alpha, beta + 1.0));
    worst = std::max(worst, std::fabs(w.K[n] - reference) / reference);
  }
  return worst;
}

AsCertificate certify_as_witness(const AsWitness& w) {
  const double s = w.params.s();
  const double eps = w.params.eps();
  const double alpha = w.params.alpha();
  const double beta = w.params.beta();
  const std::size_t M = w.M;
  const auto x = w.x.span();

  // Closed form y_n = (4+eps) s R_n / (n+s), R_{n+1} = R_n (n+beta-alpha+1)/(n+beta), R_0 = 1.
  std::vector<double> y_closed(M);
  double R = 1.0;
  for (std::size_t n = 0; n < M; ++n) {
    const double nn = static_cast<double>(n);
    // y_0 = 4+eps exactly; (4+eps) s / s may round below it.
    y_closed[n] = n == 0 ? 4.0 + eps : (4.0 + eps) * s * R / (nn + s);
    R *= (nn + beta - alpha + 1.0) / (nn + beta);
  }

  AsCertificate cert;
  cert.pointwise_ok = true;
  cert.min_pointwise_margin = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < M; ++n) {
    const double target = (4.0 + eps) * x[n];
    if (!(y_closed[n] >= target)) cert.pointwise_ok = false;
    cert.min_pointwise_margin = std::min(cert.min_pointwise_margin, y_closed[n] / target - 1.0);
  }
  const double x_norm = norm_p(x, 2.0);
  cert.ratio = norm_p(y_closed, 2.0) / x_norm;

  const StructuredMatrix A{Shape::L, GeneratorSequence::as(s)};
  const TruncatedOperator op{A, M};
  std::vector<double> y_mv(M);
  op.apply(x, y_mv);
  cert.matvec_ratio = norm_p(y_mv, 2.0) / x_norm;

  // a_j x_j = s K_j and sum_{j>=M} K_j = K_M (M+beta)/alpha by telescoping.
  const double Mm = static_cast<double>(M);
  const double K_M = w.K[M - 1] * (Mm - 1.0 + beta - alpha) / (Mm + beta);
  cert.tail = s * K_M * (Mm + beta) / alpha;

  for (std::size_t n = 0; n < M; ++n) {
    const double err = std::fabs(y_closed[n] - (y_mv[n] + cert.tail)) / y_closed[n];
    cert.consistency_error = std::max(cert.consistency_error, err);
  }
  if (cert.consistency_error > kWitnessConsistencyTol) {
    std::ostringstream os;
    os.precision(17);
    os << "certify_as_witness: closed-form y and matvec + tail disagree by " << cert.consistency_error
       << " (relative) at s = " << s;
    throw ConsistencyError(os.str());
  }

  cert.decay_band_low = std::numeric_limits<double>::infinity();
  cert.decay_band_high = 0.0;
  for (std::size_t n = std::max<std::size_t>(1, M / 2); n < M; ++n) {
    const double v = x[n] * std::pow(static_cast<double>(n), alpha);
    cert.decay_band_low = std::min(cert.decay_band_low, v);
    cert.decay_band_high = std::max(cert.decay_band_high, v);
  }
  return cert;
}

PnormWitness build_pnorm_witness(double s, double p, std::size_t m) {
  if (!(s >= 1.0) || !std::isfinite(s)) throw std::invalid_argument("build_pnorm_witness: s must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("build_pnorm_witness: p must satisfy 1 < p < inf");
  std::vector<double> x(m + 1);
  for (std::size_t k = 0; k <= m; ++k) x[k] = std::pow(static_cast<double>(k) + s, -1.0 / p);
  return PnormWitness{s, p, m, TruncatedVector{std::move(x)}};
}

PnormCertificate certify_pnorm_witness(const PnormWitness& w) {
  PnormCertificate cert;
  cert.truncation = 4 * (w.m + 1);
  std::vector<double> x(cert.truncation, 0.0);
  std::copy(w.x_m.values().begin(), w.x_m.values().end(), x.begin());

  const StructuredMatrix A{Shape::L, GeneratorSequence::as(w.s)};
  const TruncatedOperator op{A, cert.truncation};
  std::vector<double> y(cert.truncation);
  op.apply(x, y);
  cert.ratio = norm_p(y, w.p) / norm_p(x, w.p);

  const double pq = pq_constant(w.p);
  cert.norm_p_pow = shifted_harmonic(w.s, w.m);
  cert.gamma_m = gamma_m(w.s, w.p, w.m);
  cert.lower_bound_pow = std::pow(pq, w.p) - cert.gamma_m / cert.norm_p_pow;
  cert.slack = std::pow(cert.ratio, w.p) - cert.lower_bound_pow;
  cert.self_bound_ok = cert.slack >= -1e-8;
  cert.upper_ok = cert.ratio <= pq * (1.0 + 1e-9);
  return cert;
}

std::uint64_t LacunaryWitness::support_end() const {
  const auto base = static_cast<std::uint64_t>(N);
  std::uint64_t end = 1;
  for (std::size_t i = 0; i < levels; ++i) {
    if (end > std::numeric_limits<std::uint64_t>::max() / base) {
      throw std::overflow_error("LacunaryWitness: N^levels overflows 64-bit indices");
    }
    end *= base;
  }
  return end;
}

TruncatedVector LacunaryWitness::materialize(std::uint64_t length, std::uint64_t cap) const {
  const std::uint64_t end = support_end();
  const std::uint64_t len = std::max(length, end + 1);
  if (len > cap) {
    throw std::length_error("LacunaryWitness::materialize: length " + std::to_string(len) + " exceeds cap " +
                            std::to_string(cap));
  }
  std::vector<double> x(len, 0.0);
  const auto base = static_cast<std::uint64_t>(N);
  for (std::uint64_t k = 0; k <= base; ++k) x[k] = 1.0;
  std::uint64_t lo = base;
  for (std::size_t n = 1; n < levels; ++n) {
    const std::uint64_t hi = lo * base;
    const double v = std::pow(static_cast<double>(N), -0.5 * static_cast<double>(n));
    for (std::uint64_t k = lo + 1; k <= hi; ++k) x[k] = v;
    lo = hi;
  }
  return TruncatedVector{std::move(x)};
}

LacunaryWitness build_lacunary_witness(std::int64_t N, std::size_t levels) {
  if (N < 2) throw std::invalid_argument("build_lacunary_witness: N must be >= 2");
  if (levels < 1) throw std::invalid_argument("build_lacunary_witness: levels must be >= 1");
  LacunaryWitness w;
  w.N = N;
  w.levels = levels;
  const double nd = static_cast<double>(N);
  const double rn = std::sqrt(nd);
  w.norm2_sq_closed = 2.0 + (nd - 1.0) * static_cast<double>(levels);
  w.y_closed.reserve(levels);
  for (std::size_t n = 1; n <= levels; ++n) {
    w.y_closed.push_back((rn + 1.0) - (rn - 1.0) / std::pow(rn, static_cast<double>(n)));
  }
  return w;
}

LacunaryCertificate certify_lacunary_witness(const LacunaryWitness& w) {
  const double nd = static_cast<double>(w.N);
  const double rn = std::sqrt(nd);
  const double L = static_cast<double>(w.levels);

  // Rows N^n with n > levels see the full sum S_L; their squares form a
  // geometric series sum_{n>L} S_L^2 N^{-n} = S_L^2 N^{-L} / (N-1).
  const double total_closed = (rn + 1.0) * std::pow(rn, L) - (rn - 1.0);
  CompensatedSum closed;
  for (double y : w.y_closed) closed.add(y * y);
  closed.add(total_closed * total_closed / (std::pow(nd, L) * (nd - 1.0)));

  LacunaryCertificate cert;
  cert.ratio_sq = closed.value() / w.norm2_sq_closed;

  // Independent route: accumulate block sums of x directly.
  CompensatedSum prefix;
  CompensatedSum rows;
  CompensatedSum norm;
  prefix.add(nd + 1.0);
  norm.add(nd + 1.0);
  for (std::size_t n = 1; n <= w.levels; ++n) {
    const double scale = std::pow(nd, -0.5 * static_cast<double>(n));
    const double y = prefix.value() * scale;
    rows.add(y * y);
    if (n < w.levels) {
      const double width = std::pow(nd, static_cast<double>(n)) * (nd - 1.0);
      prefix.add(width * scale);
      norm.add(width * scale * scale);
    }
  }
  const double total = prefix.value();
  rows.add(total * total / (std::pow(nd, L) * (nd - 1.0)));
  cert.norm2_sq_blocks = norm.value();
  cert.ratio_sq_blocks = rows.value() / cert.norm2_sq_blocks;

  const double rel = std::fabs(cert.ratio_sq - cert.ratio_sq_blocks) / cert.ratio_sq;
  const double rel_norm = std::fabs(cert.norm2_sq_blocks - w.norm2_sq_closed) / w.norm2_sq_closed;
  if (rel > 1e-12 || rel_norm > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "certify_lacunary_witness: closed form and block sums disagree (ratio " << rel << ", norm " << rel_norm
       << ")";
    throw ConsistencyError(os.str());
  }

  const double c = -2.0 * (rn + 1.0);
  cert.ratio_sq_bound = ((rn + 1.0) * (rn + 1.0) * L + c) / (2.0 + (nd - 1.0) * L);
  cert.limit = lacunary_norm_squared(w.N);
  cert.bound_ok = cert.ratio_sq_bound <= cert.ratio_sq;
  return cert;
}

}  // namespace lnorm
