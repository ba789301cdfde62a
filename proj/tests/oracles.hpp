#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the structured kernels or the closed forms it is used to check.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "lnorm/generators.hpp"

namespace lnorm::oracle {

/// Dense product with long double accumulation.
inline std::vector<double> dense_matvec_ld(const DenseMatrix& A, const std::vector<double>& x) {
  std::vector<double> y(A.size);
  for (std::size_t i = 0; i < A.size; ++i) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < A.size; ++j) acc += static_cast<long double>(A(i, j)) * x[j];
    y[i] = static_cast<double>(acc);
  }
  return y;
}

/// Dominant singular value of a dense matrix by a fixed number of power
/// iterations on the materialized A^T A.
inline double dense_top_singular_value(const DenseMatrix& A, std::size_t iterations) {
  const std::size_t M = A.size;
  std::vector<long double> G(M * M, 0.0L);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) {
      long double acc = 0.0L;
      for (std::size_t k = 0; k < M; ++k) acc += static_cast<long double>(A(k, i)) * A(k, j);
      G[i * M + j] = acc;
    }
  std::vector<long double> x(M, 1.0L / std::sqrt(static_cast<long double>(M)));
  std::vector<long double> y(M);
  long double lambda = 0.0L;
  for (std::size_t it = 0; it < iterations; ++it) {
    long double norm = 0.0L;
    for (std::size_t i = 0; i < M; ++i) {
      long double acc = 0.0L;
      for (std::size_t j = 0; j < M; ++j) acc += G[i * M + j] * x[j];
      y[i] = acc;
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0L) return 0.0;
    lambda = norm;
    for (std::size_t i = 0; i < M; ++i) x[i] = y[i] / norm;
  }
  return static_cast<double>(std::sqrt(lambda));
}

/// sum_{j=1}^n Gamma(j+b)/Gamma(j+c) via the term ratio (j+b)/(j+c).
inline double gamma_ratio_sum_brute(double b, double c, std::size_t n) {
  if (n == 0) return 0.0;
  // First term Gamma(1+b)/Gamma(1+c) from std::tgamma; later terms by ratio.
  long double term = std::tgamma(1.0L + b) / std::tgamma(1.0L + c);
  long double sum = term;
  for (std::size_t j = 1; j < n; ++j) {
    term *= (static_cast<long double>(j) + b) / (static_cast<long double>(j) + c);
    sum += term;
  }
  return static_cast<double>(sum);
}

/// sum_{n=k+1}^{upper} B_n sqrt(N^{k+1} - N^k) / N^n with B_n formed by direct
/// summation of its square-root terms.
inline double eta_partial_sum(std::int64_t N, double t, std::size_t k, std::size_t upper) {
  const long double n = static_cast<long double>(N);
  long double B = std::pow(n + 1.0L, static_cast<long double>(t));
  long double sum = 0.0L;
  for (std::size_t m = 2; m <= upper; ++m) {
    B += std::sqrt(std::pow(n, static_cast<long double>(m)) - std::pow(n, static_cast<long double>(m - 1)));
    if (m >= k + 1) sum += B / std::pow(n, static_cast<long double>(m));
  }
  if (k == 0) sum += std::pow(n + 1.0L, static_cast<long double>(t)) / n;  // the n = 1 term, B_1 = (N+1)^t
  const long double weight = k == 0 ? std::pow(n + 1.0L, 1.0L - static_cast<long double>(t))
                                    : std::sqrt(std::pow(n, static_cast<long double>(k + 1)) -
                                                std::pow(n, static_cast<long double>(k)));
  return static_cast<double>(weight * sum);
}

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t M, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> x(M);
  for (double& v : x) v = dist(rng);
  return x;
}

}  // namespace lnorm::oracle
