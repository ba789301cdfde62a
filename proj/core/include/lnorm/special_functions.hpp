#pragma once

namespace lnorm::special {

/// log Gamma(z) for z > 0. Stirling series after shifting the argument above
/// 15 with log Gamma(z) = log Gamma(z+1) - log z; about 1e-15 absolute error.
[[nodiscard]] double log_gamma(double z);

/// log Gamma(z+a) - log Gamma(z+b) without forming the two large logarithms,
/// so the difference stays accurate when z is large (z+a, z+b > 0).
[[nodiscard]] double log_gamma_ratio(double z, double a, double b);

/// Digamma psi(z) for z > 0.
[[nodiscard]] double digamma(double z);

}  // namespace lnorm::special
