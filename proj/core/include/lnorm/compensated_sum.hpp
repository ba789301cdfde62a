#pragma once

#include <cmath>

namespace lnorm {

/*!
  Kahan-Babuska (Neumaier) running sum.

  Unlike plain Kahan summation the correction is also right when the incoming
  term is larger in magnitude than the running sum, which happens for the
  alternating and suffix sums used by the structured matvecs.
*/
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(double initial) : sum_{initial} {}

  void add(double value) {
    const double t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  /// Adds a*b including the rounding error of the product.
  void add_product(double a, double b) {
    const double prod = a * b;
    add(prod);
    compensation_ += std::fma(a, b, -prod);
  }

  CompensatedSum& operator+=(double value) {
    add(value);
    return *this;
  }

  [[nodiscard]] double value() const { return sum_ + compensation_; }
  [[nodiscard]] double high() const { return sum_; }
  [[nodiscard]] double low() const { return compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace lnorm
