#include "lnorm/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lnorm/compensated_sum.hpp"

namespace lnorm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_shift(double s, const char* name) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument(std::string{name} + ": s must be a positive finite real");
  }
}

// j such that n = N^j with j >= 1, or 0 when n is off the support.
int lacunary_exponent(std::size_t n, std::int64_t N) {
  const auto base = static_cast<std::uint64_t>(N);
  auto m = static_cast<std::uint64_t>(n);
  if (m < base) return 0;
  int j = 0;
  while (m % base == 0) {
    m /= base;
    ++j;
  }
  return m == 1 ? j : 0;
}

double lacunary_value(std::int64_t N, int j) {
  return std::pow(static_cast<double>(N), -0.5 * static_cast<double>(j));
}

}  // namespace

GeneratorSequence GeneratorSequence::as(double s) {
  require_shift(s, "AsSequence");
  return GeneratorSequence{AsSequence{s}};
}

GeneratorSequence GeneratorSequence::cesaro(double s) {
  require_shift(s, "CesaroSequence");
  return GeneratorSequence{CesaroSequence{s}};
}

GeneratorSequence GeneratorSequence::lacunary(std::int64_t N) {
  if (N < 2) throw std::invalid_argument("LacunarySequence: N must be >= 2");
  return GeneratorSequence{LacunarySequence{N}};
}

GeneratorSequence GeneratorSequence::custom(std::vector<double> values) {
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("CustomSequence: values must be finite");
  }
  return GeneratorSequence{CustomSequence{std::move(values)}};
}

GeneratorKind GeneratorSequence::kind() const {
  return std::visit(overloaded{
                        [](const AsSequence&) { return GeneratorKind::as; },
                        [](const CesaroSequence&) { return GeneratorKind::cesaro; },
                        [](const LacunarySequence&) { return GeneratorKind::lacunary; },
                        [](const CustomSequence&) { return GeneratorKind::custom; },
                    },
                    rule_);
}

double GeneratorSequence::operator()(std::size_t n) const {
  return std::visit(overloaded{
                        [n](const AsSequence& g) { return 1.0 / (static_cast<double>(n) + g.s); },
                        [n](const CesaroSequence& g) { return 1.0 / (static_cast<double>(n) + g.s); },
                        [n](const LacunarySequence& g) {
                          const int j = lacunary_exponent(n, g.N);
                          return j > 0 ? lacunary_value(g.N, j) : 0.0;
                        },
                        [n](const CustomSequence& g) { return n < g.values.size() ? g.values[n] : 0.0; },
                    },
                    rule_);
}

std::vector<std::uint64_t> lacunary_support(std::int64_t N, std::uint64_t limit) {
  if (N < 2) throw std::invalid_argument("lacunary_support: N must be >= 2");
  const auto base = static_cast<std::uint64_t>(N);
  std::vector<std::uint64_t> support;
  std::uint64_t power = base;
  while (power < limit) {
    support.push_back(power);
    if (power > std::numeric_limits<std::uint64_t>::max() / base) break;
    power *= base;
  }
  return support;
}

void GeneratorSequence::fill(std::span<double> out) const {
  std::visit(overloaded{
                 [out](const AsSequence& g) {
                   for (std::size_t n = 0; n < out.size(); ++n) out[n] = 1.0 / (static_cast<double>(n) + g.s);
                 },
                 [out](const CesaroSequence& g) {
                   for (std::size_t n = 0; n < out.size(); ++n) out[n] = 1.0 / (static_cast<double>(n) + g.s);
                 },
                 [out](const LacunarySequence& g) {
                   std::fill(out.begin(), out.end(), 0.0);
                   int j = 1;
                   for (std::uint64_t idx : lacunary_support(g.N, out.size())) {
                     out[idx] = lacunary_value(g.N, j++);
                   }
                 },
                 [out](const CustomSequence& g) {
                   const std::size_t k = std::min(out.size(), g.values.size());
                   std::copy_n(g.values.begin(), k, out.begin());
                   std::fill(out.begin() + static_cast<std::ptrdiff_t>(k), out.end(), 0.0);
                 },
             },
             rule_);
}

std::vector<double> GeneratorSequence::values(std::size_t count) const {
  std::vector<double> out(count);
  fill(out);
  return out;
}

bool GeneratorSequence::nonnegative_prefix(std::size_t count) const {
  if (const auto* g = std::get_if<CustomSequence>(&rule_)) {
    const std::size_t k = std::min(count, g->values.size());
    return std::all_of(g->values.begin(), g->values.begin() + static_cast<std::ptrdiff_t>(k),
                       [](double v) { return v >= 0.0; });
  }
  return true;
}

double GeneratorSequence::shift() const {
  if (const auto* g = std::get_if<AsSequence>(&rule_)) return g->s;
  if (const auto* g = std::get_if<CesaroSequence>(&rule_)) return g->s;
  throw std::logic_error("GeneratorSequence::shift: not an As/Cesaro generator");
}

std::int64_t GeneratorSequence::base() const {
  if (const auto* g = std::get_if<LacunarySequence>(&rule_)) return g->N;
  throw std::logic_error("GeneratorSequence::base: not a lacunary generator");
}

std::string GeneratorSequence::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&os](const AsSequence& g) { os << "as(s=" << g.s << ")"; },
                 [&os](const CesaroSequence& g) { os << "cesaro(s=" << g.s << ")"; },
                 [&os](const LacunarySequence& g) { os << "lacunary(N=" << g.N << ")"; },
                 [&os](const CustomSequence& g) { os << "custom(len=" << g.values.size() << ")"; },
             },
             rule_);
  return os.str();
}

double eval_generator(const GeneratorSequence& gen, std::size_t n) { return gen(n); }

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::L:
      return "L";
    case Shape::C:
      return "C";
    case Shape::Ctr:
      return "Ctr";
  }
  return "?";
}

double StructuredMatrix::entry(std::size_t i, std::size_t j) const {
  switch (shape_) {
    case Shape::L:
      return gen_(std::max(i, j));
    case Shape::C:
      return j <= i ? gen_(i) : 0.0;
    case Shape::Ctr:
      return i <= j ? gen_(j) : 0.0;
  }
  return 0.0;
}

StructuredMatrix StructuredMatrix::transposed() const {
  switch (shape_) {
    case Shape::C:
      return {Shape::Ctr, gen_};
    case Shape::Ctr:
      return {Shape::C, gen_};
    case Shape::L:
      break;
  }
  return *this;
}

TruncatedVector::TruncatedVector(std::vector<double> values) : values_{std::move(values)} {
  if (values_.empty()) throw std::invalid_argument("TruncatedVector: length must be >= 1");
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("TruncatedVector: entries must be finite");
  }
}

TruncatedVector TruncatedVector::zeros(std::size_t M) { return TruncatedVector{std::vector<double>(M, 0.0)}; }

TruncatedOperator::TruncatedOperator(const StructuredMatrix& mat, std::size_t M)
    : shape_{mat.shape()}, coeffs_(M) {
  if (M == 0) throw std::invalid_argument("TruncatedOperator: truncation M must be >= 1");
  mat.generator().fill(coeffs_);
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw std::invalid_argument("TruncatedOperator: non-finite generator value");
  }
}

void TruncatedOperator::apply(std::span<const double> x, std::span<double> y) const {
  apply_shape(shape_, x, y);
}

void TruncatedOperator::apply_transpose(std::span<const double> x, std::span<double> y) const {
  switch (shape_) {
    case Shape::L:
      apply_shape(Shape::L, x, y);
      break;
    case Shape::C:
      apply_shape(Shape::Ctr, x, y);
      break;
    case Shape::Ctr:
      apply_shape(Shape::C, x, y);
      break;
  }
}

void TruncatedOperator::apply_shape(Shape shape, std::span<const double> x, std::span<double> y) const {
  const std::size_t M = coeffs_.size();
  if (x.size() != M || y.size() != M) {
    throw std::invalid_argument("TruncatedOperator::apply: vector length does not match truncation");
  }
  const double* a = coeffs_.data();

  switch (shape) {
    case Shape::L: {
      // y_i = a_i * sum_{j<=i} x_j + sum_{j>i} a_j x_j. Both halves are kept
      // as unevaluated pairs until the final add, so signed x that nearly
      // cancels still comes out to full relative accuracy.
      thread_local std::vector<double> suffix_low;
      suffix_low.resize(M);
      CompensatedSum suffix;
      for (std::size_t i = M; i-- > 0;) {
        y[i] = suffix.high();
        suffix_low[i] = suffix.low();
        suffix.add_product(a[i], x[i]);
      }
      CompensatedSum prefix;
      for (std::size_t i = 0; i < M; ++i) {
        prefix.add(x[i]);
        const double hi = a[i] * prefix.high();
        CompensatedSum row{hi};
        row.add(y[i]);
        row.add(std::fma(a[i], prefix.high(), -hi) + a[i] * prefix.low() + suffix_low[i]);
        y[i] = row.value();
      }
      break;
    }
    case Shape::C: {
      CompensatedSum prefix;
      for (std::size_t i = 0; i < M; ++i) {
        prefix.add(x[i]);
        y[i] = a[i] * prefix.value();
      }
      break;
    }
    case Shape::Ctr: {
      CompensatedSum suffix;
      for (std::size_t i = M; i-- > 0;) {
        suffix.add_product(a[i], x[i]);
        y[i] = suffix.value();
      }
      break;
    }
  }
}

TruncatedVector matvec(const StructuredMatrix& mat, const TruncatedVector& x) {
  const TruncatedOperator op{mat, x.size()};
  std::vector<double> y(x.size());
  op.apply(x.span(), y);
  return TruncatedVector{std::move(y)};
}

DenseMatrix materialize_dense(const StructuredMatrix& mat, std::size_t M, std::size_t cap) {
  if (M == 0) throw std::invalid_argument("materialize_dense: M must be >= 1");
  if (M > cap) {
    throw std::invalid_argument("materialize_dense: M = " + std::to_string(M) + " exceeds the dense cap " +
                                std::to_string(cap));
  }
  const auto a = mat.generator().values(M);
  DenseMatrix A{M, std::vector<double>(M * M, 0.0)};
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      switch (mat.shape()) {
        case Shape::L:
          A(i, j) = a[std::max(i, j)];
          break;
        case Shape::C:
          A(i, j) = j <= i ? a[i] : 0.0;
          break;
        case Shape::Ctr:
          A(i, j) = i <= j ? a[j] : 0.0;
          break;
      }
    }
  }
  return A;
}

std::vector<double> dense_matvec(const DenseMatrix& A, std::span<const double> x) {
  if (x.size() != A.size) throw std::invalid_argument("dense_matvec: length mismatch");
  std::vector<double> y(A.size, 0.0);
  for (std::size_t i = 0; i < A.size; ++i) {
    const double* row = A.data.data() + i * A.size;
    double acc = 0.0;
    for (std::size_t j = 0; j < A.size; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

}  // namespace lnorm
