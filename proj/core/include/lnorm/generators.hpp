#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lnorm {

/// a_n = 1/(n+s), the generator of the L-matrix A_s.
struct AsSequence {
  double s;
};

/// Same rule as AsSequence; kept distinct so the Cesaro/Copson family is
/// recognisable in reports.
struct CesaroSequence {
  double s;
};

/// a_n = N^{-j/2} when n = N^j for some j >= 1, zero elsewhere.
struct LacunarySequence {
  std::int64_t N;
};

/// Finite list of values, zero beyond its length.
struct CustomSequence {
  std::vector<double> values;
};

enum class GeneratorKind { as, cesaro, lacunary, custom };

/// Immutable rule n -> a_n. Construct through the named factories, which
/// validate parameters.
class GeneratorSequence {
 public:
  static GeneratorSequence as(double s);
  static GeneratorSequence cesaro(double s);
  static GeneratorSequence lacunary(std::int64_t N);
  static GeneratorSequence custom(std::vector<double> values);

  [[nodiscard]] GeneratorKind kind() const;
  [[nodiscard]] double operator()(std::size_t n) const;

  /// Writes a_0 .. a_{out.size()-1}. For the lacunary rule the support N^j is
  /// enumerated in checked integer arithmetic.
  void fill(std::span<double> out) const;
  [[nodiscard]] std::vector<double> values(std::size_t count) const;

  /// True when every a_n with n < count is >= 0.
  [[nodiscard]] bool nonnegative_prefix(std::size_t count) const;

  /// s for the As/Cesaro rules; throws for the others.
  [[nodiscard]] double shift() const;
  /// N for the lacunary rule; throws for the others.
  [[nodiscard]] std::int64_t base() const;

  [[nodiscard]] std::string describe() const;

 private:
  using Rule = std::variant<AsSequence, CesaroSequence, LacunarySequence, CustomSequence>;
  explicit GeneratorSequence(Rule rule) : rule_{std::move(rule)} {}
  Rule rule_;
};

[[nodiscard]] double eval_generator(const GeneratorSequence& gen, std::size_t n);

/// Support {N^j : j >= 1, N^j < limit} of the lacunary rule, ascending.
[[nodiscard]] std::vector<std::uint64_t> lacunary_support(std::int64_t N, std::uint64_t limit);

enum class Shape { L, C, Ctr };

[[nodiscard]] std::string to_string(Shape shape);

/// Infinite structured matrix: a shape tag plus its generator.
///   L:   entry(i,j) = a_{max(i,j)}
///   C:   entry(i,j) = a_i for j <= i, else 0
///   Ctr: transpose of C
class StructuredMatrix {
 public:
  StructuredMatrix(Shape shape, GeneratorSequence gen) : shape_{shape}, gen_{std::move(gen)} {}

  [[nodiscard]] Shape shape() const { return shape_; }
  [[nodiscard]] const GeneratorSequence& generator() const { return gen_; }
  [[nodiscard]] double entry(std::size_t i, std::size_t j) const;
  [[nodiscard]] StructuredMatrix transposed() const;

 private:
  Shape shape_;
  GeneratorSequence gen_;
};

/// Finite section x_0 .. x_{M-1} of a sequence. Always non-empty and finite.
class TruncatedVector {
 public:
  explicit TruncatedVector(std::vector<double> values);
  static TruncatedVector zeros(std::size_t M);

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] std::span<const double> span() const { return values_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// The leading M x M principal section of a structured matrix with its
/// coefficients a_0..a_{M-1} cached. apply() costs O(M): one compensated
/// prefix-sum pass and one compensated suffix-sum pass.
class TruncatedOperator {
 public:
  TruncatedOperator(const StructuredMatrix& mat, std::size_t M);

  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
  [[nodiscard]] Shape shape() const { return shape_; }
  [[nodiscard]] std::span<const double> coefficients() const { return coeffs_; }

  /// y = A x. x and y must both have length size() and must not alias.
  void apply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x.
  void apply_transpose(std::span<const double> x, std::span<double> y) const;

 private:
  void apply_shape(Shape shape, std::span<const double> x, std::span<double> y) const;

  Shape shape_;
  std::vector<double> coeffs_;
};

[[nodiscard]] TruncatedVector matvec(const StructuredMatrix& mat, const TruncatedVector& x);

inline constexpr std::size_t kDefaultDenseCap = 4096;

/// Row-major dense M x M array; test oracle only.
struct DenseMatrix {
  std::size_t size = 0;
  std::vector<double> data;

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data[i * size + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * size + j]; }
};

[[nodiscard]] DenseMatrix materialize_dense(const StructuredMatrix& mat, std::size_t M,
                                            std::size_t cap = kDefaultDenseCap);

/// Plain O(M^2) row-by-row product with a materialized matrix.
[[nodiscard]] std::vector<double> dense_matvec(const DenseMatrix& A, std::span<const double> x);

}  // namespace lnorm
