#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <random>

#include "lnorm/generators.hpp"
#include "oracles.hpp"

using namespace lnorm;

namespace {

bool close_entry(double got, double ref) {
  const double diff = std::fabs(got - ref);
  return diff <= 1e-12 * std::fabs(ref) || diff <= 1e-14;
}

}  // namespace

TEST_CASE("eval_generator examples") {
  CHECK(eval_generator(GeneratorSequence::as(1.0), 0) == 1.0);
  CHECK(eval_generator(GeneratorSequence::lacunary(2), 4) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_generator(GeneratorSequence::lacunary(2), 3) == 0.0);
  CHECK(eval_generator(GeneratorSequence::lacunary(2), 1) == 0.0);  // N^0 is off the support
  CHECK(eval_generator(GeneratorSequence::lacunary(3), 27) == doctest::Approx(std::pow(3.0, -1.5)));
  CHECK(eval_generator(GeneratorSequence::custom({2.0, 3.0}), 5) == 0.0);
}

TEST_CASE("generator construction errors") {
  CHECK_THROWS_AS((void)GeneratorSequence::as(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)GeneratorSequence::as(-1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)GeneratorSequence::cesaro(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)GeneratorSequence::lacunary(1), std::invalid_argument);
  CHECK_THROWS_AS((void)GeneratorSequence::custom({1.0, NAN}), std::invalid_argument);
}

TEST_CASE("As sequence is positive and strictly decreasing") {
  const auto a = GeneratorSequence::as(0.3).values(1000);
  for (std::size_t n = 0; n + 1 < a.size(); ++n) {
    REQUIRE(a[n] > 0.0);
    REQUIRE(a[n + 1] < a[n]);
  }
}

TEST_CASE("lacunary fill matches pointwise eval and support stops before M") {
  for (std::int64_t N : {2, 3, 7}) {
    const auto gen = GeneratorSequence::lacunary(N);
    const auto a = gen.values(5000);
    for (std::size_t n = 0; n < a.size(); ++n) REQUIRE(a[n] == gen(n));
  }
  const auto support = lacunary_support(2, 1024);
  CHECK(support.size() == 9);  // 2..512; 1024 is excluded
  CHECK(support.back() == 512);
  // Overflow detection: enumeration terminates below 2^64.
  CHECK(lacunary_support(2, ~std::uint64_t{0}).size() == 63);
}

TEST_CASE("matvec examples") {
  const StructuredMatrix L{Shape::L, GeneratorSequence::as(1.0)};
  const auto y = matvec(L, TruncatedVector{{1.0, 1.0, 1.0}});
  CHECK(y[0] == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(y[2] == doctest::Approx(1.0).epsilon(1e-15));

  const StructuredMatrix C{Shape::C, GeneratorSequence::as(1.0)};
  const auto yc = matvec(C, TruncatedVector{{1.0, 0.0}});
  CHECK(yc[0] == 1.0);
  CHECK(yc[1] == 0.5);

  for (Shape shape : {Shape::L, Shape::C, Shape::Ctr}) {
    const auto z = matvec(StructuredMatrix{shape, GeneratorSequence::lacunary(2)}, TruncatedVector::zeros(64));
    for (double v : z.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("matvec errors") {
  CHECK_THROWS_AS(TruncatedVector(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(TruncatedVector(std::vector<double>{1.0, INFINITY}), std::invalid_argument);
  const TruncatedOperator op{StructuredMatrix{Shape::L, GeneratorSequence::as(1.0)}, 4};
  std::vector<double> x(3, 1.0), y(4);
  CHECK_THROWS_AS(op.apply(x, y), std::invalid_argument);
}

TEST_CASE("materialize_dense examples and cap") {
  const auto L = materialize_dense(StructuredMatrix{Shape::L, GeneratorSequence::as(1.0)}, 2);
  CHECK(L(0, 0) == 1.0);
  CHECK(L(0, 1) == 0.5);
  CHECK(L(1, 0) == 0.5);
  CHECK(L(1, 1) == 0.5);
  const auto C = materialize_dense(StructuredMatrix{Shape::C, GeneratorSequence::as(1.0)}, 2);
  CHECK(C(0, 0) == 1.0);
  CHECK(C(0, 1) == 0.0);
  CHECK(C(1, 0) == 0.5);
  CHECK(C(1, 1) == 0.5);

  std::mt19937_64 rng{7};
  const auto gen = GeneratorSequence::custom(oracle::uniform_vector(rng, 8, 0.0, 1.0));
  const auto Cd = materialize_dense(StructuredMatrix{Shape::C, gen}, 8);
  const auto Ct = materialize_dense(StructuredMatrix{Shape::Ctr, gen}, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) CHECK(Ct(i, j) == Cd(j, i));

  CHECK_THROWS_AS((void)materialize_dense(StructuredMatrix{Shape::L, GeneratorSequence::as(1.0)}, 4097),
                  std::invalid_argument);
  CHECK_NOTHROW((void)materialize_dense(StructuredMatrix{Shape::L, GeneratorSequence::as(1.0)}, 16, 16));
  CHECK_THROWS_AS((void)materialize_dense(StructuredMatrix{Shape::L, GeneratorSequence::as(1.0)}, 0),
                  std::invalid_argument);
}

TEST_CASE("entry() follows the shape rules") {
  const auto gen = GeneratorSequence::as(0.7);
  const StructuredMatrix L{Shape::L, gen}, C{Shape::C, gen}, Ct{Shape::Ctr, gen};
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) {
      CHECK(L.entry(i, j) == gen(std::max(i, j)));
      CHECK(C.entry(i, j) == (j <= i ? gen(i) : 0.0));
      CHECK(Ct.entry(i, j) == C.entry(j, i));
    }
}

TEST_CASE("property: structured matvec agrees with the dense oracle") {
  std::mt19937_64 rng{20240601};
  std::uniform_int_distribution<std::size_t> size_dist(1, 512);
  std::uniform_real_distribution<double> s_dist(0.05, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t M = size_dist(rng);
    const GeneratorSequence gens[] = {
        GeneratorSequence::as(s_dist(rng)), GeneratorSequence::cesaro(s_dist(rng)),
        GeneratorSequence::lacunary(2 + static_cast<std::int64_t>(trial % 5)),
        GeneratorSequence::custom(oracle::uniform_vector(rng, M / 2 + 1))};
    for (const auto& gen : gens) {
      for (Shape shape : {Shape::L, Shape::C, Shape::Ctr}) {
        const StructuredMatrix A{shape, gen};
        const auto x = oracle::uniform_vector(rng, M);
        const auto y = matvec(A, TruncatedVector{x});
        const auto ref = oracle::dense_matvec_ld(materialize_dense(A, M), x);
        for (std::size_t i = 0; i < M; ++i) REQUIRE(close_entry(y[i], ref[i]));
      }
    }
  }
}

TEST_CASE("property: L-shape matvec is symmetric") {
  std::mt19937_64 rng{99};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t M = 1 + static_cast<std::size_t>(trial) * 17;
    const StructuredMatrix A{Shape::L, GeneratorSequence::as(0.1 + 0.05 * trial)};
    const auto x = oracle::uniform_vector(rng, M);
    const auto y = oracle::uniform_vector(rng, M);
    const auto Ax = matvec(A, TruncatedVector{x});
    const auto Ay = matvec(A, TruncatedVector{y});
    long double lhs = 0, rhs = 0, scale = 0;
    for (std::size_t i = 0; i < M; ++i) {
      lhs += static_cast<long double>(Ax[i]) * y[i];
      rhs += static_cast<long double>(x[i]) * Ay[i];
      scale += std::fabs(Ax[i] * y[i]);
    }
    CHECK(std::fabs(static_cast<double>(lhs - rhs)) <= 1e-12 * static_cast<double>(scale));
  }
}

TEST_CASE("property: L entries are dominated by C + Ctr entries for A_s") {
  for (double s : {0.25, 0.5, 1.0, 2.0}) {
    const auto gen = GeneratorSequence::as(s);
    const auto L = materialize_dense({Shape::L, gen}, 64);
    const auto C = materialize_dense({Shape::C, gen}, 64);
    const auto Ct = materialize_dense({Shape::Ctr, gen}, 64);
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 64; ++j) REQUIRE(L(i, j) <= C(i, j) + Ct(i, j));
  }
}

TEST_CASE("transposed() swaps C and Ctr and fixes L") {
  const auto gen = GeneratorSequence::as(1.0);
  CHECK(StructuredMatrix{Shape::C, gen}.transposed().shape() == Shape::Ctr);
  CHECK(StructuredMatrix{Shape::Ctr, gen}.transposed().shape() == Shape::C);
  CHECK(StructuredMatrix{Shape::L, gen}.transposed().shape() == Shape::L);
}
