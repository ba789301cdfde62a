#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <random>

#include "lnorm/analytic.hpp"
#include "lnorm/errors.hpp"
#include "lnorm/special_functions.hpp"
#include "oracles.hpp"

using namespace lnorm;

TEST_CASE("f_of_s") {
  CHECK(std::fabs(f_of_s(1.0 / (2.0 * std::sqrt(2.0))) - 4.0) <= 1e-12);
  CHECK(f_of_s(0.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(f_of_s(1.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)f_of_s(0.0), std::invalid_argument);

  double previous = f_of_s(0.01);
  for (int i = 2; i <= 2000; ++i) {
    const double v = f_of_s(0.01 * i);
    REQUIRE(v < previous);
    previous = v;
  }
  CHECK(f_of_s(1e8) < 1e-7);
}

TEST_CASE("s_star and the quartic") {
  CHECK(s_star() == doctest::Approx(0.347174188698034938).epsilon(1e-15));
  CHECK(std::fabs(quartic_numerator(s_star())) <= 1e-10);
  CHECK(std::fabs(f0_quartic(s_star())) <= 1e-10);
  CHECK(s_star() > 0.25);
  CHECK(s_star() < s_upper());
  CHECK(s_upper() == doctest::Approx(0.35355339059327373).epsilon(1e-15));
}

TEST_CASE("f0_quartic") {
  CHECK(f0_quartic(0.3) == doctest::Approx(0.97).epsilon(1e-13));
  CHECK(f0_quartic(0.4) == doctest::Approx(-0.375555555555555556).epsilon(1e-13));
  CHECK(f0_quartic(0.36) < 0.0);
  CHECK_THROWS_AS((void)f0_quartic(0.25), std::invalid_argument);
  // Positive on [1/4, s*), negative beyond.
  for (double s = 0.2501; s < s_star() - 1e-4; s += 1e-3) REQUIRE(f0_quartic(s) > 0.0);
  for (double s = s_star() + 1e-4; s < 0.6; s += 1e-3) REQUIRE(f0_quartic(s) < 0.0);
}

TEST_CASE("g_and_h") {
  CHECK(g0_limit(0.3) == doctest::Approx(0.7).epsilon(1e-14));

  // eps -> 0 limits match g0 and f0.
  const WitnessParams tiny{0.3, 1e-14};
  CHECK(g_and_h(tiny, 1).g == doctest::Approx(0.7).epsilon(1e-5));
  CHECK(g_and_h(tiny, 1).h == doctest::Approx(f0_quartic(0.3)).epsilon(1e-5));

  const WitnessParams near{s_star() - 1e-3, 1e-8};
  CHECK(g_and_h(near, 1).g > 0.0);
  CHECK(g_and_h(near, 1).h >= 0.0);

  const WitnessParams beyond{0.36, 1e-12};
  CHECK(g_and_h(beyond, 1).h < 0.0);

  // h is linear in n with slope g.
  const WitnessParams w{0.3, 0.05};
  const auto h1 = g_and_h(w, 1);
  const auto h7 = g_and_h(w, 7);
  CHECK(h7.h - h1.h == doctest::Approx(6.0 * h1.g).epsilon(1e-13));
}

TEST_CASE("WitnessParams invariants") {
  const WitnessParams w{0.3, 0.1};
  CHECK(w.alpha() == doctest::Approx(2.0 / (4.1 - std::sqrt(4.1 * 0.1))).epsilon(1e-15));
  CHECK(w.beta() == doctest::Approx(0.09 / (w.alpha() * (4.1 * 0.3 - 1.0))).epsilon(1e-15));
  for (double eps : {1e-9, 1e-3, 0.5, 3.0}) CHECK(WitnessParams{0.3, eps}.alpha() > 0.5);
  CHECK(WitnessParams{0.3, 0.0}.alpha() == 0.5);
  CHECK_THROWS_AS(WitnessParams(0.2, 0.0), std::invalid_argument);  // (4+eps)s <= 1
  CHECK_THROWS_AS(WitnessParams(0.3, -1.0), std::invalid_argument);
}

TEST_CASE("delta_upper_bound with the standard delta") {
  for (double s : {0.3, 0.5, 1.0, 2.0}) {
    const auto params = DeltaBoundParams::standard(s);
    const auto gen = GeneratorSequence::as(s);
    for (std::size_t n : {1ul, 2ul, 10ul, 1000ul, 123457ul, 1000000ul}) {
      const double expected = 4.0 - 1.0 / (4.0 * (n + s) * (n + s));
      REQUIRE(std::fabs(delta_term(params, gen, n) - expected) <= 1e-12 * expected);
    }
    const auto report = delta_upper_bound(DeltaBoundParams::standard(s, 10000), gen);
    CHECK(report.params.at("Delta_finite") < 4.0);
    CHECK(report.params.at("Delta") == 4.0);
    CHECK(report.sup_at_horizon);
    CHECK(report.value == doctest::Approx(std::max(f_of_s(s), 4.0)).epsilon(1e-14));
  }
  const double s_up = s_upper();
  CHECK(std::fabs(delta_upper_bound(DeltaBoundParams::standard(s_up, 1000), GeneratorSequence::as(s_up)).value - 4.0) <=
        1e-12);
  CHECK(delta_upper_bound(DeltaBoundParams::standard(1.0, 1000), GeneratorSequence::as(1.0)).value == 4.0);
  CHECK(delta_upper_bound(DeltaBoundParams::standard(0.3, 1000), GeneratorSequence::as(0.3)).value ==
        doctest::Approx(f_of_s(0.3)));
}

TEST_CASE("delta_upper_bound rejects non-decreasing delta and records terms") {
  DeltaBoundParams bad{1.0, -1.0, 1.5, 10, 0};
  CHECK_THROWS_AS((void)delta_upper_bound(bad, GeneratorSequence::as(1.0)), std::invalid_argument);
  bad = DeltaBoundParams{1.0, 1.0, 0.0, 10, 0};
  CHECK_THROWS_AS((void)delta_upper_bound(bad, GeneratorSequence::as(1.0)), std::invalid_argument);

  auto params = DeltaBoundParams::standard(1.0, 100);
  params.record_terms = 5;
  const auto report = delta_upper_bound(params, GeneratorSequence::as(1.0));
  REQUIRE(report.detail.size() == 5);
  CHECK(report.detail[0] == doctest::Approx(4.0 - 1.0 / 16.0));
}

TEST_CASE("delta family optimizer does not beat 4 and reaches it for s >= 1/(2 sqrt 2)") {
  const auto opt = optimize_delta_family(1.0, 2000);
  CHECK(opt.bound >= 4.0 - 1e-12);
  CHECK(opt.bound <= 4.0 + 1e-9);
  const auto low = optimize_delta_family(0.3, 2000);
  CHECK(low.bound > 4.0);
  CHECK(low.bound <= f_of_s(0.3) + 1e-12);
}

TEST_CASE("special functions") {
  for (double z : {0.1, 0.5, 1.0, 2.5, 7.0, 14.9, 15.0, 33.3, 1e3, 1e6}) {
    CHECK(special::log_gamma(z) == doctest::Approx(std::lgamma(z)).epsilon(1e-13));
  }
  CHECK(std::fabs(special::log_gamma(1.0)) < 1e-14);
  CHECK(std::fabs(special::log_gamma(2.0)) < 1e-14);
  CHECK(special::digamma(1.0) == doctest::Approx(-0.57721566490153286).epsilon(1e-14));
  CHECK(special::digamma(5.0) - special::digamma(1.0) == doctest::Approx(25.0 / 12.0).epsilon(1e-14));
  // Ratio by log-Gamma differences matches a direct product of ratios at large z.
  long double direct = 0.0L;
  for (int i = 0; i < 3; ++i) direct += std::log((1e6L + 0.25L + i));
  CHECK(special::log_gamma_ratio(1e6, 3.25, 0.25) == doctest::Approx(static_cast<double>(direct)).epsilon(1e-15));
  CHECK_THROWS((void)special::log_gamma(0.0));
}

TEST_CASE("gamma_ratio_sum") {
  for (std::size_t n : {0ul, 1ul, 5ul, 30ul}) CHECK(gamma_ratio_sum(0.7, 0.7, n) == doctest::Approx(n).epsilon(1e-13));
  CHECK(std::fabs(gamma_ratio_sum(0.0, 1.0, 4) - 25.0 / 12.0) <= 1e-14);
  CHECK(gamma_ratio_sum(1.5, 2.5, 10) == doctest::Approx(oracle::gamma_ratio_sum_brute(1.5, 2.5, 10)).epsilon(1e-12));
  CHECK_THROWS_AS((void)gamma_ratio_sum(-1.5, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)gamma_ratio_sum(1.0, 0.0, 3), std::invalid_argument);

  std::mt19937_64 rng{12345};
  std::uniform_real_distribution<double> bc(0.0, 3.0);
  std::uniform_int_distribution<std::size_t> nd(1, 30);
  for (int i = 0; i < 200; ++i) {
    const double b = bc(rng), c = bc(rng);
    const std::size_t n = nd(rng);
    const double ref = oracle::gamma_ratio_sum_brute(b, c, n);
    REQUIRE(std::fabs(gamma_ratio_sum(b, c, n) - ref) <= 1e-10 * std::fabs(ref));
  }
}

TEST_CASE("lacunary constants") {
  CHECK(lacunary_norm(2) == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-15));
  CHECK(lacunary_norm(9) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(lacunary_t_opt(2) == 1.0);

  const double t4 = lacunary_t_opt(4);
  for (std::size_t k = 0; k <= 20; ++k) {
    const auto c = lacunary_constants(4, t4, k);
    CHECK(c.eta_k == doctest::Approx(3.0 - 1.0 / (3.0 * std::pow(2.0, static_cast<double>(k)))).epsilon(1e-13));
    CHECK(c.eta_k < 3.0);
  }

  // B_n by direct summation of the square roots.
  for (std::int64_t N : {2, 3, 7}) {
    const double t = 0.4;
    double B = std::pow(N + 1.0, t);
    for (std::size_t n = 2; n <= 12; ++n) {
      B += std::sqrt(std::pow(N, n) - std::pow(N, n - 1.0));
      CHECK(lacunary_constants(N, t, n).B_n == doctest::Approx(B).epsilon(1e-12));
    }
  }

  // Geometric-series oracle for eta_0 and eta_k at general and optimal t.
  for (std::int64_t N : {2, 3, 5, 10}) {
    for (double t : {0.0, 0.3, 1.0, lacunary_t_opt(N)}) {
      for (std::size_t k : {0ul, 1ul, 2ul, 5ul, 12ul}) {
        const double ref = oracle::eta_partial_sum(N, t, k, 200);
        REQUIRE(std::fabs(lacunary_constants(N, t, k).eta_k - ref) <= 1e-10 * ref);
      }
    }
  }

  CHECK_THROWS_AS((void)lacunary_constants(1, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)lacunary_constants(2, 1.5, 1), std::invalid_argument);
}

TEST_CASE("pq_constant") {
  CHECK(pq_constant(2.0) == 4.0);
  CHECK(pq_constant(3.0) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(pq_constant(1.5) == doctest::Approx(pq_constant(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS((void)pq_constant(1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)pq_constant(0.5), std::invalid_argument);

  double minimum = 1e300, argmin = 0;
  for (double p = 1.05; p < 10.0; p += 0.01) {
    const double v = pq_constant(p);
    REQUIRE(v >= 4.0);
    REQUIRE(pq_constant(holder_conjugate(p)) == doctest::Approx(v).epsilon(1e-13));
    if (v < minimum) {
      minimum = v;
      argmin = p;
    }
  }
  CHECK(argmin == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("gamma_m") {
  CHECK(gamma_m(1.0, 2.0, 0) == doctest::Approx(16.0 * (1.0 + 1.0 / std::sqrt(2.0))).epsilon(1e-15));
  double largest = 0.0;
  double ratio_1e3 = 0.0, ratio_1e5 = 0.0;
  for (std::size_t m : {100ul, 1000ul, 10000ul, 100000ul}) {
    const double g = gamma_m(1.0, 2.0, m);
    largest = std::max(largest, g);
    const double r = g / shifted_harmonic(1.0, m);
    if (m == 1000) ratio_1e3 = r;
    if (m == 100000) ratio_1e5 = r;
  }
  // Bounded: c1' (s+1)^{-1/q} + c2' with the constants of the integral comparison.
  CHECK(largest < 200.0);
  CHECK(gamma_m(1.0, 2.0, 100000) < 1.05 * gamma_m(1.0, 2.0, 10000));
  CHECK(ratio_1e5 < ratio_1e3);
}
