#include "tfpo/specialfn.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

using namespace tfpo;

namespace {

// Independent long-double Maclaurin oracle for Ai/Bi, usable for |x| <= 3
// where cancellation is negligible. Kept deliberately separate from the
// library implementation (different precision, different term recurrences).
struct AiryOracle {
  long double ai, bi;
};

AiryOracle airy_oracle(long double x) {
  const long double c1 = 0.35502805388781723926L;
  const long double c2 = 0.25881940379280679841L;
  long double f = 0.0L, g = 0.0L;
  long double num = 1.0L;  // x^(3k) / (3k)! style accumulation via factorials
  for (int k = 0; k < 60; ++k) {
    // a_k coefficient of f: prod_{j<k} (3j+1) / (3k)!
    long double af = 1.0L, ag = 1.0L, fact_f = 1.0L, fact_g = 1.0L;
    for (int j = 0; j < k; ++j) {
      af *= 3.0L * j + 1.0L;
      ag *= 3.0L * j + 2.0L;
    }
    for (int j = 1; j <= 3 * k; ++j) fact_f *= j;
    for (int j = 1; j <= 3 * k + 1; ++j) fact_g *= j;
    f += af / fact_f * std::pow(x, 3.0L * k);
    g += ag / fact_g * std::pow(x, 3.0L * k + 1.0L);
    (void)num;
  }
  return {c1 * f - c2 * g, std::sqrt(3.0L) * (c1 * f + c2 * g)};
}

// Power-series oracle for I_n.
double bessel_oracle(int n, double x) {
  double t = 1.0;
  for (int i = 1; i <= n; ++i) t *= 0.5 * x / i;
  double s = t;
  for (int k = 1; k < 300; ++k) {
    t *= 0.25 * x * x / (double(k) * double(n + k));
    s += t;
    if (t < 1e-19 * s) break;
  }
  return s;
}

constexpr double kInvPi = 0.3183098861837907;

}  // namespace

TEST_CASE("airy at zero matches the closed forms") {
  // Ai(0) = 1/(3^{2/3} Gamma(2/3)), Bi(0) = 1/(3^{1/6} Gamma(2/3))
  const double ai0 = 1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0));
  const double bi0 = 1.0 / (std::pow(3.0, 1.0 / 6.0) * std::tgamma(2.0 / 3.0));
  const AiryPair p = airy(0.0);
  CHECK(p.ai == Catch::Approx(ai0).epsilon(1e-14));
  CHECK(p.bi == Catch::Approx(bi0).epsilon(1e-14));
  CHECK(p.ai == Catch::Approx(0.355028053887817).epsilon(1e-14));
  CHECK(p.bi == Catch::Approx(0.614926627446001).epsilon(1e-14));
  CHECK(p.ai_prime == Catch::Approx(-0.2588194037928068).epsilon(1e-14));
  CHECK(p.bi_prime == Catch::Approx(0.44828835735382636).epsilon(1e-14));
}

TEST_CASE("airy matches the series oracle on small arguments") {
  for (double x = -3.0; x <= 3.0; x += 0.25) {
    const AiryPair p = airy(x);
    const AiryOracle o = airy_oracle(x);
    CHECK(p.ai == Catch::Approx(double(o.ai)).epsilon(1e-13).margin(1e-15));
    CHECK(p.bi == Catch::Approx(double(o.bi)).epsilon(1e-13).margin(1e-15));
  }
}

TEST_CASE("airy decay: Ai(10)") {
  // High-precision reference (mpmath, 50 digits): 1.10475325529e-10
  CHECK(airy(10.0).ai == Catch::Approx(1.1047532553e-10).epsilon(1e-10));
}

TEST_CASE("airy Wronskian equals 1/pi on [-10, 20]") {
  for (double x = -10.0; x <= 20.0; x += 0.125) {
    const bool use_scaled = x > 5.0;
    const AiryPair p = airy(x, use_scaled);
    // In scaled form the exponential factors cancel in the Wronskian.
    const double w = p.ai * p.bi_prime - p.ai_prime * p.bi;
    CHECK(w == Catch::Approx(kInvPi).epsilon(1e-12));
  }
}

TEST_CASE("airy on x>=0: Ai positive decreasing, Bi increasing") {
  double prev_ai = airy(0.0).ai;
  double prev_bi = airy(0.0).bi;
  for (double x = 0.25; x <= 30.0; x += 0.25) {
    const AiryPair p = airy(x, x > 50.0);
    const double ai = p.scaled ? p.ai * std::exp(-airy_zeta(x)) : p.ai;
    (void)ai;
    const AiryPair q = airy(x);
    CHECK(q.ai > 0.0);
    CHECK(q.ai < prev_ai);
    CHECK(q.bi > prev_bi);
    prev_ai = q.ai;
    prev_bi = q.bi;
  }
}

TEST_CASE("airy scaled and unscaled variants are consistent") {
  for (double x : {0.5, 2.0, 5.0, 8.0, 9.5, 20.0, 60.0, 100.0}) {
    const AiryPair s = airy(x, true);
    const AiryPair u = airy(x, false);
    const double z = airy_zeta(x);
    CHECK(s.ai == Catch::Approx(u.ai * std::exp(z)).epsilon(1e-12));
    CHECK(s.bi == Catch::Approx(u.bi * std::exp(-z)).epsilon(1e-12));
    CHECK(s.ai_prime == Catch::Approx(u.ai_prime * std::exp(z)).epsilon(1e-12));
    CHECK(s.bi_prime == Catch::Approx(u.bi_prime * std::exp(-z)).epsilon(1e-12));
  }
}

TEST_CASE("airy series and asymptotic branches agree across the seam") {
  for (double x = 8.5; x <= 10.5; x += 0.25) {
    const AiryPair s = detail::airy_series(x);
    const AiryPair a = detail::airy_asymptotic(x);
    const double z = airy_zeta(x);
    CHECK(s.ai * std::exp(z) == Catch::Approx(a.ai).epsilon(1e-12));
    CHECK(s.bi * std::exp(-z) == Catch::Approx(a.bi).epsilon(1e-12));
    CHECK(s.ai_prime * std::exp(z) == Catch::Approx(a.ai_prime).epsilon(1e-12));
    CHECK(s.bi_prime * std::exp(-z) == Catch::Approx(a.bi_prime).epsilon(1e-12));
  }
}

TEST_CASE("airy derivative matches central differences on [-5, 5]") {
  const double h = 1e-6;
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    const double fd = (airy(x + h).ai - airy(x - h).ai) / (2.0 * h);
    const double an = airy(x).ai_prime;
    CHECK(fd == Catch::Approx(an).epsilon(1e-6).margin(1e-10));
  }
}

TEST_CASE("airy error paths") {
  CHECK_THROWS_AS(airy(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(airy(200.0, false), std::overflow_error);
  CHECK_NOTHROW(airy(200.0, true));
  const AiryPair big = airy(1e4, true);
  CHECK(std::isfinite(big.ai));
  CHECK(std::isfinite(big.bi));
  CHECK(big.ai > 0.0);
  CHECK(big.bi > 0.0);
}

TEST_CASE("bessel_i basics") {
  CHECK(bessel_i(0, 0.0).value == 1.0);
  CHECK(bessel_i(1, 0.0).value == 0.0);
  CHECK(bessel_i(0, 1.0).value == Catch::Approx(1.26606587775201).epsilon(1e-14));
  CHECK(bessel_i(0, 1.0).value == Catch::Approx(bessel_oracle(0, 1.0)).epsilon(1e-14));
  for (int n : {0, 1, 2, 5, 12, 20})
    for (double x : {1e-3, 0.3, 2.0, 9.0, 14.9})
      CHECK(bessel_i(n, x).value == Catch::Approx(bessel_oracle(n, x)).epsilon(1e-13).margin(1e-300));
}

TEST_CASE("bessel_i series and backward-recurrence branches agree across the seam") {
  for (double x : {14.2, 14.7, 15.0, 15.4, 16.0}) {
    for (int n = 0; n <= 20; ++n) {
      const double series = detail::bessel_series(n, x) * std::exp(-x);
      const double miller = detail::bessel_miller(n, x);
      CHECK(series == Catch::Approx(miller).epsilon(1e-12));
    }
  }
}

TEST_CASE("bessel_i recurrence residual below 1e-10 on the log grid") {
  std::vector<double> xs;
  for (double lx = std::log(1e-3); lx <= std::log(50.0) + 1e-9; lx += std::log(50.0 / 1e-3) / 40.0)
    xs.push_back(std::exp(lx));
  for (double x : xs) {
    for (int n = 1; n <= 10; ++n) {
      const bool sc = x > 15.0;
      const double lo = bessel_i(n - 1, x, sc).value;
      const double mid = bessel_i(n, x, sc).value;
      const double hi = bessel_i(n + 1, x, sc).value;
      const double lhs = lo - hi;
      const double rhs = 2.0 * n / x * mid;
      const double scale = std::abs(lo) + std::abs(hi) + std::abs(rhs);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("bessel_i scaled path never overflows up to 1e6") {
  for (double x : {20.0, 1e2, 1e3, 1e5, 1e6}) {
    for (int n : {0, 1, 5, 20}) {
      const BesselIValue v = bessel_i(n, x, true);
      CHECK(std::isfinite(v.value));
      CHECK(v.value > 0.0);
      CHECK(v.value < 1.0);
    }
  }
}

TEST_CASE("bessel_i scaled/unscaled consistency") {
  for (double x : {0.5, 7.0, 15.5, 100.0, 600.0}) {
    for (int n : {0, 1, 3, 10}) {
      const double s = bessel_i(n, x, true).value;
      const double u = bessel_i(n, x, false).value;
      CHECK(s == Catch::Approx(u * std::exp(-x)).epsilon(1e-12).margin(1e-300));
    }
  }
}

TEST_CASE("bessel_i error paths") {
  CHECK_THROWS_AS(bessel_i(0, -1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i(21, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i(0, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(bessel_i(0, 800.0, false), std::overflow_error);
  CHECK_NOTHROW(bessel_i(0, 800.0, true));
}

TEST_CASE("bessel_i_deriv") {
  CHECK(bessel_i_deriv(0, 0.0) == 0.0);
  CHECK(bessel_i_deriv(1, 0.0) == 0.5);
  CHECK(bessel_i_deriv(0, 1.0) == Catch::Approx(0.565159103992485).epsilon(1e-14));
  CHECK(bessel_i_deriv(0, 1.0) == Catch::Approx(bessel_oracle(1, 1.0)).epsilon(1e-14));
  // (I_{n-1} + I_{n+1})/2 against central differences
  for (int n : {0, 1, 4}) {
    for (double x : {0.7, 3.0, 12.0}) {
      const double h = 1e-6;
      const double fd = (bessel_i(n, x + h).value - bessel_i(n, x - h).value) / (2.0 * h);
      CHECK(bessel_i_deriv(n, x) == Catch::Approx(fd).epsilon(1e-8));
    }
  }
}
