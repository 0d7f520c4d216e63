#pragma once

// Overflow-safe evaluation of the Airy pair (Ai, Bi) and the modified Bessel
// functions of the first kind I_n, which form the tailored local bases.
//
// Small arguments use Maclaurin series; the Airy series is accumulated in
// __float128 because Ai(x) is the difference of two exponentially large sums
// for moderate positive x. Large arguments use the standard asymptotic
// expansions (Airy) or backward recurrence normalized by the e^x sum identity
// (Bessel). Scaled variants carry the exponential factor out of the value so
// the singular-perturbation regime (arguments up to ~1e4 and beyond) never
// overflows.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tfpo {

struct AiryPair {
  double ai = 0.0;
  double ai_prime = 0.0;
  double bi = 0.0;
  double bi_prime = 0.0;
  // When set, ai/ai_prime are multiplied by exp(+zeta) and bi/bi_prime by
  // exp(-zeta), zeta = (2/3) x^{3/2} for x > 0 (identity for x <= 0).
  bool scaled = false;
};

// Exponent of the Airy scaling convention.
inline double airy_zeta(double x) {
  return x > 0.0 ? (2.0 / 3.0) * x * std::sqrt(x) : 0.0;
}

struct BesselIValue {
  int order = 0;
  double argument = 0.0;
  double value = 0.0;
  bool scaled = false;  // value = exp(-x) I_n(x) when set
  double log_scale() const { return scaled ? -argument : 0.0; }
};

namespace detail {

using quad = __float128;

inline quad qabs(quad v) { return v < 0 ? -v : v; }

// Maclaurin series for Ai, Bi and derivatives, accumulated in quad precision.
// Good to ~1e-13 relative up to x ~ 11 (cancellation-limited) and down to
// x ~ -15; the production crossover to the asymptotic branch is x = 9.
inline AiryPair airy_series(double x) {
  static const quad c1 = quad(0.3550280538878172) + quad(2.05233632436212e-17);
  static const quad c2 = quad(0.2588194037928068) + quad(-2.522243111610832e-17);
  static const quad rt3 = quad(1.7320508075688772) + quad(1.0035084221806903e-16);

  const quad X = x;
  const quad x3 = X * X * X;

  // f  = sum a_k x^{3k},   a_0 = 1,  a_{k+1} = a_k / ((3k+2)(3k+3))
  // g  = sum b_k x^{3k+1}, b_0 = 1,  b_{k+1} = b_k / ((3k+3)(3k+4))
  // fp = f', gp = g' accumulated term-wise alongside.
  quad tf = 1, tg = X, tfp = 0, tgp = 1;
  quad f = tf, g = tg, fp = 0, gp = tgp;
  for (int k = 0; k < 400; ++k) {
    const quad K = k;
    tf = tf * x3 / ((3 * K + 2) * (3 * K + 3));
    tg = tg * x3 / ((3 * K + 3) * (3 * K + 4));
    if (k == 0)
      tfp = X * X / 2;  // a_1 * 3 x^2
    else
      tfp = tfp * x3 * (K + 1) / (K * (3 * K + 2) * (3 * K + 3));
    tgp = tgp * x3 / ((3 * K + 1) * (3 * K + 3));
    f += tf;
    g += tg;
    fp += tfp;
    gp += tgp;
    const quad scale = qabs(f) + qabs(g) + qabs(fp) + qabs(gp) + quad(1);
    if (qabs(tf) + qabs(tg) + qabs(tfp) + qabs(tgp) < quad(1e-45) * scale) break;
  }

  AiryPair p;
  p.ai = double(c1 * f - c2 * g);
  p.ai_prime = double(c1 * fp - c2 * gp);
  p.bi = double(rt3 * (c1 * f + c2 * g));
  p.bi_prime = double(rt3 * (c1 * fp + c2 * gp));
  p.scaled = false;
  return p;
}

// Asymptotic expansion for large positive x, computed in scaled form.
// Optimal truncation reaches ~1e-14 relative for x >= 8.5.
inline AiryPair airy_asymptotic(double x) {
  const double zeta = airy_zeta(x);
  const double rsqrtpi = 0.5641895835477563;  // 1/sqrt(pi)
  const double x14 = std::pow(x, 0.25);

  double u = 1.0;                    // u_k
  double tu = 1.0, tv = 1.0;         // u_k / zeta^k, v_k / zeta^k
  double sa = 1.0, sb = 1.0, sap = 1.0, sbp = 1.0;
  double prev = std::numeric_limits<double>::max();
  int sign = -1;
  for (int k = 1; k < 200; ++k) {
    u *= double(6 * k - 5) * double(6 * k - 3) * double(6 * k - 1) /
         (216.0 * k * (2 * k - 1));
    tu = u / std::pow(zeta, k);
    tv = tu * double(6 * k + 1) / double(1 - 6 * k);
    if (std::abs(tu) >= prev) break;  // divergence point: stop at smallest term
    prev = std::abs(tu);
    sa += sign * tu;
    sb += tu;
    sap += sign * tv;
    sbp += tv;
    sign = -sign;
    if (std::abs(tu) < 1e-18) break;
  }

  AiryPair p;
  p.ai = 0.5 * rsqrtpi / x14 * sa;
  p.ai_prime = -0.5 * rsqrtpi * x14 * sap;
  p.bi = rsqrtpi / x14 * sb;
  p.bi_prime = rsqrtpi * x14 * sbp;
  p.scaled = true;
  return p;
}

constexpr double kAirySeriesCrossover = 9.0;

// I_n power series; no cancellation (all terms positive). Unscaled value.
inline double bessel_series(int n, double x) {
  double t = 1.0;
  for (int i = 1; i <= n; ++i) t *= 0.5 * x / i;
  double s = t;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 200; ++k) {
    t *= q / (double(k) * double(n + k));
    s += t;
    if (t < 1e-18 * s) break;
  }
  return s;
}

// Backward (Miller) recurrence normalized with e^x = I_0 + 2 sum_k I_k.
// Returns the scaled value e^{-x} I_n(x); accurate to ~1e-14 for x > 15.
inline double bessel_miller(int n, double x) {
  const int start = n + int(8.6 * std::sqrt(x)) + 20;
  double bkp1 = 0.0;
  double bk = 1e-250;
  double total = 2.0 * bk;  // accumulates b_0 + 2 sum_{k>=1} b_k
  double captured = (n == start) ? bk : 0.0;
  for (int k = start; k >= 1; --k) {
    double bkm1 = bkp1 + (2.0 * k / x) * bk;
    if (bkm1 > 1e250) {  // rescale everything accumulated so far
      bkm1 *= 1e-250;
      bk *= 1e-250;
      total *= 1e-250;
      captured *= 1e-250;
    }
    bkp1 = bk;
    bk = bkm1;
    total += (k == 1) ? bk : 2.0 * bk;
    if (k - 1 == n) captured = bk;
  }
  return captured / total;
}

constexpr double kBesselSeriesCrossover = 15.0;
constexpr int kBesselMaxOrder = 20;

inline double bessel_i_value(int n, double x, bool scaled) {
  if (x <= kBesselSeriesCrossover) {
    const double v = bessel_series(n, x);
    return scaled ? v * std::exp(-x) : v;
  }
  const double v = bessel_miller(n, x);
  if (scaled) return v;
  if (x > 709.0)
    throw std::overflow_error("bessel_i: unscaled I_n overflows for x > 709; request the scaled form");
  return v * std::exp(x);
}

}  // namespace detail

// Airy pair (Ai, Bi) with derivatives.
//
// Errors: domain_error on non-finite input; overflow_error when the unscaled
// Bi exceeds the double range (x > ~105) and scaling was not requested.
inline AiryPair airy(double x, bool scaled = false) {
  if (!std::isfinite(x)) throw std::domain_error("airy: non-finite argument");
  if (x <= detail::kAirySeriesCrossover) {
    AiryPair p = detail::airy_series(x);
    if (scaled && x > 0.0) {
      const double z = airy_zeta(x);
      const double ep = std::exp(z), em = std::exp(-z);
      p.ai *= ep;
      p.ai_prime *= ep;
      p.bi *= em;
      p.bi_prime *= em;
      p.scaled = true;
    } else {
      p.scaled = scaled;
    }
    return p;
  }
  AiryPair p = detail::airy_asymptotic(x);
  if (!scaled) {
    const double z = airy_zeta(x);
    if (z >= 709.0)
      throw std::overflow_error("airy: unscaled Bi overflows for x > ~105; request the scaled form");
    const double ep = std::exp(z), em = std::exp(-z);
    p.ai *= em;
    p.ai_prime *= em;
    p.bi *= ep;
    p.bi_prime *= ep;
    p.scaled = false;
  }
  return p;
}

// Modified Bessel function of the first kind I_n(x), n in [0, 20], x >= 0.
inline BesselIValue bessel_i(int n, double x, bool scaled = false) {
  if (n < 0 || n > detail::kBesselMaxOrder)
    throw std::domain_error("bessel_i: order must be in [0, 20]");
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error("bessel_i: argument must be finite and nonnegative");
  BesselIValue r;
  r.order = n;
  r.argument = x;
  r.scaled = scaled;
  r.value = detail::bessel_i_value(n, x, scaled);
  return r;
}

// d/dx I_n(x): I_1 for n = 0, (I_{n-1} + I_{n+1})/2 otherwise.
// The scaled form carries the same e^{-x} factor as bessel_i.
inline double bessel_i_deriv(int n, double x, bool scaled = false) {
  if (n < 0 || n > detail::kBesselMaxOrder)
    throw std::domain_error("bessel_i_deriv: order must be in [0, 20]");
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error("bessel_i_deriv: argument must be finite and nonnegative");
  if (n == 0) return detail::bessel_i_value(1, x, scaled);
  const double lo = detail::bessel_i_value(n - 1, x, scaled);
  const double hi = detail::bessel_i_value(n + 1, x, scaled);
  return 0.5 * (lo + hi);
}

}  // namespace tfpo
