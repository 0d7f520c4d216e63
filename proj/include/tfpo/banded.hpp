#pragma once

// Banded LU with partial pivoting, compact row storage: row i holds the
// entries A(i, j) for j in [i-kl, i+ku].

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfpo {

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& msg, double cond)
      : std::runtime_error(msg + " (condition indicator " + std::to_string(cond) + ")"),
        condition(cond) {}
  double condition;
};

class BandedLU {
 public:
  BandedLU(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), w_(kl + ku + 1), ab_(size_t(n) * w_, 0.0) {}

  int size() const { return n_; }

  bool in_band(int i, int j) const {
    return i >= 0 && i < n_ && j >= i - kl_ && j <= i + ku_ && j >= 0 && j < n_;
  }

  double& at(int i, int j) {
    if (!in_band(i, j)) throw std::out_of_range("BandedLU: (i,j) outside the band");
    return ab_[size_t(i) * w_ + size_t(j - i + kl_)];
  }

  double get(int i, int j) const {
    if (!in_band(i, j)) return 0.0;
    return ab_[size_t(i) * w_ + size_t(j - i + kl_)];
  }

  // y = A x using the original entries (kept intact across factor()).
  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y(size_t(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
        s += ab_[size_t(i) * w_ + size_t(j - i + kl_)] * x[size_t(j)];
      y[size_t(i)] = s;
    }
    return y;
  }

  void factor() {
    if (factored_) return;
    // Left-justify each of the first kl rows (fill the leading gap).
    u_.assign(size_t(n_) * w_, 0.0);
    for (int i = 0; i < n_; ++i) {
      const int jlo = std::max(0, i - kl_);
      for (int j = jlo; j <= std::min(n_ - 1, i + ku_); ++j)
        u_[size_t(i) * w_ + size_t(j - jlo)] = ab_[size_t(i) * w_ + size_t(j - i + kl_)];
    }
    mult_.assign(size_t(n_) * kl_, 0.0);
    perm_.assign(size_t(n_), 0);
    double pmax = 0.0, pmin = std::numeric_limits<double>::max();
    for (int k = 0; k < n_; ++k) {
      const int last = std::min(n_ - 1, k + kl_);
      int ip = k;
      double big = std::abs(u_[size_t(k) * w_]);
      for (int i = k + 1; i <= last; ++i) {
        const double v = std::abs(u_[size_t(i) * w_]);
        if (v > big) {
          big = v;
          ip = i;
        }
      }
      perm_[size_t(k)] = ip;
      if (big == 0.0) throw SingularSystemError("banded system is singular", pmin > 0 ? pmax / pmin : 0.0);
      pmax = std::max(pmax, big);
      pmin = std::min(pmin, big);
      if (ip != k)
        for (int c = 0; c < w_; ++c) std::swap(u_[size_t(k) * w_ + c], u_[size_t(ip) * w_ + c]);
      for (int i = k + 1; i <= last; ++i) {
        const double m = u_[size_t(i) * w_] / u_[size_t(k) * w_];
        mult_[size_t(k) * kl_ + size_t(i - k - 1)] = m;
        for (int c = 1; c < w_; ++c)
          u_[size_t(i) * w_ + size_t(c - 1)] = u_[size_t(i) * w_ + c] - m * u_[size_t(k) * w_ + c];
        u_[size_t(i) * w_ + size_t(w_ - 1)] = 0.0;
      }
    }
    cond_ = pmax / pmin;
    factored_ = true;
  }

  std::vector<double> solve(std::vector<double> b) const {
    if (!factored_) throw std::logic_error("BandedLU: solve before factor");
    if (int(b.size()) != n_) throw std::invalid_argument("BandedLU: rhs size mismatch");
    for (int k = 0; k < n_; ++k) {
      const int ip = perm_[size_t(k)];
      if (ip != k) std::swap(b[size_t(k)], b[size_t(ip)]);
      const int last = std::min(n_ - 1, k + kl_);
      for (int i = k + 1; i <= last; ++i)
        b[size_t(i)] -= mult_[size_t(k) * kl_ + size_t(i - k - 1)] * b[size_t(k)];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = b[size_t(i)];
      const int m = std::min(w_ - 1, n_ - 1 - i);
      for (int c = 1; c <= m; ++c) s -= u_[size_t(i) * w_ + size_t(c)] * b[size_t(i + c)];
      b[size_t(i)] = s / u_[size_t(i) * w_];
    }
    return b;
  }

  double condition_indicator() const { return cond_; }

 private:
  int n_, kl_, ku_, w_;
  std::vector<double> ab_;    // input band (kept for multiply/residual checks)
  std::vector<double> u_;     // factored upper part, left-justified rows
  std::vector<double> mult_;  // elimination multipliers
  std::vector<int> perm_;
  double cond_ = 0.0;
  bool factored_ = false;
};

}  // namespace tfpo
