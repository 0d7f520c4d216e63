#pragma once

// Ground-truth 1D solver. After the y(x) = int 1/a transform the equation is
// -u'' + c(y) u = F(y); on each mesh subinterval c is replaced by its affine
// endpoint interpolant c_h and the expansion u_h = alpha A1 + beta A2 + v_p
// uses exact homogeneous solutions of -v'' + c_h v = 0 (monomials,
// exponentials, or Airy functions depending on c_h), normalized to unit max
// so the singular-perturbation regime stays representable. Coefficients come
// from a banded linear system enforcing boundary values plus continuity or
// prescribed jumps of u and u_y at the nodes.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tfpo/banded.hpp"
#include "tfpo/problem.hpp"
#include "tfpo/quadrature.hpp"
#include "tfpo/specialfn.hpp"

namespace tfpo {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Mesh1d {
  std::vector<double> nodes;        // y-space, strictly increasing
  std::vector<bool> interface_flag;  // per node (endpoints excluded)
  std::vector<int> sub_domain;      // per subinterval: owning subdomain index
  std::vector<double> interface_x;  // x-coordinate for flagged nodes (else NaN)

  size_t subinterval_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

// Uniform-in-x nodes per subdomain mapped through the transform; interface
// images are always nodes.
inline Mesh1d make_mesh_1d(const InterfaceProblem& p, const Transform1d& tr,
                           int nodes_per_subdomain) {
  if (nodes_per_subdomain < 3)
    throw std::invalid_argument("mesh needs at least 3 nodes per subdomain");
  Mesh1d m;
  const size_t nsub = p.subdomain_count();
  for (size_t s = 0; s < nsub; ++s) {
    const auto [xl, xr] = p.subdomain(s);
    for (int k = (s == 0 ? 0 : 1); k < nodes_per_subdomain; ++k) {
      const double x = (k == nodes_per_subdomain - 1)
                           ? xr
                           : xl + (xr - xl) * k / double(nodes_per_subdomain - 1);
      m.nodes.push_back(tr.to_y(x));
      const bool iface = (k == nodes_per_subdomain - 1) && (s + 1 < nsub);
      m.interface_flag.push_back(iface);
      m.interface_x.push_back(iface ? xr : std::numeric_limits<double>::quiet_NaN());
      if (k > 0) m.sub_domain.push_back(int(s));
    }
  }
  m.interface_flag.front() = false;
  m.interface_flag.back() = false;
  for (size_t i = 1; i < m.nodes.size(); ++i)
    if (!(m.nodes[i] > m.nodes[i - 1]))
      throw NumericalError("mesh nodes not strictly increasing after transform");
  return m;
}

// --- local basis --------------------------------------------------------------

struct LocalBasis {
  enum class Case { Polynomial, Exponential, Airy };
  Case kind = Case::Polynomial;
  double y_lo = 0, y_hi = 0;
  double slope = 0, intercept = 0;  // c_h(y) = intercept + slope * y

  // Exponential: decay rate
  double lambda = 0;
  // Airy: t(y) = kappa * y + t_shift, kappa = cbrt(slope)
  double kappa = 0, t_shift = 0;
  double t_min = 0, t_max = 0;
  double ai_anchor = 0, bi_anchor = 0;      // scaled values at t_min / t_max
  double zeta_min = 0, zeta_max = 0;
  // Polynomial normalization
  double poly_norm2 = 1;

  double length() const { return y_hi - y_lo; }
  double c_h(double y) const { return intercept + slope * y; }

  // Normalized basis pair and d/dy derivatives at y: {A1, A1', A2, A2'}.
  std::array<double, 4> eval(double y) const {
    switch (kind) {
      case Case::Polynomial:
        return {1.0, 0.0, y / poly_norm2, 1.0 / poly_norm2};
      case Case::Exponential: {
        const double e1 = std::exp(lambda * (y - y_hi));
        const double e2 = std::exp(-lambda * (y - y_lo));
        return {e1, lambda * e1, e2, -lambda * e2};
      }
      case Case::Airy: {
        const double t = kappa * y + t_shift;
        const AiryPair a = airy(t, true);
        const double z = airy_zeta(t);
        const double f1 = std::exp(std::min(0.0, zeta_min - z));
        const double f2 = std::exp(std::min(0.0, z - zeta_max));
        return {a.ai / ai_anchor * f1, a.ai_prime / ai_anchor * f1 * kappa,
                a.bi / bi_anchor * f2, a.bi_prime / bi_anchor * f2 * kappa};
      }
    }
    return {};
  }
};

// Builds the basis from the affine interpolant of c at the subinterval ends.
inline LocalBasis build_local_basis(double c_lo, double c_hi, double y_lo, double y_hi) {
  if (!(y_hi > y_lo)) throw std::invalid_argument("local basis: degenerate subinterval");
  if (c_lo < -1e-12 || c_hi < -1e-12)
    throw std::invalid_argument("local basis: negative reaction coefficient");
  c_lo = std::max(c_lo, 0.0);
  c_hi = std::max(c_hi, 0.0);

  LocalBasis b;
  b.y_lo = y_lo;
  b.y_hi = y_hi;
  const double len = y_hi - y_lo;
  b.slope = (c_hi - c_lo) / len;
  b.intercept = c_lo - b.slope * y_lo;
  const double c_mid = 0.5 * (c_lo + c_hi);

  if (c_lo == 0.0 && c_hi == 0.0) {
    b.kind = LocalBasis::Case::Polynomial;
    b.poly_norm2 = std::max(std::max(std::abs(y_lo), std::abs(y_hi)), 1e-300);
    return b;
  }
  if (std::abs(b.slope) * len < 1e-8 * std::abs(c_mid)) {
    // Near-zero slope: the Airy argument would blow up; freeze c at the midpoint.
    b.kind = LocalBasis::Case::Exponential;
    b.slope = 0.0;
    b.intercept = c_mid;
    b.lambda = std::sqrt(c_mid);
    return b;
  }
  b.kind = LocalBasis::Case::Airy;
  b.kappa = std::cbrt(b.slope);
  b.t_shift = b.intercept / (b.kappa * b.kappa);
  const double t_a = b.kappa * y_lo + b.t_shift;
  const double t_b = b.kappa * y_hi + b.t_shift;
  b.t_min = std::min(t_a, t_b);
  b.t_max = std::max(t_a, t_b);
  const AiryPair lo = airy(b.t_min, true);
  const AiryPair hi = airy(b.t_max, true);
  b.ai_anchor = lo.ai;
  b.bi_anchor = hi.bi;
  b.zeta_min = airy_zeta(b.t_min);
  b.zeta_max = airy_zeta(b.t_max);
  return b;
}

// --- particular term -----------------------------------------------------------

namespace detail {

// Monomial coefficients (in the scaled coordinate on [-1,1]) of the degree-7
// interpolant through the 8 Gauss-Legendre nodes.
inline std::array<double, 8> fit_poly8(const std::array<double, 8>& values) {
  double m[8][9];
  for (int r = 0; r < 8; ++r) {
    const double x = GaussLegendre8::nodes[size_t(r)];
    double pw = 1.0;
    for (int c = 0; c < 8; ++c) {
      m[r][c] = pw;
      pw *= x;
    }
    m[r][8] = values[size_t(r)];
  }
  for (int k = 0; k < 8; ++k) {  // small dense solve, partial pivoting
    int ip = k;
    for (int r = k + 1; r < 8; ++r)
      if (std::abs(m[r][k]) > std::abs(m[ip][k])) ip = r;
    if (ip != k)
      for (int c = k; c < 9; ++c) std::swap(m[k][c], m[ip][c]);
    for (int r = k + 1; r < 8; ++r) {
      const double f = m[r][k] / m[k][k];
      for (int c = k; c < 9; ++c) m[r][c] -= f * m[k][c];
    }
  }
  std::array<double, 8> coef{};
  for (int r = 7; r >= 0; --r) {
    double s = m[r][8];
    for (int c = r + 1; c < 8; ++c) s -= m[r][c] * coef[size_t(c)];
    coef[size_t(r)] = s / m[r][r];
  }
  return coef;
}

}  // namespace detail

// Particular solution of -v'' + c_h v = F on the subinterval, chosen bounded:
// polynomial/exponential cases integrate the degree-7 interpolant of F
// analytically; the Airy case uses variation of parameters with the decaying
// Green-type kernel and 8-point Gauss-Legendre on each side of the evaluation
// point. The two homogeneous degrees of freedom stay free.
struct ParticularTerm {
  LocalBasis basis;  // own copy: keeps the term valid across container moves
  std::array<double, 8> coef{};  // interpolant of F in the scaled coordinate
  double y_mid = 0, h_half = 1;

  template <class F>
  static ParticularTerm build(const LocalBasis& b, const F& source_of_y) {
    ParticularTerm p;
    p.basis = b;
    p.y_mid = 0.5 * (b.y_lo + b.y_hi);
    p.h_half = 0.5 * (b.y_hi - b.y_lo);
    if (p.h_half < 1e-14)
      throw NumericalError("particular term: degenerate subinterval");
    std::array<double, 8> fv{};
    for (int i = 0; i < 8; ++i)
      fv[size_t(i)] = source_of_y(p.y_mid + p.h_half * GaussLegendre8::nodes[size_t(i)]);
    p.coef = detail::fit_poly8(fv);
    return p;
  }

  double source_at(double y) const {  // interpolant value
    const double m = (y - y_mid) / h_half;
    double s = 0.0, pw = 1.0;
    for (int k = 0; k < 8; ++k) {
      s += coef[size_t(k)] * pw;
      pw *= m;
    }
    return s;
  }

  // (value, d/dy)
  std::pair<double, double> eval(double y) const {
    const LocalBasis& b = basis;
    const double m = (y - y_mid) / h_half;
    switch (b.kind) {
      case LocalBasis::Case::Polynomial: {
        // -v'' = F: v = -double integral of the interpolant
        double v = 0.0, d = 0.0;
        double pw = m * m;  // m^(k+2) progression
        double pwd = m;
        for (int k = 0; k < 8; ++k) {
          v += coef[size_t(k)] * (-h_half * h_half) * pw / ((k + 1) * (k + 2));
          d += coef[size_t(k)] * (-h_half) * pwd / (k + 1);
          pw *= m;
          pwd *= m;
        }
        return {v, d};
      }
      case LocalBasis::Case::Exponential: {
        // q_k solves -q'' + c q = m^k; recursion in the scaled coordinate
        const double c = b.intercept;
        const double h2 = h_half * h_half;
        std::array<double, 8> q{}, qd{};
        double v = 0.0, d = 0.0;
        double pw = 1.0, pwd = 0.0;
        for (int k = 0; k < 8; ++k) {
          q[size_t(k)] = pw / c;
          qd[size_t(k)] = (k >= 1 ? k * pwd : 0.0) / c;
          if (k >= 2) {
            q[size_t(k)] += double(k) * (k - 1) / (c * h2) * q[size_t(k - 2)];
            qd[size_t(k)] += double(k) * (k - 1) / (c * h2) * qd[size_t(k - 2)];
          }
          v += coef[size_t(k)] * q[size_t(k)];
          d += coef[size_t(k)] * qd[size_t(k)];
          pwd = pw;
          pw *= m;
        }
        return {v, d / h_half};
      }
      case LocalBasis::Case::Airy:
        return eval_airy(y);
    }
    return {0.0, 0.0};
  }

 private:
  std::pair<double, double> eval_airy(double y) const {
    const LocalBasis& b = basis;
    const double t = b.kappa * y + b.t_shift;
    const AiryPair at = airy(t, true);
    const double zt = airy_zeta(t);
    const double k2 = b.kappa * b.kappa;

    // integral over [t_min, t]: kernel pi * Ai(t) Bi(tau) F / kappa^2
    double ia = 0.0, ib = 0.0;  // against Bi (below t) and Ai (above t)
    const double lo_len = t - b.t_min, hi_len = b.t_max - t;
    for (int i = 0; i < 8; ++i) {
      if (lo_len > 0) {
        const double tau = b.t_min + lo_len * 0.5 * (GaussLegendre8::nodes[size_t(i)] + 1.0);
        const AiryPair pa = airy(tau, true);
        const double f = source_at((tau - b.t_shift) / b.kappa);
        ia += GaussLegendre8::weights[size_t(i)] * 0.5 * lo_len * pa.bi * f *
              std::exp(std::min(0.0, airy_zeta(tau) - zt));
      }
      if (hi_len > 0) {
        const double tau = t + hi_len * 0.5 * (GaussLegendre8::nodes[size_t(i)] + 1.0);
        const AiryPair pa = airy(tau, true);
        const double f = source_at((tau - b.t_shift) / b.kappa);
        ib += GaussLegendre8::weights[size_t(i)] * 0.5 * hi_len * pa.ai * f *
              std::exp(std::min(0.0, zt - airy_zeta(tau)));
      }
    }
    const double v = M_PI / k2 * (at.ai * ia + at.bi * ib);
    const double d = M_PI / k2 * (at.ai_prime * ia + at.bi_prime * ib) * b.kappa;
    return {v, d};
  }
};

// --- solution -------------------------------------------------------------------

struct TfpmSolution1d {
  InterfaceProblem problem;
  Transform1d transform;
  Mesh1d mesh;
  std::vector<LocalBasis> basis;       // per subinterval
  std::vector<ParticularTerm> part;    // per subinterval (bases re-pointed)
  std::vector<double> alpha, beta;
  double solve_residual = 0.0;
  double condition_indicator = 0.0;

  // u_h and du_h/dy on subinterval j at y.
  std::pair<double, double> eval_sub(size_t j, double y) const {
    const auto a = basis[j].eval(y);
    const auto [pv, pd] = part[j].eval(y);
    return {alpha[j] * a[0] + beta[j] * a[2] + pv, alpha[j] * a[1] + beta[j] * a[3] + pd};
  }

  size_t locate(double y, int side) const {
    const auto& ns = mesh.nodes;
    if (y < ns.front() || y > ns.back()) throw std::domain_error("evaluate: outside the domain");
    size_t j = size_t(std::upper_bound(ns.begin(), ns.end(), y) - ns.begin());
    if (j > 0) --j;
    // upper_bound guarantees ns[j] <= y < ns[j+1]; an exact hit is only at j.
    if (j > 0 && j + 1 < ns.size() && y == ns[j]) {
      if (mesh.interface_flag[j] && side == 0)
        throw std::invalid_argument("evaluate: interface point needs a side");
      j = (side < 0) ? j - 1 : j;
    }
    if (j >= mesh.subinterval_count()) j = mesh.subinterval_count() - 1;
    return j;
  }

  double evaluate(double x, int side = 0) const {
    const double y = transform.to_y(x);
    return eval_sub(locate(y, side), y).first;
  }

  // du/dy = a du/dx (the transformed flux)
  double evaluate_flux(double x, int side = 0) const {
    const double y = transform.to_y(x);
    return eval_sub(locate(y, side), y).second;
  }
};

inline TfpmSolution1d assemble_and_solve(const InterfaceProblem& p, Mesh1d mesh,
                                         const Transform1d& tr) {
  p.validate();
  if (p.dimension != 1) throw std::invalid_argument("assemble_and_solve: 1D problems only");
  const size_t J = mesh.subinterval_count();
  if (J < 2) throw std::invalid_argument("mesh too coarse");

  TfpmSolution1d sol;
  sol.problem = p;
  sol.transform = tr;
  sol.mesh = std::move(mesh);

  // Per-subinterval basis + particular term.
  sol.basis.reserve(J);
  sol.part.reserve(J);
  for (size_t j = 0; j < J; ++j) {
    const int sd = sol.mesh.sub_domain[j];
    const double yl = sol.mesh.nodes[j], yr = sol.mesh.nodes[j + 1];
    const auto cF = [&](double y) {
      const double x = sol.transform.to_x(y);
      const double av = p.a.pieces[size_t(sd)](x);
      return std::pair<double, double>{av * p.b.pieces[size_t(sd)](x),
                                       av * p.f.pieces[size_t(sd)](x)};
    };
    const double cl = cF(yl).first, cr = cF(yr).first;
    sol.basis.push_back(build_local_basis(cl, cr, yl, yr));
    sol.part.push_back(
        ParticularTerm::build(sol.basis.back(), [&](double y) { return cF(y).second; }));
  }
  // Banded system: unknowns (alpha_1, beta_1, ..., alpha_J, beta_J).
  const int n = int(2 * J);
  BandedLU sys(n, 2, 2);
  std::vector<double> rhs(size_t(n), 0.0);

  const auto basis_at = [&](size_t j, double y) { return sol.basis[j].eval(y); };
  const auto part_at = [&](size_t j, double y) { return sol.part[j].eval(y); };

  {  // left boundary: u(y_0) = bc[0]
    const double y0 = sol.mesh.nodes.front();
    const auto a = basis_at(0, y0);
    sys.at(0, 0) = a[0];
    sys.at(0, 1) = a[2];
    rhs[0] = p.bc[0] - part_at(0, y0).first;
  }
  for (size_t k = 1; k < J; ++k) {  // interior nodes
    const double y = sol.mesh.nodes[k];
    const auto al = basis_at(k - 1, y);
    const auto ar = basis_at(k, y);
    const auto pl = part_at(k - 1, y);
    const auto pr = part_at(k, y);
    double gd = 0.0, gn = 0.0;
    if (sol.mesh.interface_flag[k]) {
      const double xi = sol.mesh.interface_x[k];
      gd = p.g_d(xi);
      gn = p.g_n(xi);
    }
    const int rv = int(2 * k - 1), rd = int(2 * k);
    const int cl0 = int(2 * (k - 1)), cr0 = int(2 * k);
    sys.at(rv, cl0) = -al[0];
    sys.at(rv, cl0 + 1) = -al[2];
    sys.at(rv, cr0) = ar[0];
    sys.at(rv, cr0 + 1) = ar[2];
    rhs[size_t(rv)] = gd - (pr.first - pl.first);
    sys.at(rd, cl0) = -al[1];
    sys.at(rd, cl0 + 1) = -al[3];
    sys.at(rd, cr0) = ar[1];
    sys.at(rd, cr0 + 1) = ar[3];
    rhs[size_t(rd)] = gn - (pr.second - pl.second);
  }
  {  // right boundary
    const double yJ = sol.mesh.nodes.back();
    const auto a = basis_at(J - 1, yJ);
    sys.at(n - 1, n - 2) = a[0];
    sys.at(n - 1, n - 1) = a[2];
    rhs[size_t(n - 1)] = p.bc[1] - part_at(J - 1, yJ).first;
  }

  std::vector<double> rhs_copy = rhs;
  sys.factor();
  std::vector<double> sol_vec = sys.solve(rhs);
  sol.condition_indicator = sys.condition_indicator();

  {  // relative residual of the linear solve
    const std::vector<double> ax = sys.multiply(sol_vec);
    double rmax = 0.0, bmax = 0.0, xmax = 0.0, amax = 0.0;
    for (size_t i = 0; i < ax.size(); ++i) {
      rmax = std::max(rmax, std::abs(ax[i] - rhs_copy[i]));
      bmax = std::max(bmax, std::abs(rhs_copy[i]));
      xmax = std::max(xmax, std::abs(sol_vec[i]));
    }
    for (int i = 0; i < n; ++i)
      for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j)
        amax = std::max(amax, std::abs(sys.get(i, j)));
    sol.solve_residual = rmax / std::max(bmax + amax * xmax, 1e-300);
    if (!(sol.solve_residual < 1e-10))
      throw NumericalError("tfpm1d: linear solve residual " + std::to_string(sol.solve_residual));
  }

  sol.alpha.resize(J);
  sol.beta.resize(J);
  for (size_t j = 0; j < J; ++j) {
    sol.alpha[j] = sol_vec[2 * j];
    sol.beta[j] = sol_vec[2 * j + 1];
  }
  return sol;
}

inline TfpmSolution1d solve_1d(const InterfaceProblem& p, int nodes_per_subdomain = 2049) {
  const Transform1d tr(p);
  Mesh1d mesh = make_mesh_1d(p, tr, nodes_per_subdomain);
  return assemble_and_solve(p, std::move(mesh), tr);
}

}  // namespace tfpo
