#pragma once

// Interface-problem descriptions: piecewise coefficient fields, jump data,
// the monotone coordinate transform y(x) = int 1/a, and the built-in problem
// registry (example1_singular, example1_contrast, example2, example3).

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tfpo/quadrature.hpp"

namespace tfpo {

// Named closed forms usable in configs (kind = "expr").
inline const std::map<std::string, std::function<double(double)>>& expr_registry() {
  static const std::map<std::string, std::function<double(double)>> reg = {
      {"zero", [](double) { return 0.0; }},
      {"one", [](double) { return 1.0; }},
      {"sin_pi", [](double x) { return std::sin(M_PI * x); }},
      {"cos_pi", [](double x) { return std::cos(M_PI * x); }},
      {"bump", [](double x) { return std::exp(-std::pow((x - 0.5) / 0.15, 2)); }},
      {"ex1_b_left", [](double x) { return 2.0 * x + 1.0; }},
      {"ex1_b_right", [](double x) { return 2.0 * (1.0 - x) + 1.0; }},
      {"ex2_b_right", [](double x) { return 100.0 * (4.0 + 32.0 * x); }},
      {"ex3_b_left", [](double t) { return std::pow(1.0 - t * t, 2); }},
  };
  return reg;
}

// One scalar piece of a piecewise field. Univariate: 2D fields in scope vary
// along x1 only.
struct Piece {
  enum class Kind { Constant, Affine, Expr, Grid };
  Kind kind = Kind::Constant;
  double c0 = 0.0, c1 = 0.0;  // Constant: c0.  Affine: c0 + c1*t.
  std::string expr_id;
  std::vector<double> grid_x, grid_v;  // Grid: linear interpolation

  static Piece constant(double v) { return {Kind::Constant, v, 0.0, {}, {}, {}}; }
  static Piece affine(double intercept, double slope) {
    return {Kind::Affine, intercept, slope, {}, {}, {}};
  }
  static Piece expr(std::string id) {
    Piece p;
    p.kind = Kind::Expr;
    p.expr_id = std::move(id);
    expr_registry().at(p.expr_id);  // validate now
    return p;
  }
  static Piece grid(std::vector<double> xs, std::vector<double> vs) {
    if (xs.size() != vs.size() || xs.size() < 2)
      throw std::invalid_argument("grid piece needs matching xs/values, length >= 2");
    for (size_t i = 1; i < xs.size(); ++i)
      if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("grid piece xs must increase");
    Piece p;
    p.kind = Kind::Grid;
    p.grid_x = std::move(xs);
    p.grid_v = std::move(vs);
    return p;
  }

  double operator()(double t) const {
    switch (kind) {
      case Kind::Constant:
        return c0;
      case Kind::Affine:
        return c0 + c1 * t;
      case Kind::Expr:
        return expr_registry().at(expr_id)(t);
      case Kind::Grid: {
        if (t <= grid_x.front()) return grid_v.front();
        if (t >= grid_x.back()) return grid_v.back();
        const auto it = std::upper_bound(grid_x.begin(), grid_x.end(), t);
        const size_t i = size_t(it - grid_x.begin());
        const double w = (t - grid_x[i - 1]) / (grid_x[i] - grid_x[i - 1]);
        return grid_v[i - 1] + w * (grid_v[i] - grid_v[i - 1]);
      }
    }
    return 0.0;
  }
};

// Scalar field defined piece by piece between interface breakpoints.
// Evaluation exactly at a breakpoint requires an explicit side (-1 or +1):
// there is no silent averaging.
struct PiecewiseField {
  int dimension = 1;
  std::vector<double> breakpoints;  // interior interfaces along x (or x1)
  std::vector<Piece> pieces;        // size() == breakpoints.size() + 1

  static PiecewiseField uniform(Piece p, int dim = 1) {
    PiecewiseField f;
    f.dimension = dim;
    f.pieces = {std::move(p)};
    return f;
  }

  size_t piece_count() const { return pieces.size(); }

  // Index of the subdomain containing t; `side` breaks the tie on breakpoints.
  int piece_index(double t, int side = 0) const {
    for (size_t i = 0; i < breakpoints.size(); ++i) {
      if (t == breakpoints[i]) {
        if (side < 0) return int(i);
        if (side > 0) return int(i + 1);
        throw std::invalid_argument("piecewise field evaluated at an interface without a side");
      }
      if (t < breakpoints[i]) return int(i);
    }
    return int(breakpoints.size());
  }

  double eval(double t, int side = 0) const { return pieces[size_t(piece_index(t, side))](t); }
  // 2D fields vary along x1 only within the supported problem class.
  double eval2(double x1, double /*x2*/, int side = 0) const { return eval(x1, side); }
};

struct InterfaceProblem {
  int dimension = 1;
  std::array<double, 2> lo{0.0, 0.0}, hi{1.0, 1.0};  // 1D uses component 0
  std::vector<double> interfaces;  // 1D points; 2D: vertical lines x1 = value
  PiecewiseField a, b, f;
  Piece g_d = Piece::constant(0.0);  // jump data along the interface coordinate
  Piece g_n = Piece::constant(0.0);
  std::array<double, 2> bc{0.0, 0.0};  // 1D Dirichlet values at lo/hi
  PiecewiseField boundary_f;           // 2D: Dirichlet data on x2 = +-1, along x1

  size_t subdomain_count() const { return interfaces.size() + 1; }

  void validate() const {
    if (dimension != 1 && dimension != 2) throw std::invalid_argument("dimension must be 1 or 2");
    if (!(hi[0] > lo[0])) throw std::invalid_argument("empty domain");
    for (double g : interfaces)
      if (!(g > lo[0] && g < hi[0])) throw std::invalid_argument("interface outside domain");
    const size_t n = interfaces.size() + 1;
    if (a.pieces.size() != n || b.pieces.size() != n || f.pieces.size() != n)
      throw std::invalid_argument("field piece count must be one more than interface count");
    // a strictly positive on every subdomain (sampled check).
    for (size_t i = 0; i < n; ++i) {
      const double l = i == 0 ? lo[0] : interfaces[i - 1];
      const double r = i == n - 1 ? hi[0] : interfaces[i];
      for (int k = 0; k <= 8; ++k) {
        const double t = l + (r - l) * (k + 0.5) / 9.0;
        if (!(a.pieces[i](t) > 0.0))
          throw std::invalid_argument("coefficient a must be strictly positive");
        if (b.pieces[i](t) < -1e-12)
          throw std::invalid_argument("coefficient b must be nonnegative");
      }
    }
    if (interfaces.empty()) {
      // A discontinuous solution requires at least two subdomains.
      if (g_d(0.0) != 0.0 || g_n(0.0) != 0.0)
        throw std::invalid_argument("nonzero jump data requires an interface");
    }
  }

  // Subdomain bounds along x (or x1).
  std::pair<double, double> subdomain(size_t i) const {
    const double l = i == 0 ? lo[0] : interfaces[i - 1];
    const double r = i + 1 == subdomain_count() ? hi[0] : interfaces[i];
    return {l, r};
  }
};

// --- jump operators ---------------------------------------------------------

struct SideState {
  double value = 0.0;
  double deriv = 0.0;  // one-sided du/dx (du/dn along the interface normal)
};

// [u] = right - left; [a du/dn] = a_r u'_r - a_l u'_l, with the normal
// pointing from the left subdomain into the right one.
inline std::pair<double, double> jump_operators(const SideState& left, const SideState& right,
                                                double a_left, double a_right) {
  return {right.value - left.value, a_right * right.deriv - a_left * left.deriv};
}

// --- 1D coordinate transform ------------------------------------------------

// y(x) = int_alpha^x 1/a, strictly increasing, y(alpha) = 0. Piecewise
// constant/affine coefficients integrate analytically; other pieces use
// adaptive quadrature to 1e-12.
class Transform1d {
 public:
  Transform1d() = default;
  Transform1d(const InterfaceProblem& p) : Transform1d(p.a, p.lo[0], p.hi[0], p.interfaces) {}
  Transform1d(const PiecewiseField& a, double lo, double hi, std::vector<double> interfaces)
      : a_(a), x_nodes_(std::move(interfaces)) {
    x_nodes_.insert(x_nodes_.begin(), lo);
    x_nodes_.push_back(hi);
    y_nodes_.assign(x_nodes_.size(), 0.0);
    for (size_t i = 1; i < x_nodes_.size(); ++i)
      y_nodes_[i] = y_nodes_[i - 1] + piece_integral(i - 1, x_nodes_[i - 1], x_nodes_[i]);
  }

  double lo() const { return x_nodes_.front(); }
  double hi() const { return x_nodes_.back(); }
  double y_lo() const { return 0.0; }
  double y_hi() const { return y_nodes_.back(); }
  // y-image of the i-th node (0 = domain start, then interfaces, then end).
  double y_node(size_t i) const { return y_nodes_[i]; }
  size_t node_count() const { return x_nodes_.size(); }

  double to_y(double x) const {
    if (!(x >= lo() && x <= hi())) throw std::domain_error("transform: x outside domain");
    size_t i = 0;
    while (i + 2 < x_nodes_.size() && x > x_nodes_[i + 1]) ++i;
    return y_nodes_[i] + piece_integral(i, x_nodes_[i], x);
  }

  double to_x(double y, int side = 0) const {
    if (y < y_lo() - 1e-9 * span_y() || y > y_hi() + 1e-9 * span_y())
      throw std::domain_error("transform: y outside transformed range");
    y = std::min(std::max(y, y_lo()), y_hi());
    size_t i = 0;
    while (i + 2 < y_nodes_.size() && y > y_nodes_[i + 1]) ++i;
    if (side != 0) {
      for (size_t k = 1; k + 1 < y_nodes_.size(); ++k)
        if (y == y_nodes_[k]) i = side < 0 ? k - 1 : k;
    }
    return invert_in_piece(i, y);
  }

 private:
  double span_y() const { return std::max(y_nodes_.back(), 1e-300); }

  double piece_integral(size_t piece, double from, double to) const {
    const Piece& p = a_.pieces[piece];
    switch (p.kind) {
      case Piece::Kind::Constant:
        return (to - from) / p.c0;
      case Piece::Kind::Affine: {
        if (p.c1 == 0.0) return (to - from) / p.c0;
        return std::log((p.c0 + p.c1 * to) / (p.c0 + p.c1 * from)) / p.c1;
      }
      default:
        return integrate_adaptive([&](double t) { return 1.0 / p(t); }, from, to, 1e-12);
    }
  }

  double invert_in_piece(size_t piece, double y) const {
    const Piece& p = a_.pieces[piece];
    const double y0 = y_nodes_[piece];
    if (p.kind == Piece::Kind::Constant) return x_nodes_[piece] + (y - y0) * p.c0;
    // Monotone bisection on [x_i, x_{i+1}].
    double lo = x_nodes_[piece], hi = x_nodes_[piece + 1];
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (y0 + piece_integral(piece, x_nodes_[piece], mid) < y)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  PiecewiseField a_;
  std::vector<double> x_nodes_;
  std::vector<double> y_nodes_;
};

inline double transform_y_1d(const InterfaceProblem& p, double x) {
  return Transform1d(p).to_y(x);
}

// Transformed coefficients at a transformed point: c = a*b, F = a*f composed
// with the inverse map. 1D only (the 2D solver works cell-locally).
inline std::pair<double, double> transformed_coefficients(const InterfaceProblem& p, double y,
                                                          int side = 0) {
  if (p.dimension != 1)
    throw std::invalid_argument("transformed_coefficients: use the cell-local 2D machinery");
  const Transform1d tr(p);
  const double x = tr.to_x(y, side);
  const double av = p.a.eval(x, side);
  return {av * p.b.eval(x, side), av * p.f.eval(x, side)};
}

// --- registry ----------------------------------------------------------------

// A registry problem plus the slot the sampled input function feeds: the
// source term in 1D, the x2 = +-1 Dirichlet data in 2D.
struct ProblemSpec {
  std::string id;
  InterfaceProblem base;

  // The input function arrives as one piece per subdomain.
  InterfaceProblem instantiate(PiecewiseField input) const {
    InterfaceProblem p = base;
    if (input.pieces.size() != p.subdomain_count())
      throw std::invalid_argument("input function must provide one piece per subdomain");
    input.breakpoints = p.interfaces;
    input.dimension = p.dimension;
    if (p.dimension == 1)
      p.f = std::move(input);
    else
      p.boundary_f = std::move(input);
    p.validate();
    return p;
  }
};

inline ProblemSpec problem_registry(const std::string& id) {
  ProblemSpec s;
  s.id = id;
  InterfaceProblem& p = s.base;
  if (id == "example1_singular" || id == "example1_contrast") {
    p.dimension = 1;
    p.lo = {0.0, 0.0};
    p.hi = {1.0, 1.0};
    p.interfaces = {0.5};
    if (id == "example1_singular")
      p.a = {1, {0.5}, {Piece::constant(1e-4), Piece::constant(1e-4)}};
    else
      p.a = {1, {0.5}, {Piece::constant(1.0), Piece::constant(1e-4)}};
    p.b = {1, {0.5}, {Piece::expr("ex1_b_left"), Piece::expr("ex1_b_right")}};
    p.f = {1, {0.5}, {Piece::constant(0.0), Piece::constant(0.0)}};
    p.g_d = Piece::constant(0.0);
    p.g_n = Piece::constant(0.0);
  } else if (id == "example2") {
    p.dimension = 1;
    p.lo = {0.0, 0.0};
    p.hi = {1.0, 1.0};
    p.interfaces = {0.5};
    p.a = {1, {0.5}, {Piece::constant(1.0), Piece::constant(1.0)}};
    p.b = {1, {0.5}, {Piece::constant(5000.0), Piece::expr("ex2_b_right")}};
    p.f = {1, {0.5}, {Piece::constant(0.0), Piece::constant(0.0)}};
    p.g_d = Piece::constant(1.0);
    p.g_n = Piece::constant(1.0);
  } else if (id == "example3") {
    p.dimension = 2;
    p.lo = {-1.0, -1.0};
    p.hi = {1.0, 1.0};
    p.interfaces = {0.0};
    p.a = {2, {0.0}, {Piece::constant(1e-3), Piece::constant(1e-3)}};
    p.b = {2, {0.0}, {Piece::expr("ex3_b_left"), Piece::constant(1e-3)}};
    p.f = {2, {0.0}, {Piece::constant(0.0), Piece::constant(0.0)}};
    p.g_d = Piece::constant(1.0);
    p.g_n = Piece::constant(0.0);
    p.boundary_f = {2, {0.0}, {Piece::constant(0.0), Piece::constant(0.0)}};
  } else {
    throw std::invalid_argument("unknown registry problem: " + id);
  }
  return s;
}

// --- config loading -----------------------------------------------------------

namespace detail {

inline Piece piece_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Piece::constant(j.get<double>());
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return Piece::constant(j.at("value").get<double>());
  if (kind == "affine")
    return Piece::affine(j.value("c0", 0.0), j.value("c1", 0.0));
  if (kind == "expr") return Piece::expr(j.at("id").get<std::string>());
  if (kind == "grid")
    return Piece::grid(j.at("xs").get<std::vector<double>>(),
                       j.at("values").get<std::vector<double>>());
  throw std::invalid_argument("unknown piece kind: " + kind);
}

inline PiecewiseField field_from_json(const nlohmann::json& j, int dim,
                                      const std::vector<double>& interfaces) {
  PiecewiseField f;
  f.dimension = dim;
  f.breakpoints = interfaces;
  const size_t n = interfaces.size() + 1;
  if (j.is_number()) {
    for (size_t i = 0; i < n; ++i) f.pieces.push_back(Piece::constant(j.get<double>()));
    return f;
  }
  std::vector<nlohmann::json> items;
  if (j.is_array()) {
    items.assign(j.begin(), j.end());
  } else if (j.contains("kind")) {
    items.push_back(j);  // a bare piece applies to every subdomain
  } else if (j.contains("pieces")) {
    for (const auto& e : j.at("pieces")) items.push_back(e);
  } else {
    for (size_t i = 1; j.contains("piece" + std::to_string(i)); ++i)
      items.push_back(j.at("piece" + std::to_string(i)));
  }
  if (items.size() == 1)
    items.assign(n, items[0]);
  if (items.size() != n)
    throw std::invalid_argument("field needs one piece per subdomain");
  for (const auto& e : items) f.pieces.push_back(piece_from_json(e));
  return f;
}

}  // namespace detail

// Build a problem from a TOML/JSON config. Either `problem = "<registry id>"`
// plus an `f` field, or fully explicit keys domain/interfaces/a/b/g_d/g_n/bc/f.
inline InterfaceProblem problem_from_config(const nlohmann::json& cfg) {
  if (cfg.contains("problem")) {
    const ProblemSpec spec = problem_registry(cfg.at("problem").get<std::string>());
    PiecewiseField input;
    if (cfg.contains("f"))
      input = detail::field_from_json(cfg.at("f"), spec.base.dimension, spec.base.interfaces);
    else
      input = detail::field_from_json(nlohmann::json(0.0), spec.base.dimension, spec.base.interfaces);
    input.breakpoints.clear();  // instantiate() re-applies them
    return spec.instantiate(input);
  }
  InterfaceProblem p;
  p.dimension = cfg.value("dim", 1);
  const auto dom = cfg.at("domain").get<std::vector<double>>();
  if (p.dimension == 1) {
    if (dom.size() != 2) throw std::invalid_argument("1D domain needs [lo, hi]");
    p.lo = {dom[0], 0.0};
    p.hi = {dom[1], 1.0};
  } else {
    if (dom.size() != 4) throw std::invalid_argument("2D domain needs [x1lo, x1hi, x2lo, x2hi]");
    p.lo = {dom[0], dom[2]};
    p.hi = {dom[1], dom[3]};
  }
  if (cfg.contains("interfaces")) p.interfaces = cfg.at("interfaces").get<std::vector<double>>();
  p.a = detail::field_from_json(cfg.at("a"), p.dimension, p.interfaces);
  p.b = detail::field_from_json(cfg.at("b"), p.dimension, p.interfaces);
  p.f = detail::field_from_json(cfg.contains("f") ? cfg.at("f") : nlohmann::json(0.0),
                                p.dimension, p.interfaces);
  if (cfg.contains("g_d")) p.g_d = detail::piece_from_json(cfg.at("g_d"));
  if (cfg.contains("g_n")) p.g_n = detail::piece_from_json(cfg.at("g_n"));
  if (cfg.contains("bc")) {
    const auto bc = cfg.at("bc").get<std::vector<double>>();
    if (bc.size() != 2) throw std::invalid_argument("bc needs [lo, hi]");
    p.bc = {bc[0], bc[1]};
  }
  if (p.dimension == 2)
    p.boundary_f = detail::field_from_json(
        cfg.contains("boundary_f") ? cfg.at("boundary_f") : nlohmann::json(0.0), 2, p.interfaces);
  p.validate();
  return p;
}

}  // namespace tfpo
