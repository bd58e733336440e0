#include "sharpeq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sharpeq {

// --- smooth expressions ----------------------------------------------------

enum class ExKind { Const, Coord, Add, Sub, Mul, Neg, Sin, Cos, Exp, Log1p, Pow };

struct ExprNode {
  ExKind kind;
  double cval = 0.0;
  int index = 0;  // coordinate index or integer power
  std::shared_ptr<const ExprNode> a, b;
};

namespace {

Expr wrap(ExKind kind, double cval, int index, Expr a = {}, Expr b = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->cval = cval;
  n->index = index;
  n->a = a.node;
  n->b = b.node;
  return Expr{std::move(n)};
}

struct Dual {
  double v;
  Vec g;
};

Dual eval(const ExprNode& n, const Vec& x) {
  const int dim = static_cast<int>(x.size());
  switch (n.kind) {
    case ExKind::Const:
      return {n.cval, zeros(dim)};
    case ExKind::Coord:
      return {x[static_cast<std::size_t>(n.index)], unit(dim, n.index)};
    case ExKind::Add: {
      Dual a = eval(*n.a, x), b = eval(*n.b, x);
      return {a.v + b.v, add(a.g, b.g)};
    }
    case ExKind::Sub: {
      Dual a = eval(*n.a, x), b = eval(*n.b, x);
      return {a.v - b.v, sub(a.g, b.g)};
    }
    case ExKind::Mul: {
      Dual a = eval(*n.a, x), b = eval(*n.b, x);
      return {a.v * b.v, add(scale(b.v, a.g), scale(a.v, b.g))};
    }
    case ExKind::Neg: {
      Dual a = eval(*n.a, x);
      return {-a.v, negate(a.g)};
    }
    case ExKind::Sin: {
      Dual a = eval(*n.a, x);
      return {std::sin(a.v), scale(std::cos(a.v), a.g)};
    }
    case ExKind::Cos: {
      Dual a = eval(*n.a, x);
      return {std::cos(a.v), scale(-std::sin(a.v), a.g)};
    }
    case ExKind::Exp: {
      Dual a = eval(*n.a, x);
      double e = std::exp(a.v);
      return {e, scale(e, a.g)};
    }
    case ExKind::Log1p: {
      Dual a = eval(*n.a, x);
      return {std::log1p(a.v), scale(1.0 / (1.0 + a.v), a.g)};
    }
    case ExKind::Pow: {
      Dual a = eval(*n.a, x);
      double v = std::pow(a.v, n.index);
      double dv = n.index * std::pow(a.v, n.index - 1);
      return {v, scale(dv, a.g)};
    }
  }
  return {0.0, zeros(dim)};
}

}  // namespace

double Expr::value(const Vec& x) const { return eval(*node, x).v; }
Vec Expr::gradient(const Vec& x) const { return eval(*node, x).g; }

Expr ex_const(double c) { return wrap(ExKind::Const, c, 0); }
Expr ex_coord(int i) { return wrap(ExKind::Coord, 0.0, i); }
Expr operator+(Expr a, Expr b) { return wrap(ExKind::Add, 0.0, 0, a, b); }
Expr operator-(Expr a, Expr b) { return wrap(ExKind::Sub, 0.0, 0, a, b); }
Expr operator*(Expr a, Expr b) { return wrap(ExKind::Mul, 0.0, 0, a, b); }
Expr operator-(Expr a) { return wrap(ExKind::Neg, 0.0, 0, a); }
Expr ex_sin(Expr a) { return wrap(ExKind::Sin, 0.0, 0, a); }
Expr ex_cos(Expr a) { return wrap(ExKind::Cos, 0.0, 0, a); }
Expr ex_exp(Expr a) { return wrap(ExKind::Exp, 0.0, 0, a); }
Expr ex_log1p(Expr a) { return wrap(ExKind::Log1p, 0.0, 0, a); }
Expr ex_pow(Expr a, int p) { return wrap(ExKind::Pow, 0.0, p, a); }

// --- piecewise functions ---------------------------------------------------

enum class PwKind { Atom, Sum, Max };

struct PwNode {
  PwKind kind;
  Expr atom;
  double factor = 1.0;  // scalar multiplier on an atom's value/gradient
  std::vector<PiecewiseFn> parts;
};

namespace {

std::vector<Vec> minkowski_vertices(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  std::vector<Vec> out;
  for (const Vec& u : a)
    for (const Vec& v : b) out.push_back(add(u, v));
  return out;
}

std::vector<Vec> dedupe(std::vector<Vec> pts) {
  std::vector<Vec> out;
  for (Vec& p : pts) {
    bool found = false;
    for (const Vec& q : out)
      if (dist(q, p) <= 1e-12) {
        found = true;
        break;
      }
    if (!found) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Vec> subdiff_vertices(const PwNode& n, const Vec& x) {
  switch (n.kind) {
    case PwKind::Atom:
      return {scale(n.factor, n.atom.gradient(x))};
    case PwKind::Sum: {
      std::vector<Vec> acc{zeros(static_cast<int>(x.size()))};
      for (const PiecewiseFn& p : n.parts)
        acc = dedupe(minkowski_vertices(acc, subdiff_vertices(*p.node, x)));
      return acc;
    }
    case PwKind::Max: {
      double best = -std::numeric_limits<double>::infinity();
      std::vector<double> vals;
      for (const PiecewiseFn& p : n.parts) {
        vals.push_back(p.value(x));
        best = std::max(best, vals.back());
      }
      std::vector<Vec> hull;
      for (std::size_t i = 0; i < n.parts.size(); ++i)
        if (best - vals[i] <= kTolActive) {
          auto vs = subdiff_vertices(*n.parts[i].node, x);
          hull.insert(hull.end(), vs.begin(), vs.end());
        }
      return dedupe(std::move(hull));
    }
  }
  return {};
}

double kink_gap_rec(const PwNode& n, const Vec& x) {
  double gap = std::numeric_limits<double>::infinity();
  if (n.kind == PwKind::Max) {
    std::vector<double> vals;
    for (const PiecewiseFn& p : n.parts) vals.push_back(p.value(x));
    double best = *std::max_element(vals.begin(), vals.end());
    for (double v : vals)
      if (best - v > 0.0) gap = std::min(gap, best - v);
  }
  if (n.kind != PwKind::Atom)
    for (const PiecewiseFn& p : n.parts) gap = std::min(gap, kink_gap_rec(*p.node, x));
  return gap;
}

}  // namespace

double PiecewiseFn::value(const Vec& x) const {
  const PwNode& n = *node;
  switch (n.kind) {
    case PwKind::Atom:
      return n.factor * n.atom.value(x);
    case PwKind::Sum: {
      double s = 0.0;
      for (const PiecewiseFn& p : n.parts) s += p.value(x);
      return s;
    }
    case PwKind::Max: {
      double s = -std::numeric_limits<double>::infinity();
      for (const PiecewiseFn& p : n.parts) s = std::max(s, p.value(x));
      return s;
    }
  }
  return 0.0;
}

SubdiffSet PiecewiseFn::subdiff(const Vec& x) const {
  return VPolytope::of(subdiff_vertices(*node, x));
}

double PiecewiseFn::kink_gap(const Vec& x) const { return kink_gap_rec(*node, x); }

PiecewiseFn pw_atom(Expr e) {
  auto n = std::make_shared<PwNode>();
  n->kind = PwKind::Atom;
  n->atom = e;
  return PiecewiseFn{std::move(n)};
}

PiecewiseFn pw_sum(std::vector<PiecewiseFn> parts) {
  auto n = std::make_shared<PwNode>();
  n->kind = PwKind::Sum;
  n->parts = std::move(parts);
  return PiecewiseFn{std::move(n)};
}

PiecewiseFn pw_max(std::vector<PiecewiseFn> parts) {
  auto n = std::make_shared<PwNode>();
  n->kind = PwKind::Max;
  n->parts = std::move(parts);
  return PiecewiseFn{std::move(n)};
}

PiecewiseFn pw_abs(Expr e) { return pw_max({pw_atom(e), pw_atom(-e)}); }
PiecewiseFn pw_pos(Expr e) { return pw_max({pw_atom(ex_const(0.0)), pw_atom(e)}); }

PiecewiseFn pw_scale(double t, PiecewiseFn f) {
  const PwNode& n = *f.node;
  auto m = std::make_shared<PwNode>();
  m->kind = n.kind;
  if (n.kind == PwKind::Atom) {
    m->atom = n.atom;
    m->factor = n.factor * t;
  } else {
    if (n.kind == PwKind::Max && t < 0.0)
      throw GeometryError("pw_scale: negative scaling of a max node");
    for (const PiecewiseFn& p : n.parts) m->parts.push_back(pw_scale(t, p));
  }
  return PiecewiseFn{std::move(m)};
}

GradientCheck gradient_check(const PiecewiseFn& f, const Vec& x) {
  GradientCheck rep;
  if (f.kink_gap(x) < 1e-4) {
    rep.skipped = true;
    rep.note = "point within 1e-4 of a branch switch; finite differences unreliable";
    return rep;
  }
  SubdiffSet sd = f.subdiff(x);
  if (sd.vertices.size() != 1) {
    rep.skipped = true;
    rep.note = "subdifferential not a singleton at this point";
    return rep;
  }
  const Vec& g = sd.vertices.front();
  const double h = 1e-6;
  Vec fd = zeros(static_cast<int>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    fd[i] = (f.value(xp) - f.value(xm)) / (2.0 * h);
  }
  rep.max_rel_error = dist(fd, g) / std::max(1.0, norm(g));
  return rep;
}

}  // namespace sharpeq
