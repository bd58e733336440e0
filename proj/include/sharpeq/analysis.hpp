#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sharpeq/geometry.hpp"
#include "sharpeq/vec.hpp"

namespace sharpeq {

// Smooth scalar expression over a fixed atom set: constants, coordinates,
// +, -, *, negation, sin, cos, exp, log(1+.), integer powers. Values and
// gradients are evaluated by forward recursion; trees are immutable and
// shared freely.
struct ExprNode;

struct Expr {
  std::shared_ptr<const ExprNode> node;

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
};

Expr ex_const(double c);
Expr ex_coord(int i);
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator-(Expr a);
Expr ex_sin(Expr a);
Expr ex_cos(Expr a);
Expr ex_exp(Expr a);
Expr ex_log1p(Expr a);
Expr ex_pow(Expr a, int p);

// The subdifferential of a piecewise function is the convex hull of active
// branch gradients; it is represented by its (possibly redundant) vertices.
using SubdiffSet = VPolytope;

// Piecewise-smooth function: smooth atoms combined under finitely nested
// sums and maxima. The only nonsmooth primitive is max; |e| is spelled
// max{e, -e}.
struct PwNode;

struct PiecewiseFn {
  std::shared_ptr<const PwNode> node;

  double value(const Vec& x) const;
  // Convex hull of the gradients of all branches active within tol_active,
  // with sums realized as Minkowski sums on vertices.
  SubdiffSet subdiff(const Vec& x) const;
  // Distance from x to the nearest branch switch, measured in branch values
  // (minimum value gap at any max node; +inf for smooth functions).
  double kink_gap(const Vec& x) const;
};

PiecewiseFn pw_atom(Expr e);
PiecewiseFn pw_sum(std::vector<PiecewiseFn> parts);
PiecewiseFn pw_max(std::vector<PiecewiseFn> parts);
PiecewiseFn pw_abs(Expr e);
PiecewiseFn pw_pos(Expr e);  // max{0, e}
PiecewiseFn pw_scale(double t, PiecewiseFn f);

struct GradientCheck {
  bool skipped = false;  // point too close to a branch switch
  double max_rel_error = 0.0;
  std::string note;
};

// Central-difference validation (h = 1e-6) of the analytic gradient at a
// smooth point; points within 1e-4 of a kink are skipped with a notice.
GradientCheck gradient_check(const PiecewiseFn& f, const Vec& x);

}  // namespace sharpeq
