#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sharpeq/vec.hpp"

namespace sharpeq {

// Shared tolerances. tol_active decides whether a constraint is read as
// active when a cone is taken at a point; corpus points are exact rationals
// or simple closed forms, so 1e-8 separates active from inactive cleanly.
inline constexpr double kTolActive = 1e-8;
inline constexpr double kTolFeas = 1e-9;
inline constexpr double kTolMember = 1e-8;
inline constexpr double kDykstraTol = 1e-12;
inline constexpr int kMaxSweeps = 100000;

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// {x : <a,x> <= b}
struct Halfspace {
  Vec a;
  double b = 0.0;
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

// One convex piece: intersection of halfspaces, hyperplanes and at most one
// ball. Nonemptiness is certified by a stored witness point.
struct ConvexPiece {
  int dim = 0;
  std::vector<Halfspace> inequalities;
  std::vector<Halfspace> equalities;  // <a,x> = b
  std::optional<Ball> ball;
  Vec witness;

  static ConvexPiece make(int dim, std::vector<Halfspace> ineqs, std::vector<Halfspace> eqs,
                          std::optional<Ball> ball, Vec witness);
  static ConvexPiece box(const Vec& lo, const Vec& hi);  // +/- inf entries drop the bound
  static ConvexPiece point(const Vec& p);

  bool contains(const Vec& x, double tol = kTolMember) const;
  // Largest constraint violation at x (0 when inside).
  double violation(const Vec& x) const;
};

// Finite union of convex pieces; the order of pieces is part of the value
// (projection ties break to the lowest index).
struct ClosedSet {
  std::vector<ConvexPiece> pieces;

  static ClosedSet of(std::vector<ConvexPiece> pieces);
  int dim() const { return pieces.front().dim; }
  bool contains(const Vec& x, double tol = kTolMember) const;
};

// Polyhedral cone {d : <a_i,d> <= 0} with cached generators (double
// description). Immutable after construction.
struct PolyCone {
  int dim = 0;
  std::vector<Vec> h_rows;
  std::vector<Vec> v_gens;

  static PolyCone from_h(int dim, std::vector<Vec> rows);
  static PolyCone all_space(int dim) { return from_h(dim, {}); }

  bool contains(const Vec& d, double tol = kTolFeas) const;
  bool is_all_space() const;
  // {-d : d in cone}
  PolyCone negated() const;
};

// Convex hull of finitely many vertices (redundant vertices permitted).
struct VPolytope {
  int dim = 0;
  std::vector<Vec> vertices;

  static VPolytope of(std::vector<Vec> vertices);
  static VPolytope point(const Vec& p) { return of({p}); }
  static VPolytope segment(const Vec& a, const Vec& b) { return of({a, b}); }

  VPolytope negated() const;
  VPolytope translated(const Vec& t) const;
};

// --- projections & distances ---------------------------------------------

// Exact projection onto a convex piece. Active-set enumeration when there is
// no ball; Dykstra refinement between the polyhedral part and the ball
// otherwise.
Vec project_piece(const ConvexPiece& piece, const Vec& x);

// Nearest point over all pieces; ties broken by lowest piece index.
std::pair<Vec, int> project_set(const ClosedSet& set, const Vec& x);

double dist(const ClosedSet& set, const Vec& x);

// Exact projection onto the convex hull of the vertices (face enumeration).
Vec project_polytope(const VPolytope& poly, const Vec& x);

// Exact projection onto a polyhedral cone by face enumeration.
Vec project_cone(const PolyCone& cone, const Vec& v);

// Cross-check projector: cyclic Dykstra over the cone's halfspaces.
Vec project_cone_dykstra(const PolyCone& cone, const Vec& v);

// --- cones ----------------------------------------------------------------

// Tangent cone of a convex piece at x (x must lie in the piece to
// tol_active); an interior x yields the all-space cone.
PolyCone tangent_cone_piece(const ConvexPiece& piece, const Vec& x);

// One tangent cone per piece containing x.
std::vector<PolyCone> tangent_cone_set(const ClosedSet& set, const Vec& x);

// Regular normal cone N^ of a union: intersection over containing pieces of
// the polar of the per-piece tangent cone.
PolyCone regular_normal_cone(const ClosedSet& set, const Vec& x);

PolyCone polar(const PolyCone& cone);

PolyCone intersect_cones(const PolyCone& a, const PolyCone& b);

// Index of the first piece containing x, or -1.
int piece_index_of(const ClosedSet& set, const Vec& x, double tol = kTolMember);

// --- set distance kernels -------------------------------------------------

struct SetDistance {
  double distance = 0.0;
  Vec polytope_point;
  Vec cone_point;
};

// Minimal distance between a polytope and a cone via alternating exact
// projections. Throws GeometryError on non-convergence (best iterate in the
// message).
SetDistance polytope_cone_distance(const VPolytope& poly, const PolyCone& cone);

// dist(z, P + K) via the shifted problem dist(z - P, K).
double minkowski_sum_distance(const Vec& z, const VPolytope& poly, const PolyCone& cone);

// true iff radius * g lies in P + K (to tol_mem) for every sampled unit g.
bool ball_in_sum(double radius, const VPolytope& poly, const PolyCone& cone,
                 const std::vector<Vec>& directions);

// Vertices of P intersected with the cone K (empty optional when the
// intersection is empty).
std::optional<VPolytope> intersect_polytope_cone(const VPolytope& poly, const PolyCone& cone);

// Hausdorff distance between two convex hulls; +inf when exactly one input
// is empty, 0 when both are.
double hull_hausdorff(const std::optional<VPolytope>& a, const std::optional<VPolytope>& b);

// Vertices of a polyhedral piece (ignores the ball except as a feasibility
// filter; corpus pieces that need vertices are polyhedral).
std::vector<Vec> piece_vertices(const ConvexPiece& piece);

// Sampled unit directions: {-1,+1} in 1-D, uniform angles in 2-D, a
// Fibonacci sphere in 3-D/4-D. A sampled certificate, not a proof.
std::vector<Vec> unit_directions(int dim, int count_2d = 64, int count_3d = 200);

}  // namespace sharpeq
