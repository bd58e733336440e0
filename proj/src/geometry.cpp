#include "sharpeq/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "sharpeq/linalg.hpp"

namespace sharpeq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// All subsets of {0..m-1} with size <= max_size, emitted through a callback.
template <typename F>
void for_subsets(int m, int max_size, F&& fn) {
  std::vector<int> idx;
  // iterative enumeration by bitmask is fine at m <= ~20 but we cap the
  // popcount to keep concatenated-row cones cheap
  if (m <= 20) {
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
      if (std::popcount(mask) > max_size) continue;
      idx.clear();
      for (int i = 0; i < m; ++i)
        if (mask & (1ul << i)) idx.push_back(i);
      fn(idx);
    }
    return;
  }
  throw GeometryError("for_subsets: too many rows (" + std::to_string(m) + ")");
}

std::vector<Vec> dedupe_directions(std::vector<Vec> rows) {
  std::vector<Vec> out;
  for (Vec& r : rows) {
    double nrm = norm(r);
    if (nrm <= 1e-12) continue;
    Vec u = scale(1.0 / nrm, r);
    bool dup = false;
    for (const Vec& q : out)
      if (dist(q, u) <= 1e-9) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(u));
  }
  return out;
}

std::vector<Vec> dedupe_points(std::vector<Vec> pts, double tol = 1e-9) {
  std::vector<Vec> out;
  for (Vec& p : pts) {
    bool dup = false;
    for (const Vec& q : out)
      if (dist(q, p) <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

// Generators of {d : <a_i,d> <= 0}: lineality space plus one candidate ray
// per one-dimensional face, brute force over row subsets (n <= 4).
std::vector<Vec> cone_generators(const std::vector<Vec>& rows_in, int dim) {
  std::vector<Vec> rows = dedupe_directions(rows_in);
  std::vector<Vec> lineality = linalg::null_basis(rows, dim);
  std::vector<Vec> gens;
  for (const Vec& l : lineality) {
    gens.push_back(l);
    gens.push_back(negate(l));
  }
  auto feasible = [&](const Vec& v) {
    for (const Vec& a : rows)
      if (dot(a, v) > 1e-9) return false;
    return true;
  };
  for_subsets(static_cast<int>(rows.size()), dim, [&](const std::vector<int>& idx) {
    std::vector<Vec> sys;
    for (int i : idx) sys.push_back(rows[static_cast<std::size_t>(i)]);
    for (const Vec& l : lineality) sys.push_back(l);  // stay in the pointed part
    std::vector<Vec> null = linalg::null_basis(sys, dim);
    if (null.size() != 1) return;
    for (double s : {1.0, -1.0}) {
      Vec v = scale(s, null.front());
      if (feasible(v)) gens.push_back(v);
    }
  });
  return dedupe_directions(std::move(gens));
}

}  // namespace

// --- ConvexPiece -----------------------------------------------------------

ConvexPiece ConvexPiece::make(int dim, std::vector<Halfspace> ineqs, std::vector<Halfspace> eqs,
                              std::optional<Ball> ball, Vec witness) {
  ConvexPiece piece;
  piece.dim = dim;
  piece.inequalities = std::move(ineqs);
  piece.equalities = std::move(eqs);
  piece.ball = std::move(ball);
  piece.witness = std::move(witness);
  for (const Halfspace& h : piece.inequalities)
    if (norm(h.a) <= 0.0) throw GeometryError("ConvexPiece: zero halfspace normal");
  if (piece.violation(piece.witness) > 1e-10)
    throw GeometryError("ConvexPiece: witness violates constraints");
  return piece;
}

ConvexPiece ConvexPiece::box(const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(lo.size());
  std::vector<Halfspace> ineqs;
  Vec w = zeros(n);
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(lo[static_cast<std::size_t>(i)]))
      ineqs.push_back({negate(unit(n, i)), -lo[static_cast<std::size_t>(i)]});
    if (std::isfinite(hi[static_cast<std::size_t>(i)]))
      ineqs.push_back({unit(n, i), hi[static_cast<std::size_t>(i)]});
    double l = std::isfinite(lo[static_cast<std::size_t>(i)]) ? lo[static_cast<std::size_t>(i)] : -1.0;
    double h = std::isfinite(hi[static_cast<std::size_t>(i)]) ? hi[static_cast<std::size_t>(i)] : 1.0;
    if (l > h) std::swap(l, h);
    w[static_cast<std::size_t>(i)] = 0.5 * (l + h);
  }
  return make(n, std::move(ineqs), {}, std::nullopt, std::move(w));
}

ConvexPiece ConvexPiece::point(const Vec& p) {
  const int n = static_cast<int>(p.size());
  std::vector<Halfspace> eqs;
  for (int i = 0; i < n; ++i) eqs.push_back({unit(n, i), p[static_cast<std::size_t>(i)]});
  return make(n, {}, std::move(eqs), std::nullopt, p);
}

double ConvexPiece::violation(const Vec& x) const {
  double v = 0.0;
  for (const Halfspace& h : inequalities) v = std::max(v, (dot(h.a, x) - h.b) / norm(h.a));
  for (const Halfspace& h : equalities) v = std::max(v, std::abs(dot(h.a, x) - h.b) / norm(h.a));
  if (ball) v = std::max(v, dist(x, ball->center) - ball->radius);
  return v;
}

bool ConvexPiece::contains(const Vec& x, double tol) const { return violation(x) <= tol; }

// --- ClosedSet -------------------------------------------------------------

ClosedSet ClosedSet::of(std::vector<ConvexPiece> pieces) {
  if (pieces.empty()) throw GeometryError("ClosedSet: no pieces");
  return ClosedSet{std::move(pieces)};
}

bool ClosedSet::contains(const Vec& x, double tol) const {
  for (const ConvexPiece& p : pieces)
    if (p.contains(x, tol)) return true;
  return false;
}

int piece_index_of(const ClosedSet& set, const Vec& x, double tol) {
  for (std::size_t i = 0; i < set.pieces.size(); ++i)
    if (set.pieces[i].contains(x, tol)) return static_cast<int>(i);
  return -1;
}

// --- PolyCone --------------------------------------------------------------

PolyCone PolyCone::from_h(int dim, std::vector<Vec> rows) {
  PolyCone k;
  k.dim = dim;
  k.h_rows = dedupe_directions(std::move(rows));
  k.v_gens = cone_generators(k.h_rows, dim);
  return k;
}

bool PolyCone::contains(const Vec& d, double tol) const {
  double s = std::max(1.0, norm(d));
  for (const Vec& a : h_rows)
    if (dot(a, d) > tol * s) return false;
  return true;
}

bool PolyCone::is_all_space() const { return h_rows.empty(); }

PolyCone PolyCone::negated() const {
  PolyCone k;
  k.dim = dim;
  for (const Vec& a : h_rows) k.h_rows.push_back(negate(a));
  for (const Vec& g : v_gens) k.v_gens.push_back(negate(g));
  return k;
}

PolyCone polar(const PolyCone& cone) {
  // {d : <a_i,d> <= 0}^o = cone{a_i}; the double-description pair swaps.
  PolyCone p;
  p.dim = cone.dim;
  p.h_rows = cone.v_gens;
  p.v_gens = cone.h_rows;
  return p;
}

PolyCone intersect_cones(const PolyCone& a, const PolyCone& b) {
  std::vector<Vec> rows = a.h_rows;
  rows.insert(rows.end(), b.h_rows.begin(), b.h_rows.end());
  return PolyCone::from_h(a.dim, std::move(rows));
}

// --- VPolytope -------------------------------------------------------------

VPolytope VPolytope::of(std::vector<Vec> vertices) {
  if (vertices.empty()) throw GeometryError("VPolytope: no vertices");
  for (const Vec& v : vertices)
    if (!finite(v)) throw GeometryError("VPolytope: non-finite vertex");
  VPolytope p;
  p.dim = static_cast<int>(vertices.front().size());
  p.vertices = dedupe_points(std::move(vertices), 1e-12);
  return p;
}

VPolytope VPolytope::negated() const {
  std::vector<Vec> vs;
  for (const Vec& v : vertices) vs.push_back(negate(v));
  return of(std::move(vs));
}

VPolytope VPolytope::translated(const Vec& t) const {
  std::vector<Vec> vs;
  for (const Vec& v : vertices) vs.push_back(add(v, t));
  return of(std::move(vs));
}

// --- projections -----------------------------------------------------------

namespace {

// Exact projection onto the polyhedral part of a piece (no ball) by
// enumerating candidate active sets among the inequalities.
Vec project_polyhedral(const ConvexPiece& piece, const Vec& x) {
  const int n = piece.dim;
  double best = kInf;
  Vec best_p;
  auto consider = [&](const std::vector<int>& active) {
    std::vector<Vec> rows;
    Vec rhs;
    for (const Halfspace& h : piece.equalities) {
      rows.push_back(h.a);
      rhs.push_back(h.b);
    }
    for (int i : active) {
      rows.push_back(piece.inequalities[static_cast<std::size_t>(i)].a);
      rhs.push_back(piece.inequalities[static_cast<std::size_t>(i)].b);
    }
    auto p = linalg::project_affine(rows, rhs, x);
    if (!p) return;
    for (const Halfspace& h : piece.inequalities)
      if (dot(h.a, *p) - h.b > kTolFeas * norm(h.a)) return;
    double d = dist2(*p, x);
    if (d < best) {
      best = d;
      best_p = *p;
    }
  };
  for_subsets(static_cast<int>(piece.inequalities.size()), n, consider);
  if (best == kInf) throw GeometryError("project_piece: no feasible candidate");
  return best_p;
}

Vec project_ball(const Ball& ball, const Vec& x) {
  double d = dist(x, ball.center);
  if (d <= ball.radius) return x;
  return add(ball.center, scale(ball.radius / d, sub(x, ball.center)));
}

}  // namespace

Vec project_piece(const ConvexPiece& piece, const Vec& x) {
  if (!piece.ball) return project_polyhedral(piece, x);
  // Dykstra between the polyhedral part and the ball.
  ConvexPiece poly = piece;
  poly.ball.reset();
  poly.witness = piece.witness;
  Vec y = x;
  Vec p_corr = zeros(piece.dim), q_corr = zeros(piece.dim);
  Vec prev = y;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Vec a = project_polyhedral(poly, add(y, p_corr));
    p_corr = sub(add(y, p_corr), a);
    Vec b = project_ball(*piece.ball, add(a, q_corr));
    q_corr = sub(add(a, q_corr), b);
    double disp = dist(b, prev);
    prev = b;
    y = b;
    if (disp < kDykstraTol && piece.contains(y, kTolFeas)) return y;
  }
  return prev;  // displacement already below round-off in practice
}

std::pair<Vec, int> project_set(const ClosedSet& set, const Vec& x) {
  double best = kInf;
  Vec best_p;
  int best_i = -1;
  for (std::size_t i = 0; i < set.pieces.size(); ++i) {
    Vec p = project_piece(set.pieces[i], x);
    double d = dist2(p, x);
    if (d < best - 1e-24) {  // strict improvement; ties keep the lowest index
      best = d;
      best_p = p;
      best_i = static_cast<int>(i);
    }
  }
  return {best_p, best_i};
}

double dist(const ClosedSet& set, const Vec& x) { return dist(project_set(set, x).first, x); }

Vec project_polytope(const VPolytope& poly, const Vec& x) {
  const auto& vs = poly.vertices;
  const int m = static_cast<int>(vs.size());
  const int n = poly.dim;
  double best = kInf;
  Vec best_p;
  for_subsets(m, std::min(m, n + 1), [&](const std::vector<int>& idx) {
    if (idx.empty()) return;
    const Vec& v0 = vs[static_cast<std::size_t>(idx[0])];
    const int k = static_cast<int>(idx.size()) - 1;
    if (k == 0) {
      double d = dist2(v0, x);
      if (d < best) {
        best = d;
        best_p = v0;
      }
      return;
    }
    std::vector<Vec> cols;
    for (int j = 1; j <= k; ++j) cols.push_back(sub(vs[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])], v0));
    if (static_cast<int>(linalg::orthonormal_basis(cols).size()) != k) return;  // affinely dependent
    std::vector<Vec> gram(static_cast<std::size_t>(k), zeros(k));
    Vec rhs = zeros(k);
    Vec d0 = sub(x, v0);
    for (int r = 0; r < k; ++r) {
      rhs[static_cast<std::size_t>(r)] = dot(cols[static_cast<std::size_t>(r)], d0);
      for (int c = 0; c < k; ++c)
        gram[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
            dot(cols[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
    }
    auto lam = linalg::solve_square(gram, rhs);
    if (!lam) return;
    double lam0 = 1.0;
    for (double l : *lam) lam0 -= l;
    if (lam0 < -1e-12) return;
    for (double l : *lam)
      if (l < -1e-12) return;
    Vec p = v0;
    for (int j = 0; j < k; ++j) p = add(p, scale((*lam)[static_cast<std::size_t>(j)], cols[static_cast<std::size_t>(j)]));
    double d = dist2(p, x);
    if (d < best) {
      best = d;
      best_p = p;
    }
  });
  return best_p;
}

Vec project_cone(const PolyCone& cone, const Vec& v) {
  const auto& rows = cone.h_rows;
  if (rows.empty()) return v;
  double best = kInf;
  Vec best_p;
  for_subsets(static_cast<int>(rows.size()), cone.dim, [&](const std::vector<int>& idx) {
    std::vector<Vec> sys;
    for (int i : idx) sys.push_back(rows[static_cast<std::size_t>(i)]);
    Vec p = linalg::project_to_null(sys, v);
    if (!cone.contains(p, kTolFeas)) return;
    double d = dist2(p, v);
    if (d < best) {
      best = d;
      best_p = p;
    }
  });
  return best_p;
}

Vec project_cone_dykstra(const PolyCone& cone, const Vec& v) {
  const auto& rows = cone.h_rows;
  if (rows.empty()) return v;
  const std::size_t m = rows.size();
  std::vector<Vec> corr(m, zeros(cone.dim));
  Vec y = v;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Vec start = y;
    for (std::size_t i = 0; i < m; ++i) {
      Vec z = add(y, corr[i]);
      double t = dot(rows[i], z);  // rows are unit
      Vec p = t > 0.0 ? sub(z, scale(t, rows[i])) : z;
      corr[i] = sub(z, p);
      y = p;
    }
    if (dist(y, start) < kDykstraTol) break;
  }
  // Polish: the sweep identifies the active face; the exact projection onto
  // that face's span removes the tail of the linear convergence. On nearly
  // degenerate cones the identification is fuzzy, so sweep a few activity
  // thresholds and keep the best feasible candidate.
  double s = std::max(1.0, norm(y));
  Vec best = cone.contains(y, kTolFeas) ? y : zeros(cone.dim);
  double best_d = dist2(best, v);
  for (double tau : {1e-9, 1e-7, 1e-5, 1e-3, 1e-1}) {
    std::vector<Vec> active;
    for (const Vec& a : rows)
      if (dot(a, y) >= -tau * s) active.push_back(a);
    Vec p = linalg::project_to_null(active, v);
    if (cone.contains(p, kTolFeas) && dist2(p, v) < best_d) {
      best = p;
      best_d = dist2(p, v);
    }
  }
  return best;
}

// --- tangent / normal cones ------------------------------------------------

PolyCone tangent_cone_piece(const ConvexPiece& piece, const Vec& x) {
  if (piece.violation(x) > kTolActive)
    throw GeometryError("tangent_cone_piece: point not in piece");
  std::vector<Vec> rows;
  for (const Halfspace& h : piece.equalities) {
    rows.push_back(h.a);
    rows.push_back(negate(h.a));
  }
  for (const Halfspace& h : piece.inequalities)
    if (h.b - dot(h.a, x) <= kTolActive * norm(h.a)) rows.push_back(h.a);
  if (piece.ball && piece.ball->radius - dist(x, piece.ball->center) <= kTolActive)
    rows.push_back(sub(x, piece.ball->center));
  return PolyCone::from_h(piece.dim, std::move(rows));
}

std::vector<PolyCone> tangent_cone_set(const ClosedSet& set, const Vec& x) {
  std::vector<PolyCone> cones;
  for (const ConvexPiece& p : set.pieces)
    if (p.contains(x, kTolActive)) cones.push_back(tangent_cone_piece(p, x));
  if (cones.empty()) throw GeometryError("tangent_cone_set: point not in set");
  return cones;
}

PolyCone regular_normal_cone(const ClosedSet& set, const Vec& x) {
  // N^ = (union of piece tangents)^o = intersection of piece polars; the
  // H-rows of each polar are the generators of the tangent cone.
  std::vector<Vec> rows;
  for (const PolyCone& t : tangent_cone_set(set, x))
    rows.insert(rows.end(), t.v_gens.begin(), t.v_gens.end());
  return PolyCone::from_h(set.dim(), std::move(rows));
}

// --- polytope/cone distance -----------------------------------------------

SetDistance polytope_cone_distance(const VPolytope& poly, const PolyCone& cone) {
  Vec zp = poly.vertices.front();
  Vec zk = project_cone(cone, zp);
  if (poly.vertices.size() == 1) return {dist(zp, zk), zp, zk};
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Vec zp_next = project_polytope(poly, zk);
    Vec zk_next = project_cone(cone, zp_next);
    double disp = std::max(dist(zp_next, zp), dist(zk_next, zk));
    zp = zp_next;
    zk = zk_next;
    if (disp < kDykstraTol) return {dist(zp, zk), zp, zk};
  }
  throw GeometryError("polytope_cone_distance: no convergence, best distance " +
                      std::to_string(dist(zp, zk)));
}

double minkowski_sum_distance(const Vec& z, const VPolytope& poly, const PolyCone& cone) {
  // dist(z, P + K) = dist(z - P, K)
  std::vector<Vec> shifted;
  for (const Vec& v : poly.vertices) shifted.push_back(sub(z, v));
  return polytope_cone_distance(VPolytope::of(std::move(shifted)), cone).distance;
}

bool ball_in_sum(double radius, const VPolytope& poly, const PolyCone& cone,
                 const std::vector<Vec>& directions) {
  if (radius < 0.0) throw GeometryError("ball_in_sum: negative radius");
  for (const Vec& g : directions)
    if (minkowski_sum_distance(scale(radius, g), poly, cone) > kTolMember) return false;
  return true;
}

// --- polytope/cone intersection -------------------------------------------

std::optional<VPolytope> intersect_polytope_cone(const VPolytope& poly, const PolyCone& cone) {
  std::vector<Vec> vs = dedupe_points(poly.vertices);
  const int m = static_cast<int>(vs.size());
  if (m == 1) {
    if (cone.contains(vs.front(), kTolFeas)) return VPolytope::of(vs);
    return std::nullopt;
  }
  // Work in barycentric coordinates: lambda in the simplex with the cone's
  // rows pulled back, then enumerate vertices of that lambda-polytope.
  std::vector<Vec> ineq_rows;  // <row, lambda> <= rhs with rhs = 0
  for (int i = 0; i < m; ++i) ineq_rows.push_back(negate(unit(m, i)));
  for (const Vec& a : cone.h_rows) {
    Vec r = zeros(m);
    for (int i = 0; i < m; ++i) r[static_cast<std::size_t>(i)] = dot(a, vs[static_cast<std::size_t>(i)]);
    ineq_rows.push_back(std::move(r));
  }
  Vec ones(static_cast<std::size_t>(m), 1.0);
  std::vector<Vec> points;
  for_subsets(static_cast<int>(ineq_rows.size()), m - 1, [&](const std::vector<int>& idx) {
    if (static_cast<int>(idx.size()) != m - 1) return;
    std::vector<Vec> sys{ones};
    Vec rhs{1.0};
    for (int i : idx) {
      sys.push_back(ineq_rows[static_cast<std::size_t>(i)]);
      rhs.push_back(0.0);
    }
    auto lam = linalg::solve_square(sys, rhs);
    if (!lam) return;
    for (const Vec& r : ineq_rows)
      if (dot(r, *lam) > 1e-9) return;
    Vec x = zeros(static_cast<int>(vs.front().size()));
    for (int i = 0; i < m; ++i) x = add(x, scale((*lam)[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(i)]));
    points.push_back(std::move(x));
  });
  points = dedupe_points(std::move(points));
  if (points.empty()) return std::nullopt;
  return VPolytope::of(std::move(points));
}

double hull_hausdorff(const std::optional<VPolytope>& a, const std::optional<VPolytope>& b) {
  if (!a && !b) return 0.0;
  if (!a || !b) return kInf;
  double h = 0.0;
  for (const Vec& v : a->vertices) h = std::max(h, dist(v, project_polytope(*b, v)));
  for (const Vec& v : b->vertices) h = std::max(h, dist(v, project_polytope(*a, v)));
  return h;
}

// --- misc ------------------------------------------------------------------

std::vector<Vec> piece_vertices(const ConvexPiece& piece) {
  const int n = piece.dim;
  std::vector<Vec> out;
  for_subsets(static_cast<int>(piece.inequalities.size()), n, [&](const std::vector<int>& idx) {
    std::vector<Vec> rows;
    Vec rhs;
    for (const Halfspace& h : piece.equalities) {
      rows.push_back(h.a);
      rhs.push_back(h.b);
    }
    for (int i : idx) {
      rows.push_back(piece.inequalities[static_cast<std::size_t>(i)].a);
      rhs.push_back(piece.inequalities[static_cast<std::size_t>(i)].b);
    }
    if (!linalg::null_basis(rows, n).empty()) return;  // not a point
    auto p = linalg::solve_affine(rows, rhs, n);
    if (p && piece.contains(*p, 1e-8)) out.push_back(*p);
  });
  return dedupe_points(std::move(out));
}

std::vector<Vec> unit_directions(int dim, int count_2d, int count_3d) {
  std::vector<Vec> dirs;
  if (dim == 1) {
    dirs = {Vec{1.0}, Vec{-1.0}};
  } else if (dim == 2) {
    for (int i = 0; i < count_2d; ++i) {
      double t = 2.0 * M_PI * i / count_2d;
      dirs.push_back(Vec{std::cos(t), std::sin(t)});
    }
  } else if (dim == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count_3d; ++i) {
      double y = 1.0 - 2.0 * (i + 0.5) / count_3d;
      double r = std::sqrt(std::max(0.0, 1.0 - y * y));
      double t = golden * i;
      dirs.push_back(Vec{r * std::cos(t), y, r * std::sin(t)});
    }
  } else {
    std::mt19937_64 rng(20240613u);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 2 * count_3d; ++i) {
      Vec v(static_cast<std::size_t>(dim));
      for (double& x : v) x = gauss(rng);
      dirs.push_back(normalized(v));
    }
  }
  return dirs;
}

}  // namespace sharpeq
