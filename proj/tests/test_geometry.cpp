#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sharpeq/geometry.hpp"

using namespace sharpeq;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ClosedSet two_ray_union() {
  // {0} x (-inf,0]  union  (-inf,0] x {0}
  auto p0 = ConvexPiece::make(2, {{{0.0, 1.0}, 0.0}}, {{{1.0, 0.0}, 0.0}}, std::nullopt, {0.0, -1.0});
  auto p1 = ConvexPiece::make(2, {{{1.0, 0.0}, 0.0}}, {{{0.0, 1.0}, 0.0}}, std::nullopt, {-1.0, 0.0});
  return ClosedSet::of({p0, p1});
}

ClosedSet two_points(const Vec& a, const Vec& b) {
  return ClosedSet::of({ConvexPiece::point(a), ConvexPiece::point(b)});
}

PolyCone nonneg_orthant(int n) {
  std::vector<Vec> rows;
  for (int i = 0; i < n; ++i) rows.push_back(negate(unit(n, i)));
  return PolyCone::from_h(n, std::move(rows));
}

PolyCone nonpos_orthant(int n) {
  std::vector<Vec> rows;
  for (int i = 0; i < n; ++i) rows.push_back(unit(n, i));
  return PolyCone::from_h(n, std::move(rows));
}

bool close(const Vec& a, const Vec& b, double tol = 1e-9) { return dist(a, b) <= tol; }

}  // namespace

TEST_CASE("project_piece clamps onto a box") {
  auto box = ConvexPiece::box({0.0, 0.0}, {1.0, 1.0});
  CHECK(close(project_piece(box, {2.0, 0.5}), {1.0, 0.5}));
  CHECK(close(project_piece(box, {-3.0, 7.0}), {0.0, 1.0}));
  CHECK(close(project_piece(box, {0.25, 0.75}), {0.25, 0.75}));
}

TEST_CASE("project_piece onto a ray piece") {
  auto ray = ConvexPiece::make(2, {{{0.0, 1.0}, 0.0}}, {{{1.0, 0.0}, 0.0}}, std::nullopt, {0.0, -1.0});
  CHECK(close(project_piece(ray, {-0.2, -0.5}), {0.0, -0.5}));
  CHECK(close(project_piece(ray, {0.4, 0.3}), {0.0, 0.0}));
}

TEST_CASE("project_piece with a ball constraint (quarter disk)") {
  auto quarter = ConvexPiece::make(2, {{{-1.0, 0.0}, 0.0}, {{0.0, -1.0}, 0.0}}, {},
                                   Ball{{0.0, 0.0}, 1.0}, {0.3, 0.3});
  CHECK(close(project_piece(quarter, {2.0, 2.0}), {kSqrt2 / 2.0, kSqrt2 / 2.0}, 1e-8));
  CHECK(close(project_piece(quarter, {0.5, -1.0}), {0.5, 0.0}, 1e-8));
  CHECK(close(project_piece(quarter, {0.2, 0.3}), {0.2, 0.3}, 1e-10));
}

TEST_CASE("project_set picks the nearest piece, ties to the lowest index") {
  auto rays = two_ray_union();
  auto [p, idx] = project_set(rays, {0.3, 0.2});
  CHECK(close(p, {0.0, 0.0}));
  CHECK(idx == 0);

  auto pts = two_points({0.0, 0.0}, {M_PI / 2.0, 0.0});
  auto [q, j] = project_set(pts, {1.0, 0.1});
  CHECK(close(q, {M_PI / 2.0, 0.0}));
  CHECK(j == 1);

  auto [r, i0] = project_set(rays, {0.0, -0.5});
  CHECK(close(r, {0.0, -0.5}));
  CHECK(i0 == 0);
}

TEST_CASE("dist to a closed set") {
  auto rays = two_ray_union();
  CHECK(dist(rays, {0.0, -0.5}) == doctest::Approx(0.0).epsilon(1e-12));
  auto pts = two_points({0.0, 0.0}, {M_PI / 2.0, 0.0});
  CHECK(dist(pts, {M_PI / 4.0, 0.0}) == doctest::Approx(M_PI / 4.0));
  auto poles = two_points({0.0, 1.0}, {0.0, -1.0});
  CHECK(dist(poles, {0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(project_set(poles, {0.0, 0.0}).second == 0);
}

TEST_CASE("tangent cone of a piece") {
  auto corner = ConvexPiece::box({0.0, 0.0}, {M_PI / 2.0, INFINITY});
  auto t = tangent_cone_piece(corner, {0.0, 0.0});
  CHECK(t.contains({1.0, 1.0}));
  CHECK(t.contains({0.0, 1.0}));
  CHECK(!t.contains({-1.0, 0.0}));
  CHECK(!t.contains({0.0, -1.0}));

  auto box = ConvexPiece::box({-1.0, -1.0}, {1.0, 1.0});
  CHECK(tangent_cone_piece(box, {0.0, 0.0}).is_all_space());

  auto ray = ConvexPiece::make(2, {{{0.0, 1.0}, 0.0}}, {{{1.0, 0.0}, 0.0}}, std::nullopt, {0.0, -1.0});
  auto line = tangent_cone_piece(ray, {0.0, -0.5});
  CHECK(line.contains({0.0, 1.0}));
  CHECK(line.contains({0.0, -1.0}));
  CHECK(!line.contains({1.0, 0.0}));

  CHECK_THROWS_AS(tangent_cone_piece(box, {5.0, 0.0}), GeometryError);
}

TEST_CASE("tangent cones of a union, one per containing piece") {
  auto rays = two_ray_union();
  auto at_corner = tangent_cone_set(rays, {0.0, 0.0});
  REQUIRE(at_corner.size() == 2);
  CHECK(at_corner[0].contains({0.0, -1.0}));
  CHECK(!at_corner[0].contains({0.0, 1.0}));
  CHECK(!at_corner[0].contains({1.0, 0.0}));
  CHECK(at_corner[1].contains({-1.0, 0.0}));
  CHECK(!at_corner[1].contains({1.0, 0.0}));

  auto inside = tangent_cone_set(rays, {0.0, -0.5});
  REQUIRE(inside.size() == 1);
  CHECK(inside[0].contains({0.0, 1.0}));

  auto single = ClosedSet::of({ConvexPiece::point({0.3, 0.7})});
  auto pt = tangent_cone_set(single, {0.3, 0.7});
  REQUIRE(pt.size() == 1);
  CHECK(pt[0].contains({0.0, 0.0}));
  CHECK(!pt[0].contains({1e-3, 0.0}));
}

TEST_CASE("regular normal cone of a union") {
  auto rays = two_ray_union();
  auto n = regular_normal_cone(rays, {0.0, 0.0});
  CHECK(n.contains({1.0, 0.0}));
  CHECK(n.contains({0.0, 1.0}));
  CHECK(n.contains({0.5, 0.5}));
  CHECK(!n.contains({-1.0, 0.0}));
  CHECK(!n.contains({0.0, -1.0}));

  auto corner = ClosedSet::of({ConvexPiece::box({0.0, 0.0}, {M_PI / 2.0, INFINITY})});
  auto ns = regular_normal_cone(corner, {0.0, 0.0});
  CHECK(ns.contains({-1.0, -1.0}));
  CHECK(!ns.contains({1.0, 0.0}));
  CHECK(!ns.contains({0.0, 1.0}));

  auto pts = two_points({0.0, 1.0}, {0.0, -1.0});
  CHECK(regular_normal_cone(pts, {0.0, 1.0}).is_all_space());
}

TEST_CASE("polar cone and bipolar identity") {
  auto pos = nonneg_orthant(2);
  auto pol = polar(pos);
  CHECK(pol.contains({-1.0, -1.0}));
  CHECK(!pol.contains({1.0, 0.0}));

  auto again = polar(PolyCone::from_h(2, pol.h_rows));
  for (const Vec& g : pos.v_gens) CHECK(again.contains(g, 1e-9));
  for (const Vec& g : again.v_gens) CHECK(pos.contains(g, 1e-9));
}

TEST_CASE("cone intersections") {
  auto pos = nonneg_orthant(2);
  auto both = intersect_cones(pos, PolyCone::all_space(2));
  CHECK(both.contains({1.0, 1.0}));
  CHECK(!both.contains({-1.0, 0.0}));

  auto line = intersect_cones(PolyCone::from_h(2, {{-1.0, 0.0}}), PolyCone::from_h(2, {{1.0, 0.0}}));
  CHECK(line.contains({0.0, 5.0}));
  CHECK(line.contains({0.0, -5.0}));
  CHECK(!line.contains({1.0, 0.0}));

  // T all-space, N^ the horizontal axis: the polar of the intersection is
  // the vertical axis.
  auto rays = two_ray_union();
  auto n_hat = regular_normal_cone(rays, {0.0, -0.5});
  auto g = polar(intersect_cones(PolyCone::all_space(2), n_hat));
  CHECK(g.contains({0.0, 1.0}));
  CHECK(g.contains({0.0, -1.0}));
  CHECK(!g.contains({1.0, 0.0}));
  CHECK(!g.contains({-1.0, 0.0}));
}

TEST_CASE("project_cone basics") {
  auto pos = nonneg_orthant(2);
  CHECK(close(project_cone(pos, {-1.0, 2.0}), {0.0, 2.0}));
  CHECK(close(project_cone(PolyCone::all_space(3), {1.0, -2.0, 3.0}), {1.0, -2.0, 3.0}));
  auto line = PolyCone::from_h(2, {{1.0, 0.0}, {-1.0, 0.0}});
  CHECK(close(project_cone(line, {3.0, 4.0}), {0.0, 4.0}));
}

TEST_CASE("Moreau decomposition and projector cross-checks on random cones") {
  std::mt19937_64 rng(7u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> nrows(1, 4);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<Vec> rows;
      int m = nrows(rng);
      for (int i = 0; i < m; ++i) {
        Vec a(static_cast<std::size_t>(n));
        for (double& x : a) x = u(rng);
        if (norm(a) > 1e-3) rows.push_back(normalized(a));
      }
      auto k = PolyCone::from_h(n, rows);
      auto kp = polar(k);
      Vec v(static_cast<std::size_t>(n));
      for (double& x : v) x = 3.0 * u(rng);

      Vec pk = project_cone(k, v);
      Vec pp = project_cone(kp, v);
      CHECK(norm2(v) == doctest::Approx(norm2(pk) + norm2(pp)).epsilon(1e-8));
      CHECK(std::abs(dot(pk, pp)) < 1e-8);
      CHECK(close(add(pk, pp), v, 1e-8));

      Vec dyk = project_cone_dykstra(k, v);
      CHECK(close(pk, dyk, 1e-8));

      auto bip = polar(PolyCone::from_h(n, kp.h_rows));
      for (const Vec& g : k.v_gens) CHECK(bip.contains(g, 1e-9));
    }
  }
}

TEST_CASE("projection properties on random pieces") {
  std::mt19937_64 rng(11u);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto box = ConvexPiece::box({-0.5, 0.0}, {1.0, 0.75});
  for (int trial = 0; trial < 300; ++trial) {
    Vec x{u(rng), u(rng)}, y{u(rng), u(rng)};
    Vec px = project_piece(box, x);
    CHECK(box.contains(px, 1e-9));
    CHECK(close(project_piece(box, px), px, 1e-10));
    Vec py = project_piece(box, y);
    CHECK(dist(px, py) <= dist(x, y) + 1e-9);
  }
  auto set = two_ray_union();
  for (int trial = 0; trial < 100; ++trial) {
    Vec x{u(rng), u(rng)};
    double d = dist(set, x);
    CHECK((d <= 1e-9) == set.contains(x, 1e-8));
  }
}

TEST_CASE("project_polytope") {
  auto tri = VPolytope::of({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
  CHECK(close(project_polytope(tri, {0.2, 0.2}), {0.2, 0.2}));
  CHECK(close(project_polytope(tri, {1.0, 1.0}), {0.5, 0.5}));
  CHECK(close(project_polytope(tri, {-1.0, -1.0}), {0.0, 0.0}));
  auto seg = VPolytope::segment({-0.5, 0.0}, {1.0, 0.0});
  CHECK(close(project_polytope(seg, {0.3, 7.0}), {0.3, 0.0}));
  CHECK(close(project_polytope(VPolytope::point({2.0, 2.0}), {0.0, 0.0}), {2.0, 2.0}));
}

TEST_CASE("polytope to cone distance") {
  auto d1 = polytope_cone_distance(VPolytope::point({1.0, 1.0}), nonpos_orthant(2));
  CHECK(d1.distance == doctest::Approx(kSqrt2));
  CHECK(close(d1.polytope_point, {1.0, 1.0}));
  CHECK(close(d1.cone_point, {0.0, 0.0}, 1e-8));

  auto box = VPolytope::of({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}});
  CHECK(polytope_cone_distance(box, PolyCone::from_h(2, {{1.0, 0.0}})).distance ==
        doctest::Approx(0.0).epsilon(1e-10));

  // membership in P + K through the shifted problem
  auto seg = VPolytope::segment({-0.5, 0.0}, {1.0, 0.0});
  auto vline = PolyCone::from_h(2, {{1.0, 0.0}, {-1.0, 0.0}});
  CHECK(minkowski_sum_distance({0.3, 7.0}, seg, vline) < 1e-9);
  CHECK(minkowski_sum_distance({1.4, 7.0}, seg, vline) == doctest::Approx(0.4));
}

TEST_CASE("sampled ball inclusion in a polytope-plus-cone sum") {
  auto dirs = unit_directions(2);
  REQUIRE(dirs.size() == 64);
  for (const Vec& g : dirs) CHECK(norm(g) == doctest::Approx(1.0));

  auto seg = VPolytope::segment({1.0, 0.0}, {1.0, 1.0});
  CHECK(ball_in_sum(0.9, seg, nonpos_orthant(2), dirs));       // sum is {v <= 1}
  CHECK(ball_in_sum(0.0, seg, nonpos_orthant(2), dirs));       // 0 in the sum
  auto origin_cone = PolyCone::from_h(2, {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}});
  CHECK(!ball_in_sum(0.05, VPolytope::point({0.1, 0.1}), origin_cone, dirs));
}

TEST_CASE("polytope-cone intersection hull") {
  auto tri = VPolytope::of({{-1.0, 0.5}, {1.0, 0.5}, {0.0, -1.5}});
  auto half = PolyCone::from_h(2, {{0.0, 1.0}});  // lower halfplane
  auto cut = intersect_polytope_cone(tri, half);
  REQUIRE(cut.has_value());
  // cut is the sub-triangle below the x-axis with apex (0,-1.5)
  CHECK(hull_hausdorff(cut, VPolytope::of({{-0.75, 0.0}, {0.75, 0.0}, {0.0, -1.5}})) < 1e-8);

  auto above = VPolytope::of({{-1.0, 1.0}, {1.0, 2.0}});
  CHECK(!intersect_polytope_cone(above, half).has_value());
  CHECK(hull_hausdorff(std::nullopt, std::nullopt) == 0.0);
  CHECK(std::isinf(hull_hausdorff(cut, std::nullopt)));

  auto pt_in = intersect_polytope_cone(VPolytope::point({0.2, -0.3}), half);
  REQUIRE(pt_in.has_value());
  CHECK(close(pt_in->vertices.front(), {0.2, -0.3}));
}

TEST_CASE("vertices of a polyhedral piece") {
  auto box = ConvexPiece::box({0.0, -1.0}, {1.0, 1.0});
  auto vs = piece_vertices(box);
  REQUIRE(vs.size() == 4);
  auto hull = VPolytope::of(vs);
  CHECK(hull_hausdorff(hull, VPolytope::of({{0.0, -1.0}, {1.0, -1.0}, {0.0, 1.0}, {1.0, 1.0}})) <
        1e-10);
  // an unbounded piece only reports the vertices it has
  auto ray = ConvexPiece::make(2, {{{0.0, 1.0}, 0.0}}, {{{1.0, 0.0}, 0.0}}, std::nullopt, {0.0, -1.0});
  auto rv = piece_vertices(ray);
  REQUIRE(rv.size() == 1);
  CHECK(close(rv.front(), {0.0, 0.0}));
}

TEST_CASE("direction samplers") {
  auto d1 = unit_directions(1);
  REQUIRE(d1.size() == 2);
  auto d3 = unit_directions(3);
  REQUIRE(d3.size() == 200);
  for (const Vec& g : d3) CHECK(norm(g) == doctest::Approx(1.0));
}
