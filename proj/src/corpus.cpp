#include "sharpeq/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace sharpeq {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Vec> range_sequence(int n, const std::function<Vec(int)>& f) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int k = 1; k <= n; ++k) out.push_back(f(k));
  return out;
}

// ---- cross-term program: f = max{0, x1 x2} + (x1)+ + (x2)+ ---------------

CorpusEntry make_ex4_1() {
  CorpusEntry e;
  e.id = "ex4_1";
  e.title = "cross-term nonsmooth program with a two-ray solution set";
  e.origin = "worked example 4.1";

  PiecewiseFn f = pw_sum({pw_pos(ex_coord(0) * ex_coord(1)), pw_pos(ex_coord(0)),
                          pw_pos(ex_coord(1))});
  ConvexPiece S = ConvexPiece::make(2, {{{1, 0}, 1}, {{0, 1}, 1}}, {}, std::nullopt, {0, 0});
  e.problem = from_mp(std::move(f), std::move(S));
  e.problem.sample_lo = {-1, -1};
  e.problem.sample_hi = {1, 1};

  // solution set: the negative x2-axis ray, then the negative x1-axis ray
  ConvexPiece ray_down =
      ConvexPiece::make(2, {{{0, 1}, 0}}, {{{1, 0}, 0}}, std::nullopt, {0, -1});
  ConvexPiece ray_left =
      ConvexPiece::make(2, {{{1, 0}, 0}}, {{{0, 1}, 0}}, std::nullopt, {-1, 0});
  e.problem.solution_set = ClosedSet::of({ray_down, ray_left});

  e.make_H = [](double eps) {
    AugmentedMapping H;
    H.param_name = "epsilon";
    H.param = eps;
    H.param_lo = 0.0;
    H.param_hi = 1.0;
    H.value = [eps](int piece, const Vec& z) {
      if (norm(z) <= 1e-9) return SubdiffSet::point({eps, eps});
      if (piece == 0) return SubdiffSet::segment({-eps, 0}, {eps, 0});
      return SubdiffSet::segment({0, -eps}, {0, eps});
    };
    return H;
  };
  e.H_default = 0.1;

  // iterates must avoid the open square (-eps, 0)^2 next to the kink
  e.sequence_domain = [](const Vec& x) {
    return !(x[0] > -0.1 && x[0] < 0.0 && x[1] > -0.1 && x[1] < 0.0);
  };
  e.builtin_sequence = [](int n) {
    return range_sequence(n, [](int k) {
      return Vec{-0.2 - 0.5 / k, -0.3 - 0.5 / k};
    });
  };

  e.sharp_samples = solution_samples(e.problem);
  for (double t : {0.5, 0.1, 0.01}) e.sharp_samples.push_back({0.0, -t});
  e.weak_sharp_alpha0 = 0.05;

  e.expected = {{"weak_sharp", false},
                {"augmented", true},
                {"intersection_interior", false}};
  return e;
}

// ---- trigonometric-exponential variational inequality --------------------

CorpusEntry make_ex4_2() {
  CorpusEntry e;
  e.id = "ex4_2";
  e.title = "variational inequality with two isolated solutions";
  e.origin = "worked example 4.2";

  auto F = [](const Vec& x) { return Vec{std::cos(x[0]), std::exp(x[1])}; };
  e.problem = from_vip(F, ConvexPiece::box({0, 0}, {kPi / 2, kInf}));
  e.problem.sample_lo = {0, 0};
  e.problem.sample_hi = {kPi / 2, 2};
  e.problem.solution_set =
      ClosedSet::of({ConvexPiece::point({0, 0}), ConvexPiece::point({kPi / 2, 0})});

  e.make_H = [](double lam) {
    AugmentedMapping H;
    H.param_name = "lambda";
    H.param = lam;
    H.param_lo = 0.0;
    H.param_hi = 0.5;
    H.value = [lam](int piece, const Vec&) {
      if (piece == 0) return SubdiffSet::point({lam, lam});
      return SubdiffSet::point({-lam, lam});
    };
    return H;
  };
  e.H_default = 0.25;

  e.sequence_domain = [](const Vec& x) {
    return x[0] <= kPi / 4 + 1e-12 || x[0] + x[1] >= kPi / 2 - 1e-12;
  };
  e.builtin_sequence = [](int n) {
    return range_sequence(n, [](int k) {
      return Vec{kPi / 2 - 1.0 / k, 1.0 / k};
    });
  };

  e.sharp_samples = {{0, 0}, {kPi / 2, 0}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false},
                {"augmented", true},
                {"strong_nondegenerate", false},
                {"intersection_interior", false}};
  return e;
}

// ---- exponential-quadratic saddle problem --------------------------------

CorpusEntry make_ex4_3() {
  CorpusEntry e;
  e.id = "ex4_3";
  e.title = "saddle-point problem with two isolated saddle points";
  e.origin = "worked example 4.3";

  PiecewiseFn varphi = pw_sum(
      {pw_atom(ex_exp(ex_pow(ex_coord(0), 2))), pw_atom(ex_pow(ex_coord(1), 2))});
  e.problem = from_spp(std::move(varphi), 1, 1, ConvexPiece::box({0, -1}, {1, 1}));
  e.problem.solution_set =
      ClosedSet::of({ConvexPiece::point({0, 1}), ConvexPiece::point({0, -1})});

  e.make_H = [](double lam) {
    AugmentedMapping H;
    H.param_name = "lambda";
    H.param = lam;
    H.param_lo = 0.0;
    H.param_hi = 1.0;
    H.value = [lam](int piece, const Vec&) {
      if (piece == 0) return SubdiffSet::point({lam, -lam});
      return SubdiffSet::point({lam, lam});
    };
    return H;
  };
  e.H_default = 0.5;

  e.sequence_domain = [](const Vec& x) {
    return x[0] + std::abs(x[1]) <= 1 + 1e-12;
  };
  e.builtin_sequence = [](int n) {
    return range_sequence(n, [](int k) {
      return Vec{1.0 / k, 1.0 - 1.0 / k};
    });
  };

  e.sharp_samples = {{0, 1}, {0, -1}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false},
                {"augmented", true},
                {"strong_nondegenerate", false},
                {"intersection_interior", false}};
  return e;
}

// ---- two-player exponential game -----------------------------------------

CorpusEntry make_ex4_4() {
  CorpusEntry e;
  e.id = "ex4_4";
  e.title = "two-player game with a unique equilibrium at the origin";
  e.origin = "worked example 4.4";

  Expr x0 = ex_coord(0), x1 = ex_coord(1);
  PiecewiseFn f1 = pw_atom(ex_exp(x0 - x1) - ex_exp(x1 - x0));
  PiecewiseFn f2 =
      pw_atom(ex_exp(ex_pow(x1, 2) - ex_pow(x0, 2)) - ex_const(1));
  e.problem = from_nep({std::move(f1), std::move(f2)}, ConvexPiece::box({0, 0}, {1, 1}));
  e.problem.solution_set = ClosedSet::of({ConvexPiece::point({0, 0})});

  e.make_H = [](double lam) {
    AugmentedMapping H;
    H.param_name = "lambda";
    H.param = lam;
    H.param_lo = 0.0;
    H.param_hi = 0.5;
    H.value = [lam](int, const Vec&) { return SubdiffSet::point({lam, lam}); };
    return H;
  };
  e.H_default = 0.25;

  e.sequence_domain = [](const Vec& x) { return x[1] <= x[0] + 1e-12; };
  e.builtin_sequence = [](int n) {
    return range_sequence(n, [](int k) { return Vec{1.0 / k, 0.5 / k}; });
  };

  e.sharp_samples = {{0, 0}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false},
                {"augmented", true},
                {"strong_nondegenerate", false},
                {"intersection_interior", false}};
  return e;
}

// ---- sine-plus-hinge program: the weak sharp instance --------------------

CorpusEntry make_ex4_5() {
  CorpusEntry e;
  e.id = "ex4_5";
  e.title = "sine-plus-hinge program with a weak sharp segment of minima";
  e.origin = "worked example 4.5";

  PiecewiseFn f = pw_sum({pw_atom(ex_sin(ex_coord(0))), pw_pos(ex_coord(1))});
  e.problem = from_mp(std::move(f), ConvexPiece::box({0, -1}, {kPi / 3, kInf}));
  e.problem.sample_lo = {0, -1};
  e.problem.sample_hi = {kPi / 3, 2};
  e.problem.solution_set = ClosedSet::of({ConvexPiece::make(
      2, {{{0, 1}, 0}, {{0, -1}, 1}}, {{{1, 0}, 0}}, std::nullopt, {0, -0.5})});
  e.problem.characterization_hypotheses = false;

  e.make_H = [](double lam) {
    AugmentedMapping H;
    H.param_name = "lambda";
    H.param = lam;
    H.param_lo = 0.0;
    H.param_hi = 0.5;
    H.value = [lam](int, const Vec& z) {
      if (norm(z) <= 1e-9) return SubdiffSet::point({lam, lam});
      return SubdiffSet::point({lam, 0});
    };
    return H;
  };
  e.H_default = 0.5;

  e.builtin_sequence = [](int n) {
    return range_sequence(n, [](int k) { return Vec{1.0 / k, 1.0 / k}; });
  };

  e.sharp_samples = solution_samples(e.problem);
  e.weak_sharp_alpha0 = 0.5;

  e.expected = {{"weak_sharp", true},
                {"augmented", true},
                {"intersection_interior", false}};
  return e;
}

// ---- scalar exponential bifunction ---------------------------------------

CorpusEntry make_ex3_1() {
  CorpusEntry e;
  e.id = "ex3_1";
  e.title = "monotone scalar bifunction whose phi(x,.) is nonconvex";
  e.origin = "worked example 3.1";

  EquilibriumProblem p;
  p.dim = 1;
  p.kind = ProblemKind::Generic;
  p.S = ConvexPiece::box({0}, {1});
  p.phi = [](const Vec& x, const Vec& y) {
    return std::exp(x[0] - y[0]) - std::exp(y[0] - x[0]);
  };
  p.diag_subdiff = [](const Vec&) { return SubdiffSet::point({-2.0}); };
  p.solution_set = ClosedSet::of({ConvexPiece::point({1})});
  p.sample_lo = {0};
  p.sample_hi = {1};
  e.problem = std::move(p);

  // the diagonal subdifferential is the constant {-2}; it serves as its own
  // augmented mapping
  e.make_H = [](double) {
    AugmentedMapping H;
    H.param_name = "none";
    H.value = [](int, const Vec&) { return SubdiffSet::point({-2.0}); };
    return H;
  };
  e.builtin_sequence = [](int n) {
    return range_sequence(n, [](int k) { return Vec{1.0 - 1.0 / k}; });
  };

  e.sharp_samples = {{1}};
  e.weak_sharp_alpha0 = 1.0;

  e.expected = {{"weak_sharp", true},
                {"augmented", true},
                {"diag_monotone", true},
                {"phi_monotone", true},
                {"phi_convex", false}};
  return e;
}

CorpusEntry make_ex3_2() {
  CorpusEntry e;
  e.id = "ex3_2";
  e.title = "bifunction monotone through its diagonal subdifferential only";
  e.origin = "worked example 3.2";

  EquilibriumProblem p;
  p.dim = 1;
  p.kind = ProblemKind::Generic;
  // stated on the whole line; the corpus works on a bounded stand-in box
  p.S = ConvexPiece::box({-2}, {2});
  p.phi = [](const Vec& x, const Vec& y) {
    return std::exp(y[0] * y[0] - x[0] * x[0]) - 1.0;
  };
  p.diag_subdiff = [](const Vec& x) { return SubdiffSet::point({2.0 * x[0]}); };
  p.solution_set = ClosedSet::of({ConvexPiece::point({0})});
  p.sample_lo = {-2};
  p.sample_hi = {2};
  e.problem = std::move(p);

  e.sharp_samples = {{0}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false},
                {"diag_monotone", true},
                {"phi_monotone", false}};
  return e;
}

CorpusEntry make_rem3_3() {
  CorpusEntry e;
  e.id = "rem3_3";
  e.title = "scalar instance exercising the solution-set characterization";
  e.origin = "remark 3.3";

  EquilibriumProblem p;
  p.dim = 1;
  p.kind = ProblemKind::Generic;
  p.S = ConvexPiece::box({-1}, {1});
  p.phi = [](const Vec& x, const Vec& y) {
    return (1.0 - x[0] * x[0]) * (y[0] - x[0]);
  };
  p.diag_subdiff = [](const Vec& x) {
    return SubdiffSet::point({1.0 - x[0] * x[0]});
  };
  p.solution_set =
      ClosedSet::of({ConvexPiece::point({-1}), ConvexPiece::point({1})});
  p.sample_lo = {-1};
  p.sample_hi = {1};
  p.characterization_hypotheses = true;
  e.problem = std::move(p);

  e.sharp_samples = {{-1}, {1}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false},
                {"diag_monotone", false},
                {"characterization", true}};
  return e;
}

CorpusEntry make_rem5_1() {
  CorpusEntry e;
  e.id = "rem5_1";
  e.title = "cubic bifunction with a non-monotone diagonal subdifferential";
  e.origin = "remark 5.1";

  EquilibriumProblem p;
  p.dim = 1;
  p.kind = ProblemKind::Generic;
  p.S = ConvexPiece::box({-2}, {2});
  p.phi = [](const Vec& x, const Vec& y) {
    return x[0] * x[0] * y[0] - x[0] * x[0] * x[0];
  };
  p.diag_subdiff = [](const Vec& x) { return SubdiffSet::point({x[0] * x[0]}); };
  p.solution_set =
      ClosedSet::of({ConvexPiece::point({-2}), ConvexPiece::point({0})});
  p.sample_lo = {-2};
  p.sample_hi = {2};
  e.problem = std::move(p);

  e.sharp_samples = {{-2}, {0}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false}, {"diag_monotone", false}};
  return e;
}

// ---- supplementary instances ---------------------------------------------

CorpusEntry make_s4_p1() {
  CorpusEntry e;
  e.id = "s4_p1";
  e.title = "quartic bifunction with two isolated solutions";
  e.origin = "supplementary problem 1";

  EquilibriumProblem p;
  p.dim = 2;
  p.kind = ProblemKind::Generic;
  p.S = ConvexPiece::box({0, -1}, {1, 1});
  p.phi = [](const Vec& x, const Vec& y) {
    double a = x[0] * x[0], b = x[1] * x[1];
    return a * y[0] * y[0] + b * y[1] * y[1] - a * a - y[1] * y[1] * y[1] * y[1];
  };
  p.diag_subdiff = [](const Vec& x) {
    return SubdiffSet::point({2 * x[0] * x[0] * x[0], -2 * x[1] * x[1] * x[1]});
  };
  p.solution_set =
      ClosedSet::of({ConvexPiece::point({0, 1}), ConvexPiece::point({0, -1})});
  p.sample_lo = {0, -1};
  p.sample_hi = {1, 1};
  e.problem = std::move(p);

  e.sharp_samples = {{0, 1}, {0, -1}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false},
                {"strong_nondegenerate", false},
                {"intersection_interior", false}};
  return e;
}

CorpusEntry make_s4_p2() {
  CorpusEntry e;
  e.id = "s4_p2";
  e.title = "exponential-linear bifunction on the nonnegative quadrant";
  e.origin = "supplementary problem 2";

  EquilibriumProblem p;
  p.dim = 2;
  p.kind = ProblemKind::Generic;
  p.S = ConvexPiece::box({0, 0}, {kInf, kInf});
  p.phi = [](const Vec& x, const Vec& y) {
    return std::exp(y[0] * y[0] - x[0] * x[0]) + y[1] - x[1] - 1.0;
  };
  p.diag_subdiff = [](const Vec& x) {
    return SubdiffSet::point({2 * x[0], 1.0});
  };
  p.solution_set = ClosedSet::of({ConvexPiece::point({0, 0})});
  p.sample_lo = {0, 0};
  p.sample_hi = {2, 2};
  e.problem = std::move(p);

  e.sharp_samples = {{0, 0}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false},
                {"strong_nondegenerate", false},
                {"intersection_interior", false}};
  return e;
}

CorpusEntry make_s4_p3() {
  CorpusEntry e;
  e.id = "s4_p3";
  e.title = "smooth program on a quarter disk with two boundary minima";
  e.origin = "supplementary problem 3";

  Expr x0 = ex_coord(0), x1 = ex_coord(1);
  Expr f = x0 * ex_log1p(x1) +
           ex_const(0.5) * ex_pow(x0 - ex_const(1), 2) * ex_pow(x1 - ex_const(1), 2);
  ConvexPiece S = ConvexPiece::make(2, {{{-1, 0}, 0}, {{0, -1}, 0}}, {},
                                    Ball{{0, 0}, 1}, {0.3, 0.3});
  e.problem = from_mp(pw_atom(std::move(f)), std::move(S));
  e.problem.sample_lo = {0, 0};
  e.problem.sample_hi = {1, 1};
  e.problem.solution_set =
      ClosedSet::of({ConvexPiece::point({1, 0}), ConvexPiece::point({0, 1})});

  e.sharp_samples = {{1, 0}, {0, 1}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false},
                {"strong_nondegenerate", false},
                {"intersection_interior", false}};
  return e;
}

CorpusEntry make_s4_p4() {
  CorpusEntry e;
  e.id = "s4_p4";
  e.title = "product-of-sines program minimized on two box edges";
  e.origin = "supplementary problem 4";

  PiecewiseFn f = pw_atom(ex_sin(ex_coord(0)) * ex_cos(ex_coord(1)));
  e.problem = from_mp(std::move(f), ConvexPiece::box({0, 0}, {kPi / 2, kPi / 2}));
  ConvexPiece left_edge = ConvexPiece::make(
      2, {{{0, -1}, 0}, {{0, 1}, kPi / 2}}, {{{1, 0}, 0}}, std::nullopt, {0, 1});
  ConvexPiece top_edge = ConvexPiece::make(
      2, {{{-1, 0}, 0}, {{1, 0}, kPi / 2}}, {{{0, 1}, kPi / 2}}, std::nullopt, {1, kPi / 2});
  e.problem.solution_set = ClosedSet::of({left_edge, top_edge});

  e.sharp_samples = solution_samples(e.problem);
  // the sharpness modulus degenerates approaching the shared corner
  e.sharp_samples.push_back({0, kPi / 2 - 0.01});
  e.sharp_samples.push_back({0.01, kPi / 2});
  e.weak_sharp_alpha0 = 0.05;

  e.expected = {{"weak_sharp", false},
                {"strong_nondegenerate", false},
                {"intersection_interior", false}};
  return e;
}

CorpusEntry make_s4_p5() {
  CorpusEntry e;
  e.id = "s4_p5";
  e.title = "odd-symmetric variational inequality with nine solutions";
  e.origin = "supplementary problem 5";

  auto F = [](const Vec& x) {
    return Vec{-x[0] * std::exp(1.0 - x[0] * x[0]),
               x[1] * (x[1] * x[1] - 1.0)};
  };
  e.problem = from_vip(F, ConvexPiece::box({-1, -1}, {1, 1}));
  // every zero of F and every boundary point with -F in the normal cone
  e.problem.solution_set = ClosedSet::of(
      {ConvexPiece::point({1, 1}), ConvexPiece::point({1, -1}),
       ConvexPiece::point({-1, 1}), ConvexPiece::point({-1, -1}),
       ConvexPiece::point({1, 0}), ConvexPiece::point({-1, 0}),
       ConvexPiece::point({0, 1}), ConvexPiece::point({0, -1}),
       ConvexPiece::point({0, 0})});

  e.sharp_samples = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}, {1, 0},
                     {-1, 0}, {0, 1}, {0, -1}, {0, 0}};
  e.weak_sharp_alpha0 = 0.1;

  e.expected = {{"weak_sharp", false},
                {"strong_nondegenerate", false},
                {"intersection_interior", false}};
  return e;
}

// ---- convex hinge baseline -----------------------------------------------

CorpusEntry make_mp_plus() {
  CorpusEntry e;
  e.id = "mp_plus";
  e.title = "convex hinge program: weak sharp, monotone, characterizable";
  e.origin = "library-added convex baseline";

  PiecewiseFn f = pw_pos(ex_coord(0));
  e.problem = from_mp(std::move(f), ConvexPiece::box({-1, -1}, {1, 1}));
  e.problem.solution_set = ClosedSet::of({ConvexPiece::box({-1, -1}, {0, 1})});
  e.problem.characterization_hypotheses = true;

  // monotone diagonal subdifferential acting as its own augmented mapping
  EquilibriumProblem prob_copy = e.problem;
  e.make_H = [prob_copy](double) {
    AugmentedMapping H;
    H.param_name = "none";
    H.value = [prob_copy](int, const Vec& z) { return prob_copy.diag_subdiff(z); };
    return H;
  };
  e.builtin_sequence = [](int n) {
    return range_sequence(n, [](int k) { return Vec{1.0 / k, 0.3}; });
  };

  e.sharp_samples = solution_samples(e.problem);
  e.weak_sharp_alpha0 = 0.5;

  e.expected = {{"weak_sharp", true},
                {"augmented", true},
                {"diag_monotone", true},
                {"phi_convex", true},
                {"characterization", true},
                {"intersection_interior", false}};
  return e;
}

struct Registry {
  std::vector<CorpusEntry> entries;
  std::map<std::string, std::size_t> index;

  Registry() {
    auto add = [this](CorpusEntry e) {
      index[e.id] = entries.size();
      entries.push_back(std::move(e));
    };
    add(make_ex3_1());
    add(make_ex3_2());
    add(make_rem3_3());
    add(make_ex4_1());
    add(make_ex4_2());
    add(make_ex4_3());
    add(make_ex4_4());
    add(make_ex4_5());
    add(make_rem5_1());
    add(make_s4_p1());
    add(make_s4_p2());
    add(make_s4_p3());
    add(make_s4_p4());
    add(make_s4_p5());
    add(make_mp_plus());
  }
};

const Registry& registry() {
  static const Registry r;
  return r;
}

}  // namespace

const CorpusEntry& corpus_get(const std::string& id) {
  const Registry& r = registry();
  auto it = r.index.find(id);
  if (it == r.index.end()) throw std::out_of_range("unknown corpus id: " + id);
  return r.entries[it->second];
}

std::vector<const CorpusEntry*> corpus_list() {
  std::vector<const CorpusEntry*> out;
  for (const CorpusEntry& e : registry().entries) out.push_back(&e);
  return out;
}

}  // namespace sharpeq
