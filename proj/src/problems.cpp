#include "sharpeq/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sharpeq {

std::string kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::Generic:
      return "EP";
    case ProblemKind::MP:
      return "MP";
    case ProblemKind::VIP:
      return "VIP";
    case ProblemKind::SPP:
      return "SPP";
    case ProblemKind::NEP:
      return "NEP";
  }
  return "?";
}

Vec EquilibriumProblem::project_solution(const Vec& x) const {
  if (!solution_set) throw ProblemError("project_solution: no solution set declared");
  if (solution_projector) return solution_projector(x);
  return project_set(*solution_set, x).first;
}

double EquilibriumProblem::dist_solution(const Vec& x) const {
  return dist(project_solution(x), x);
}

bool EquilibriumProblem::in_solution_set(const Vec& x, double tol) const {
  if (!solution_set) throw ProblemError("in_solution_set: no solution set declared");
  return solution_set->contains(x, tol);
}

// --- constructors ----------------------------------------------------------

namespace {

Vec default_lo(const ConvexPiece& S) {
  auto vs = piece_vertices(S);
  Vec lo(static_cast<std::size_t>(S.dim), -1.0), hi(static_cast<std::size_t>(S.dim), 1.0);
  if (!vs.empty()) {
    lo = hi = vs.front();
    for (const Vec& v : vs)
      for (std::size_t i = 0; i < v.size(); ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
  }
  return lo;
}

Vec default_hi(const ConvexPiece& S) {
  auto vs = piece_vertices(S);
  Vec hi(static_cast<std::size_t>(S.dim), 1.0);
  if (!vs.empty()) {
    hi = vs.front();
    for (const Vec& v : vs)
      for (std::size_t i = 0; i < v.size(); ++i) hi[i] = std::max(hi[i], v[i]);
  }
  return hi;
}

}  // namespace

EquilibriumProblem from_mp(PiecewiseFn f, ConvexPiece S) {
  EquilibriumProblem p;
  p.dim = S.dim;
  p.kind = ProblemKind::MP;
  p.S = S;
  p.objective = f;
  p.phi = [f](const Vec& x, const Vec& y) { return f.value(y) - f.value(x); };
  p.diag_subdiff = [f](const Vec& x) { return f.subdiff(x); };
  p.sample_lo = default_lo(S);
  p.sample_hi = default_hi(S);
  return p;
}

EquilibriumProblem from_vip(std::function<Vec(const Vec&)> F, ConvexPiece S) {
  EquilibriumProblem p;
  p.dim = S.dim;
  p.kind = ProblemKind::VIP;
  p.S = S;
  p.phi = [F](const Vec& x, const Vec& y) { return dot(F(x), sub(y, x)); };
  p.diag_subdiff = [F](const Vec& x) { return VPolytope::point(F(x)); };
  p.sample_lo = default_lo(S);
  p.sample_hi = default_hi(S);
  return p;
}

EquilibriumProblem from_spp(PiecewiseFn varphi, int n1, int n2, ConvexPiece S) {
  if (n1 + n2 != S.dim) throw ProblemError("from_spp: block dimensions do not sum to dim");
  EquilibriumProblem p;
  p.dim = S.dim;
  p.kind = ProblemKind::SPP;
  p.S = S;
  p.phi = [varphi, n1, n2](const Vec& x, const Vec& y) {
    Vec a(x), b(x);
    for (int i = 0; i < n1; ++i) a[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)];
    for (int i = 0; i < n2; ++i)
      b[static_cast<std::size_t>(n1 + i)] = y[static_cast<std::size_t>(n1 + i)];
    return varphi.value(a) - varphi.value(b);
  };
  p.diag_subdiff = [varphi, n1, n2](const Vec& x) {
    // (d1, -d2) over all vertex selections of the two block subdifferentials
    auto full = varphi.subdiff(x).vertices;
    std::vector<Vec> out;
    for (const Vec& u : full)
      for (const Vec& w : full) {
        Vec v(static_cast<std::size_t>(n1 + n2));
        for (int i = 0; i < n1; ++i) v[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
        for (int i = 0; i < n2; ++i)
          v[static_cast<std::size_t>(n1 + i)] = -w[static_cast<std::size_t>(n1 + i)];
        out.push_back(std::move(v));
      }
    return VPolytope::of(std::move(out));
  };
  p.sample_lo = default_lo(S);
  p.sample_hi = default_hi(S);
  return p;
}

EquilibriumProblem from_nep(std::vector<PiecewiseFn> fs, ConvexPiece S) {
  if (static_cast<int>(fs.size()) != S.dim)
    throw ProblemError("from_nep: one function per coordinate required");
  EquilibriumProblem p;
  p.dim = S.dim;
  p.kind = ProblemKind::NEP;
  p.S = S;
  p.phi = [fs](const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      Vec z(x);
      z[i] = y[i];
      s += fs[i].value(z) - fs[i].value(x);
    }
    return s;
  };
  p.diag_subdiff = [fs](const Vec& x) {
    // product over players of the i-th component of each player's subdiff
    std::vector<Vec> acc{Vec{}};
    for (std::size_t i = 0; i < fs.size(); ++i) {
      std::vector<Vec> next;
      for (const Vec& head : acc)
        for (const Vec& u : fs[i].subdiff(x).vertices) {
          Vec v(head);
          v.push_back(u[i]);
          next.push_back(std::move(v));
        }
      acc = std::move(next);
    }
    return VPolytope::of(std::move(acc));
  };
  p.sample_lo = default_lo(S);
  p.sample_hi = default_hi(S);
  return p;
}

// --- sampling --------------------------------------------------------------

namespace {

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

constexpr int kPrimes[4] = {2, 3, 5, 7};

}  // namespace

std::vector<Vec> halton_box(const Vec& lo, const Vec& hi, int count, int skip) {
  std::vector<Vec> out;
  const int n = static_cast<int>(lo.size());
  for (int k = 0; k < count; ++k) {
    Vec x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double t = halton(k + skip + 1, kPrimes[i]);
      x[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)] +
                                       t * (hi[static_cast<std::size_t>(i)] -
                                            lo[static_cast<std::size_t>(i)]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Vec> feasible_samples(const EquilibriumProblem& prob, int count) {
  std::vector<Vec> out = piece_vertices(prob.S);
  for (const Vec& x : halton_box(prob.sample_lo, prob.sample_hi, count))
    out.push_back(project_piece(prob.S, x));
  return out;
}

// --- predicates ------------------------------------------------------------

bool check_solution(const EquilibriumProblem& prob, const Vec& x,
                    const std::vector<Vec>& y_samples) {
  if (!prob.S.contains(x, kTolMember)) throw ProblemError("check_solution: x not in S");
  if (prob.solution_set) return prob.solution_set->contains(x, kTolMember);
  for (const Vec& y : y_samples)
    if (prob.phi(x, y) < -1e-8) return false;
  return true;
}

StationaryVerdict check_stationary(const EquilibriumProblem& prob, const Vec& x) {
  if (!prob.S.contains(x, kTolMember)) throw ProblemError("check_stationary: x not in S");
  PolyCone normal = polar(tangent_cone_piece(prob.S, x));
  auto sd = prob.diag_subdiff(x);
  auto res = polytope_cone_distance(sd, normal.negated());
  StationaryVerdict v;
  v.gap = res.distance;
  v.is_stationary = res.distance <= 1e-8;
  if (v.is_stationary) v.witness = res.polytope_point;
  return v;
}

MonotoneReport monotone_sample(const EquilibriumProblem& prob, int pair_count,
                               std::uint64_t seed) {
  MonotoneReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] {
    Vec x(static_cast<std::size_t>(prob.dim));
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = prob.sample_lo[i] + u(rng) * (prob.sample_hi[i] - prob.sample_lo[i]);
    return project_piece(prob.S, x);
  };
  rep.worst_monotone = -std::numeric_limits<double>::infinity();
  rep.worst_pseudo = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < pair_count; ++t) {
    Vec x = draw(), y = draw();
    double fwd = prob.phi(x, y), back = prob.phi(y, x);
    if (fwd + back > rep.worst_monotone) {
      rep.worst_monotone = fwd + back;
      rep.monotone_witness = {x, y};
    }
    if (fwd >= 0.0 && back > rep.worst_pseudo) {
      rep.worst_pseudo = back;
      rep.pseudo_witness = {x, y};
    }
  }
  return rep;
}

SubdiffMonotoneReport subdiff_monotone_sample(const EquilibriumProblem& prob, int pair_count,
                                              std::uint64_t seed) {
  SubdiffMonotoneReport rep;
  rep.worst = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] {
    Vec x(static_cast<std::size_t>(prob.dim));
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = prob.sample_lo[i] + u(rng) * (prob.sample_hi[i] - prob.sample_lo[i]);
    return project_piece(prob.S, x);
  };
  for (int t = 0; t < pair_count; ++t) {
    Vec x = draw(), z = draw();
    auto du = prob.diag_subdiff(x).vertices;
    auto dz = prob.diag_subdiff(z).vertices;
    for (const Vec& ux : du)
      for (const Vec& uz : dz) {
        double s = dot(sub(ux, uz), sub(x, z));
        if (s < rep.worst) {
          rep.worst = s;
          rep.witness = {x, z};
        }
      }
  }
  return rep;
}

ConvexityReport convexity_sample(const EquilibriumProblem& prob, int sample_count,
                                 std::uint64_t seed) {
  ConvexityReport rep;
  rep.worst = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] {
    Vec x(static_cast<std::size_t>(prob.dim));
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = prob.sample_lo[i] + u(rng) * (prob.sample_hi[i] - prob.sample_lo[i]);
    return project_piece(prob.S, x);
  };
  for (int t = 0; t < sample_count; ++t) {
    Vec x = draw(), y1 = draw(), y2 = draw();
    Vec mid = scale(0.5, add(y1, y2));
    double viol = prob.phi(x, mid) - 0.5 * (prob.phi(x, y1) + prob.phi(x, y2));
    if (viol > rep.worst) {
      rep.worst = viol;
      rep.witness_x = x;
      rep.witness_y1 = y1;
      rep.witness_y2 = y2;
    }
  }
  return rep;
}

bool characterization_check(const EquilibriumProblem& prob, const Vec& xbar, const Vec& x) {
  if (!prob.characterization_hypotheses)
    throw ProblemError("characterization_check: hypotheses not declared for this instance");
  auto cut = [&](const Vec& z) {
    PolyCone neg_normal = polar(tangent_cone_piece(prob.S, z)).negated();
    return intersect_polytope_cone(prob.diag_subdiff(z), neg_normal);
  };
  return hull_hausdorff(cut(xbar), cut(x)) <= 1e-8;
}

}  // namespace sharpeq
