#include "sharpeq/sharpness.hpp"

#include <algorithm>
#include <cmath>

namespace sharpeq {

namespace {

// [T_S(z) n N^_Sbar(z)]polar for a solution point z.
PolyCone bracket_polar(const EquilibriumProblem& prob, const Vec& z) {
  PolyCone t = tangent_cone_piece(prob.S, z);
  PolyCone n_hat = regular_normal_cone(*prob.solution_set, z);
  return polar(intersect_cones(t, n_hat));
}

std::vector<Vec> dedupe_points(std::vector<Vec> pts) {
  std::vector<Vec> out;
  for (Vec& p : pts) {
    bool dup = false;
    for (const Vec& q : out)
      if (dist(q, p) <= 1e-9) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

SubdiffSet AugmentedMapping::at(const EquilibriumProblem& prob, const Vec& z) const {
  int idx = piece_index_of(*prob.solution_set, z);
  if (idx < 0) throw ProblemError("AugmentedMapping: z not in the solution set");
  return value(idx, z);
}

std::vector<Vec> solution_samples(const EquilibriumProblem& prob) {
  if (!prob.solution_set) throw ProblemError("solution_samples: no solution set declared");
  std::vector<Vec> out;
  for (const ConvexPiece& piece : prob.solution_set->pieces) {
    auto vs = piece_vertices(piece);
    out.insert(out.end(), vs.begin(), vs.end());
    out.push_back(project_piece(piece, piece.witness));
    for (const Vec& x : halton_box(prob.sample_lo, prob.sample_hi, 10))
      out.push_back(project_piece(piece, x));
  }
  return dedupe_points(std::move(out));
}

double local_modulus(const EquilibriumProblem& prob, const Vec& z,
                     const std::vector<Vec>& directions,
                     const std::optional<SubdiffSet>& set_override) {
  if (!prob.solution_set || !prob.solution_set->contains(z, kTolMember))
    throw ProblemError("local_modulus: z not in the solution set");
  SubdiffSet set = set_override ? *set_override : prob.diag_subdiff(z);
  PolyCone k = bracket_polar(prob, z);
  auto fits = [&](double r) { return ball_in_sum(r, set, k, directions); };
  if (!fits(0.0)) return 0.0;
  double lo = 0.0, hi = 10.0;
  if (fits(hi)) return hi;
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    (fits(mid) ? lo : hi) = mid;
  }
  return lo;
}

SharpnessReport check_weak_sharp(const EquilibriumProblem& prob, const std::vector<Vec>& z_samples,
                                 const std::vector<Vec>& directions, double alpha0) {
  SharpnessReport rep;
  rep.alpha0 = alpha0;
  rep.inf_alpha = std::numeric_limits<double>::infinity();
  for (const Vec& z : z_samples) {
    double a = local_modulus(prob, z, directions);
    rep.samples.push_back({z, a});
    rep.inf_alpha = std::min(rep.inf_alpha, a);
  }
  rep.verdict = rep.inf_alpha >= alpha0;
  rep.note = "sampled certificate: " + std::to_string(z_samples.size()) + " solution points, " +
             std::to_string(directions.size()) + " directions";
  return rep;
}

bool check_weak_sharp_mp(const EquilibriumProblem& prob, int sample_count, double alpha0) {
  if (prob.kind != ProblemKind::MP || !prob.objective)
    throw ProblemError("check_weak_sharp_mp: programming instance required");
  if (!prob.solution_set) throw ProblemError("check_weak_sharp_mp: no solution set");
  const PiecewiseFn& f = *prob.objective;
  double f_star = f.value(prob.project_solution(prob.S.witness));
  for (const Vec& y : feasible_samples(prob, sample_count)) {
    double lhs = f.value(y) - f_star;
    double rhs = (alpha0 - 1e-8) * prob.dist_solution(y);
    if (lhs < rhs - 1e-8) return false;
  }
  return true;
}

bool check_strong_nondegenerate(const EquilibriumProblem& prob, const Vec& z, double margin) {
  auto sd = prob.diag_subdiff(z);
  if (sd.vertices.size() != 1)
    throw ProblemError("check_strong_nondegenerate: diagonal subdifferential not a singleton");
  Vec target = negate(sd.vertices.front());
  PolyCone normal = polar(tangent_cone_piece(prob.S, z));
  for (const Vec& g : unit_directions(prob.dim))
    if (!normal.contains(add(target, scale(margin, g)), kTolMember)) return false;
  return true;
}

PolyCone compute_G(const EquilibriumProblem& prob, const std::vector<Vec>& z_samples) {
  if (!prob.solution_set) throw ProblemError("compute_G: no solution set declared");
  std::vector<Vec> rows;
  for (const Vec& z : z_samples) {
    PolyCone p = bracket_polar(prob, z);
    rows.insert(rows.end(), p.h_rows.begin(), p.h_rows.end());
  }
  return PolyCone::from_h(prob.dim, std::move(rows));
}

std::pair<double, double> psi(const EquilibriumProblem& prob, const AugmentedMapping& H,
                              const Vec& x) {
  Vec p = prob.project_solution(x);
  double d = dist(x, p);
  if (d <= 1e-10) throw ProblemError("psi: x lies in the solution set");
  Vec g = scale(1.0 / d, sub(x, p));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec& u : prob.diag_subdiff(x).vertices)
    for (const Vec& v : H.at(prob, p).vertices) {
      double s = dot(sub(u, v), g);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  return {lo, hi};
}

AugmentedReport check_augmented_weak_sharp(const EquilibriumProblem& prob,
                                           const AugmentedMapping& H,
                                           const std::vector<Vec>& sequence, double alpha0,
                                           int tail_window, double psi_tol) {
  AugmentedReport rep;
  rep.alpha0 = alpha0;
  rep.trace.window = tail_window;

  auto dirs = unit_directions(prob.dim);
  rep.inclusion_holds = true;
  for (const Vec& z : solution_samples(prob)) {
    PolyCone k = bracket_polar(prob, z);
    if (!ball_in_sum(alpha0, H.at(prob, z), k, dirs)) {
      rep.inclusion_holds = false;
      rep.note = "ball inclusion fails at z = " + to_string(z);
      break;
    }
  }

  for (int k = 0; k < static_cast<int>(sequence.size()); ++k) {
    const Vec& x = sequence[static_cast<std::size_t>(k)];
    if (prob.dist_solution(x) <= kPsiMembershipTol) continue;
    auto [lo, hi] = psi(prob, H, x);
    rep.trace.entries.push_back({k, lo, hi});
  }

  if (rep.trace.entries.empty()) {
    rep.vacuous = true;
    rep.psi_tail_ok = true;
    rep.note = "all iterates lie in the solution set; condition (b) is vacuous";
  } else {
    std::size_t n = rep.trace.entries.size();
    std::size_t start = n > static_cast<std::size_t>(tail_window)
                            ? n - static_cast<std::size_t>(tail_window)
                            : 0;
    rep.psi_tail_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = start; i < n; ++i)
      rep.psi_tail_max = std::max(rep.psi_tail_max, rep.trace.entries[i].psi_min);
    rep.psi_tail_ok = rep.psi_tail_max >= -psi_tol;
  }
  rep.passed = rep.inclusion_holds && rep.psi_tail_ok;
  return rep;
}

bool check_eq_intersection_interior(const EquilibriumProblem& prob,
                                    const std::vector<Vec>& z_samples, double margin) {
  PolyCone g_cone = compute_G(prob, z_samples);
  auto dirs = unit_directions(prob.dim);
  for (const Vec& z : z_samples) {
    PolyCone normal = polar(tangent_cone_piece(prob.S, z));
    auto cut = intersect_polytope_cone(prob.diag_subdiff(z).negated(), normal);
    if (!cut) return false;
    for (const Vec& v : cut->vertices)
      for (const Vec& d : dirs)
        if (!g_cone.contains(add(v, scale(margin, d)), kTolMember)) return false;
  }
  return true;
}

bool check_gradient_gap(const EquilibriumProblem& prob, const std::vector<Vec>& sequence,
                        int tail_window) {
  std::vector<double> gaps;
  for (const Vec& x : sequence) {
    auto sd = prob.diag_subdiff(x);
    if (sd.vertices.size() != 1)
      throw ProblemError("check_gradient_gap: diagonal subdifferential not a singleton");
    Vec p = prob.project_solution(x);
    gaps.push_back(dist(sd.vertices.front(), prob.diag_subdiff(p).vertices.front()));
  }
  if (gaps.empty()) return true;
  std::size_t start = gaps.size() > static_cast<std::size_t>(tail_window)
                          ? gaps.size() - static_cast<std::size_t>(tail_window)
                          : 0;
  for (std::size_t i = start; i < gaps.size(); ++i)
    if (gaps[i] > 1e-6) return false;
  return gaps.back() <= gaps[start] + 1e-9;
}

bool check_accumulation_interior(const EquilibriumProblem& prob, const std::vector<Vec>& sequence,
                                 double margin, int tail_window) {
  std::vector<Vec> tail;
  std::size_t start = sequence.size() > static_cast<std::size_t>(tail_window)
                          ? sequence.size() - static_cast<std::size_t>(tail_window)
                          : 0;
  for (std::size_t i = start; i < sequence.size(); ++i) {
    auto sd = prob.diag_subdiff(sequence[i]);
    if (sd.vertices.size() != 1)
      throw ProblemError("check_accumulation_interior: diagonal subdifferential not a singleton");
    const Vec& g = sd.vertices.front();
    if (!finite(g) || norm(g) > 1e8) return false;
    tail.push_back(g);
  }
  if (tail.empty()) return true;
  // greedy clustering at radius 1e-4; representatives stand for accumulation
  // points of the gradient tail
  std::vector<Vec> reps;
  for (const Vec& g : tail) {
    bool found = false;
    for (const Vec& r : reps)
      if (dist(r, g) <= 1e-4) {
        found = true;
        break;
      }
    if (!found) reps.push_back(g);
  }
  PolyCone g_cone = compute_G(prob, solution_samples(prob));
  auto dirs = unit_directions(prob.dim);
  for (const Vec& r : reps)
    for (const Vec& d : dirs)
      if (!g_cone.contains(add(negate(r), scale(margin, d)), kTolMember)) return false;
  return true;
}

}  // namespace sharpeq
