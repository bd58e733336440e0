#include "sharpeq/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace sharpeq {

namespace {

Vec pick_subgradient(const EquilibriumProblem& prob, const Vec& x) {
  auto sd = prob.diag_subdiff(x);
  if (sd.vertices.empty()) throw ProblemError("empty diagonal subdifferential");
  return sd.vertices.front();
}

void instrument(const EquilibriumProblem& prob, RunRecord& rec, const Vec& x) {
  rec.iterates.push_back(x);
  rec.rho_trace.push_back(rho(prob, x));
  if (prob.has_solution_set()) rec.dist_trace.push_back(prob.dist_solution(x));
}

double step_length(const StepRule& rule, int k, const EquilibriumProblem& prob, const Vec& x,
                   const Vec& u) {
  switch (rule.kind) {
    case StepRule::Kind::Constant:
      return rule.value;
    case StepRule::Kind::Diminishing:
      return rule.value / (k + 1);
    case StepRule::Kind::Polyak: {
      if (prob.kind != ProblemKind::MP || !prob.objective)
        throw ProblemError("Polyak steps need a programming instance");
      double n2 = dot(u, u);
      if (n2 <= 1e-16) return 0.0;
      return std::max(prob.objective->value(x) - rule.f_star, 0.0) / n2;
    }
  }
  return rule.value;
}

std::string trim_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string describe(const StepRule& rule) {
  switch (rule.kind) {
    case StepRule::Kind::Constant:
      return "const:" + trim_num(rule.value);
    case StepRule::Kind::Diminishing:
      return "dim:" + trim_num(rule.value);
    case StepRule::Kind::Polyak:
      return "polyak:" + trim_num(rule.f_star);
  }
  return "";
}

}  // namespace

double rho(const EquilibriumProblem& prob, const Vec& x) {
  PolyCone neg_normal = polar(tangent_cone_piece(prob.S, x)).negated();
  return polytope_cone_distance(prob.diag_subdiff(x), neg_normal).distance;
}

RunRecord diag_subgradient_run(const EquilibriumProblem& prob, const Vec& x0, int max_iter,
                               const StepRule& rule) {
  RunRecord rec;
  rec.solver = "subgrad";
  rec.step_desc = describe(rule);
  Vec x = project_piece(prob.S, x0);
  instrument(prob, rec, x);
  for (int k = 0; k < max_iter; ++k) {
    Vec u = pick_subgradient(prob, x);
    double t = step_length(rule, k, prob, x, u);
    x = project_piece(prob.S, sub(x, scale(t, u)));
    instrument(prob, rec, x);
  }
  return rec;
}

RunRecord extragradient_run(const EquilibriumProblem& prob, const Vec& x0, int max_iter,
                            double step) {
  RunRecord rec;
  rec.solver = "extragradient";
  rec.step_desc = "t:" + trim_num(step);
  Vec x = project_piece(prob.S, x0);
  instrument(prob, rec, x);
  for (int k = 0; k < max_iter; ++k) {
    Vec y = project_piece(prob.S, sub(x, scale(step, pick_subgradient(prob, x))));
    x = project_piece(prob.S, sub(x, scale(step, pick_subgradient(prob, y))));
    instrument(prob, rec, x);
  }
  return rec;
}

RunRecord proximal_point_run(const EquilibriumProblem& prob, const Vec& x0, int max_iter,
                             double reg) {
  RunRecord rec;
  rec.solver = "prox";
  rec.step_desc = "c:" + trim_num(reg);
  Vec x = project_piece(prob.S, x0);
  instrument(prob, rec, x);

  double radius0 = 1.0;
  for (int i = 0; i < prob.dim; ++i)
    radius0 = std::max(radius0, prob.sample_hi[i] - prob.sample_lo[i]);

  for (int k = 0; k < max_iter; ++k) {
    auto g = [&](const Vec& y) { return prob.phi(x, y) + 0.5 * reg * dist2(y, x); };
    // projected compass search for the regularized inner problem
    Vec center = x;
    double best = g(center);
    double r = radius0;
    while (r > 1e-13) {
      bool moved = false;
      for (int i = 0; i < prob.dim; ++i)
        for (double s : {-1.0, 1.0}) {
          Vec cand = center;
          cand[i] += s * r;
          cand = project_piece(prob.S, cand);
          double val = g(cand);
          if (val < best - 1e-15) {
            best = val;
            center = cand;
            moved = true;
          }
        }
      if (!moved) r *= 0.5;
    }
    x = center;
    instrument(prob, rec, x);
  }
  return rec;
}

int detect_identification(const RunRecord& rec, double eps) {
  if (rec.dist_trace.empty()) return -1;
  int n = static_cast<int>(rec.dist_trace.size());
  int first = -1;
  for (int k = n - 1; k >= 0; --k) {
    if (rec.dist_trace[static_cast<std::size_t>(k)] > eps) break;
    first = k;
  }
  return first;
}

TerminationReport check_finite_termination(const EquilibriumProblem& prob,
                                           const AugmentedMapping& H, const RunRecord& rec,
                                           double alpha0, double eps, double rho_tol) {
  TerminationReport out;
  out.hypothesis = check_augmented_weak_sharp(prob, H, rec.iterates, alpha0);
  out.identified_at = detect_identification(rec, eps);

  out.min_rho = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(rec.rho_trace.size()); ++k) {
    double r = rec.rho_trace[static_cast<std::size_t>(k)];
    if (r < out.min_rho) {
      out.min_rho = r;
      out.argmin_rho = k;
    }
  }
  out.rho_vanishes = out.min_rho <= rho_tol;

  if (!out.hypothesis.passed) {
    out.verdict = TerminationReport::Verdict::Inconclusive;
    return out;
  }
  bool terminated = out.identified_at >= 0;
  out.verdict = (terminated == out.rho_vanishes) ? TerminationReport::Verdict::Agree
                                                 : TerminationReport::Verdict::Violation;
  return out;
}

}  // namespace sharpeq
