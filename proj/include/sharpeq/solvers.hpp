#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sharpeq/sharpness.hpp"

namespace sharpeq {

inline constexpr double kIdentifyTol = 1e-6;  // dist(x, solution set) threshold
inline constexpr double kRhoTol = 1e-6;       // projected-subgradient threshold

// rho(x) = min over u in the diagonal subdifferential of ||P_{T_S(x)}(-u)||;
// zero exactly at stationary points.
double rho(const EquilibriumProblem& prob, const Vec& x);

struct StepRule {
  enum class Kind { Constant, Diminishing, Polyak };
  Kind kind = Kind::Constant;
  double value = 0.1;   // constant step, or c in c/(k+1)
  double f_star = 0.0;  // Polyak target (programming instances)

  static StepRule constant(double t) { return {Kind::Constant, t, 0.0}; }
  static StepRule diminishing(double c) { return {Kind::Diminishing, c, 0.0}; }
  static StepRule polyak(double f_star) { return {Kind::Polyak, 1.0, f_star}; }
};

// One instrumented run: iterates with their rho values and (when the solution
// set is declared) distances to it. The metadata block pins down the run for
// serialization and reproducibility: identical (problem_id, x0, step rule,
// max_iter, seed) give bit-identical records.
struct RunRecord {
  std::string solver;
  std::vector<Vec> iterates;
  std::vector<double> rho_trace;
  std::vector<double> dist_trace;  // empty without a declared solution set

  std::string problem_id;          // filled by callers that know the registry
  std::string step_desc;           // e.g. "polyak:0", "const:0.1", "t:0.2"
  std::uint64_t seed = 0;
  int identification_index = -1;   // detect_identification result, or -1

  int steps() const { return static_cast<int>(iterates.size()); }
};

// Projected subgradient on the diagonal: x+ = P_S(x - t_k u_k), with u_k the
// first vertex of the diagonal subdifferential (a deterministic selection).
RunRecord diag_subgradient_run(const EquilibriumProblem& prob, const Vec& x0, int max_iter,
                               const StepRule& rule);

// Extragradient: y = P_S(x - t u(x)), x+ = P_S(x - t u(y)).
RunRecord extragradient_run(const EquilibriumProblem& prob, const Vec& x0, int max_iter,
                            double step);

// Proximal point: x+ = argmin_{y in S} phi(x, y) + (c/2)||y - x||^2, the inner
// problem solved by projected compass search refined to ~1e-12.
RunRecord proximal_point_run(const EquilibriumProblem& prob, const Vec& x0, int max_iter,
                             double reg);

// First index k with dist(x^j, solution set) <= eps for every j >= k; -1 when
// the tail never settles in the solution set.
int detect_identification(const RunRecord& rec, double eps = kIdentifyTol);

struct TerminationReport {
  enum class Verdict {
    Inconclusive,  // augmented-sharpness hypothesis not certified for this run
    Agree,         // finite identification and vanishing rho agree
    Violation      // the two sides of the equivalence disagree
  };
  Verdict verdict = Verdict::Inconclusive;
  AugmentedReport hypothesis;
  int identified_at = -1;
  double min_rho = 0.0;
  int argmin_rho = -1;
  bool rho_vanishes = false;
};

// Finite-termination equivalence on one recorded run: under the augmented
// sharpness hypothesis (checked first; failure refuses a verdict), settling
// into the solution set must coincide with rho dipping below tol.
TerminationReport check_finite_termination(const EquilibriumProblem& prob,
                                           const AugmentedMapping& H, const RunRecord& rec,
                                           double alpha0, double eps = kIdentifyTol,
                                           double rho_tol = kRhoTol);

}  // namespace sharpeq
