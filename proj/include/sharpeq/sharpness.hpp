#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sharpeq/problems.hpp"

namespace sharpeq {

inline constexpr double kDefaultInteriorMargin = 1e-3;
inline constexpr int kDefaultTailWindow = 50;
inline constexpr double kDefaultPsiTol = 1e-6;
// Iterates closer to the solution set than this are read as members and do
// not enter the psi trace. Matches the identification tolerance: the index
// set of condition (b) and "terminates finitely" must use the same notion of
// membership, or near-kink subdifferential widening poisons the trace.
inline constexpr double kPsiMembershipTol = 1e-6;

// Set-valued mapping H on the solution set, used by the augmented-sharpness
// certificate. Corpus mappings are piecewise-constant: the rule receives the
// index of the solution-set piece containing z together with z itself.
struct AugmentedMapping {
  std::function<SubdiffSet(int piece_index, const Vec& z)> value;
  std::string param_name;  // "lambda" or "epsilon"
  double param = 0.0;
  double param_lo = 0.0, param_hi = 0.0;  // documented admissible range

  SubdiffSet at(const EquilibriumProblem& prob, const Vec& z) const;
};

struct SharpnessReport {
  std::vector<std::pair<Vec, double>> samples;  // (z, local modulus)
  double inf_alpha = 0.0;
  double alpha0 = 0.0;
  bool verdict = false;
  std::string note;
};

struct PsiEntry {
  int k = 0;
  double psi_min = 0.0, psi_max = 0.0;
};

// Entries exist only for iterates outside the solution set.
struct PsiTrace {
  std::vector<PsiEntry> entries;
  int window = kDefaultTailWindow;
};

struct AugmentedReport {
  bool inclusion_holds = false;  // condition (a): ball inclusion at alpha0 on sampled z
  bool psi_tail_ok = false;      // condition (b): tail-window max of psi_min >= -tol
  bool vacuous = false;          // no iterate left the solution set
  bool passed = false;
  double alpha0 = 0.0;
  double psi_tail_max = 0.0;
  PsiTrace trace;
  std::string note;
};

// Default solution-set sample: piece vertices, witnesses, and a few
// low-discrepancy points projected onto each piece.
std::vector<Vec> solution_samples(const EquilibriumProblem& prob);

// Largest alpha (bisection on [0,10] to 1e-6) with
// alpha * B inside  set + [T_S(z) n N^_Sbar(z)]polar
// over the sampled directions; `set` is the diagonal subdifferential unless
// overridden (override realizes the augmented condition (a)).
double local_modulus(const EquilibriumProblem& prob, const Vec& z,
                     const std::vector<Vec>& directions,
                     const std::optional<SubdiffSet>& set_override = std::nullopt);

SharpnessReport check_weak_sharp(const EquilibriumProblem& prob, const std::vector<Vec>& z_samples,
                                 const std::vector<Vec>& directions, double alpha0);

// Primal inequality for programming instances: f(y) - f* >= alpha0 * dist(y, Sbar)
// on sampled feasible y, within 1e-8.
bool check_weak_sharp_mp(const EquilibriumProblem& prob, int sample_count, double alpha0);

// Smooth-point non-degeneracy: the delta-ball around -grad lies in N_S(z).
bool check_strong_nondegenerate(const EquilibriumProblem& prob, const Vec& z,
                                double margin = kDefaultInteriorMargin);

// The cone G: intersection over sampled solution points of [T_S n N^_Sbar]polar.
PolyCone compute_G(const EquilibriumProblem& prob, const std::vector<Vec>& z_samples);

// Extremes of <u - v, x - P(x)> / ||x - P(x)|| over vertex selections
// u in diag_subdiff(x), v in H(P(x)).
std::pair<double, double> psi(const EquilibriumProblem& prob, const AugmentedMapping& H,
                              const Vec& x);

AugmentedReport check_augmented_weak_sharp(const EquilibriumProblem& prob,
                                           const AugmentedMapping& H,
                                           const std::vector<Vec>& sequence, double alpha0,
                                           int tail_window = kDefaultTailWindow,
                                           double psi_tol = kDefaultPsiTol);

// The negated diagonal subdifferential meets N_S(z) inside the delta-interior
// of G at every sampled solution point.
bool check_eq_intersection_interior(const EquilibriumProblem& prob,
                                    const std::vector<Vec>& z_samples,
                                    double margin = kDefaultInteriorMargin);

// Diagonal-gradient gap ||grad(x^k) - grad(P(x^k))|| vanishes along the tail.
bool check_gradient_gap(const EquilibriumProblem& prob, const std::vector<Vec>& sequence,
                        int tail_window = kDefaultTailWindow);

// Every accumulation point pbar of the tail diagonal gradients has -pbar in
// the delta-interior of G.
bool check_accumulation_interior(const EquilibriumProblem& prob, const std::vector<Vec>& sequence,
                                 double margin = kDefaultInteriorMargin,
                                 int tail_window = kDefaultTailWindow);

}  // namespace sharpeq
