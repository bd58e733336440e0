#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sharpeq/analysis.hpp"
#include "sharpeq/geometry.hpp"

namespace sharpeq {

enum class ProblemKind { Generic, MP, VIP, SPP, NEP };

std::string kind_name(ProblemKind k);

// Equilibrium problem: find x in S with phi(x, y) >= 0 for all y in S.
// S is a single convex piece; the (possibly nonconvex) solution set, when
// known in closed form, is stored alongside.
struct EquilibriumProblem {
  int dim = 0;
  ProblemKind kind = ProblemKind::Generic;
  ConvexPiece S;
  std::function<double(const Vec&, const Vec&)> phi;
  // The diagonal subdifferential x -> subdiff_y phi(x, .) at y = x.
  std::function<SubdiffSet(const Vec&)> diag_subdiff;
  std::optional<ClosedSet> solution_set;
  // Optional closed-form projector onto the solution set, overriding the
  // generic piecewise projection.
  std::function<Vec(const Vec&)> solution_projector;
  std::optional<PiecewiseFn> objective;  // MP only
  // Bounded box used by samplers (S itself may be unbounded).
  Vec sample_lo, sample_hi;
  bool locally_lipschitz = true;
  // Constancy/convexity hypotheses behind the solution-set characterization
  // are declared per instance, not inferred.
  bool characterization_hypotheses = false;

  ClosedSet S_set() const { return ClosedSet::of({S}); }
  bool has_solution_set() const { return solution_set.has_value(); }
  Vec project_solution(const Vec& x) const;
  double dist_solution(const Vec& x) const;
  bool in_solution_set(const Vec& x, double tol = 1e-10) const;
};

struct ProblemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// phi(x,y) = f(y) - f(x)
EquilibriumProblem from_mp(PiecewiseFn f, ConvexPiece S);
// phi(x,y) = <F(x), y - x>
EquilibriumProblem from_vip(std::function<Vec(const Vec&)> F, ConvexPiece S);
// Saddle problem on S = S1 x S2: phi(x,y) = varphi(y1,x2) - varphi(x1,y2);
// the diagonal subdifferential pairs the block gradients as (d1, -d2).
EquilibriumProblem from_spp(PiecewiseFn varphi, int n1, int n2, ConvexPiece S);
// Nash problem, player i controlling coordinate i: each f_i is read as a
// function of the full vector, phi(x,y) = sum_i f_i(x with y_i) - f_i(x).
EquilibriumProblem from_nep(std::vector<PiecewiseFn> fs, ConvexPiece S);

// Low-discrepancy points in a box (Halton), plus a projected variant that
// maps them onto a convex piece.
std::vector<Vec> halton_box(const Vec& lo, const Vec& hi, int count, int skip = 0);
std::vector<Vec> feasible_samples(const EquilibriumProblem& prob, int count);

// True iff min over sampled y of phi(x, y) >= -1e-8; membership in the
// declared solution set is used instead when available.
bool check_solution(const EquilibriumProblem& prob, const Vec& x, const std::vector<Vec>& y_samples);

struct StationaryVerdict {
  bool is_stationary = false;
  std::optional<Vec> witness;  // a u in the diagonal subdifferential meeting -N_S(x)
  double gap = 0.0;
};

// Stationarity: diag_subdiff(x) meets -N_S(x); gap is the distance between
// the two sets.
StationaryVerdict check_stationary(const EquilibriumProblem& prob, const Vec& x);

struct MonotoneReport {
  double worst_monotone = 0.0;  // max of phi(x,y) + phi(y,x); > 0 violates monotonicity
  std::pair<Vec, Vec> monotone_witness;
  double worst_pseudo = 0.0;  // max of phi(y,x) over pairs with phi(x,y) >= 0
  std::pair<Vec, Vec> pseudo_witness;
};

MonotoneReport monotone_sample(const EquilibriumProblem& prob, int pair_count,
                               std::uint64_t seed = 0);

struct SubdiffMonotoneReport {
  double worst = 0.0;  // min over pairs and vertex selections of <u_x - u_z, x - z>
  std::pair<Vec, Vec> witness;
};

SubdiffMonotoneReport subdiff_monotone_sample(const EquilibriumProblem& prob, int pair_count,
                                              std::uint64_t seed = 0);

struct ConvexityReport {
  double worst = 0.0;  // max midpoint-convexity violation of phi(x, .); > 0 violates
  Vec witness_x, witness_y1, witness_y2;
};

ConvexityReport convexity_sample(const EquilibriumProblem& prob, int sample_count,
                                 std::uint64_t seed = 0);

// Solution-set characterization: the intersection diag_subdiff(x) n (-N_S(x))
// is the same polytope at x as at the reference solution xbar.
bool characterization_check(const EquilibriumProblem& prob, const Vec& xbar, const Vec& x);

}  // namespace sharpeq
