#include "sharpeq/serialize.hpp"

#include <cstdio>
#include <ostream>

namespace sharpeq {

using nlohmann::json;

void to_json(json& j, const Halfspace& h) { j = json{{"a", h.a}, {"b", h.b}}; }

void from_json(const json& j, Halfspace& h) {
  j.at("a").get_to(h.a);
  j.at("b").get_to(h.b);
}

void to_json(json& j, const Ball& b) { j = json{{"center", b.center}, {"radius", b.radius}}; }

void from_json(const json& j, Ball& b) {
  j.at("center").get_to(b.center);
  j.at("radius").get_to(b.radius);
}

void to_json(json& j, const VPolytope& p) { j = json{{"dim", p.dim}, {"vertices", p.vertices}}; }

void from_json(const json& j, VPolytope& p) {
  p = VPolytope::of(j.at("vertices").get<std::vector<Vec>>());
  if (p.vertices.empty()) p.dim = j.at("dim").get<int>();
}

void to_json(json& j, const PolyCone& c) { j = json{{"dim", c.dim}, {"rows", c.h_rows}}; }

void from_json(const json& j, PolyCone& c) {
  c = PolyCone::from_h(j.at("dim").get<int>(), j.at("rows").get<std::vector<Vec>>());
}

void to_json(json& j, const ConvexPiece& p) {
  j = json{{"dim", p.dim},
           {"inequalities", p.inequalities},
           {"equalities", p.equalities},
           {"witness", p.witness}};
  if (p.ball) j["ball"] = *p.ball;
}

void from_json(const json& j, ConvexPiece& p) {
  std::optional<Ball> ball;
  if (j.contains("ball")) ball = j.at("ball").get<Ball>();
  p = ConvexPiece::make(j.at("dim").get<int>(),
                        j.at("inequalities").get<std::vector<Halfspace>>(),
                        j.at("equalities").get<std::vector<Halfspace>>(), std::move(ball),
                        j.at("witness").get<Vec>());
}

void to_json(json& j, const ClosedSet& s) { j = json{{"pieces", s.pieces}}; }

void from_json(const json& j, ClosedSet& s) {
  s = ClosedSet::of(j.at("pieces").get<std::vector<ConvexPiece>>());
}

json report_json(const SharpnessReport& rep) {
  json samples = json::array();
  for (const auto& [z, a] : rep.samples) samples.push_back({{"z", z}, {"alpha", a}});
  return json{{"check", "weak_sharp"}, {"verdict", rep.verdict},   {"alpha0", rep.alpha0},
              {"inf_alpha", rep.inf_alpha}, {"samples", samples},  {"note", rep.note}};
}

json report_json(const AugmentedReport& rep) {
  json trace = json::array();
  for (const PsiEntry& e : rep.trace.entries)
    trace.push_back({{"k", e.k}, {"psi_min", e.psi_min}, {"psi_max", e.psi_max}});
  return json{{"check", "augmented"},
              {"passed", rep.passed},
              {"inclusion_holds", rep.inclusion_holds},
              {"psi_tail_ok", rep.psi_tail_ok},
              {"vacuous", rep.vacuous},
              {"alpha0", rep.alpha0},
              {"psi_tail_max", rep.psi_tail_max},
              {"window", rep.trace.window},
              {"trace", trace},
              {"note", rep.note}};
}

json report_json(const TerminationReport& rep) {
  const char* verdict = "inconclusive";
  if (rep.verdict == TerminationReport::Verdict::Agree) verdict = "agree";
  if (rep.verdict == TerminationReport::Verdict::Violation) verdict = "violation";
  json j{{"check", "finite_termination"},
         {"verdict", verdict},
         {"min_rho", rep.min_rho},
         {"argmin_rho", rep.argmin_rho},
         {"rho_vanishes", rep.rho_vanishes},
         {"hypothesis", report_json(rep.hypothesis)}};
  if (rep.identified_at >= 0)
    j["identified_at"] = rep.identified_at;
  else
    j["identified_at"] = nullptr;
  return j;
}

json run_json(const RunRecord& rec) {
  json j{{"problem", rec.problem_id}, {"solver", rec.solver},      {"step", rec.step_desc},
         {"seed", rec.seed},          {"iterates", rec.iterates},  {"rho", rec.rho_trace},
         {"dist", rec.dist_trace}};
  if (rec.identification_index >= 0)
    j["identification_index"] = rec.identification_index;
  else
    j["identification_index"] = nullptr;
  return j;
}

json corpus_json() {
  json out = json::array();
  for (const CorpusEntry* e : corpus_list()) {
    out.push_back({{"id", e->id},
                   {"title", e->title},
                   {"origin", e->origin},
                   {"kind", kind_name(e->problem.kind)},
                   {"dim", e->problem.dim},
                   {"has_certificate", e->has_H()},
                   {"expected", e->expected}});
  }
  return out;
}

namespace {

// snprintf keeps the C locale's '.' decimal separator regardless of the
// process environment.
std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void write_run_csv(std::ostream& os, const EquilibriumProblem& prob, const RunRecord& rec,
                   const AugmentedMapping* H) {
  os << "k";
  for (int i = 0; i < prob.dim; ++i) os << ",x" << i;
  os << ",rho,dist,psi_min\n";
  for (int k = 0; k < rec.steps(); ++k) {
    const Vec& x = rec.iterates[static_cast<std::size_t>(k)];
    os << k;
    for (double c : x) os << ',' << csv_num(c);
    os << ',' << csv_num(rec.rho_trace[static_cast<std::size_t>(k)]);
    double d = -1.0;
    if (k < static_cast<int>(rec.dist_trace.size())) {
      d = rec.dist_trace[static_cast<std::size_t>(k)];
      os << ',' << csv_num(d);
    } else {
      os << ',';
    }
    if (H && d > kPsiMembershipTol)
      os << ',' << csv_num(psi(prob, *H, x).first);
    else
      os << ',';
    os << '\n';
  }
}

}  // namespace sharpeq
