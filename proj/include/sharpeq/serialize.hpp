#pragma once

#include <iosfwd>

#include <json.hpp>

#include "sharpeq/corpus.hpp"
#include "sharpeq/solvers.hpp"

namespace sharpeq {

// Geometry values round-trip through JSON: points are arrays of numbers,
// halfspaces are {"a": [...], "b": x}.
void to_json(nlohmann::json& j, const Halfspace& h);
void from_json(const nlohmann::json& j, Halfspace& h);
void to_json(nlohmann::json& j, const Ball& b);
void from_json(const nlohmann::json& j, Ball& b);
void to_json(nlohmann::json& j, const VPolytope& p);
void from_json(const nlohmann::json& j, VPolytope& p);
void to_json(nlohmann::json& j, const PolyCone& c);
void from_json(const nlohmann::json& j, PolyCone& c);
void to_json(nlohmann::json& j, const ConvexPiece& p);
void from_json(const nlohmann::json& j, ConvexPiece& p);
void to_json(nlohmann::json& j, const ClosedSet& s);
void from_json(const nlohmann::json& j, ClosedSet& s);

// Checker reports (one-way: reports are emitted, never read back).
nlohmann::json report_json(const SharpnessReport& rep);
nlohmann::json report_json(const AugmentedReport& rep);
nlohmann::json report_json(const TerminationReport& rep);

// Full run record with metadata; iterates, rho and dist traces, optional
// identification index.
nlohmann::json run_json(const RunRecord& rec);

// Registry export: ids, titles, origins, kinds, expected verdict tables.
nlohmann::json corpus_json();

// CSV trace: header "k,x0,x1[,x2],rho,dist,psi_min", one line per iterate,
// LF endings, '.' decimal separator. psi_min is blank for iterates inside
// the solution set and when no mapping H is supplied.
void write_run_csv(std::ostream& os, const EquilibriumProblem& prob, const RunRecord& rec,
                   const AugmentedMapping* H = nullptr);

}  // namespace sharpeq
