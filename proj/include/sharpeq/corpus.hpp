#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sharpeq/sharpness.hpp"

namespace sharpeq {

// One registered instance: the problem, its certificates, and the expected
// checker verdicts the test suite regresses against.
struct CorpusEntry {
  std::string id;
  std::string title;
  std::string origin;  // where in the worked-example collection it comes from
  EquilibriumProblem problem;

  // Augmented-mapping factory (parameter -> mapping); absent for entries
  // that ship without a certificate.
  std::function<AugmentedMapping(double)> make_H;
  double H_default = 0.0;

  // Admissible-iterate predicate for the augmented verdict (empty = all of S).
  std::function<bool(const Vec&)> sequence_domain;
  // Deterministic feasible sequence exercising the augmented certificate.
  std::function<std::vector<Vec>(int)> builtin_sequence;

  // Solution-point samples for sharpness checks (solution_samples(problem)
  // plus any instance-specific degenerate approach points).
  std::vector<Vec> sharp_samples;
  double weak_sharp_alpha0 = 0.1;

  std::map<std::string, bool> expected;

  bool has_H() const { return static_cast<bool>(make_H); }
  AugmentedMapping default_H() const { return make_H(H_default); }
};

const CorpusEntry& corpus_get(const std::string& id);
std::vector<const CorpusEntry*> corpus_list();

}  // namespace sharpeq
