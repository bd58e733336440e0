// Command-line surface: `list` prints the instance registry, `check` runs the
// sharpness checkers against one or all instances, `run` executes an
// instrumented solver and emits a CSV trace plus a JSON summary.
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sharpeq/serialize.hpp"

using namespace sharpeq;
using nlohmann::json;

namespace {

// JSON config files mirror the flags: top-level keys for global options,
// one nested object per subcommand.
class ConfigJSON : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string& name = opt->get_lnames()[0];
      if (opt->get_type_size() != 0) {
        if (opt->count() == 1)
          j[name] = opt->results().at(0);
        else if (opt->count() > 1)
          j[name] = opt->results();
        else if (default_also && !opt->get_default_str().empty())
          j[name] = opt->get_default_str();
      } else if (opt->count() >= 1) {
        j[name] = true;
      }
    }
    for (const CLI::App* sub : app->get_subcommands({}))
      j[sub->get_name()] = json::parse(to_config(sub, default_also, false, ""));
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    input >> j;
    return walk(j, "", {});
  }

 private:
  std::vector<CLI::ConfigItem> walk(const json& j, const std::string& name,
                                    std::vector<std::string> prefix) const {
    std::vector<CLI::ConfigItem> out;
    if (j.is_object()) {
      if (!name.empty()) prefix.push_back(name);
      for (auto it = j.begin(); it != j.end(); ++it) {
        auto sub = walk(it.value(), it.key(), prefix);
        out.insert(out.end(), sub.begin(), sub.end());
      }
    } else if (!name.empty()) {
      out.emplace_back();
      CLI::ConfigItem& item = out.back();
      item.name = name;
      item.parents = std::move(prefix);
      if (j.is_boolean())
        item.inputs = {j.get<bool>() ? "true" : "false"};
      else if (j.is_string())
        item.inputs = {j.get<std::string>()};
      else if (j.is_number())
        item.inputs = {j.dump()};
      else if (j.is_array())
        for (const auto& v : j) item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      else
        throw CLI::ConversionError("unsupported config value for " + name);
    } else {
      throw CLI::ConversionError("config root must be a JSON object");
    }
    return out;
  }
};

std::uint64_t env_seed() {
  if (const char* s = std::getenv("SHARPEQ_SEED")) return std::strtoull(s, nullptr, 10);
  return 0;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream os(out_path);
    os << j.dump(2) << '\n';
  }
}

struct CheckOptions {
  bool weak_sharp = false, augmented = false, strong_nondeg = false, interior = false;
  bool monotone = false, characterization = false;
  double alpha = -1.0;       // weak-sharp threshold; < 0 means the entry default
  double alpha0 = 0.1;       // augmented condition (a) radius
  double lambda = -1.0;      // certificate parameter; < 0 means the entry default
  double epsilon = -1.0;
  std::string seq = "builtin";
  int seq_n = 300;

  bool any_flag() const {
    return weak_sharp || augmented || strong_nondeg || interior || monotone || characterization;
  }
};

bool wants(const CheckOptions& o, const CorpusEntry& e, bool flag, const char* key) {
  if (o.any_flag()) return flag;
  return e.expected.count(key) > 0;
}

AugmentedMapping make_mapping(const CorpusEntry& e, const CheckOptions& o) {
  double p = e.H_default;
  if (o.lambda >= 0) p = o.lambda;
  if (o.epsilon >= 0) p = o.epsilon;
  return e.make_H(p);
}

// Runs the requested checks on one entry; fills `match` with the regression
// comparison against the expected table.
json run_checks(const CorpusEntry& e, const CheckOptions& o, bool* match) {
  const EquilibriumProblem& prob = e.problem;
  json checks = json::object();
  *match = true;
  auto record = [&](const char* key, std::optional<bool> verdict, json detail) {
    if (verdict)
      detail["verdict"] = *verdict;
    else
      detail["verdict"] = nullptr;
    checks[key] = std::move(detail);
    if (auto it = e.expected.find(key); it != e.expected.end())
      if (!verdict || *verdict != it->second) *match = false;
  };

  if (wants(o, e, o.weak_sharp, "weak_sharp")) {
    double alpha = o.alpha >= 0 ? o.alpha : e.weak_sharp_alpha0;
    auto rep = check_weak_sharp(prob, e.sharp_samples, unit_directions(prob.dim), alpha);
    record("weak_sharp", rep.verdict, report_json(rep));
  }
  if (wants(o, e, o.augmented, "augmented")) {
    if (!e.has_H()) {
      record("augmented", std::nullopt, {{"note", "no certificate mapping registered"}});
    } else if (o.seq != "builtin") {
      throw CLI::ValidationError("--seq", "only the builtin sequence is available");
    } else {
      auto H = make_mapping(e, o);
      auto rep = check_augmented_weak_sharp(prob, H, e.builtin_sequence(o.seq_n), o.alpha0);
      json detail = report_json(rep);
      detail[H.param_name] = H.param;
      record("augmented", rep.passed, std::move(detail));
    }
  }
  if (wants(o, e, o.strong_nondeg, "strong_nondegenerate")) {
    try {
      bool all = true;
      for (const Vec& z : e.sharp_samples) all = all && check_strong_nondegenerate(prob, z);
      record("strong_nondegenerate", all, {{"samples", e.sharp_samples.size()}});
    } catch (const ProblemError& err) {
      record("strong_nondegenerate", std::nullopt, {{"note", err.what()}});
    }
  }
  if (wants(o, e, o.interior, "intersection_interior")) {
    bool v = check_eq_intersection_interior(prob, solution_samples(prob));
    record("intersection_interior", v, json::object());
  }
  if (wants(o, e, o.monotone, "diag_monotone")) {
    auto rep = subdiff_monotone_sample(prob, 400);
    record("diag_monotone", rep.worst >= -1e-8, {{"worst", rep.worst}});
  }
  if (wants(o, e, o.monotone, "phi_monotone")) {
    auto rep = monotone_sample(prob, 400);
    record("phi_monotone", rep.worst_monotone <= 1e-8, {{"worst", rep.worst_monotone}});
  }
  if (wants(o, e, o.monotone, "phi_convex")) {
    auto rep = convexity_sample(prob, 300);
    record("phi_convex", rep.worst <= 1e-8, {{"worst", rep.worst}});
  }
  if (wants(o, e, o.characterization, "characterization")) {
    if (!prob.characterization_hypotheses) {
      record("characterization", std::nullopt,
             {{"note", "constancy/convexity hypotheses not declared for this instance"}});
    } else {
      Vec ref = solution_samples(prob).front();
      int mismatches = 0;
      for (const Vec& x : feasible_samples(prob, 200))
        if (characterization_check(prob, ref, x) != prob.in_solution_set(x, 1e-9)) ++mismatches;
      record("characterization", mismatches == 0, {{"mismatches", mismatches}});
    }
  }
  return json{{"problem", e.id}, {"kind", kind_name(prob.kind)}, {"checks", std::move(checks)}};
}

StepRule parse_step(const std::string& spec) {
  auto pos = spec.find(':');
  std::string kind = spec.substr(0, pos);
  double v = 0.0;
  if (pos != std::string::npos) {
    try {
      v = std::stod(spec.substr(pos + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--step", "bad numeric part in '" + spec + "'");
    }
  }
  if (kind == "const") return StepRule::constant(pos == std::string::npos ? 0.1 : v);
  if (kind == "dim") return StepRule::diminishing(pos == std::string::npos ? 1.0 : v);
  if (kind == "polyak") return StepRule::polyak(v);
  throw CLI::ValidationError("--step", "expected const:T, dim:C or polyak:FSTAR");
}

Vec parse_point(const std::string& text, int dim) {
  Vec x;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      x.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--x0", "bad coordinate '" + tok + "'");
    }
  }
  if (static_cast<int>(x.size()) != dim)
    throw CLI::ValidationError("--x0", "expected " + std::to_string(dim) + " coordinates");
  return x;
}

int cmd_list(bool as_json, const std::string& out_path) {
  if (as_json) {
    emit(corpus_json(), out_path);
    return 0;
  }
  std::printf("%-10s %-8s %-44s %s\n", "id", "kind", "title", "origin");
  for (const CorpusEntry* e : corpus_list())
    std::printf("%-10s %-8s %-44s %s\n", e->id.c_str(), kind_name(e->problem.kind).c_str(),
                e->title.c_str(), e->origin.c_str());
  return 0;
}

int cmd_check(const std::string& problem, bool all, const CheckOptions& opts, bool regression,
              int jobs, const std::string& out_path) {
  std::vector<const CorpusEntry*> targets;
  if (all) {
    targets = corpus_list();
  } else {
    targets.push_back(&corpus_get(problem));
  }

  std::vector<json> reports(targets.size());
  std::vector<char> matches(targets.size(), 1);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < targets.size(); i = next.fetch_add(1)) {
      bool m = true;
      reports[i] = run_checks(*targets[i], opts, &m);
      matches[i] = m ? 1 : 0;
    }
  };
  int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(targets.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  bool all_match = true;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    reports[i]["mode"] = regression ? "regression" : "explore";
    if (regression) reports[i]["matches_expected"] = static_cast<bool>(matches[i]);
    all_match = all_match && matches[i];
  }
  emit(all ? json(reports) : reports.front(), out_path);
  return (regression && !all_match) ? 1 : 0;
}

int cmd_run(const std::string& problem, const std::string& solver, const std::string& step_spec,
            double t_step, double reg, int n, const std::string& x0_text, double alpha0,
            const std::string& csv_path, const std::string& out_path) {
  const CorpusEntry& e = corpus_get(problem);
  const EquilibriumProblem& prob = e.problem;
  std::uint64_t seed = env_seed();

  Vec x0;
  if (!x0_text.empty()) {
    x0 = parse_point(x0_text, prob.dim);
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < prob.dim; ++i) {
      std::uniform_real_distribution<double> u(prob.sample_lo[i], prob.sample_hi[i]);
      x0.push_back(u(rng));
    }
    x0 = project_piece(prob.S, x0);
  }

  RunRecord rec;
  if (solver == "subgrad") {
    rec = diag_subgradient_run(prob, x0, n, parse_step(step_spec));
  } else if (solver == "extragradient") {
    if (t_step <= 0) throw CLI::ValidationError("--t", "needs a positive step");
    rec = extragradient_run(prob, x0, n, t_step);
  } else if (solver == "prox") {
    if (reg <= 0) throw CLI::ValidationError("--c", "needs a positive regularization");
    rec = proximal_point_run(prob, x0, n, reg);
  } else {
    throw CLI::ValidationError("--solver", "expected subgrad, extragradient or prox");
  }
  rec.problem_id = e.id;
  rec.seed = seed;
  rec.identification_index = detect_identification(rec);

  std::optional<AugmentedMapping> H;
  if (e.has_H()) H = e.default_H();
  if (!csv_path.empty()) {
    std::ofstream os(csv_path);
    write_run_csv(os, prob, rec, H ? &*H : nullptr);
  }

  json summary{{"problem", rec.problem_id},
               {"solver", rec.solver},
               {"step", rec.step_desc},
               {"seed", rec.seed},
               {"steps", rec.steps()},
               {"x0", rec.iterates.front()},
               {"final", rec.iterates.back()},
               {"min_rho", *std::min_element(rec.rho_trace.begin(), rec.rho_trace.end())},
               {"rho_final", rec.rho_trace.back()},
               {"dist_final", rec.dist_trace.empty() ? -1.0 : rec.dist_trace.back()}};
  if (rec.identification_index >= 0)
    summary["identification_index"] = rec.identification_index;
  else
    summary["identification_index"] = nullptr;
  if (H) summary["termination"] = report_json(check_finite_termination(prob, *H, rec, alpha0));
  emit(summary, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for sharpness and finite identification in equilibrium problems"};
  app.config_formatter(std::make_shared<ConfigJSON>());
  app.set_config("--config", "", "JSON config mirroring all flags");
  app.require_subcommand(0, 1);

  auto* list_cmd = app.add_subcommand("list", "print the instance registry")->configurable();
  bool list_json = false;
  std::string list_out;
  list_cmd->add_flag("--json", list_json, "emit the registry as JSON");
  list_cmd->add_option("--out", list_out, "write output to a file instead of stdout");

  auto* check_cmd = app.add_subcommand("check", "run sharpness checkers")->configurable();
  std::string check_problem, check_out;
  bool check_all = false, regression = false;
  int jobs = 1;
  CheckOptions opts;
  check_cmd->add_option("--problem", check_problem, "instance id");
  check_cmd->add_flag("--all", check_all, "run over the whole registry");
  check_cmd->add_flag("--weak-sharp", opts.weak_sharp, "sampled ball-inclusion verdict");
  check_cmd->add_flag("--augmented", opts.augmented, "augmented certificate along the builtin sequence");
  check_cmd->add_flag("--strong-nondeg", opts.strong_nondeg, "strong non-degeneracy at solution samples");
  check_cmd->add_flag("--interior", opts.interior, "stationary-cut interior condition");
  check_cmd->add_flag("--monotone", opts.monotone, "sampled monotonicity/convexity verdicts");
  check_cmd->add_flag("--characterization", opts.characterization,
                      "solution-set characterization on a feasible grid");
  check_cmd->add_option("--alpha", opts.alpha, "weak-sharp modulus threshold");
  check_cmd->add_option("--alpha0", opts.alpha0, "augmented ball radius")->capture_default_str();
  check_cmd->add_option("--lambda", opts.lambda, "certificate parameter");
  check_cmd->add_option("--epsilon", opts.epsilon, "certificate parameter");
  check_cmd->add_option("--seq", opts.seq, "iterate sequence (builtin)")->capture_default_str();
  check_cmd->add_option("--seq-n", opts.seq_n, "sequence length")->capture_default_str();
  check_cmd->add_flag("--regression", regression, "exit 1 unless verdicts match the expected table");
  check_cmd->add_option("--jobs", jobs, "worker threads for --all")->capture_default_str();
  check_cmd->add_option("--out", check_out, "write the JSON report to a file");

  auto* run_cmd_ = app.add_subcommand("run", "instrumented solver run")->configurable();
  std::string run_problem, run_solver = "subgrad", step_spec = "const:0.1", x0_text;
  std::string csv_path, run_out;
  double t_step = 0.2, reg = 1.0, run_alpha0 = 0.1;
  int n_iter = 500;
  run_cmd_->add_option("--problem", run_problem, "instance id")->required();
  run_cmd_->add_option("--solver", run_solver, "subgrad | extragradient | prox")->capture_default_str();
  run_cmd_->add_option("--step", step_spec, "const:T | dim:C | polyak:FSTAR")->capture_default_str();
  run_cmd_->add_option("--t", t_step, "extragradient step")->capture_default_str();
  run_cmd_->add_option("--c", reg, "proximal regularization")->capture_default_str();
  run_cmd_->add_option("--n", n_iter, "iteration count")->capture_default_str();
  run_cmd_->add_option("--x0", x0_text, "start point \"a,b\" (default: seeded random feasible)");
  run_cmd_->add_option("--alpha0", run_alpha0, "augmented ball radius for the verdict")->capture_default_str();
  run_cmd_->add_option("--csv", csv_path, "write the per-iterate trace to this CSV file");
  run_cmd_->add_option("--out", run_out, "write the JSON summary to a file");

  try {
    app.parse(argc, argv);
    if (list_cmd->count() || list_cmd->parsed()) return cmd_list(list_json, list_out);
    if (check_cmd->count() || check_cmd->parsed()) {
      if (!check_all && check_problem.empty())
        throw CLI::ValidationError("--problem", "give an instance id or --all");
      return cmd_check(check_problem, check_all, opts, regression, jobs, check_out);
    }
    if (run_cmd_->count() || run_cmd_->parsed())
      return cmd_run(run_problem, run_solver, step_spec, t_step, reg, n_iter, x0_text, run_alpha0,
                     csv_path, run_out);
    std::cerr << app.help();
    return 2;
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  } catch (const std::out_of_range& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}
