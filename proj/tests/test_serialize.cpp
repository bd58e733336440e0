#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "sharpeq/serialize.hpp"

using namespace sharpeq;
using nlohmann::json;

TEST_CASE("geometry values round-trip through JSON") {
  Halfspace h{{1.0, -2.5}, 0.75};
  json jh = h;
  CHECK(jh["a"][0] == 1.0);
  CHECK(jh["b"] == 0.75);
  auto h2 = jh.get<Halfspace>();
  CHECK(h2.a == h.a);
  CHECK(h2.b == h.b);

  VPolytope p = VPolytope::of({{0.0, 1.0}, {1.0, 0.0}, {0.25, 0.25}});
  auto p2 = json(p).get<VPolytope>();
  REQUIRE(p2.vertices.size() == p.vertices.size());
  CHECK(p2.vertices == p.vertices);

  PolyCone k = PolyCone::from_h(2, {{1.0, 0.0}, {0.0, 1.0}});
  auto k2 = json(k).get<PolyCone>();
  CHECK(k2.h_rows == k.h_rows);
  CHECK(k2.contains({-0.5, -0.5}));
  CHECK_FALSE(k2.contains({0.5, 0.0}));
}

TEST_CASE("sets round-trip and keep membership and projections") {
  const auto& e = corpus_get("ex4_1");
  json js = e.problem.S;
  auto s2 = js.get<ConvexPiece>();
  json jbar = *e.problem.solution_set;
  auto bar2 = jbar.get<ClosedSet>();
  REQUIRE(bar2.pieces.size() == e.problem.solution_set->pieces.size());
  for (double a : {-0.9, -0.4, 0.0, 0.3, 0.8})
    for (double b : {-0.7, -0.2, 0.1, 0.6}) {
      Vec x{a, b};
      CHECK(s2.contains(x) == e.problem.S.contains(x));
      CHECK(bar2.contains(x) == e.problem.solution_set->contains(x));
      auto [p, i] = project_set(bar2, x);
      auto [q, j] = project_set(*e.problem.solution_set, x);
      CHECK(i == j);
      CHECK(dist(p, q) <= 1e-12);
    }

  // a piece with a ball constraint survives too
  const auto& disk = corpus_get("s4_p3");
  auto s3 = json(disk.problem.S).get<ConvexPiece>();
  CHECK(s3.contains({0.5, 0.5}));
  CHECK_FALSE(s3.contains({0.9, 0.9}));
}

TEST_CASE("reports serialize with stable fields") {
  const auto& e = corpus_get("ex4_5");
  auto rep = check_weak_sharp(e.problem, e.sharp_samples, unit_directions(2), 0.5);
  json j = report_json(rep);
  CHECK(j["check"] == "weak_sharp");
  CHECK(j["verdict"] == true);
  CHECK(j["inf_alpha"].get<double>() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(j["samples"].size() == rep.samples.size());

  auto aug = check_augmented_weak_sharp(e.problem, e.default_H(), e.builtin_sequence(200), 0.1);
  json ja = report_json(aug);
  CHECK(ja["check"] == "augmented");
  CHECK(ja["passed"] == true);
  CHECK(ja["trace"].size() == aug.trace.entries.size());
}

TEST_CASE("run records serialize with metadata and traces aligned") {
  const auto& e = corpus_get("ex4_5");
  auto rec = diag_subgradient_run(e.problem, {0.5, 1.5}, 50, StepRule::polyak(0.0));
  rec.problem_id = e.id;
  rec.identification_index = detect_identification(rec);
  json j = run_json(rec);
  CHECK(j["problem"] == "ex4_5");
  CHECK(j["solver"] == "subgrad");
  CHECK(j["step"] == "polyak:0");
  CHECK(j["seed"] == 0);
  CHECK(j["iterates"].size() == j["rho"].size());
  CHECK(j["iterates"].size() == j["dist"].size());
  CHECK(j["identification_index"].is_number_integer());

  RunRecord empty_meta;
  empty_meta.solver = "frozen";
  CHECK(run_json(empty_meta)["identification_index"].is_null());
}

TEST_CASE("corpus export lists every entry with kind and expectations") {
  json j = corpus_json();
  REQUIRE(j.size() == corpus_list().size());
  bool saw_ex41 = false, saw_vip = false;
  for (const auto& row : j) {
    CHECK(row.contains("id"));
    CHECK(row.contains("origin"));
    CHECK(row.contains("expected"));
    if (row["id"] == "ex4_1") {
      saw_ex41 = true;
      CHECK(row["kind"] == "MP");
      CHECK(row["expected"]["weak_sharp"] == false);
      CHECK(row["expected"]["augmented"] == true);
    }
    if (row["kind"] == "VIP") saw_vip = true;
  }
  CHECK(saw_ex41);
  CHECK(saw_vip);
}

TEST_CASE("CSV trace has the pinned schema") {
  const auto& e = corpus_get("ex4_1");
  auto rec = diag_subgradient_run(e.problem, {0.9, 0.9}, 20, StepRule::diminishing(1.0));
  auto H = e.default_H();
  std::ostringstream os;
  write_run_csv(os, e.problem, rec, &H);
  std::string text = os.str();
  CHECK(text.find('\r') == std::string::npos);

  std::istringstream is(text);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "k,x0,x1,rho,dist,psi_min");
  int rows = 0;
  bool saw_psi = false;
  while (std::getline(is, line)) {
    int commas = 0;
    for (char c : line) commas += (c == ',');
    CHECK(commas == 5);
    if (line.back() != ',') saw_psi = true;
    ++rows;
  }
  CHECK(rows == rec.steps());
  CHECK(saw_psi);

  // iterates inside the solution set leave the psi column blank
  RunRecord member;
  member.solver = "frozen";
  member.iterates.push_back({0.0, -0.5});
  member.rho_trace.push_back(0.0);
  member.dist_trace.push_back(0.0);
  std::ostringstream os2;
  write_run_csv(os2, e.problem, member, &H);
  std::string body = os2.str().substr(os2.str().find('\n') + 1);
  CHECK(body == "0,0,-0.5,0,0,\n");
}
