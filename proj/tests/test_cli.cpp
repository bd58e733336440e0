// End-to-end tests for the command-line binary: every subcommand is invoked
// as a subprocess and its output compared against golden files (numeric
// fields to 1e-9).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kBin = SHARPEQ_BIN;
const fs::path kGolden = GOLDEN_DIR;
const fs::path kTmp = fs::temp_directory_path() / "sharpeq_cli_test";

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cmd(const std::string& args, const std::string& env = "") {
  fs::create_directories(kTmp);
  fs::path out_file = kTmp / "stdout.txt";
  std::string full = env + (env.empty() ? "" : " ") + kBin + " " + args + " > " +
                     out_file.string() + " 2> /dev/null";
  int rc = std::system(full.c_str());
  CmdResult res;
  res.exit_code = WEXITSTATUS(rc);
  std::ifstream is(out_file);
  std::stringstream ss;
  ss << is.rdbuf();
  res.out = ss.str();
  return res;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Structural equality with 1e-9 absolute tolerance on every number.
bool approx_json(const json& a, const json& b, std::string* where) {
  if (a.is_number() && b.is_number())
    return std::abs(a.get<double>() - b.get<double>()) <= 1e-9 ||
           (*where = a.dump() + " vs " + b.dump(), false);
  if (a.type() != b.type()) return *where = a.dump() + " vs " + b.dump(), false;
  if (a.is_object()) {
    if (a.size() != b.size()) return *where = "object size", false;
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return *where = "missing key " + it.key(), false;
      if (!approx_json(it.value(), b.at(it.key()), where)) {
        *where = it.key() + "." + *where;
        return false;
      }
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return *where = "array size", false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!approx_json(a[i], b[i], where)) {
        *where = std::to_string(i) + "." + *where;
        return false;
      }
    return true;
  }
  return a == b || (*where = a.dump() + " vs " + b.dump(), false);
}

void check_against_golden(const std::string& text, const std::string& golden_name) {
  json got = json::parse(text);
  json want = json::parse(slurp(kGolden / golden_name));
  std::string where;
  bool ok = approx_json(got, want, &where);
  CAPTURE(golden_name);
  CAPTURE(where);
  CHECK(ok);
}

// Field-wise CSV comparison, numeric fields to 1e-9.
void check_csv_against_golden(const fs::path& got_path, const std::string& golden_name) {
  std::istringstream got(slurp(got_path)), want(slurp(kGolden / golden_name));
  std::string gl, wl;
  int line = 0;
  while (std::getline(want, wl)) {
    REQUIRE(std::getline(got, gl));
    CAPTURE(line);
    std::istringstream gs(gl), ws(wl);
    std::string gf, wf;
    while (std::getline(ws, wf, ',')) {
      REQUIRE(std::getline(gs, gf, ','));
      char* gend = nullptr;
      char* wend = nullptr;
      double gv = std::strtod(gf.c_str(), &gend);
      double wv = std::strtod(wf.c_str(), &wend);
      if (!wf.empty() && *wend == '\0' && !gf.empty() && *gend == '\0')
        CHECK(std::abs(gv - wv) <= 1e-9);
      else
        CHECK(gf == wf);
    }
    CHECK_FALSE(std::getline(gs, gf, ','));
    ++line;
  }
  CHECK_FALSE(std::getline(got, gl));
}

}  // namespace

TEST_CASE("list prints the registry table") {
  auto res = run_cmd("list");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("ex4_1") != std::string::npos);
  CHECK(res.out.find("MP") != std::string::npos);
  CHECK(res.out.find("VIP") != std::string::npos);
  CHECK(res.out.find("SPP") != std::string::npos);
  CHECK(res.out.find("NEP") != std::string::npos);
}

TEST_CASE("list --json matches the frozen registry export") {
  auto res = run_cmd("list --json");
  CHECK(res.exit_code == 0);
  check_against_golden(res.out, "list.json");
}

TEST_CASE("weak-sharp checks reproduce the published verdicts") {
  auto yes = run_cmd("check --problem ex4_5 --weak-sharp --alpha 0.5");
  CHECK(yes.exit_code == 0);
  CHECK(json::parse(yes.out)["checks"]["weak_sharp"]["verdict"] == true);
  check_against_golden(yes.out, "check_ex4_5_weak.json");

  auto no = run_cmd("check --problem ex4_2 --weak-sharp --alpha 0.01");
  CHECK(no.exit_code == 0);
  CHECK(json::parse(no.out)["checks"]["weak_sharp"]["verdict"] == false);
  check_against_golden(no.out, "check_ex4_2_weak.json");
}

TEST_CASE("augmented certificate passes through the CLI") {
  auto res = run_cmd("check --problem ex4_2 --augmented --lambda 0.25 --seq builtin");
  CHECK(res.exit_code == 0);
  json j = json::parse(res.out);
  CHECK(j["checks"]["augmented"]["verdict"] == true);
  CHECK(j["checks"]["augmented"]["lambda"] == 0.25);
  check_against_golden(res.out, "check_ex4_2_aug.json");
}

TEST_CASE("regression mode gates on the expected table") {
  auto ok = run_cmd("check --all --regression --jobs 3");
  CHECK(ok.exit_code == 0);
  json arr = json::parse(ok.out);
  REQUIRE(arr.is_array());
  CHECK(arr.size() == 15);
  for (const auto& row : arr) CHECK(row["matches_expected"] == true);

  // a threshold no instance meets must flip the exit code
  auto bad = run_cmd("check --problem ex4_5 --weak-sharp --alpha 5 --regression");
  CHECK(bad.exit_code == 1);
  CHECK(json::parse(bad.out)["matches_expected"] == false);
}

TEST_CASE("solver runs emit the frozen summaries") {
  auto polyak = run_cmd("run --problem ex4_5 --solver subgrad --step polyak:0 --n 1000");
  CHECK(polyak.exit_code == 0);
  json j = json::parse(polyak.out);
  CHECK(j["identification_index"].is_number_integer());
  CHECK(j["identification_index"].get<int>() <= 500);
  CHECK(j["termination"]["verdict"] == "agree");
  check_against_golden(polyak.out, "run_ex4_5_polyak.json");

  auto extra = run_cmd("run --problem ex4_2 --solver extragradient --t 0.2 --n 1000");
  CHECK(extra.exit_code == 0);
  CHECK(json::parse(extra.out)["dist_final"].get<double>() < 1e-3);
  check_against_golden(extra.out, "run_ex4_2_extra.json");
}

TEST_CASE("run traces carry aligned rho and psi columns") {
  fs::create_directories(kTmp);
  fs::path csv = kTmp / "trace.csv";
  auto res = run_cmd("run --problem ex4_1 --solver subgrad --x0 \"0.9,0.9\" --step dim:1 --n 500 --csv " +
                     csv.string());
  CHECK(res.exit_code == 0);
  check_against_golden(res.out, "run_ex4_1_dim.json");

  std::string text = slurp(csv);
  CHECK(text.find('\r') == std::string::npos);
  std::istringstream is(text);
  std::string header;
  REQUIRE(std::getline(is, header));
  CHECK(header == "k,x0,x1,rho,dist,psi_min");
  check_csv_against_golden(csv, "run_ex4_1_dim.csv");
}

TEST_CASE("a JSON config file mirrors the flags") {
  fs::create_directories(kTmp);
  fs::path cfg = kTmp / "cfg.json";
  std::ofstream(cfg) << R"({"check": {"problem": "ex4_5", "weak-sharp": true, "alpha": 0.5}})";
  auto via_config = run_cmd("--config " + cfg.string() + " check");
  CHECK(via_config.exit_code == 0);
  check_against_golden(via_config.out, "check_ex4_5_weak.json");
}

TEST_CASE("the seed env var pins the random start point") {
  std::string cmd = "run --problem ex4_5 --solver subgrad --step polyak:0 --n 50";
  auto a = run_cmd(cmd, "SHARPEQ_SEED=7");
  auto b = run_cmd(cmd, "SHARPEQ_SEED=7");
  auto c = run_cmd(cmd, "SHARPEQ_SEED=8");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  json ja = json::parse(a.out), jc = json::parse(c.out);
  CHECK(ja["seed"] == 7);
  CHECK(jc["seed"] == 8);
  CHECK(ja["x0"] != jc["x0"]);

  auto d = run_cmd(cmd);  // default seed 0
  CHECK(json::parse(d.out)["seed"] == 0);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cmd("check --problem does_not_exist --weak-sharp").exit_code == 2);
  CHECK(run_cmd("run --problem ex4_5 --solver warp").exit_code == 2);
  CHECK(run_cmd("run --problem ex4_5 --step nope:1").exit_code == 2);
  CHECK(run_cmd("run --problem ex4_1 --x0 \"1,2,3\"").exit_code == 2);
  CHECK(run_cmd("check --weak-sharp").exit_code == 2);
  CHECK(run_cmd("").exit_code == 2);
  CHECK(run_cmd("--help").exit_code == 0);
}
