#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "koszul/pipeline.hpp"
#include "support.hpp"

using namespace koszul;

namespace {

std::string scenario_dir() {
  const char* dir = std::getenv("KOSZUL_SCENARIOS");
  return dir ? dir : "scenarios";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load(const std::string& name) { return parse_scenario(slurp(scenario_dir() + "/" + name + ".json")); }

ScenarioError parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e;
  }
  FAIL("scenario was accepted: " << text);
  return ScenarioError("");
}

}  // namespace

TEST_CASE("scenario files load") {
  for (const char* name : {"point", "axes", "fermat", "ci", "nonregular"}) {
    auto sc = load(name);
    CHECK(sc.section.id == name);
    CHECK(sc.checks.size() == 10);
    CHECK(sc.field.rational());
  }
  auto point = load("point");
  CHECK(point.section.n == 1);
  CHECK(point.section.degrees() == std::vector<int>{1});
  CHECK(load("fermat").section.degrees() == std::vector<int>{3});
  CHECK_FALSE(load("nonregular").section.regular_claimed);
}

TEST_CASE("scenario parsing: minimal document and defaults") {
  auto sc = parse_scenario(R"({"id":"point","n":1,"r":1,"s":["x1"]})");
  CHECK(sc.section.id == "point");
  CHECK(sc.section.r() == 1);
  CHECK(sc.window.h.lo == -6);
  CHECK(sc.window.h.hi == 4);
  CHECK(sc.window.w.lo == -8);
  CHECK(sc.window.d.hi == 10);
  CHECK(sc.checks == all_check_names());

  auto full = parse_scenario(R"({"id":"w","n":2,"x_weights":[1,2],"s":["x1^2 - 3*x2"],"regular":false,
    "window":{"h":[-2,1],"d":[0,4]},"checks":["C8","C2"],"field":"fp:1048583","caps":{"basis":500}})");
  CHECK(full.section.degrees() == std::vector<int>{2});
  CHECK(full.window.w.lo == -8);
  CHECK(full.window.h.hi == 1);
  CHECK(full.checks == std::vector<std::string>{"C2", "C8"});
  CHECK(full.field.prime == 1048583);
  CHECK(full.basis_cap == 500);
}

TEST_CASE("homogeneity is checked at load") {
  auto fermat = parse_scenario(R"({"id":"f","n":3,"s":["x1^3+x2^3+x3^3"]})");
  CHECK(fermat.section.degrees() == std::vector<int>{3});
  auto e = parse_error(R"({"id":"bad","n":2,"s":["x1+x2^2"]})");
  CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("not homogeneous"));
  CHECK_NOTHROW(parse_scenario(R"({"id":"ok","n":2,"x_weights":[2,1],"s":["x1+x2^2"]})"));
  CHECK_THAT(parse_error(R"({"id":"c","n":1,"s":["3"]})").what(), Catch::Matchers::ContainsSubstring("constant"));
}

TEST_CASE("syntax errors carry line and column") {
  auto json = parse_error("{\n  \"id\": \"p\",\n  \"n\": 1,,\n  \"s\": [\"x1\"]\n}");
  CHECK(json.line() == 3);
  CHECK(json.column() == 10);

  // the '+' with nothing after it, inside the string literal on line 4
  auto poly = parse_error("{\n  \"id\": \"p\",\n  \"n\": 2,\n  \"s\": [\"x1 + * x2\"]\n}");
  CHECK(poly.line() == 4);
  CHECK(poly.column() == 15);

  auto var = parse_error("{\"id\":\"p\",\"n\":1,\"s\":[\"x2\"]}");
  CHECK(var.line() == 1);
  CHECK_THAT(var.what(), Catch::Matchers::ContainsSubstring("x2"));

  auto key = parse_error("{\"id\":\"p\",\n\"n\":1,\"s\":[\"x1\"],\n\"colour\":1}");
  CHECK(key.line() == 3);
  CHECK(key.column() == 1);
}

TEST_CASE("polynomial grammar") {
  auto p = parse_polynomial("2*x1^2*x2 - (x1 + x2)*x2 + 3", 2);
  CHECK(p.size() == 4);
  CHECK(p.at({2, 1}) == 2);
  CHECK(p.at({1, 1}) == -1);
  CHECK(p.at({0, 2}) == -1);
  CHECK(p.at({0, 0}) == 3);
  CHECK(parse_polynomial("x1 - x1", 1).empty());
  CHECK(parse_polynomial("(x1+x2)^2", 2).at({1, 1}) == 2);
  CHECK_THROWS_AS(parse_polynomial("x1 x2", 2), ScenarioError);
  CHECK_THROWS_AS(parse_polynomial("x0", 2), ScenarioError);
  CHECK_THROWS_AS(parse_polynomial("x1^-1", 1), ScenarioError);
  CHECK_THROWS_AS(parse_polynomial("", 1), ScenarioError);
}

TEST_CASE("check lists, windows and fields") {
  CHECK(parse_check_list("C10,C1,C4") == std::vector<std::string>{"C1", "C4", "C10"});
  CHECK_THROWS_AS(parse_check_list("C1,C11"), ScenarioError);
  CHECK_THROWS_AS(parse_check_list(",C1"), ScenarioError);
  CHECK_THROWS_AS(parse_check_list(std::vector<std::string>{}), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"id":"p","n":1,"s":["x1"],"checks":[]})"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"id":"p","n":1,"s":["x1"],"checks":["C3","Cx"]})"), ScenarioError);

  Window base{{-6, 4}, {-8, 8}, {0, 10}};
  auto w = parse_window_override("d:0..3,h:-2..1", base);
  CHECK(w.h.lo == -2);
  CHECK(w.h.hi == 1);
  CHECK(w.w.hi == 8);
  CHECK(w.d.hi == 3);
  CHECK_THROWS_AS(parse_window_override("h:3..1", base), ScenarioError);
  CHECK_THROWS_AS(parse_window_override("q:0..1", base), ScenarioError);
  CHECK_THROWS_AS(parse_window_override("h:0..x", base), ScenarioError);

  CHECK(parse_field("rational").rational());
  CHECK(parse_field("fp:1048583").prime == 1048583);
  CHECK_THROWS_AS(parse_field("fp:1000003"), ScenarioError);  // below 2^20
  CHECK_THROWS_AS(parse_field("fp:1048581"), ScenarioError);  // composite
  CHECK_THROWS_AS(parse_field("real"), ScenarioError);
}

TEST_CASE("cross-check primes are deterministic large primes") {
  for (const char* id : {"point", "axes", "fermat", "ci", "nonregular", ""}) {
    auto p = cross_check_prime(id);
    CHECK(p > (std::uint64_t{1} << 20));
    CHECK(p < (std::uint64_t{1} << 31));
    CHECK(is_prime(p));
    CHECK(cross_check_prime(id) == p);
  }
  CHECK(cross_check_prime("point") != cross_check_prime("axes"));
}

TEST_CASE("point scenario: every check passes") {
  auto rep = run_pipeline(load("point"));
  REQUIRE(rep.checks.size() == 11);
  for (const auto& c : rep.checks) {
    INFO(c.name << ": " << c.witness.value_or(""));
    CHECK(c.verdict == Verdict::pass);
  }
  CHECK(rep.checks.back().name == "field-cross-check");
  CHECK(exit_code(rep) == 0);
  CHECK(rep.tables.count("O_Z oracle"));
  CHECK(rep.tables.count("H(B)"));
}

TEST_CASE("nonregular scenario: C4 detects non-exactness, C8 compares with H(K)") {
  auto sc = load("nonregular");
  sc.checks = {"C4", "C8"};
  auto rep = run_pipeline(sc, {1, false});
  REQUIRE(rep.checks.size() == 2);
  CHECK(rep.checks[0].verdict == Verdict::pass);
  CHECK_THAT(rep.checks[0].detail, Catch::Matchers::ContainsSubstring("non-exact: H^-1(K)"));
  CHECK(rep.checks[1].verdict == Verdict::pass);
  REQUIRE(rep.tables.count("H(K)[t,t^-1] uv"));
  CHECK(rep.tables.at("H(K)[t,t^-1] uv").dims == rep.tables.at("H(A[t^-1]) uv").dims);
  CHECK(rep.tables.at("H(K)[t,t^-1] uv").at({-1, 0, 1}) == 1);
}

TEST_CASE("a wrong regularity claim fails C4") {
  auto sc = load("nonregular");
  sc.section.regular_claimed = true;
  sc.checks = {"C4"};
  auto rep = run_pipeline(sc, {1, false});
  CHECK(rep.checks[0].verdict == Verdict::fail);
  CHECK(exit_code(rep) == 1);
  auto ci = load("ci");
  ci.section.regular_claimed = false;
  ci.checks = {"C4"};
  CHECK(run_pipeline(ci, {1, false}).checks[0].verdict == Verdict::fail);
}

TEST_CASE("empty check list and empty windows are rejected") {
  auto sc = load("point");
  sc.checks.clear();
  CHECK_THROWS_AS(run_pipeline(sc), ScenarioError);
  sc = load("point");
  sc.window.d = {3, 2};
  CHECK_THROWS_AS(run_pipeline(sc), ScenarioError);
}

TEST_CASE("resource caps give inconclusive verdicts") {
  auto sc = load("fermat");
  sc.checks = {"C2", "C4"};
  sc.basis_cap = 20;
  auto rep = run_pipeline(sc, {1, false});
  for (const auto& c : rep.checks) {
    CHECK(c.verdict == Verdict::inconclusive);
    CHECK_THAT(c.witness.value_or(""), Catch::Matchers::ContainsSubstring("resource cap"));
  }
  CHECK(exit_code(rep) == 2);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  auto sc = load("axes");
  sc.checks = {"C2", "C3", "C4", "C9"};
  auto one = emit_report(run_pipeline(sc, {1, true}));
  auto again = emit_report(run_pipeline(sc, {1, true}));
  auto four = emit_report(run_pipeline(sc, {4, true}));
  CHECK(one == again);
  CHECK(one == four);
  auto rep = run_pipeline(sc, {2, true});
  CHECK(emit_report(rep, "text") == emit_report(rep, "text"));
  CHECK(emit_report(rep) == emit_report(rep));
}

TEST_CASE("json reports follow the schema and round-trip") {
  auto sc = load("ci");
  sc.checks = {"C3", "C4"};
  auto rep = run_pipeline(sc);
  const std::string text = emit_report(rep);
  auto j = nlohmann::json::parse(text);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("scenario_id") == "ci");
  CHECK(j.at("engine_version") == kEngineVersion);
  CHECK(j.at("field") == "rational");
  CHECK(j.at("cross_check_field").get<std::string>().rfind("fp:", 0) == 0);
  CHECK(j.at("window").at("h") == nlohmann::json::array({-6, 4}));
  REQUIRE(j.at("checks").size() == 3);
  for (const auto& c : j.at("checks")) {
    CHECK(c.at("name").is_string());
    CHECK(c.at("verdict") == "pass");
    CHECK_FALSE(c.contains("runtime_ms"));
  }
  for (const auto& [name, entries] : j.at("tables").items()) {
    std::optional<Tridegree> prev;
    for (const auto& e : entries) {
      Tridegree t{e.at("h").get<int>(), e.at("w").get<int>(), e.at("d").get<int>()};
      CHECK(e.at("dim").get<std::size_t>() > 0);
      if (prev) CHECK(*prev < t);
      prev = t;
    }
  }
  CHECK(j.dump(2) + "\n" == text);
  auto timed = nlohmann::json::parse(emit_report(rep, "json", true));
  for (const auto& c : timed.at("checks")) CHECK(c.at("runtime_ms").is_number());
}

TEST_CASE("text report lists every failing tridegree") {
  // F(B) with the t <-> eps pairing sign flipped: d^2 != 0
  auto sd = testing_support::point();
  auto A = build_A(sd), B = build_B(sd);
  auto pairs = pairings_F(*A, *B);
  pairs.back().c = 1;
  auto broken = std::make_shared<const KoszulDualModule>(A, free_rank_one(B), pairs, "F'(B)");
  Window win{{-3, 3}, {-2, 2}, {-1, 2}};

  Materialization m(broken);
  auto bad = d_squared_failures(m, win);
  REQUIRE(bad.size() > 1);
  Materialization good(koszul_F(A, free_rank_one(B)));
  CHECK(d_squared_failures(good, win).empty());

  Report rep;
  rep.scenario_id = "broken-sign";
  rep.field = "rational";
  rep.window = win;
  CheckResult res;
  res.name = "C1";
  record_d_squared(res, broken, win, kDefaultBasisCap);
  REQUIRE(res.verdict == Verdict::fail);
  CHECK(res.failures.size() == bad.size());
  rep.checks.push_back(res);
  CHECK(exit_code(rep) == 1);

  const std::string text = emit_report(rep, "text");
  std::size_t lines = 0;
  for (std::size_t at = text.find("    FAIL "); at != std::string::npos; at = text.find("    FAIL ", at + 1)) ++lines;
  CHECK(lines == bad.size());
  for (const auto& t : bad) CHECK_THAT(text, Catch::Matchers::ContainsSubstring("FAIL d^2 != 0 on F'(B) at " + to_string(t)));
  auto j = report_json(rep);
  CHECK(j.at("checks")[0].at("failures").size() == bad.size());
  CHECK(j.at("checks")[0].at("witness") == "d^2 != 0 on F'(B) at " + to_string(bad.front()));
}
