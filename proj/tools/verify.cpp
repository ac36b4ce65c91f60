// verify: run the verification pipeline on one scenario file.
//
// exit status: 0 all checks pass, 1 some check failed, 2 some check was
// inconclusive (and none failed), 3 bad input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "koszul/pipeline.hpp"

namespace {

constexpr int kInputError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw koszul::ScenarioError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check the Koszul duality pipeline on a scenario"};
  std::string scenario_path, window, field, checks, report_path, format = "json";
  unsigned parallel = 1;
  bool timings = false, no_cross = false;
  app.add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
  app.add_option("--window", window, "override window, e.g. h:-6..4,w:-8..8,d:0..10");
  app.add_option("--field", field, "rational or fp:<p> with p a prime > 2^20");
  app.add_option("--checks", checks, "comma-separated subset of C1..C10");
  app.add_option("--parallel", parallel, "run up to N checks concurrently")->check(CLI::Range(1u, 256u));
  app.add_option("--report", report_path, "write the report here instead of stdout");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--timings", timings, "include per-check wall-clock times (not byte-stable)");
  app.add_flag("--no-cross-check", no_cross, "skip the recomputation over a second field");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  koszul::Report report;
  try {
    auto sc = koszul::parse_scenario(read_file(scenario_path));
    if (!window.empty()) sc.window = koszul::parse_window_override(window, sc.window);
    if (!field.empty()) sc.field = koszul::parse_field(field);
    if (!checks.empty()) sc.checks = koszul::parse_check_list(checks);
    report = koszul::run_pipeline(sc, {parallel, !no_cross});
  } catch (const koszul::ScenarioError& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kInputError;
  }

  const std::string out = koszul::emit_report(report, format, timings);
  if (report_path.empty()) {
    std::cout << out;
  } else {
    std::ofstream f(report_path, std::ios::binary);
    if (!f || !(f << out)) {
      std::cerr << "verify: cannot write '" << report_path << "'\n";
      return kInputError;
    }
  }
  for (const auto& c : report.checks)
    std::cerr << c.name << ": " << koszul::to_string(c.verdict) << "\n";
  return koszul::exit_code(report);
}
