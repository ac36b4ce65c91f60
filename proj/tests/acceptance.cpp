// acceptance: runs every reference scenario through the full pipeline and
// prints one line per criterion. Exit status 0 only if every line says pass.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "koszul/pipeline.hpp"

using namespace koszul;

namespace {

const std::vector<std::string> kScenarios{"point", "axes", "fermat", "ci", "nonregular"};

const std::map<std::string, double> kLimitSeconds{{"C1", 5},  {"C2", 10}, {"C3", 10}, {"C4", 5},  {"C5", 30},
                                                  {"C6", 10}, {"C7", 10}, {"C8", 15}, {"C9", 5},  {"C10", 60}};

struct Line {
  bool ok = true;
  std::vector<std::string> notes;
  void bad(const std::string& why) {
    ok = false;
    notes.push_back(why);
  }
};

std::string seconds(double ms) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << ms / 1000 << "s";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "scenarios";
  std::map<std::string, Line> lines;
  std::map<std::string, double> slowest;
  for (const auto& [name, limit] : kLimitSeconds) lines[name];
  Line& determinism = lines["determinism"];
  Line& cross = lines["field-cross-check"];

  for (const auto& id : kScenarios) {
    std::ifstream in(dir + "/" + id + ".json");
    std::ostringstream ss;
    ss << in.rdbuf();
    Scenario sc;
    try {
      sc = parse_scenario(ss.str());
    } catch (const std::exception& e) {
      std::cerr << id << ": " << e.what() << "\n";
      return 3;
    }
    auto rep = run_pipeline(sc, {1, true});
    for (const auto& c : rep.checks) {
      std::cerr << id << " " << c.name << " " << to_string(c.verdict) << " " << seconds(c.runtime_ms) << "\n";
      Line& line = c.name == "field-cross-check" ? cross : lines[c.name];
      if (c.verdict != Verdict::pass) line.bad(id + ": " + to_string(c.verdict) + " (" + c.witness.value_or("") + ")");
      auto limit = kLimitSeconds.find(c.name);
      if (limit != kLimitSeconds.end()) {
        slowest[c.name] = std::max(slowest[c.name], c.runtime_ms);
        if (c.runtime_ms > limit->second * 1000) line.bad(id + ": " + seconds(c.runtime_ms) + " over the limit");
      }
    }
    const std::string first = emit_report(rep);
    if (emit_report(rep) != first) determinism.bad(id + ": serializing twice differs");
    if (emit_report(run_pipeline(sc, {3, true})) != first) determinism.bad(id + ": rerun with 3 threads differs");
  }

  bool all = true;
  auto print = [&](const std::string& name, const Line& line, const std::string& extra) {
    all = all && line.ok;
    std::cout << std::left << std::setw(18) << name << (line.ok ? "pass" : "FAIL") << extra;
    for (const auto& n : line.notes) std::cout << "  [" << n << "]";
    std::cout << "\n";
  };
  for (const auto& name : all_check_names())
    print(name, lines[name],
          "  max " + seconds(slowest[name]) + " of " + seconds(kLimitSeconds.at(name) * 1000) + " allowed");
  print("determinism", determinism, "");
  print("field-cross-check", cross, "");
  return all ? 0 : 1;
}
