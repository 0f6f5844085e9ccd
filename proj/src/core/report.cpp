#include "diagfp/report.hpp"

#include <sstream>

#include "json.hpp"

namespace diagfp {

std::string report_json(const DiagnosisReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = "diagfp/1";
  j["command"] = r.command;
  j["problem"] = r.problem;
  j["space"] = space_tag_name(r.space.tag());
  if (!r.strategy.empty()) j["strategy"] = r.strategy;
  j["solver"] = r.solver;
  j["oracle"] = r.oracle;
  j["complete"] = r.complete;
  auto candidates = ordered_json::array();
  for (const auto& h : r.candidates) candidates.push_back(render(h, r.space));
  j["minimal_candidates"] = std::move(candidates);
  if (r.horizon) {
    j["bound"] = {{"horizon", *r.horizon}, {"steps_per_obs", r.steps_per_obs.value_or(0)}};
  }
  if (r.oracle_bound) j["oracle_bound"] = *r.oracle_bound;
  if (r.stats) {
    const auto& s = *r.stats;
    j["stats"] = {{"tests", s.tests},
                  {"candidate_tests", s.candidate_tests},
                  {"coverage_tests", s.coverage_tests},
                  {"minimality_tests", s.minimality_tests},
                  {"conflicts_used", s.conflicts_used},
                  {"expanded", s.expanded},
                  {"iterations", s.iterations},
                  {"wall_ms", s.wall_ms}};
  }
  if (r.solver_counters) {
    const auto& c = *r.solver_counters;
    j["solver_stats"] = {{"tests", c.tests}, {"candidates", c.candidates}, {"failures", c.failures}, {"work", c.work}};
  }
  if (r.verification) {
    ordered_json v;
    v["passed"] = r.verification->passed;
    auto conds = ordered_json::array();
    for (const auto& c : r.verification->conditions) {
      ordered_json jc{{"name", c.name}, {"passed", c.passed}};
      if (c.witness) jc["witness"] = render(*c.witness, r.space);
      if (!c.detail.empty()) jc["detail"] = c.detail;
      conds.push_back(std::move(jc));
    }
    v["conditions"] = std::move(conds);
    j["verification"] = std::move(v);
  }
  return j.dump(2) + "\n";
}

std::string report_text(const DiagnosisReport& r) {
  std::ostringstream out;
  out << "space: " << space_tag_name(r.space.tag()) << '\n';
  if (!r.strategy.empty()) out << "strategy: " << r.strategy << '\n';
  out << "solver: " << r.solver << '\n';
  if (r.horizon) out << "horizon: " << *r.horizon << " (steps per observation " << r.steps_per_obs.value_or(0) << ")\n";
  if (r.oracle_bound) out << "oracle bound: " << *r.oracle_bound << '\n';
  if (r.command != "verify") {
    out << "minimal candidates (" << r.candidates.size() << "):\n";
    for (const auto& h : r.candidates) out << "  " << render(h, r.space) << '\n';
    if (!r.complete) {
      out << "INCOMPLETE: iteration cap reached.";
      if (r.strategy.rfind("pfs", 0) == 0) out << " Every listed hypothesis is a minimal candidate.";
      out << '\n';
    } else if (r.horizon) {
      out << "complete relative to horizon " << *r.horizon << '\n';
    }
  }
  if (r.stats) {
    const auto& s = *r.stats;
    out << "tests: " << s.tests << " (candidate " << s.candidate_tests << ", coverage " << s.coverage_tests
        << ", minimality " << s.minimality_tests << "), conflicts reused: " << s.conflicts_used
        << ", expanded: " << s.expanded << ", wall: " << s.wall_ms << " ms\n";
  }
  if (r.verification) {
    for (const auto& c : r.verification->conditions) {
      out << c.name << ": " << (c.passed ? "pass" : "FAIL");
      if (!c.passed && !c.detail.empty()) out << " (" << c.detail << ")";
      out << '\n';
    }
    out << "verdict: " << (r.verification->passed ? "pass" : "FAIL") << '\n';
  }
  return out.str();
}

}  // namespace diagfp
