// Command-line front end over the diagfp C interface.
//
// Exit codes: 0 complete (or verification passed), 1 usage/parse error,
// 2 iteration cap reached (partial report printed), 3 state budget
// exhausted, 4 verification failed, 5 internal consistency error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diagfp/diagfp.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kPartial = 2, kBudget = 3, kVerifyFailed = 4, kInternal = 5 };

int exit_for(diagfp_status s) {
  switch (s) {
    case DIAGFP_OK: return kOk;
    case DIAGFP_ERR_STATE_BUDGET: return kBudget;
    case DIAGFP_ERR_INTERNAL: return kInternal;
    default: return kUsage;
  }
}

int fail(diagfp_status s) {
  std::cerr << "diagfp: " << diagfp_status_name(s) << " error: " << diagfp_last_error() << '\n';
  return exit_for(s);
}

struct ProblemArgs {
  std::string model, obs, circuit;
};

struct RunArgs {
  std::string space = "shs";
  std::string strategy = "pfs-ec";
  std::string solver = "sat";
  unsigned steps_per_obs = 7;
  unsigned long iteration_cap = 10000;
  unsigned long state_budget = 5000000;
  bool no_conflict_cache = false;
  std::string format = "text";
};

void add_problem_options(CLI::App* cmd, ProblemArgs& p, bool allow_circuit) {
  auto* m = cmd->add_option("--model,-m", p.model, "DES model file");
  auto* o = cmd->add_option("--obs,-o", p.obs, "observation file (one event per line)");
  m->needs(o);
  o->needs(m);
  if (allow_circuit) {
    auto* c = cmd->add_option("--circuit,-c", p.circuit, "circuit netlist with obs lines");
    c->excludes(m);
    c->excludes(o);
  }
}

void add_run_options(CLI::App* cmd, RunArgs& r, bool with_strategy) {
  cmd->add_option("--space,-s", r.space, "hypothesis space")
      ->check(CLI::IsMember({"shs", "mhs", "sqhs"}))
      ->capture_default_str();
  if (with_strategy) {
    cmd->add_option("--strategy", r.strategy, "exploration strategy")
        ->check(CLI::IsMember({"pls", "pls-r", "pfs", "pfs-e", "pfs-c", "pfs-ec"}))
        ->capture_default_str();
    cmd->add_option("--iteration-cap", r.iteration_cap, "strategy iterations before giving up")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--no-conflict-cache", r.no_conflict_cache, "do not reuse stored conflicts");
  }
  cmd->add_option("--solver", r.solver, "test solver")->check(CLI::IsMember({"sat", "explicit"}))->capture_default_str();
  cmd->add_option("--steps-per-obs,-k", r.steps_per_obs, "SAT steps per observed event")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--state-budget", r.state_budget, "visited-state budget of the explicit solver")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--format,-f", r.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

diagfp_options to_options(const RunArgs& r) {
  diagfp_options o;
  diagfp_options_init(&o);
  o.space = r.space.c_str();
  o.strategy = r.strategy.c_str();
  o.solver = r.solver.c_str();
  o.steps_per_obs = r.steps_per_obs;
  o.iteration_cap = r.iteration_cap;
  o.state_budget = r.state_budget;
  o.conflict_cache = r.no_conflict_cache ? 0 : 1;
  return o;
}

diagfp_status load(const ProblemArgs& p, diagfp_problem** out) {
  if (!p.circuit.empty()) return diagfp_problem_load_circuit(p.circuit.c_str(), out);
  if (p.model.empty()) {
    std::cerr << "diagfp: either --model/--obs or --circuit is required\n";
    return DIAGFP_ERR_USAGE;
  }
  return diagfp_problem_load_des(p.model.c_str(), p.obs.c_str(), out);
}

void print(const diagfp_report* r, const std::string& format) {
  std::cout << (format == "json" ? diagfp_report_json(r) : diagfp_report_text(r));
}

bool read_text(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_text(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal diagnosis by preferred-first exploration of hypothesis spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", diagfp_version());

  ProblemArgs prob;
  RunArgs run;

  auto* diagnose = app.add_subcommand("diagnose", "compute the minimal diagnosis");
  add_problem_options(diagnose, prob, true);
  add_run_options(diagnose, run, true);
  bool also_verify = false;
  diagnose->add_flag("--verify", also_verify, "verify the result with a fresh solver");

  auto* verify = app.add_subcommand("verify", "check that a candidate set is the minimal diagnosis");
  add_problem_options(verify, prob, true);
  add_run_options(verify, run, false);
  std::string candidates_path;
  verify->add_option("--candidates", candidates_path, "file with one canonical hypothesis per line")->required();

  auto* oracle = app.add_subcommand("oracle", "enumeration oracle for small DES instances");
  add_problem_options(oracle, prob, false);
  oracle->add_option("--space,-s", run.space, "hypothesis space")
      ->check(CLI::IsMember({"shs", "mhs", "sqhs"}))
      ->capture_default_str();
  unsigned long bound = 0;
  oracle->add_option("--bound", bound, "maximum trace length (default: certified bound)");
  oracle->add_option("--state-budget", run.state_budget, "configuration budget")->check(CLI::PositiveNumber);
  oracle->add_option("--format,-f", run.format, "output format")->check(CLI::IsMember({"text", "json"}));

  auto* generate = app.add_subcommand("generate", "write a seeded random DES instance");
  unsigned long long seed = 1;
  unsigned components = 3, states = 4, faults = 3, obs_len = 4;
  std::string prefix;
  generate->add_option("--seed", seed, "random seed")->capture_default_str();
  generate->add_option("--components", components, "components (1-4)")->capture_default_str();
  generate->add_option("--states", states, "states per component (2-5)")->capture_default_str();
  generate->add_option("--faults", faults, "fault events (0-3)")->capture_default_str();
  generate->add_option("--obs-len", obs_len, "observation length (0-5)")->capture_default_str();
  generate->add_option("--out", prefix, "output prefix: writes PREFIX.des, PREFIX.obs, PREFIX.json")->required();

  auto* encode = app.add_subcommand("encode", "export one test as DIMACS CNF");
  add_problem_options(encode, prob, true);
  add_run_options(encode, run, false);
  std::string question = "candidate";
  std::vector<std::string> hypotheses;
  std::string out_path;
  encode->add_option("--question,-q", question, "test to export")
      ->check(CLI::IsMember({"candidate", "minimal", "coverage"}))
      ->capture_default_str();
  encode->add_option("--hypothesis,-H", hypotheses, "canonical hypothesis (repeatable)");
  encode->add_option("--out", out_path, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (generate->parsed()) {
    char *model = nullptr, *obs = nullptr, *side = nullptr;
    const auto s = diagfp_generate(seed, components, states, faults, obs_len, &model, &obs, &side);
    if (s != DIAGFP_OK) return fail(s);
    const bool ok =
        write_text(prefix + ".des", model) && write_text(prefix + ".obs", obs) && write_text(prefix + ".json", side);
    diagfp_string_free(model);
    diagfp_string_free(obs);
    diagfp_string_free(side);
    if (!ok) {
      std::cerr << "diagfp: cannot write files with prefix '" << prefix << "'\n";
      return kUsage;
    }
    return kOk;
  }

  diagfp_problem* problem = nullptr;
  if (const auto s = load(prob, &problem); s != DIAGFP_OK) return problem ? kUsage : fail(s);
  struct Guard {
    diagfp_problem* p;
    ~Guard() { diagfp_problem_free(p); }
  } guard{problem};
  diagfp_options opts = to_options(run);

  if (diagnose->parsed()) {
    opts.verify = also_verify ? 1 : 0;
    diagfp_report* r = nullptr;
    if (const auto s = diagfp_diagnose(problem, &opts, &r); s != DIAGFP_OK) return fail(s);
    print(r, run.format);
    int code = diagfp_report_complete(r) ? kOk : kPartial;
    if (code == kOk && diagfp_report_verified(r) == 0) code = kVerifyFailed;
    diagfp_report_free(r);
    return code;
  }

  if (verify->parsed()) {
    std::string text;
    if (!read_text(candidates_path, text)) {
      std::cerr << "diagfp: cannot read '" << candidates_path << "'\n";
      return kUsage;
    }
    diagfp_report* r = nullptr;
    if (const auto s = diagfp_verify(problem, &opts, text.c_str(), &r); s != DIAGFP_OK) return fail(s);
    print(r, run.format);
    const int code = diagfp_report_verified(r) == 1 ? kOk : kVerifyFailed;
    diagfp_report_free(r);
    return code;
  }

  if (oracle->parsed()) {
    diagfp_report* r = nullptr;
    if (const auto s = diagfp_oracle(problem, &opts, bound, &r); s != DIAGFP_OK) return fail(s);
    print(r, run.format);
    diagfp_report_free(r);
    return kOk;
  }

  if (encode->parsed()) {
    std::string joined;
    for (const auto& h : hypotheses) joined += h + "\n";
    char* dimacs = nullptr;
    if (const auto s = diagfp_encode(problem, &opts, question.c_str(), joined.c_str(), &dimacs); s != DIAGFP_OK) {
      return fail(s);
    }
    bool ok = true;
    if (out_path.empty()) {
      std::fputs(dimacs, stdout);
    } else {
      ok = write_text(out_path, dimacs);
    }
    diagfp_string_free(dimacs);
    if (!ok) {
      std::cerr << "diagfp: cannot write '" << out_path << "'\n";
      return kUsage;
    }
    return kOk;
  }
  return kUsage;
}
