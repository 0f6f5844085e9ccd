#include "diagfp/diagfp.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "diagfp/circuit.hpp"
#include "diagfp/des_model.hpp"
#include "diagfp/des_sat.hpp"
#include "diagfp/error.hpp"
#include "diagfp/explicit_solver.hpp"
#include "diagfp/generator.hpp"
#include "diagfp/report.hpp"

using namespace diagfp;

struct diagfp_problem {
  std::unique_ptr<DesModel> model;  // set for DES problems
  Observation observation;
  std::optional<CircuitProblem> circuit;  // set for circuit problems
};

struct diagfp_report {
  DiagnosisReport report;
  std::vector<std::string> rendered;
  std::string json;
  std::string text;
};

namespace {

thread_local std::string g_last_error;

diagfp_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return DIAGFP_ERR_USAGE;
    case ErrorCode::Parse: return DIAGFP_ERR_PARSE;
    case ErrorCode::UnsupportedAbstraction: return DIAGFP_ERR_UNSUPPORTED;
    case ErrorCode::ConvexityViolation: return DIAGFP_ERR_CONVEXITY;
    case ErrorCode::StateBudget: return DIAGFP_ERR_STATE_BUDGET;
    case ErrorCode::InternalConsistency: return DIAGFP_ERR_INTERNAL;
    case ErrorCode::Io: return DIAGFP_ERR_IO;
  }
  return DIAGFP_ERR_INTERNAL;
}

template <class F>
diagfp_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return DIAGFP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DIAGFP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DIAGFP_ERR_INTERNAL;
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

diagfp_options effective(const diagfp_options* options) {
  diagfp_options o;
  diagfp_options_init(&o);
  if (!options) return o;
  o = *options;
  if (!o.space) o.space = "shs";
  if (!o.strategy) o.strategy = "pfs-ec";
  if (!o.solver) o.solver = "sat";
  if (o.steps_per_obs == 0) usage_error("steps per observation must be at least 1");
  if (o.iteration_cap == 0) usage_error("iteration cap must be at least 1");
  if (o.state_budget == 0) usage_error("state budget must be at least 1");
  return o;
}

SpaceTag effective_space(const diagfp_problem& p, const diagfp_options& o) {
  if (p.circuit) return SpaceTag::SHS;
  const SpaceTag tag = parse_space_tag(o.space);
  if (tag == SpaceTag::BHS) usage_error("diagnosis runs in shs, mhs or sqhs");
  return tag;
}

std::unique_ptr<TestSolver> make_solver(const diagfp_problem& p, const diagfp_options& o) {
  const std::string solver = o.solver;
  if (p.circuit) {
    if (solver != "sat") usage_error("circuit problems are solved through the sat reduction");
    return std::make_unique<CircuitSatSolver>(p.circuit->circuit, p.circuit->observation);
  }
  const SpaceTag tag = effective_space(p, o);
  if (solver == "sat") {
    SatOptions so;
    so.params.steps_per_obs = o.steps_per_obs;
    return std::make_unique<DesSatSolver>(*p.model, p.observation, tag, so);
  }
  if (solver == "explicit") {
    ExplicitOptions eo;
    eo.state_budget = o.state_budget;
    return std::make_unique<ExplicitSolver>(*p.model, p.observation, tag, eo);
  }
  usage_error("unknown solver '" + solver + "' (expected sat|explicit)");
}

DiagnosisReport base_report(const diagfp_problem& p, const diagfp_options& o, const char* command) {
  DiagnosisReport r;
  r.command = command;
  r.problem = p.circuit ? "circuit" : "des";
  r.space = p.circuit ? p.circuit->circuit.space() : p.model->space(effective_space(p, o));
  r.solver = p.circuit ? "circuit-sat" : o.solver;
  if (!p.circuit && r.solver == "sat") {
    r.steps_per_obs = o.steps_per_obs;
    r.horizon = EncodingParams{o.steps_per_obs}.horizon(p.observation.events.size());
  }
  return r;
}

diagfp_report* finish(DiagnosisReport r) {
  auto out = std::make_unique<diagfp_report>();
  for (const auto& h : r.candidates) out->rendered.push_back(render(h, r.space));
  out->json = report_json(r);
  out->text = report_text(r);
  out->report = std::move(r);
  return out.release();
}

std::vector<Hypothesis> parse_hypothesis_lines(const char* text, const Space& space) {
  std::vector<Hypothesis> out;
  if (!text) return out;
  std::istringstream in(text);
  std::size_t number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_hypothesis(line, space));
    } catch (const Error& e) {
      throw ParseError(number, e.what());
    }
  }
  return out;
}

void load_des(const std::string& model_text, const std::string& obs_text, diagfp_problem** out) {
  auto p = std::make_unique<diagfp_problem>();
  p->model = std::make_unique<DesModel>(parse_model(model_text));
  p->observation = parse_observation(obs_text, *p->model);
  *out = p.release();
}

void load_circuit(const std::string& text, diagfp_problem** out) {
  auto p = std::make_unique<diagfp_problem>();
  p->circuit = parse_circuit(text);
  *out = p.release();
}

}  // namespace

extern "C" {

void diagfp_options_init(diagfp_options* options) {
  if (!options) return;
  options->space = "shs";
  options->strategy = "pfs-ec";
  options->solver = "sat";
  options->steps_per_obs = 7;
  options->iteration_cap = 10000;
  options->state_budget = 5000000;
  options->conflict_cache = 1;
  options->verify = 0;
}

const char* diagfp_version(void) { return "1.0.0"; }

const char* diagfp_status_name(diagfp_status status) {
  switch (status) {
    case DIAGFP_OK: return "ok";
    case DIAGFP_ERR_USAGE: return "usage";
    case DIAGFP_ERR_PARSE: return "parse";
    case DIAGFP_ERR_UNSUPPORTED: return "unsupported-abstraction";
    case DIAGFP_ERR_CONVEXITY: return "convexity-violation";
    case DIAGFP_ERR_STATE_BUDGET: return "state-budget";
    case DIAGFP_ERR_INTERNAL: return "internal-consistency";
    case DIAGFP_ERR_IO: return "io";
    case DIAGFP_ERR_NULL: return "null-argument";
  }
  return "unknown";
}

const char* diagfp_last_error(void) { return g_last_error.c_str(); }

void diagfp_string_free(char* s) { std::free(s); }

diagfp_status diagfp_problem_load_des(const char* model_path, const char* obs_path, diagfp_problem** out) {
  if (!model_path || !obs_path || !out) return DIAGFP_ERR_NULL;
  return guarded([&] { load_des(read_file(model_path), read_file(obs_path), out); });
}

diagfp_status diagfp_problem_load_des_text(const char* model_text, const char* obs_text, diagfp_problem** out) {
  if (!model_text || !obs_text || !out) return DIAGFP_ERR_NULL;
  return guarded([&] { load_des(model_text, obs_text, out); });
}

diagfp_status diagfp_problem_load_circuit(const char* path, diagfp_problem** out) {
  if (!path || !out) return DIAGFP_ERR_NULL;
  return guarded([&] { load_circuit(read_file(path), out); });
}

diagfp_status diagfp_problem_load_circuit_text(const char* text, diagfp_problem** out) {
  if (!text || !out) return DIAGFP_ERR_NULL;
  return guarded([&] { load_circuit(text, out); });
}

void diagfp_problem_free(diagfp_problem* problem) { delete problem; }

diagfp_status diagfp_diagnose(const diagfp_problem* problem, const diagfp_options* options, diagfp_report** out) {
  if (!problem || !out) return DIAGFP_ERR_NULL;
  return guarded([&] {
    const auto o = effective(options);
    const StrategyKind kind = parse_strategy(o.strategy);
    auto solver = make_solver(*problem, o);
    StrategyOptions so;
    so.iteration_cap = o.iteration_cap;
    so.conflict_cache = o.conflict_cache != 0;
    DiagnosisResult result = run_strategy(kind, *solver, so);

    DiagnosisReport r = base_report(*problem, o, "diagnose");
    r.strategy = strategy_name(kind);
    r.candidates = std::move(result.minimal_candidates);
    r.complete = result.complete;
    r.stats = result.stats;
    r.solver_counters = solver->counters();
    if (o.verify) {
      auto checker = make_solver(*problem, o);
      r.verification = verify_minimal_diagnosis(r.candidates, *checker);
    }
    *out = finish(std::move(r));
  });
}

diagfp_status diagfp_oracle(const diagfp_problem* problem, const diagfp_options* options, unsigned long bound,
                            diagfp_report** out) {
  if (!problem || !out) return DIAGFP_ERR_NULL;
  return guarded([&] {
    if (problem->circuit) usage_error("the enumeration oracle applies to discrete event systems");
    const auto o = effective(options);
    const SpaceTag tag = effective_space(*problem, o);
    const std::size_t b = bound ? bound : certified_bound(*problem->model, problem->observation, o.state_budget);
    DiagnosisReport r;
    r.command = "oracle";
    r.problem = "des";
    r.space = problem->model->space(tag);
    r.solver = "oracle";
    r.oracle = true;
    r.oracle_bound = b;
    r.candidates = oracle_diagnose(*problem->model, problem->observation, tag, b, o.state_budget);
    *out = finish(std::move(r));
  });
}

diagfp_status diagfp_verify(const diagfp_problem* problem, const diagfp_options* options,
                            const char* candidates_text, diagfp_report** out) {
  if (!problem || !out) return DIAGFP_ERR_NULL;
  return guarded([&] {
    const auto o = effective(options);
    auto solver = make_solver(*problem, o);
    DiagnosisReport r = base_report(*problem, o, "verify");
    r.candidates = parse_hypothesis_lines(candidates_text, solver->space());
    r.verification = verify_minimal_diagnosis(r.candidates, *solver);
    r.solver_counters = solver->counters();
    *out = finish(std::move(r));
  });
}

diagfp_status diagfp_encode(const diagfp_problem* problem, const diagfp_options* options, const char* question,
                            const char* hypotheses_text, char** dimacs_out) {
  if (!problem || !question || !dimacs_out) return DIAGFP_ERR_NULL;
  return guarded([&] {
    const auto o = effective(options);
    if (std::string(o.solver) != "sat") usage_error("encode exports the sat encoding; use --solver sat");
    auto solver = make_solver(*problem, o);
    const auto hs = parse_hypothesis_lines(hypotheses_text, solver->space());
    const std::string q = question;
    PropertySet request;
    if (q == "candidate" || q == "minimal") {
      if (hs.size() != 1) usage_error("question '" + q + "' takes exactly one hypothesis");
      request = q == "candidate" ? question_candidate(hs[0], solver->space()) : question_minimal(hs[0]);
    } else if (q == "coverage") {
      request = question_coverage(hs);
    } else {
      usage_error("unknown question '" + q + "' (expected candidate|minimal|coverage)");
    }
    std::string text;
    if (auto* des = dynamic_cast<DesSatSolver*>(solver.get())) {
      text = des->export_dimacs(request);
    } else {
      text = static_cast<CircuitSatSolver&>(*solver).export_dimacs(request);
    }
    *dimacs_out = duplicate(text);
  });
}

diagfp_status diagfp_generate(unsigned long long seed, unsigned components, unsigned states, unsigned faults,
                              unsigned obs_len, char** model_out, char** obs_out, char** sidecar_out) {
  if (!model_out || !obs_out || !sidecar_out) return DIAGFP_ERR_NULL;
  return guarded([&] {
    GeneratorParams params;
    params.seed = seed;
    params.components = components;
    params.states = states;
    params.faults = faults;
    params.obs_len = obs_len;
    const auto inst = generate_instance(params);
    char* m = duplicate(inst.model_text);
    char* ob = nullptr;
    try {
      ob = duplicate(inst.observation_text);
      *sidecar_out = duplicate(inst.sidecar_json);
    } catch (...) {
      std::free(m);
      std::free(ob);
      throw;
    }
    *model_out = m;
    *obs_out = ob;
  });
}

int diagfp_report_complete(const diagfp_report* report) { return report && report->report.complete ? 1 : 0; }

int diagfp_report_verified(const diagfp_report* report) {
  if (!report || !report->report.verification) return -1;
  return report->report.verification->passed ? 1 : 0;
}

size_t diagfp_report_candidate_count(const diagfp_report* report) { return report ? report->rendered.size() : 0; }

const char* diagfp_report_candidate(const diagfp_report* report, size_t index) {
  if (!report || index >= report->rendered.size()) return nullptr;
  return report->rendered[index].c_str();
}

const char* diagfp_report_json(const diagfp_report* report) { return report ? report->json.c_str() : ""; }
const char* diagfp_report_text(const diagfp_report* report) { return report ? report->text.c_str() : ""; }

void diagfp_report_free(diagfp_report* report) { delete report; }

}  // extern "C"
