#include <algorithm>
#include <random>

#include "diagfp/error.hpp"
#include "diagfp/sat.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace diagfp;

namespace {

std::vector<std::vector<int>> random_cnf(std::mt19937_64& rng, int vars, int clauses) {
  std::vector<std::vector<int>> out;
  std::uniform_int_distribution<int> var(1, vars);
  for (int i = 0; i < clauses; ++i) {
    std::vector<int> c;
    const int width = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < width; ++k) c.push_back(rng() % 2 ? var(rng) : -var(rng));
    out.push_back(c);
  }
  return out;
}

bool satisfies(const SatSolver& s, const std::vector<std::vector<int>>& cnf) {
  for (const auto& c : cnf) {
    bool ok = false;
    for (int l : c) ok = ok || (s.model_value(std::abs(l)) == (l > 0));
    if (!ok) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("trivial instances") {
  SatSolver s;
  CHECK(s.solve() == SatSolver::Result::Sat);
  s.reserve_vars(2);
  std::vector<int> a{1}, b{-1, 2};
  s.add_clause(a);
  s.add_clause(b);
  CHECK(s.solve() == SatSolver::Result::Sat);
  CHECK(s.model_value(2));
  std::vector<int> assume{-2};
  CHECK(s.solve(assume) == SatSolver::Result::Unsat);
  CHECK(s.failed_assumptions() == std::vector<int>{-2});
  CHECK(s.solve() == SatSolver::Result::Sat);
  std::vector<int> c{-2};
  s.add_clause(c);
  CHECK(s.solve() == SatSolver::Result::Unsat);
  CHECK(s.failed_assumptions().empty());
}

TEST_CASE("CDCL agrees with brute force on 2000 random instances under assumptions") {
  std::mt19937_64 rng(2024);
  int wrong_verdict = 0, bad_model = 0, bad_core = 0;
  for (int i = 0; i < 2000; ++i) {
    const int vars = 3 + static_cast<int>(rng() % 10);
    const auto cnf = random_cnf(rng, vars, vars * (2 + static_cast<int>(rng() % 4)));
    std::vector<int> assumptions;
    for (int v = 1; v <= vars; ++v)
      if (rng() % 4 == 0) assumptions.push_back(rng() % 2 ? v : -v);
    SatSolver s;
    s.reserve_vars(vars);
    for (const auto& c : cnf) s.add_clause(c);
    const bool expected = ref::brute_sat(vars, cnf, assumptions);
    const bool got = s.solve(assumptions) == SatSolver::Result::Sat;
    if (got != expected) ++wrong_verdict;
    if (got) {
      if (!satisfies(s, cnf)) ++bad_model;
      for (int a : assumptions)
        if (s.model_value(std::abs(a)) != (a > 0)) ++bad_model;
    } else if (expected == got) {
      const auto core = s.failed_assumptions();
      for (int l : core)
        if (std::find(assumptions.begin(), assumptions.end(), l) == assumptions.end()) ++bad_core;
      if (ref::brute_sat(vars, cnf, core)) ++bad_core;
    }
  }
  CHECK(wrong_verdict == 0);
  CHECK(bad_model == 0);
  CHECK(bad_core == 0);
}

TEST_CASE("larger random instances stay consistent with their own models") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 30; ++i) {
    const int vars = 120;
    std::vector<std::vector<int>> cnf;
    std::uniform_int_distribution<int> var(1, vars);
    for (int k = 0; k < 500; ++k) cnf.push_back({rng() % 2 ? var(rng) : -var(rng), rng() % 2 ? var(rng) : -var(rng),
                                                  rng() % 2 ? var(rng) : -var(rng)});
    SatSolver s;
    s.reserve_vars(vars);
    for (const auto& c : cnf) s.add_clause(c);
    if (s.solve() == SatSolver::Result::Sat) CHECK(satisfies(s, cnf));
  }
}

TEST_CASE("pigeonhole 5 into 4 is unsatisfiable") {
  CnfFormula f;
  int p[5][4];
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j) p[i][j] = f.new_var("p" + std::to_string(i) + "_" + std::to_string(j));
  for (int i = 0; i < 5; ++i) f.add_clause({p[i][0], p[i][1], p[i][2], p[i][3]});
  for (int j = 0; j < 4; ++j) {
    std::vector<Lit> col;
    for (int i = 0; i < 5; ++i) col.push_back(p[i][j]);
    f.at_most_one(col, "h" + std::to_string(j));
  }
  SatSolver s;
  s.add_formula(f);
  CHECK(s.solve() == SatSolver::Result::Unsat);
}

TEST_CASE("at-most-one and exactly-one encodings, pairwise and ladder") {
  for (int n = 1; n <= 12; ++n) {
    for (bool exactly : {false, true}) {
      CnfFormula f;
      std::vector<Lit> xs;
      for (int i = 0; i < n; ++i) xs.push_back(f.new_var("x" + std::to_string(i)));
      if (exactly) {
        f.exactly_one(xs, "g");
      } else {
        f.at_most_one(xs, "g");
      }
      if (n > 8) CHECK(f.find_var("g#0") != 0);
      // Every assignment to the x's is extendable iff its count fits.
      for (std::uint32_t m = 0; m < (1u << n); ++m) {
        std::vector<int> units;
        for (int i = 0; i < n; ++i) units.push_back(m >> i & 1 ? xs[i] : -xs[i]);
        const int ones = __builtin_popcount(m);
        const bool want = exactly ? ones == 1 : ones <= 1;
        if (f.num_vars() <= 14) {
          CHECK(ref::brute_sat(f.num_vars(), f.clauses(), units) == want);
        } else {
          SatSolver s;
          s.add_formula(f);
          CHECK((s.solve(units) == SatSolver::Result::Sat) == want);
        }
      }
    }
  }
}

TEST_CASE("guarded constraints are vacuous when the guard is true") {
  CnfFormula f;
  std::vector<Lit> xs;
  for (int i = 0; i < 10; ++i) xs.push_back(f.new_var("x" + std::to_string(i)));
  const Lit g = f.new_var("guard");
  f.exactly_one(xs, "e", g);
  std::vector<int> all_true(xs.begin(), xs.end());
  all_true.push_back(g);
  SatSolver s;
  s.add_formula(f);
  CHECK(s.solve(all_true) == SatSolver::Result::Sat);
  all_true.back() = -g;
  CHECK(s.solve(all_true) == SatSolver::Result::Unsat);
}

TEST_CASE("registry and DIMACS export") {
  CnfFormula f;
  CHECK(f.new_var("a") == 1);
  CHECK(f.new_var("b") == 2);
  CHECK(f.find_var("b") == 2);
  CHECK(f.find_var("zz") == 0);
  CHECK_THROWS_AS(f.new_var("a"), Error);
  CHECK_THROWS_AS(f.add_clause({3}), Error);
  f.add_clause({1, -2});
  std::vector<std::string> comments{"hello"};
  std::vector<Lit> units{2};
  const auto text = f.to_dimacs(comments, units);
  CHECK(text == "c hello\nc var 1 a\nc var 2 b\np cnf 2 2\n1 -2 0\n2 0\n");
}
