#pragma once

// CNF formulas with a named-variable registry, DIMACS export, and a CDCL
// solver that answers under assumptions and reports failed assumptions.
//
// Literals use the DIMACS convention: variable v >= 1 is the literal v,
// its negation is -v.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace diagfp {

using Lit = int;

class CnfFormula {
 public:
  /// Allocates a fresh variable under a unique name.
  int new_var(std::string name);
  /// Variable registered under name, or 0.
  int find_var(std::string_view name) const;
  const std::string& var_name(int v) const { return names_.at(static_cast<std::size_t>(v - 1)); }
  int num_vars() const { return static_cast<int>(names_.size()); }

  void add_clause(std::vector<Lit> clause);
  void add_clause(std::initializer_list<Lit> clause) { add_clause(std::vector<Lit>(clause)); }
  const std::vector<std::vector<Lit>>& clauses() const { return clauses_; }

  /// Pairwise for up to 8 literals, sequential ladder otherwise. Ladder
  /// auxiliaries are named "<tag>#<k>". Every clause gets `guard` appended
  /// when it is non-zero.
  void at_most_one(std::span<const Lit> lits, const std::string& tag, Lit guard = 0);
  void exactly_one(std::span<const Lit> lits, const std::string& tag, Lit guard = 0);

  /// DIMACS text. Each comment line is prefixed with "c ". Extra unit
  /// clauses (typically assumptions) are appended after the formula.
  std::string to_dimacs(std::span<const std::string> comments = {}, std::span<const Lit> extra_units = {}) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<Lit>> clauses_;
};

/// Conflict-driven clause learning with two watched literals, first-UIP
/// learning, VSIDS branching, phase saving and Luby restarts.
class SatSolver {
 public:
  enum class Result { Sat, Unsat };

  SatSolver();
  ~SatSolver();
  SatSolver(const SatSolver&) = delete;
  SatSolver& operator=(const SatSolver&) = delete;

  /// Makes variables 1..n available.
  void reserve_vars(int n);
  int num_vars() const;

  /// Returns false once the clause set is known unsatisfiable at level 0.
  bool add_clause(std::span<const Lit> clause);
  void add_formula(const CnfFormula& f);

  /// Solves under the given assumption literals. On Unsat, failed_assumptions()
  /// holds a subset of them that is already unsatisfiable with the clauses.
  Result solve(std::span<const Lit> assumptions = {});

  /// Value of variable v in the last model (valid after Sat).
  bool model_value(int v) const;
  const std::vector<Lit>& failed_assumptions() const;

  std::uint64_t conflicts() const;
  std::uint64_t decisions() const;
  std::uint64_t propagations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace diagfp
