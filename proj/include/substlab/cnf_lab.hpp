#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace substlab {

class CnfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CnfBudgetExceeded : public CnfError {
 public:
  using CnfError::CnfError;
};

class PremiseIncompatible : public CnfError {
 public:
  using CnfError::CnfError;
};

class DimacsError : public CnfError {
 public:
  using CnfError::CnfError;
};

/// DIMACS-style literal: +v or -v for 1-based variable v.
using Literal = int;
using Clause = std::vector<Literal>;

/// Clause list over named variables. Primary variables occupy indices
/// 1..aux_start(); everything after is auxiliary.
class CnfFormula {
 public:
  CnfFormula() = default;
  /// n primary variables named prefix1..prefixn.
  explicit CnfFormula(std::size_t primary, const std::string& prefix = "x");

  std::size_t num_vars() const { return names_.size(); }
  std::size_t aux_start() const { return primary_; }
  const std::vector<std::string>& var_names() const { return names_; }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// Only valid before any auxiliary variable exists.
  Literal add_primary(std::string name);
  Literal add_aux(std::string name = {});

  /// Sorts and deduplicates literals. Tautologies are dropped since they
  /// constrain nothing. Returns false if the clause was dropped.
  bool add_clause(Clause clause);
  void remove_clause(std::size_t index);

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  std::vector<std::string> names_;
  std::size_t primary_ = 0;
  std::vector<Clause> clauses_;
};

/// Shares primary variables by index; auxiliaries of b are renumbered after a's.
CnfFormula conjoin(const CnfFormula& a, const CnfFormula& b);

/// ¬f over f's primary variables, one selector per clause. f must not
/// contain auxiliaries.
CnfFormula negate(const CnfFormula& f);

struct Assignment {
  std::vector<std::uint8_t> values;  // index v-1 holds variable v

  bool value(Literal lit) const;
  bool satisfies(const Clause& c) const;
  bool satisfies(const CnfFormula& f) const;
};

struct SatResult {
  bool sat = false;
  Assignment model;
};

/// Complete DPLL with unit propagation. Assumptions are forced literals.
SatResult dpll(const CnfFormula& f, const std::vector<Literal>& assumptions = {});

/// For every clause of `conclusion`, premises ∧ ¬clause is unsatisfiable.
bool entails(const CnfFormula& premises, const CnfFormula& conclusion);

/// Exactly-c-of-n, or Σ w_i x_i = c when weights are present.
struct CardinalitySpec {
  std::size_t n = 0;
  std::uint64_t c = 0;
  std::optional<std::vector<std::uint64_t>> weights;

  CardinalitySpec(std::size_t n, std::uint64_t c,
                  std::optional<std::vector<std::uint64_t>> weights = std::nullopt);

  bool unit_weights() const;
  /// Bit i of mask is x_{i+1}.
  bool holds(std::uint64_t mask) const;
};

/// Models projected to x_1..x_n are exactly the 0/1 solutions of the constraint.
/// Unit weights use a sequential counter, general weights a binary adder.
CnfFormula encode_cpp(const CardinalitySpec& spec);

/// Exhaustive over x; auxiliaries are left to the solver.
bool equiv_check(const CnfFormula& f, const CardinalitySpec& spec, std::size_t max_n = 20);

/// All prime implicates of exactly-c-of-n over x only, shortest first.
CnfFormula prime_implicates_cardinality(std::size_t n, std::size_t c, std::size_t max_n = 16);

/// Size of the smallest subset of `primes` equivalent to exactly-c-of-n,
/// found by exhaustive search.
std::size_t minimum_cover_size(const CnfFormula& primes, std::size_t n, std::size_t c);

struct GrowthRow {
  std::size_t n = 0;
  std::size_t c = 0;
  std::size_t implicate_count = 0;
  /// Set only where exhaustive cover search ran (n <= 5).
  std::optional<bool> verified_minimal;
};

std::vector<GrowthRow> min_cnf_growth(std::size_t n_max);

struct QuadraticFit {
  long double c0 = 0, c1 = 0, c2 = 0;
  long double operator()(long double x) const { return c0 + c1 * x + c2 * x * x; }
};

/// Least-squares quadratic through (x_i, y_i); needs at least 3 points.
QuadraticFit fit_quadratic(const std::vector<long double>& xs, const std::vector<long double>& ys);

struct TranspositionVerdict {
  bool premise_holds = false;     // φ ∧ F ⊨ H
  bool conclusion_holds = false;  // φ ∧ ¬H ⊨ ¬F
};

TranspositionVerdict transposition_check(const CnfFormula& phi, const CnfFormula& f,
                                         const CnfFormula& h);

void write_dimacs(const CnfFormula& f, std::ostream& out);
std::string to_dimacs(const CnfFormula& f);
CnfFormula read_dimacs(std::istream& in);

}  // namespace substlab
