#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "substlab/exact_arith.hpp"
#include "substlab/subst_core.hpp"

namespace substlab {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

using BitRow = std::vector<std::uint8_t>;

class EnumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public EnumError {
 public:
  BudgetExceeded(const ExactInt& points, std::uint64_t budget)
      : EnumError("enumeration needs " + points.str() + " points, budget is " +
                  std::to_string(budget)),
        points_(points) {}
  const ExactInt& points() const { return points_; }

 private:
  ExactInt points_;
};

class DuplicateY1 : public EnumError {
 public:
  using EnumError::EnumError;
};

class IndexOutOfRange : public EnumError {
 public:
  using EnumError::EnumError;
};

class NoSteps : public EnumError {
 public:
  using EnumError::EnumError;
};

class AccountingViolation : public EnumError {
 public:
  using EnumError::EnumError;
};

/// Running inf/step counters. One inf per interpretation examined, one step
/// per elementary integer operation; every inf is charged at least one step.
class Counters {
 public:
  void consider(std::uint64_t steps) {
    ++infs_;
    steps_ += steps == 0 ? 1 : steps;
  }
  /// count interpretations each costing steps_each (>= 1) steps.
  void consider_many(std::uint64_t count, std::uint64_t steps_each) {
    infs_ += count;
    steps_ += count * (steps_each == 0 ? 1 : steps_each);
  }
  void charge(std::uint64_t steps) { steps_ += steps; }
  void merge(const Counters& other) {
    infs_ += other.infs_;
    steps_ += other.steps_;
  }
  std::uint64_t infs() const { return infs_; }
  std::uint64_t steps() const { return steps_; }

 private:
  std::uint64_t infs_ = 0;
  std::uint64_t steps_ = 0;
};

struct XEnumeration {
  std::vector<BitRow> rows;
  bool empty_domain = false;
};

/// All 0/1 vectors of length n with exactly c ones, ascending lexicographic.
XEnumeration enum_x(std::size_t n, std::size_t c);

enum class TableOrder { lexicographic_x, descending_y1 };

struct InterpretationRow {
  BitRow x;
  IntVector y;
};

struct InterpretationTable {
  std::vector<InterpretationRow> rows;
  TableOrder order = TableOrder::lexicographic_x;
};

InterpretationTable build_table(const SubstSystem& s, TableOrder order,
                                Counters* counters = nullptr);

/// Every integer point of the box product with a·y = c, lexicographic.
std::vector<IntVector> enum_y_bruteforce(const SubstInstance& inst,
                                         std::uint64_t budget = kDefaultBudget,
                                         Counters* counters = nullptr);

/// Number of integer points in the box product.
ExactInt box_volume(const SubstInstance& inst);

struct BijectionReport {
  std::size_t x_count = 0;
  std::size_t y_count = 0;
  std::size_t matched = 0;
  std::vector<IntVector> extra_y;
  std::vector<BitRow> out_of_box_x;

  bool holds() const {
    return extra_y.empty() && out_of_box_x.empty() && x_count == y_count && matched == x_count;
  }
};

BijectionReport verify_bijection(const SubstInstance& inst, const SubstSystem& s,
                                 std::uint64_t budget = kDefaultBudget,
                                 Counters* counters = nullptr);

/// Raises L₁ to y₁(row k) + 1 so rows 1..k−1 stay feasible and row k does
/// not. k is 1-based. R₁ is lifted to L₁ when needed to keep the box nonempty.
SubstInstance tighten_L1(const SubstInstance& inst, const InterpretationTable& table,
                         std::size_t k);

struct IndependenceWitness {
  SubstInstance instance;
  InterpretationTable table;
  std::vector<std::size_t> satisfied_rows;  // 1-based, 1..k-1
  std::size_t violated_row = 0;             // k
};

IndependenceWitness independence_witness(const SubstSystem& s, std::size_t k);

struct ThroughputReport {
  std::uint64_t infs = 0;
  std::uint64_t steps = 0;
  Rational throughput;
};

ThroughputReport throughput_report(std::uint64_t infs, std::uint64_t steps);
inline ThroughputReport throughput_report(const Counters& c) {
  return throughput_report(c.infs(), c.steps());
}

IntVector to_int_vector(const BitRow& x);
std::string to_string(const BitRow& x);

}  // namespace substlab
