#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "substlab/exact_arith.hpp"

namespace substlab {

class SubstError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public SubstError {
 public:
  using SubstError::SubstError;
};

/// Elimination failures carry the 1-based step index.
class PivotError : public SubstError {
 public:
  PivotError(const std::string& what, std::size_t step) : SubstError(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class NonUnitPivot : public PivotError {
 public:
  using PivotError::PivotError;
};

class DegeneratePivot : public PivotError {
 public:
  using PivotError::PivotError;
};

class IncompleteTrace : public SubstError {
 public:
  using SubstError::SubstError;
};

class NotUnimodularEquivalent : public SubstError {
 public:
  using SubstError::SubstError;
};

struct Box {
  ExactInt lo;
  ExactInt hi;

  bool contains(const ExactInt& v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Box&, const Box&) = default;
};

/// a·y = c with y_i in [L_i, R_i].
class SubstInstance {
 public:
  SubstInstance(IntVector a, ExactInt c, std::vector<Box> boxes);

  std::size_t n() const { return a_.size(); }
  const IntVector& a() const { return a_; }
  const ExactInt& c() const { return c_; }
  const std::vector<Box>& boxes() const { return boxes_; }

  /// a·y = c and every y_i inside its box.
  bool feasible(const IntVector& y) const;
  bool in_boxes(const IntVector& y) const;

  /// Encoding length: size(a) + size(c) + sizes of all box endpoints.
  std::size_t lg3() const;

  SubstInstance with_box(std::size_t i, Box b) const;

  friend bool operator==(const SubstInstance&, const SubstInstance&) = default;

 private:
  IntVector a_;
  ExactInt c_;
  std::vector<Box> boxes_;
};

/// y = B·x + offset together with the cardinality constraint Σx = c.
/// B is unimodular; construction rejects anything else.
class SubstSystem {
 public:
  SubstSystem(IntMatrix b, ExactInt c);
  SubstSystem(IntMatrix b, IntVector offset, ExactInt c);

  std::size_t n() const { return b_.rows(); }
  const IntMatrix& matrix() const { return b_; }
  const IntVector& offset() const { return offset_; }
  const ExactInt& c() const { return c_; }

  IntVector apply(const IntVector& x) const;
  /// x = B⁻¹·(y − offset).
  IntVector preimage(const IntVector& y) const;
  const IntMatrix& inverse() const { return inverse_; }

  friend bool operator==(const SubstSystem& a, const SubstSystem& b) {
    return a.b_ == b.b_ && a.offset_ == b.offset_ && a.c_ == b.c_;
  }

 private:
  IntMatrix b_;
  IntVector offset_;
  ExactInt c_;
  IntMatrix inverse_;
};

/// x_i = Σ_{j≤i} y_coeffs[j]·y_j + Σ_{k>i} x_coeffs[k]·x_k
struct EliminationStep {
  IntVector y_coeffs;
  IntVector x_coeffs;
  int pivot = 1;

  friend bool operator==(const EliminationStep&, const EliminationStep&) = default;
};

struct EliminationTrace {
  std::size_t n = 0;
  std::vector<EliminationStep> steps;

  std::vector<int> pivots() const;
  bool complete() const { return steps.size() == n; }
};

std::string to_string(const EliminationStep& step, std::size_t index);

/// Polynomial with nonnegative coefficients, lowest degree first.
class PolyBound {
 public:
  explicit PolyBound(std::vector<ExactInt> coefficients);
  ExactInt operator()(const ExactInt& x) const;
  const std::vector<ExactInt>& coefficients() const { return coeffs_; }

 private:
  std::vector<ExactInt> coeffs_;
};

EliminationTrace forward_eliminate(const IntMatrix& b);
inline EliminationTrace forward_eliminate(const SubstSystem& s) {
  return forward_eliminate(s.matrix());
}

/// Expresses x purely in y; equals the inverse of the originating matrix.
IntMatrix back_substitute(const EliminationTrace& t);

/// Image bounds of [0,1]ⁿ under each row: offset + (sum of negatives, sum of positives).
std::vector<Box> derive_boxes(const SubstSystem& s);
std::vector<Box> derive_boxes(const IntMatrix& b, const IntVector& offset);

struct R1Row {
  Box instance;
  Box derived;
  bool ok = false;
};

struct R1Report {
  std::vector<R1Row> rows;
  bool all_ok() const;
};

R1Report verify_r1(const SubstInstance& inst, const SubstSystem& s);

struct CardinalityLink {
  IntVector coefficients;  // aᵀB
  bool linked = false;
};

CardinalityLink verify_cardinality_link(const SubstInstance& inst, const SubstSystem& s);

/// The instance whose solutions the system should generate: a = 1ᵀB⁻¹,
/// c' = c + a·offset, boxes from derive_boxes.
SubstInstance instance_from_system(const SubstSystem& s);

SubstSystem generate_note1(std::size_t n, std::uint64_t seed, const ExactInt& coeff_bound,
                           std::optional<ExactInt> c = std::nullopt);

/// First row 1, 2, 4, ..., 2ⁿ⁻¹; remaining rows as generate_note1.
SubstSystem generate_descending(std::size_t n, std::uint64_t seed,
                                const ExactInt& coeff_bound = 10,
                                std::optional<ExactInt> c = std::nullopt);

/// Column-reduces a unimodular B so that forward_eliminate succeeds.
/// Rows whose reduced pivot is already ±1 are left untouched.
SubstSystem r2_normalize(const IntMatrix& b, const ExactInt& c = 0);

struct IntermediateSizeReport {
  std::size_t max_coeff_size = 0;
  std::size_t bound = 0;  // 4·size(B)
  bool holds = false;
};

IntermediateSizeReport intermediate_size_check(const EliminationTrace& t, const IntMatrix& b);

struct SizeBoundReport {
  std::size_t size_b = 0;
  std::size_t size_inverse = 0;
  ExactInt omega;
  bool holds = false;
};

SizeBoundReport size_bound_check(const SubstSystem& s, const PolyBound& omega, std::size_t lg3);

}  // namespace substlab
