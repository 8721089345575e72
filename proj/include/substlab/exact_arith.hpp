#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace substlab {

/// Arbitrary-precision signed integer used for every coefficient, bound and
/// solution value in the workbench.
using ExactInt = boost::multiprecision::cpp_int;
using IntVector = std::vector<ExactInt>;

class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CoprimalityViolation : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

class ShapeMismatch : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

class Singular : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

class NotUnimodular : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

/// Exact rational p/q kept in lowest terms with q > 0.
class Rational {
 public:
  Rational() = default;
  Rational(ExactInt p, ExactInt q);

  const ExactInt& num() const { return p_; }
  const ExactInt& den() const { return q_; }

  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.p_ * b.q_ < b.p_ * a.q_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }

 private:
  ExactInt p_ = 0;
  ExactInt q_ = 1;
};

/// Dense row-major integer matrix, at least 1x1.
class IntMatrix {
 public:
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);
  explicit IntMatrix(const std::vector<IntVector>& rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  ExactInt& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const ExactInt& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  IntVector row(std::size_t i) const;
  IntVector col(std::size_t j) const;
  const std::vector<ExactInt>& entries() const { return entries_; }

  /// Largest absolute entry.
  ExactInt max_abs() const;

  /// Matrix with row i and column j removed.
  IntMatrix minor_matrix(std::size_t i, std::size_t j) const;
  /// Leading k x k principal submatrix.
  IntMatrix leading(std::size_t k) const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<ExactInt> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& v);
/// Row vector times matrix, vᵀ·B.
IntVector row_times(const IntVector& v, const IntMatrix& b);
ExactInt dot(const IntVector& a, const IntVector& b);

std::string to_string(const IntMatrix& m);
std::string to_string(const IntVector& v);

/// ceil(log2(m)) for m >= 1, computed exactly.
std::size_t ceil_log2(const ExactInt& m);

/// Bit-size of p/q: 1 + ceil(log2(|p|+1)) + ceil(log2(q+1)).
/// Throws CoprimalityViolation if gcd(|p|, q) != 1 or q <= 0.
std::size_t size_scalar(const ExactInt& p, const ExactInt& q = 1);
std::size_t size_scalar(const Rational& r);
/// n + sum of entry sizes.
std::size_t size_vector(const IntVector& v);
/// rows*cols + sum of entry sizes.
std::size_t size_matrix(const IntMatrix& b);

/// Result of fraction-free elimination. Every intermediate entry produced by
/// the Bareiss recurrence is a minor of the (row-permuted) input, so the
/// recorded magnitudes feed the minor bound check directly.
struct Determinant {
  ExactInt value;
  /// |leading minor| after each elimination step, in order.
  std::vector<ExactInt> leading_minors;
  /// max |entry| over every intermediate matrix.
  ExactInt max_intermediate;
};

Determinant bareiss(const IntMatrix& b);
inline ExactInt det(const IntMatrix& b) { return bareiss(b).value; }

/// Adjugate divided by the determinant. Requires |det| = 1.
IntMatrix integer_inverse(const IntMatrix& b);

struct MinorBoundReport {
  ExactInt max_minor;
  ExactInt bound;  // n! * M^n
  bool holds = false;
};

MinorBoundReport minor_bound_check(const IntMatrix& b);

}  // namespace substlab
