#include "substlab/exact_arith.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace substlab {

Rational::Rational(ExactInt p, ExactInt q) : p_(std::move(p)), q_(std::move(q)) {
  if (q_ == 0) throw ArithmeticError("rational with zero denominator");
  if (q_ < 0) {
    p_ = -p_;
    q_ = -q_;
  }
  ExactInt g = gcd(abs(p_), q_);
  if (g > 1) {
    p_ /= g;
    q_ /= g;
  }
}

std::string Rational::str() const {
  if (q_ == 1) return p_.str();
  return p_.str() + "/" + q_.str();
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  if (rows == 0 || cols == 0) throw ShapeMismatch("matrix must be at least 1x1");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    : IntMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0) {
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeMismatch("ragged matrix literal");
    std::size_t j = 0;
    for (long long v : r) (*this)(i, j++) = v;
    ++i;
  }
}

IntMatrix::IntMatrix(const std::vector<IntVector>& rows)
    : IntMatrix(rows.size(), rows.empty() ? 0 : rows.front().size()) {
  for (std::size_t i = 0; i < rows_; ++i) {
    if (rows[i].size() != cols_) throw ShapeMismatch("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), entries_.begin() + i * cols_);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(entries_.begin() + i * cols_, entries_.begin() + (i + 1) * cols_);
}

IntVector IntMatrix::col(std::size_t j) const {
  IntVector out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
  return out;
}

ExactInt IntMatrix::max_abs() const {
  ExactInt m = 0;
  for (const auto& e : entries_) m = std::max(m, ExactInt(abs(e)));
  return m;
}

IntMatrix IntMatrix::minor_matrix(std::size_t i, std::size_t j) const {
  if (rows_ < 2 || cols_ < 2) throw ShapeMismatch("minor of a 1-wide matrix");
  IntMatrix out(rows_ - 1, cols_ - 1);
  for (std::size_t r = 0, rr = 0; r < rows_; ++r) {
    if (r == i) continue;
    for (std::size_t c = 0, cc = 0; c < cols_; ++c) {
      if (c == j) continue;
      out(rr, cc++) = (*this)(r, c);
    }
    ++rr;
  }
  return out;
}

IntMatrix IntMatrix::leading(std::size_t k) const {
  if (k == 0 || k > rows_ || k > cols_) throw ShapeMismatch("leading block out of range");
  IntMatrix out(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out(i, j) = (*this)(i, j);
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("matrix product dimension mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

IntVector operator*(const IntMatrix& a, const IntVector& v) {
  if (a.cols() != v.size()) throw ShapeMismatch("matrix-vector dimension mismatch");
  IntVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

IntVector row_times(const IntVector& v, const IntMatrix& b) {
  if (v.size() != b.rows()) throw ShapeMismatch("vector-matrix dimension mismatch");
  IntVector out(b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out[j] += v[i] * b(i, j);
  return out;
}

ExactInt dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw ShapeMismatch("dot product length mismatch");
  ExactInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", " : "") << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

std::size_t ceil_log2(const ExactInt& m) {
  if (m < 1) throw ArithmeticError("ceil_log2 of non-positive value");
  if (m == 1) return 0;
  // ceil(log2 m) is the bit length of m - 1.
  return static_cast<std::size_t>(msb(ExactInt(m - 1))) + 1;
}

std::size_t size_scalar(const ExactInt& p, const ExactInt& q) {
  if (q <= 0) throw CoprimalityViolation("size of p/q requires q > 0, got q = " + q.str());
  ExactInt ap = abs(p);
  if (gcd(ap, q) != 1)
    throw CoprimalityViolation("size of p/q requires coprime p, q; got " + p.str() + "/" + q.str());
  return 1 + ceil_log2(ap + 1) + ceil_log2(q + 1);
}

std::size_t size_scalar(const Rational& r) { return size_scalar(r.num(), r.den()); }

std::size_t size_vector(const IntVector& v) {
  std::size_t s = v.size();
  for (const auto& e : v) s += size_scalar(e);
  return s;
}

std::size_t size_matrix(const IntMatrix& b) {
  std::size_t s = b.rows() * b.cols();
  for (const auto& e : b.entries()) s += size_scalar(e);
  return s;
}

Determinant bareiss(const IntMatrix& b) {
  if (!b.square()) throw ShapeMismatch("determinant of a non-square matrix");
  const std::size_t n = b.rows();
  IntMatrix m = b;
  Determinant out;
  out.max_intermediate = b.max_abs();
  int sign = 1;
  ExactInt prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) {
        out.value = 0;
        return out;
      }
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(r, j));
      sign = -sign;
    }
    out.leading_minors.push_back(abs(m(k, k)));
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        // Sylvester's identity makes this division exact.
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        out.max_intermediate = std::max(out.max_intermediate, ExactInt(abs(m(i, j))));
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  out.value = sign * m(n - 1, n - 1);
  return out;
}

IntMatrix integer_inverse(const IntMatrix& b) {
  if (!b.square()) throw ShapeMismatch("inverse of a non-square matrix");
  const ExactInt d = det(b);
  if (d == 0) throw Singular("matrix is singular");
  if (abs(d) != 1)
    throw NotUnimodular("determinant " + d.str() + " has no integer inverse");
  const std::size_t n = b.rows();
  if (n == 1) return IntMatrix({IntVector{d}});
  IntMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ExactInt cof = det(b.minor_matrix(i, j));
      if ((i + j) % 2) cof = -cof;
      // adj(B)[j][i] = cofactor(i, j); dividing by ±1 is always exact.
      if (cof % d != 0) throw ArithmeticError("adjugate entry not divisible by determinant");
      inv(j, i) = cof / d;
    }
  return inv;
}

MinorBoundReport minor_bound_check(const IntMatrix& b) {
  const Determinant d = bareiss(b);
  MinorBoundReport r;
  r.max_minor = d.max_intermediate;
  for (const auto& m : d.leading_minors) r.max_minor = std::max(r.max_minor, m);
  const std::size_t n = b.rows();
  ExactInt fact = 1;
  for (std::size_t k = 2; k <= n; ++k) fact *= k;
  r.bound = fact * pow(b.max_abs(), static_cast<unsigned>(n));
  r.holds = r.max_minor <= r.bound;
  return r;
}

}  // namespace substlab
