#include "substlab/subst_core.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <utility>

namespace substlab {

namespace {

void require_unimodular(const IntMatrix& b) {
  if (!b.square()) throw ShapeMismatch("substitution matrix must be square");
  const ExactInt d = det(b);
  if (d == 0) throw Singular("substitution matrix is singular");
  if (abs(d) != 1)
    throw NotUnimodular("substitution matrix has determinant " + d.str() + ", expected ±1");
}

// Uniform draw in [lo, hi] from a 64-bit engine. Modulo reduction keeps the
// stream identical across standard libraries.
long long draw(std::mt19937_64& rng, long long lo, long long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long long>(rng() % span);
}

long long bound_to_ll(const ExactInt& bound) {
  if (bound < 1) throw SubstError("coefficient bound must be >= 1");
  if (bound > (ExactInt(1) << 62)) throw SubstError("coefficient bound too large for generator");
  return bound.convert_to<long long>();
}

// Fill rows 1..n-1 of b (row 0 already set) following the unit-pivot recipe:
// off-diagonal entries are random, the diagonal is solved for so that the
// reduced pivot after eliminating x_1..x_{i-1} is ±1.
void fill_note1_rows(IntMatrix& b, std::mt19937_64& rng, long long bound) {
  const std::size_t n = b.rows();
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) b(i, j) = (j == i) ? 0 : draw(rng, -bound, bound);
    const ExactInt d_prev = det(b.leading(i));
    // The (i,i) cofactor of the leading block is d_prev, so the reduced
    // pivot is linear in b_ii with slope 1.
    const ExactInt pivot0 = det(b.leading(i + 1)) / d_prev;
    const ExactInt to_plus = 1 - pivot0;
    const ExactInt to_minus = -1 - pivot0;
    const bool coin = rng() & 1;
    if (abs(to_plus) < abs(to_minus))
      b(i, i) = to_plus;
    else if (abs(to_minus) < abs(to_plus))
      b(i, i) = to_minus;
    else
      b(i, i) = coin ? to_plus : to_minus;
  }
}

ExactInt default_cardinality(std::size_t n, const std::optional<ExactInt>& c) {
  return c ? *c : ExactInt(n / 2);
}

}  // namespace

SubstInstance::SubstInstance(IntVector a, ExactInt c, std::vector<Box> boxes)
    : a_(std::move(a)), c_(std::move(c)), boxes_(std::move(boxes)) {
  if (a_.empty()) throw InvalidInstance("instance needs at least one variable");
  if (a_.size() != boxes_.size())
    throw InvalidInstance("coefficient count and box count differ");
  for (std::size_t i = 0; i < boxes_.size(); ++i)
    if (boxes_[i].lo > boxes_[i].hi)
      throw InvalidInstance("empty box for y" + std::to_string(i + 1));
}

bool SubstInstance::in_boxes(const IntVector& y) const {
  if (y.size() != n()) throw ShapeMismatch("y has wrong length");
  for (std::size_t i = 0; i < n(); ++i)
    if (!boxes_[i].contains(y[i])) return false;
  return true;
}

bool SubstInstance::feasible(const IntVector& y) const {
  return in_boxes(y) && dot(a_, y) == c_;
}

std::size_t SubstInstance::lg3() const {
  std::size_t s = size_vector(a_) + size_scalar(c_);
  for (const auto& b : boxes_) s += size_scalar(b.lo) + size_scalar(b.hi);
  return s;
}

SubstInstance SubstInstance::with_box(std::size_t i, Box b) const {
  std::vector<Box> boxes = boxes_;
  boxes.at(i) = std::move(b);
  return SubstInstance(a_, c_, std::move(boxes));
}

SubstSystem::SubstSystem(IntMatrix b, ExactInt c)
    : SubstSystem(b, IntVector(b.rows()), std::move(c)) {}

SubstSystem::SubstSystem(IntMatrix b, IntVector offset, ExactInt c)
    : b_(std::move(b)), offset_(std::move(offset)), c_(std::move(c)), inverse_(1, 1) {
  require_unimodular(b_);
  if (offset_.size() != b_.rows()) throw ShapeMismatch("offset length differs from matrix size");
  inverse_ = integer_inverse(b_);
}

IntVector SubstSystem::apply(const IntVector& x) const {
  IntVector y = b_ * x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += offset_[i];
  return y;
}

IntVector SubstSystem::preimage(const IntVector& y) const {
  if (y.size() != n()) throw ShapeMismatch("y has wrong length");
  IntVector shifted = y;
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] -= offset_[i];
  return inverse_ * shifted;
}

std::vector<int> EliminationTrace::pivots() const {
  std::vector<int> p;
  p.reserve(steps.size());
  for (const auto& s : steps) p.push_back(s.pivot);
  return p;
}

std::string to_string(const EliminationStep& step, std::size_t index) {
  std::ostringstream os;
  os << 'x' << index + 1 << " =";
  bool first = true;
  auto term = [&](const ExactInt& coef, char var, std::size_t k) {
    if (coef == 0) return;
    const bool neg = coef < 0;
    const ExactInt mag = abs(coef);
    if (first)
      os << (neg ? " -" : " ");
    else
      os << (neg ? " - " : " + ");
    if (mag != 1) os << mag;
    os << var << k + 1;
    first = false;
  };
  for (std::size_t j = 0; j < step.y_coeffs.size(); ++j) term(step.y_coeffs[j], 'y', j);
  for (std::size_t k = 0; k < step.x_coeffs.size(); ++k) term(step.x_coeffs[k], 'x', k);
  if (first) os << " 0";
  return os.str();
}

PolyBound::PolyBound(std::vector<ExactInt> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw SubstError("polynomial bound needs at least one coefficient");
  for (const auto& c : coeffs_)
    if (c < 0) throw SubstError("polynomial bound coefficients must be nonnegative");
}

ExactInt PolyBound::operator()(const ExactInt& x) const {
  ExactInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

EliminationTrace forward_eliminate(const IntMatrix& b) {
  if (!b.square()) throw ShapeMismatch("elimination needs a square matrix");
  const std::size_t n = b.rows();
  // Current expression of every unprocessed row:
  //   y_r = Σ ycoef(r, j)·y_j + Σ xcoef(r, k)·x_k
  IntMatrix ycoef(n, n);
  IntMatrix xcoef = b;
  EliminationTrace trace;
  trace.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    const ExactInt& p = xcoef(i, i);
    if (p == 0)
      throw DegeneratePivot("zero pivot at step " + std::to_string(i + 1), i + 1);
    if (abs(p) != 1)
      throw NonUnitPivot("pivot " + p.str() + " at step " + std::to_string(i + 1), i + 1);
    const int pivot = p > 0 ? 1 : -1;
    // x_i = pivot·(y_i − Σ ycoef·y − Σ_{k>i} xcoef·x), since 1/pivot = pivot.
    EliminationStep step;
    step.pivot = pivot;
    step.y_coeffs.assign(n, 0);
    step.x_coeffs.assign(n, 0);
    for (std::size_t j = 0; j < i; ++j) step.y_coeffs[j] = -pivot * ycoef(i, j);
    step.y_coeffs[i] = pivot;
    for (std::size_t k = i + 1; k < n; ++k) step.x_coeffs[k] = -pivot * xcoef(i, k);

    for (std::size_t r = i + 1; r < n; ++r) {
      const ExactInt t = xcoef(r, i);
      if (t == 0) continue;
      for (std::size_t j = 0; j <= i; ++j) ycoef(r, j) += t * step.y_coeffs[j];
      for (std::size_t k = i + 1; k < n; ++k) xcoef(r, k) += t * step.x_coeffs[k];
      xcoef(r, i) = 0;
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

IntMatrix back_substitute(const EliminationTrace& t) {
  if (t.n == 0 || !t.complete())
    throw IncompleteTrace("trace has " + std::to_string(t.steps.size()) + " of " +
                          std::to_string(t.n) + " steps");
  const std::size_t n = t.n;
  IntMatrix x_in_y(n, n);
  for (std::size_t i = n; i-- > 0;) {
    const auto& step = t.steps[i];
    for (std::size_t j = 0; j < n; ++j) x_in_y(i, j) = step.y_coeffs[j];
    for (std::size_t k = i + 1; k < n; ++k) {
      if (step.x_coeffs[k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) x_in_y(i, j) += step.x_coeffs[k] * x_in_y(k, j);
    }
  }
  return x_in_y;
}

std::vector<Box> derive_boxes(const IntMatrix& b, const IntVector& offset) {
  if (offset.size() != b.rows()) throw ShapeMismatch("offset length differs from matrix rows");
  std::vector<Box> out;
  out.reserve(b.rows());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    Box box{offset[i], offset[i]};
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if (b(i, j) < 0)
        box.lo += b(i, j);
      else
        box.hi += b(i, j);
    }
    out.push_back(std::move(box));
  }
  return out;
}

std::vector<Box> derive_boxes(const SubstSystem& s) {
  return derive_boxes(s.matrix(), s.offset());
}

bool R1Report::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const R1Row& r) { return r.ok; });
}

R1Report verify_r1(const SubstInstance& inst, const SubstSystem& s) {
  if (inst.n() != s.n()) throw ShapeMismatch("instance and system dimensions differ");
  const auto derived = derive_boxes(s);
  R1Report report;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const Box& have = inst.boxes()[i];
    report.rows.push_back({have, derived[i], have.lo <= derived[i].lo && have.hi >= derived[i].hi});
  }
  return report;
}

CardinalityLink verify_cardinality_link(const SubstInstance& inst, const SubstSystem& s) {
  if (inst.n() != s.n()) throw ShapeMismatch("instance and system dimensions differ");
  CardinalityLink link;
  link.coefficients = row_times(inst.a(), s.matrix());
  link.linked = inst.c() == s.c() &&
                std::all_of(link.coefficients.begin(), link.coefficients.end(),
                            [](const ExactInt& v) { return v == 1; });
  return link;
}

SubstInstance instance_from_system(const SubstSystem& s) {
  IntVector a = row_times(IntVector(s.n(), 1), s.inverse());
  ExactInt c = s.c() + dot(a, s.offset());
  return SubstInstance(std::move(a), std::move(c), derive_boxes(s));
}

SubstSystem generate_note1(std::size_t n, std::uint64_t seed, const ExactInt& coeff_bound,
                           std::optional<ExactInt> c) {
  if (n == 0) throw SubstError("generator needs n >= 1");
  const long long bound = bound_to_ll(coeff_bound);
  std::mt19937_64 rng(seed);
  IntMatrix b(n, n);
  b(0, 0) = 1;
  for (std::size_t j = 1; j < n; ++j) b(0, j) = draw(rng, -bound, bound);
  fill_note1_rows(b, rng, bound);
  return SubstSystem(std::move(b), default_cardinality(n, c));
}

SubstSystem generate_descending(std::size_t n, std::uint64_t seed, const ExactInt& coeff_bound,
                                std::optional<ExactInt> c) {
  if (n == 0) throw SubstError("generator needs n >= 1");
  const long long bound = bound_to_ll(coeff_bound);
  std::mt19937_64 rng(seed);
  IntMatrix b(n, n);
  ExactInt power = 1;
  for (std::size_t j = 0; j < n; ++j, power *= 2) b(0, j) = power;
  fill_note1_rows(b, rng, bound);
  return SubstSystem(std::move(b), default_cardinality(n, c));
}

SubstSystem r2_normalize(const IntMatrix& b, const ExactInt& c) {
  if (!b.square()) throw ShapeMismatch("normalization needs a square matrix");
  const ExactInt d = det(b);
  if (abs(d) != 1)
    throw NotUnimodularEquivalent("determinant " + d.str() +
                                  " admits no unit-pivot form with integer inverse");
  const std::size_t n = b.rows();
  IntMatrix m = b;
  auto swap_cols = [&](std::size_t p, std::size_t q) {
    for (std::size_t r = 0; r < n; ++r) std::swap(m(r, p), m(r, q));
  };
  auto sub_col = [&](std::size_t dst, std::size_t src, const ExactInt& q) {
    for (std::size_t r = 0; r < n; ++r) m(r, dst) -= q * m(r, src);
  };

  for (std::size_t i = 0; i < n; ++i) {
    // Reduced row i after eliminating x_1..x_i-1, restricted to columns >= i.
    // Column operations on columns >= i act on it directly.
    const ExactInt lead = i == 0 ? ExactInt(1) : det(m.leading(i));
    std::vector<ExactInt> reduced(n);
    for (std::size_t j = i; j < n; ++j) {
      IntMatrix sub(i + 1, i + 1);
      for (std::size_t r = 0; r <= i; ++r) {
        for (std::size_t k = 0; k < i; ++k) sub(r, k) = m(r, k);
        sub(r, i) = m(r, j);
      }
      reduced[j] = det(sub) / lead;
    }
    if (abs(reduced[i]) == 1) continue;

    // Euclid on the reduced row until a single nonzero entry remains.
    for (;;) {
      std::size_t piv = n;
      for (std::size_t j = i; j < n; ++j)
        if (reduced[j] != 0 && (piv == n || abs(reduced[j]) < abs(reduced[piv]))) piv = j;
      if (piv == n) throw NotUnimodularEquivalent("reduced row vanished");
      bool others = false;
      for (std::size_t j = i; j < n; ++j) {
        if (j == piv || reduced[j] == 0) continue;
        const ExactInt q = reduced[j] / reduced[piv];
        sub_col(j, piv, q);
        reduced[j] -= q * reduced[piv];
        others = others || reduced[j] != 0;
      }
      if (!others) {
        if (piv != i) {
          swap_cols(i, piv);
          std::swap(reduced[i], reduced[piv]);
        }
        break;
      }
    }
    if (abs(reduced[i]) != 1)
      throw NotUnimodularEquivalent("reduced row has gcd " + ExactInt(abs(reduced[i])).str());
  }
  return SubstSystem(std::move(m), c);
}

IntermediateSizeReport intermediate_size_check(const EliminationTrace& t, const IntMatrix& b) {
  IntermediateSizeReport r;
  for (const auto& step : t.steps) {
    for (const auto& v : step.y_coeffs) r.max_coeff_size = std::max(r.max_coeff_size, size_scalar(v));
    for (const auto& v : step.x_coeffs) r.max_coeff_size = std::max(r.max_coeff_size, size_scalar(v));
  }
  r.bound = 4 * size_matrix(b);
  r.holds = r.max_coeff_size <= r.bound;
  return r;
}

SizeBoundReport size_bound_check(const SubstSystem& s, const PolyBound& omega, std::size_t lg3) {
  SizeBoundReport r;
  r.size_b = size_matrix(s.matrix());
  r.size_inverse = size_matrix(s.inverse());
  r.omega = omega(lg3);
  r.holds = r.size_b <= r.omega && r.size_inverse <= r.omega;
  return r;
}

}  // namespace substlab
