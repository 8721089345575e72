#include <algorithm>
#include <bit>
#include <numeric>

#include "substlab/cnf_lab.hpp"

namespace substlab {

CardinalitySpec::CardinalitySpec(std::size_t n_, std::uint64_t c_,
                                 std::optional<std::vector<std::uint64_t>> weights_)
    : n(n_), c(c_), weights(std::move(weights_)) {
  if (weights && weights->size() != n) throw CnfError("weight count differs from n");
  if (!weights && c > n) throw CnfError("exactly-c-of-n needs c <= n");
}

bool CardinalitySpec::unit_weights() const {
  return !weights || std::all_of(weights->begin(), weights->end(),
                                 [](std::uint64_t w) { return w == 1; });
}

bool CardinalitySpec::holds(std::uint64_t mask) const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i)
    if ((mask >> i) & 1u) sum += weights ? (*weights)[i] : 1;
  return sum == c;
}

namespace {

// A circuit wire: a constant or a literal.
struct Wire {
  enum class Kind { zero, one, lit } kind = Kind::zero;
  Literal lit = 0;

  static Wire constant(bool b) { return {b ? Kind::one : Kind::zero, 0}; }
  static Wire of(Literal l) { return {Kind::lit, l}; }
  bool is_const() const { return kind != Kind::lit; }
  bool is_one() const { return kind == Kind::one; }
  Wire operator!() const {
    if (kind == Kind::lit) return of(-lit);
    return constant(kind == Kind::zero);
  }
};

// Tseitin gates with full equivalences, so every auxiliary is a function
// of x and projected models coincide with solutions.
class Circuit {
 public:
  explicit Circuit(CnfFormula& f) : f_(f) {}

  Wire and2(Wire a, Wire b) {
    if (a.is_const()) return a.is_one() ? b : a;
    if (b.is_const()) return b.is_one() ? a : b;
    if (a.lit == b.lit) return a;
    if (a.lit == -b.lit) return Wire::constant(false);
    const Literal g = f_.add_aux();
    f_.add_clause({-g, a.lit});
    f_.add_clause({-g, b.lit});
    f_.add_clause({g, -a.lit, -b.lit});
    return Wire::of(g);
  }

  Wire or2(Wire a, Wire b) { return !and2(!a, !b); }

  Wire xor2(Wire a, Wire b) {
    if (a.is_const()) return a.is_one() ? !b : b;
    if (b.is_const()) return b.is_one() ? !a : a;
    if (a.lit == b.lit) return Wire::constant(false);
    if (a.lit == -b.lit) return Wire::constant(true);
    const Literal g = f_.add_aux();
    f_.add_clause({-g, a.lit, b.lit});
    f_.add_clause({-g, -a.lit, -b.lit});
    f_.add_clause({g, -a.lit, b.lit});
    f_.add_clause({g, a.lit, -b.lit});
    return Wire::of(g);
  }

  Wire maj3(Wire a, Wire b, Wire c) {
    if (a.is_const()) return a.is_one() ? or2(b, c) : and2(b, c);
    if (b.is_const()) return b.is_one() ? or2(a, c) : and2(a, c);
    if (c.is_const()) return c.is_one() ? or2(a, b) : and2(a, b);
    const Literal g = f_.add_aux();
    f_.add_clause({-g, a.lit, b.lit});
    f_.add_clause({-g, a.lit, c.lit});
    f_.add_clause({-g, b.lit, c.lit});
    f_.add_clause({g, -a.lit, -b.lit});
    f_.add_clause({g, -a.lit, -c.lit});
    f_.add_clause({g, -b.lit, -c.lit});
    return Wire::of(g);
  }

  void require(Wire w, bool value) {
    if (w.is_const()) {
      if (w.is_one() != value) f_.add_clause({});
      return;
    }
    f_.add_clause({value ? w.lit : -w.lit});
  }

 private:
  CnfFormula& f_;
};

// counts[j] <=> at least j of x_1..x_i are true, for j = 0..c+1.
void encode_counter(Circuit& g, std::size_t n, std::uint64_t c) {
  const std::size_t top = static_cast<std::size_t>(c) + 1;
  std::vector<Wire> counts(top + 1, Wire::constant(false));
  counts[0] = Wire::constant(true);
  for (std::size_t i = 1; i <= n; ++i) {
    const Wire x = Wire::of(static_cast<Literal>(i));
    for (std::size_t j = std::min(i, top); j >= 1; --j)
      counts[j] = g.or2(counts[j], g.and2(x, counts[j - 1]));
  }
  g.require(counts[c], true);
  g.require(counts[top], false);
}

void encode_adder(Circuit& g, const CardinalitySpec& spec) {
  const auto& w = *spec.weights;
  const std::uint64_t total = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
  const std::size_t width = static_cast<std::size_t>(std::bit_width(total)) + 1;
  std::vector<Wire> acc(width, Wire::constant(false));
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (w[i] == 0) continue;
    const Wire x = Wire::of(static_cast<Literal>(i + 1));
    Wire carry = Wire::constant(false);
    for (std::size_t k = 0; k < width; ++k) {
      const Wire term = (w[i] >> k) & 1u ? x : Wire::constant(false);
      const Wire sum = g.xor2(g.xor2(acc[k], term), carry);
      carry = g.maj3(acc[k], term, carry);
      acc[k] = sum;
    }
  }
  if (width < 64 && (spec.c >> width) != 0) {
    g.require(Wire::constant(false), true);
    return;
  }
  for (std::size_t k = 0; k < width; ++k) g.require(acc[k], (spec.c >> k) & 1u);
}

}  // namespace

CnfFormula encode_cpp(const CardinalitySpec& spec) {
  CnfFormula f(spec.n);
  Circuit g(f);
  if (spec.unit_weights()) {
    if (spec.c > spec.n)
      g.require(Wire::constant(false), true);
    else
      encode_counter(g, spec.n, spec.c);
  } else {
    encode_adder(g, spec);
  }
  return f;
}

bool equiv_check(const CnfFormula& f, const CardinalitySpec& spec, std::size_t max_n) {
  if (spec.n > max_n || spec.n >= 63)
    throw CnfBudgetExceeded("equivalence check over " + std::to_string(spec.n) +
                            " variables exceeds budget of " + std::to_string(max_n));
  if (f.aux_start() != spec.n) throw CnfError("formula primary variables differ from spec n");
  const std::uint64_t limit = std::uint64_t{1} << spec.n;
  std::vector<Literal> fixed(spec.n);
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    for (std::size_t i = 0; i < spec.n; ++i) {
      const auto v = static_cast<Literal>(i + 1);
      fixed[i] = (mask >> i) & 1u ? v : -v;
    }
    if (dpll(f, fixed).sat != spec.holds(mask)) return false;
  }
  return true;
}

}  // namespace substlab
