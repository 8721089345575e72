#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "substlab/cnf_lab.hpp"

namespace substlab {

namespace {

// Cube over n <= 16 variables packed as (care << 32) | value. A cared bit
// fixes the variable to the value bit; uncared value bits are zero.
using Cube = std::uint64_t;

constexpr Cube pack(std::uint32_t care, std::uint32_t value) {
  return (static_cast<Cube>(care) << 32) | value;
}
constexpr std::uint32_t care_of(Cube c) { return static_cast<std::uint32_t>(c >> 32); }
constexpr std::uint32_t value_of(Cube c) { return static_cast<std::uint32_t>(c); }

// Quine-McCluskey on the complement: prime implicants of ¬f are exactly
// the negations of the prime implicates of f.
std::vector<Cube> prime_implicants_of_complement(std::size_t n, std::size_t c) {
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<Cube> level;
  for (std::uint32_t m = 0; m <= full; ++m) {
    if (static_cast<std::size_t>(std::popcount(m)) != c) level.push_back(pack(full, m));
    if (m == full) break;
  }
  std::vector<Cube> primes;
  while (!level.empty()) {
    std::vector<char> merged(level.size(), 0);
    std::vector<Cube> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const std::uint32_t care = care_of(level[i]);
      const std::uint32_t value = value_of(level[i]);
      for (std::uint32_t rest = care & ~value; rest; rest &= rest - 1) {
        const std::uint32_t bit = rest & (~rest + 1);
        const Cube partner = pack(care, value | bit);
        const auto it = std::lower_bound(level.begin(), level.end(), partner);
        if (it == level.end() || *it != partner) continue;
        merged[i] = 1;
        merged[static_cast<std::size_t>(it - level.begin())] = 1;
        next.push_back(pack(care & ~bit, value));
      }
    }
    for (std::size_t i = 0; i < level.size(); ++i)
      if (!merged[i]) primes.push_back(level[i]);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }
  return primes;
}

Clause clause_of(Cube cube, std::size_t n) {
  Clause clause;
  for (std::size_t i = 0; i < n; ++i) {
    if (!((care_of(cube) >> i) & 1u)) continue;
    const auto v = static_cast<Literal>(i + 1);
    clause.push_back((value_of(cube) >> i) & 1u ? -v : v);
  }
  return clause;
}

}  // namespace

CnfFormula prime_implicates_cardinality(std::size_t n, std::size_t c, std::size_t max_n) {
  if (n > max_n || n > 16)
    throw CnfBudgetExceeded("prime implicates over " + std::to_string(n) +
                            " variables exceed budget of " + std::to_string(std::min<std::size_t>(max_n, 16)));
  if (n == 0) throw CnfError("prime implicates need n >= 1");
  std::vector<Clause> clauses;
  for (Cube cube : prime_implicants_of_complement(n, c)) clauses.push_back(clause_of(cube, n));
  std::sort(clauses.begin(), clauses.end(), [](const Clause& a, const Clause& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  CnfFormula f(n);
  for (auto& cl : clauses) f.add_clause(std::move(cl));
  return f;
}

std::size_t minimum_cover_size(const CnfFormula& primes, std::size_t n, std::size_t c) {
  const std::size_t m = primes.clauses().size();
  if (n > 6 || m > 24) throw CnfBudgetExceeded("exhaustive cover search limited to n <= 6, 24 clauses");
  // Falsepoints of exactly-c-of-n, and which clauses each one falsifies.
  std::vector<std::uint64_t> falsified_by;
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    if (static_cast<std::size_t>(std::popcount(x)) == c) continue;
    Assignment a;
    for (std::size_t i = 0; i < n; ++i) a.values.push_back((x >> i) & 1u);
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (!a.satisfies(primes.clauses()[j])) mask |= std::uint64_t{1} << j;
    falsified_by.push_back(mask);
  }
  std::size_t best = m + 1;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << m); ++subset) {
    const auto size = static_cast<std::size_t>(std::popcount(subset));
    if (size >= best) continue;
    const bool covers = std::all_of(falsified_by.begin(), falsified_by.end(),
                                    [subset](std::uint64_t f) { return (f & subset) != 0; });
    if (covers) best = size;
  }
  return best;
}

std::vector<GrowthRow> min_cnf_growth(std::size_t n_max) {
  if (n_max > 16) throw CnfBudgetExceeded("growth table limited to n <= 16");
  std::vector<GrowthRow> rows;
  for (std::size_t n = 2; n <= n_max; ++n) {
    GrowthRow row;
    row.n = n;
    row.c = n / 2;
    const CnfFormula primes = prime_implicates_cardinality(n, row.c);
    row.implicate_count = primes.clauses().size();
    if (n <= 5) row.verified_minimal = minimum_cover_size(primes, n, row.c) == row.implicate_count;
    rows.push_back(row);
  }
  return rows;
}

QuadraticFit fit_quadratic(const std::vector<long double>& xs,
                           const std::vector<long double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw CnfError("quadratic fit needs at least 3 paired points");
  // Normal equations, solved by Gaussian elimination with partial pivoting.
  std::array<std::array<long double, 4>, 3> a{};
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const long double p[3] = {1, xs[k], xs[k] * xs[k]};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a[i][j] += p[i] * p[j];
      a[i][3] += p[i] * ys[k];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0) throw CnfError("degenerate quadratic fit");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return {a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
}

}  // namespace substlab
