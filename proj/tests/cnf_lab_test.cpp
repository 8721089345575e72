#include "substlab/cnf_lab.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace substlab {
namespace {

std::set<std::uint64_t> Solutions(const CardinalitySpec& spec) {
  if (spec.weights) return oracle::weighted_solutions(*spec.weights, spec.c);
  return oracle::weighted_solutions(std::vector<std::uint64_t>(spec.n, 1), spec.c);
}

CnfFormula FromClauses(std::size_t n, const std::vector<Clause>& clauses) {
  CnfFormula f(n);
  for (const auto& c : clauses) f.add_clause(c);
  return f;
}

TEST(CnfFormulaTest, ClauseHygiene) {
  CnfFormula f(3);
  EXPECT_TRUE(f.add_clause({3, -1, 3}));
  EXPECT_EQ(f.clauses().back(), (Clause{-1, 3}));
  EXPECT_FALSE(f.add_clause({2, -2}));
  EXPECT_EQ(f.clauses().size(), 1u);
  EXPECT_THROW(f.add_clause({4}), CnfError);
  EXPECT_THROW(f.add_clause({0}), CnfError);
  f.add_aux();
  EXPECT_THROW(f.add_primary("late"), CnfError);
  EXPECT_EQ(f.aux_start(), 3u);
  EXPECT_EQ(f.num_vars(), 4u);
  EXPECT_THROW(f.remove_clause(5), CnfError);
}

TEST(EncodeTest, Examples) {
  const CardinalitySpec one(1, 1);
  EXPECT_EQ(oracle::projected_models(encode_cpp(one), 1), (std::set<std::uint64_t>{0b1}));

  const CardinalitySpec both(2, 2);
  EXPECT_EQ(oracle::projected_models(encode_cpp(both), 2), (std::set<std::uint64_t>{0b11}));

  const CardinalitySpec weighted(3, 5, std::vector<std::uint64_t>{2, 3, 4});
  const auto f = encode_cpp(weighted);
  EXPECT_EQ(f.aux_start(), 3u);
  EXPECT_EQ(oracle::projected_models(f, 3), (std::set<std::uint64_t>{0b011}));
  EXPECT_EQ(Solutions(weighted), (std::set<std::uint64_t>{0b011}));
}

TEST(EncodeTest, UnitWeightsMatchOracle) {
  for (std::size_t n = 1; n <= 7; ++n)
    for (std::uint64_t c = 0; c <= n; ++c) {
      const CardinalitySpec spec(n, c);
      EXPECT_EQ(oracle::projected_models(encode_cpp(spec), n), Solutions(spec)) << n << " " << c;
    }
}

TEST(EncodeTest, RandomWeightsMatchOracle) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<std::uint64_t> w(n);
    std::uint64_t total = 0;
    for (auto& v : w) total += (v = rng() % 31);
    const CardinalitySpec spec(n, rng() % (total + 2), w);
    const auto f = encode_cpp(spec);
    EXPECT_EQ(oracle::projected_models(f, n), Solutions(spec));
    EXPECT_TRUE(equiv_check(f, spec));
  }
}

TEST(EncodeTest, UnreachableTarget) {
  const CardinalitySpec spec(3, 100, std::vector<std::uint64_t>{1, 2, 3});
  const auto f = encode_cpp(spec);
  EXPECT_FALSE(dpll(f).sat);
  EXPECT_TRUE(equiv_check(f, spec));
}

TEST(CardinalitySpecTest, Validation) {
  EXPECT_THROW(CardinalitySpec(2, 3), CnfError);
  EXPECT_THROW(CardinalitySpec(2, 1, std::vector<std::uint64_t>{1}), CnfError);
  EXPECT_TRUE(CardinalitySpec(3, 1, std::vector<std::uint64_t>{1, 1, 1}).unit_weights());
  EXPECT_TRUE(CardinalitySpec(3, 2).holds(0b101));
  EXPECT_FALSE(CardinalitySpec(3, 2).holds(0b111));
}

TEST(DpllTest, Examples) {
  const auto empty = dpll(CnfFormula(0));
  EXPECT_TRUE(empty.sat);
  EXPECT_TRUE(empty.model.values.empty());

  CnfFormula contra(1);
  contra.add_clause({1});
  contra.add_clause({-1});
  EXPECT_FALSE(dpll(contra).sat);
}

TEST(DpllTest, AgreesWithTruthTable) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 300; ++t) {
    const std::size_t nv = 1 + rng() % 12;
    const auto f = oracle::random_cnf(rng, nv, 1 + rng() % (5 * nv), 3);
    const auto r = dpll(f);
    EXPECT_EQ(r.sat, oracle::truth_table_sat(f));
    if (r.sat) EXPECT_TRUE(r.model.satisfies(f));
  }
}

TEST(DpllTest, Assumptions) {
  CnfFormula f(2);
  f.add_clause({1, 2});
  EXPECT_TRUE(dpll(f, {-1}).sat);
  EXPECT_TRUE(dpll(f, {-1}).model.value(2));
  EXPECT_FALSE(dpll(f, {-1, -2}).sat);
  EXPECT_FALSE(dpll(f, {1, -1}).sat);
  EXPECT_THROW(dpll(f, {3}), CnfError);
}

TEST(EquivCheckTest, Examples) {
  EXPECT_TRUE(equiv_check(encode_cpp(CardinalitySpec(1, 1)), CardinalitySpec(1, 1)));
  EXPECT_FALSE(equiv_check(encode_cpp(CardinalitySpec(3, 1)), CardinalitySpec(3, 2)));
  EXPECT_THROW(equiv_check(encode_cpp(CardinalitySpec(3, 1)), CardinalitySpec(3, 1), 2),
               CnfBudgetExceeded);
}

TEST(EquivCheckTest, SingleClauseDeletion) {
  auto f = encode_cpp(CardinalitySpec(1, 1));
  ASSERT_FALSE(f.clauses().empty());
  f.remove_clause(0);
  EXPECT_FALSE(equiv_check(f, CardinalitySpec(1, 1)));
}

TEST(EquivCheckTest, MutantsAgreeWithOracle) {
  std::mt19937_64 rng(43);
  std::size_t detected = 0;
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng() % 4;
    std::vector<std::uint64_t> w(n);
    std::uint64_t total = 0;
    for (auto& v : w) total += (v = rng() % 10);
    const CardinalitySpec spec(n, total / 2, w);
    auto f = encode_cpp(spec);
    if (f.clauses().empty()) continue;
    f.remove_clause(rng() % f.clauses().size());
    const bool same = oracle::projected_models(f, n) == Solutions(spec);
    EXPECT_EQ(equiv_check(f, spec), same);
    detected += !same;
  }
  EXPECT_GT(detected, 0u);
}

TEST(PrimeImplicatesTest, Examples) {
  const auto p11 = prime_implicates_cardinality(1, 1);
  EXPECT_EQ(p11.clauses(), (std::vector<Clause>{{1}}));

  const auto p21 = prime_implicates_cardinality(2, 1);
  EXPECT_EQ(std::set<Clause>(p21.clauses().begin(), p21.clauses().end()),
            (std::set<Clause>{{1, 2}, {-1, -2}}));

  const auto p53 = prime_implicates_cardinality(5, 3);
  EXPECT_EQ(p53.clauses().size(), 15u);
  EXPECT_EQ(std::set<Clause>(p53.clauses().begin(), p53.clauses().end()),
            oracle::brute_prime_implicates(5, 3));
  std::size_t neg4 = 0, pos3 = 0;
  for (const auto& c : p53.clauses()) {
    if (c.size() == 4 && c.front() < 0) ++neg4;
    if (c.size() == 3 && c.front() > 0) ++pos3;
  }
  EXPECT_EQ(neg4, 5u);
  EXPECT_EQ(pos3, 10u);
}

TEST(PrimeImplicatesTest, MatchesBruteForceAndClosedForm) {
  for (std::size_t n = 1; n <= 7; ++n)
    for (std::size_t c = 0; c <= n; ++c) {
      const auto p = prime_implicates_cardinality(n, c);
      const std::set<Clause> got(p.clauses().begin(), p.clauses().end());
      EXPECT_EQ(got, oracle::brute_prime_implicates(n, c)) << n << " " << c;
      EXPECT_EQ(got.size(), oracle::binom(n, c + 1) + oracle::binom(n, n - c + 1));
      EXPECT_EQ(oracle::projected_models(p, n), Solutions(CardinalitySpec(n, c)));
    }
}

TEST(PrimeImplicatesTest, Ordering) {
  const auto p = prime_implicates_cardinality(6, 2);
  for (std::size_t i = 1; i < p.clauses().size(); ++i) {
    const auto& a = p.clauses()[i - 1];
    const auto& b = p.clauses()[i];
    EXPECT_TRUE(a.size() < b.size() || (a.size() == b.size() && a < b));
  }
}

TEST(PrimeImplicatesTest, Limits) {
  EXPECT_THROW(prime_implicates_cardinality(0, 0), CnfError);
  EXPECT_THROW(prime_implicates_cardinality(17, 8), CnfBudgetExceeded);
}

TEST(MinimumCoverTest, AllPrimesNeeded) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto p = prime_implicates_cardinality(n, n / 2);
    EXPECT_EQ(minimum_cover_size(p, n, n / 2), p.clauses().size());
  }
}

TEST(MinimumCoverTest, RedundantClauseDropped) {
  // Exactly-one-of-three plus an implied but non-prime clause.
  const auto p = prime_implicates_cardinality(3, 1);
  CnfFormula extra(3);
  for (const auto& c : p.clauses()) extra.add_clause(c);
  extra.add_clause({-1, -2, 3});
  EXPECT_EQ(minimum_cover_size(extra, 3, 1), p.clauses().size());
}

TEST(GrowthTest, Rows) {
  const auto rows = min_cnf_growth(8);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0].n, 2u);
  EXPECT_EQ(rows[0].implicate_count, 2u);
  EXPECT_EQ(rows[2].n, 4u);
  EXPECT_EQ(rows[2].c, 2u);
  EXPECT_EQ(rows[2].implicate_count, 8u);
  EXPECT_EQ(rows[3].implicate_count, 15u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].n <= 5) {
      ASSERT_TRUE(rows[i].verified_minimal.has_value());
      EXPECT_TRUE(*rows[i].verified_minimal);
    } else {
      EXPECT_FALSE(rows[i].verified_minimal.has_value());
    }
    if (i > 0) EXPECT_GT(rows[i].implicate_count, rows[i - 1].implicate_count);
  }
}

TEST(QuadraticFitTest, ExactOnQuadraticData) {
  const auto fit = fit_quadratic({0, 1, 2, 3, 4}, {1, 3, 9, 19, 33});
  EXPECT_NEAR(static_cast<double>(fit.c0), 1.0, 1e-9);
  EXPECT_NEAR(static_cast<double>(fit.c1), 0.0, 1e-9);
  EXPECT_NEAR(static_cast<double>(fit.c2), 2.0, 1e-9);
  EXPECT_THROW(fit_quadratic({1, 2}, {1, 2}), CnfError);
}

TEST(TranspositionTest, Examples) {
  const auto phi = FromClauses(2, {{1}});
  const auto f = FromClauses(2, {{2}});
  const auto h = FromClauses(2, {{1}, {2}});
  const auto v = transposition_check(phi, f, h);
  EXPECT_TRUE(v.premise_holds);
  EXPECT_TRUE(v.conclusion_holds);

  EXPECT_THROW(transposition_check(FromClauses(1, {{1}}), FromClauses(1, {{-1}}),
                                   FromClauses(1, {{1}})),
               PremiseIncompatible);
}

TEST(TranspositionTest, RandomTriples) {
  std::mt19937_64 rng(44);
  int with_premise = 0;
  for (int t = 0; t < 3000 && with_premise < 100; ++t) {
    const std::size_t nv = 2 + rng() % 5;
    const auto phi = oracle::random_cnf(rng, nv, 1 + rng() % 3, 3);
    const auto f = oracle::random_cnf(rng, nv, 1 + rng() % 3, 3);
    const auto h = oracle::random_cnf(rng, nv, 1 + rng() % 2, 2);
    if (!oracle::truth_table_sat(conjoin(phi, f))) continue;
    const auto v = transposition_check(phi, f, h);
    if (!v.premise_holds) continue;
    ++with_premise;
    EXPECT_TRUE(v.conclusion_holds);
  }
  EXPECT_GE(with_premise, 100);
}

TEST(NegateTest, ComplementsModels) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 50; ++t) {
    const std::size_t nv = 1 + rng() % 5;
    const auto f = oracle::random_cnf(rng, nv, 1 + rng() % 4, 3);
    const auto models = oracle::projected_models(f, nv);
    const auto negated = oracle::projected_models(negate(f), nv);
    for (std::uint64_t m = 0; m < (1u << nv); ++m)
      EXPECT_NE(models.count(m), negated.count(m)) << t << " " << m;
  }
}

TEST(ConjoinTest, SharesPrimariesRenumbersAux) {
  const auto a = encode_cpp(CardinalitySpec(3, 1));
  const auto b = encode_cpp(CardinalitySpec(3, 2));
  const auto both = conjoin(a, b);
  EXPECT_EQ(both.aux_start(), 3u);
  EXPECT_EQ(both.num_vars(), a.num_vars() + b.num_vars() - 3);
  EXPECT_FALSE(dpll(both).sat);
}

TEST(DimacsTest, RoundTrip) {
  const auto f = encode_cpp(CardinalitySpec(4, 2, std::vector<std::uint64_t>{1, 2, 3, 4}));
  const std::string text = to_dimacs(f);
  std::istringstream in(text);
  const auto g = read_dimacs(in);
  EXPECT_EQ(g.clauses(), f.clauses());
  EXPECT_EQ(g.num_vars(), f.num_vars());
  EXPECT_EQ(g.aux_start(), f.aux_start());
  EXPECT_EQ(to_dimacs(g), text);
}

TEST(DimacsTest, PlainInput) {
  std::istringstream in("c hello\np cnf 3 2\n1 -2 0\n2 3\n0\n");
  const auto f = read_dimacs(in);
  EXPECT_EQ(f.num_vars(), 3u);
  EXPECT_EQ(f.clauses(), (std::vector<Clause>{{1, -2}, {2, 3}}));
}

TEST(DimacsTest, Malformed) {
  const char* bad[] = {"1 2 0\n", "p cnf 2 1\n3 0\n", "p cnf 2 2\n1 0\n", "p cnf 2 1\n1 x 0\n",
                       "p cnf 2 1\n1 2\n", "p dnf 2 1\n1 0\n", ""};
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(read_dimacs(in), DimacsError) << text;
  }
}

}  // namespace
}  // namespace substlab
