// Acceptance runner: one PASS/FAIL line per criterion, each under its own
// wall-clock limit. `acceptance --criterion N` runs a single criterion.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "substlab/cnf_lab.hpp"
#include "substlab/exact_arith.hpp"
#include "substlab/oracle_enum.hpp"
#include "substlab/subst_core.hpp"
#include "substlab/workbench.hpp"

using namespace substlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string Join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

std::string RenderInverseRow(const IntMatrix& inv, std::size_t i) {
  EliminationStep s;
  s.y_coeffs = inv.row(i);
  s.x_coeffs.assign(inv.cols(), 0);
  return to_string(s, i);
}

Outcome WorkedElimination() {
  const SubstSystem sys = worked_system();
  const auto trace = forward_eliminate(sys);
  std::vector<std::string> forward, backward;
  for (std::size_t i = 0; i < trace.steps.size(); ++i)
    forward.push_back(to_string(trace.steps[i], i));
  const IntMatrix inv = back_substitute(trace);
  for (std::size_t i = 0; i < inv.rows(); ++i) backward.push_back(RenderInverseRow(inv, i));
  const std::vector<std::string> want_forward{"x1 = y1 - x2 + 2x3", "x2 = -3y1 + y2 - 3x3",
                                              "x3 = 17y1 - 5y2 - y3"};
  const std::vector<std::string> want_backward{"x1 = 89y1 - 26y2 - 5y3",
                                               "x2 = -54y1 + 16y2 + 3y3",
                                               "x3 = 17y1 - 5y2 - y3"};
  const bool ok = forward == want_forward && backward == want_backward &&
                  selftest_worked_example().ok();
  return {ok, Join(forward, "; ") + " | " + Join(backward, "; ")};
}

Outcome CardinalityLinkOnWorkedExample() {
  // Independent 64-bit product alongside the library's exact one.
  const long long a[3] = {52, -15, -3};
  const long long b[3][3] = {{1, 1, -2}, {3, 4, -3}, {2, -3, -20}};
  std::vector<long long> prod(3, 0);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) prod[j] += a[i] * b[i][j];
  const auto link = verify_cardinality_link(worked_instance(), worked_system());
  const bool ok = prod == std::vector<long long>{1, 1, 1} && link.linked &&
                  link.coefficients == IntVector{1, 1, 1};
  return {ok, "(52, -15, -3)B = " + to_string(link.coefficients)};
}

Outcome WorkedBijection() {
  const SubstInstance inst = worked_instance();
  const SubstSystem sys = worked_system();
  std::set<oracle::Point> images;
  bool images_in_boxes = true;
  for (const auto& x : enum_x(3, 2).rows) {
    const IntVector y = sys.apply(to_int_vector(x));
    images_in_boxes = images_in_boxes && inst.feasible(y);
    oracle::Point p;
    for (const auto& v : y) p.push_back(v.convert_to<long long>());
    images.insert(p);
  }
  const auto scan = oracle::scan_boxes({52, -15, -3}, 2, {{-2, 2}, {-3, 7}, {-23, 2}});
  const auto report = verify_bijection(inst, sys);
  std::vector<std::string> outside;
  for (const auto& p : scan)
    if (!images.count(p))
      outside.push_back("(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," +
                        std::to_string(p[2]) + ")");
  const bool library_agrees = report.y_count == scan.size() &&
                              report.extra_y.size() == outside.size();
  const bool ok = images_in_boxes && images.size() == 3 && outside.empty() && library_agrees &&
                  report.holds();
  std::ostringstream os;
  os << "images in boxes: " << (images_in_boxes ? "yes" : "no") << ", box points "
     << box_volume(inst) << ", oracle y-solutions " << scan.size() << ", library "
     << report.y_count;
  if (!outside.empty()) os << ", outside the image: " << Join(outside, " ");
  return {ok, os.str()};
}

SuiteResult& HundredSystemSuite() {
  static SuiteResult result = run_property_suite(100, 42);
  return result;
}

Outcome PropertySuite() {
  const SuiteResult& r = HundredSystemSuite();
  std::map<std::string, int> by_check;
  for (const auto& f : r.failures) ++by_check[f.check];
  std::ostringstream os;
  os << r.systems << " systems, bijection checked " << r.bijection_checked << ", skipped over budget "
     << r.bijection_skipped << ", failures " << r.failures.size();
  for (const auto& [check, count] : by_check) os << " [" << check << ": " << count << "]";
  if (!r.failures.empty()) {
    const auto& f = r.failures.front();
    os << "; first: gen --n " << f.n << " --seed " << f.seed << " --bound 10 (" << f.check << ": "
       << f.detail << ")";
  }
  return {r.systems >= 100 && r.failures.empty(), os.str()};
}

Outcome DescendingDistinct() {
  int failures = 0, systems = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 1 + seed % 10;
    const auto s = generate_descending(n, seed);
    ++systems;
    std::set<ExactInt> y1;
    const auto xs = enum_x(n, n / 2);
    for (const auto& x : xs.rows) y1.insert(s.apply(to_int_vector(x))[0]);
    if (y1.size() != oracle::binom(n, n / 2) || xs.rows.size() != y1.size()) ++failures;
    try {
      const auto t = build_table(s, TableOrder::descending_y1);
      for (std::size_t i = 1; i < t.rows.size(); ++i)
        if (!(t.rows[i - 1].y[0] > t.rows[i].y[0])) ++failures;
    } catch (const DuplicateY1&) {
      ++failures;
    }
  }
  return {systems >= 50 && failures == 0,
          std::to_string(systems) + " systems, " + std::to_string(failures) + " failures"};
}

Outcome Tightening() {
  const auto s = generate_descending(5, 2024, 10, ExactInt(3));
  const auto base = instance_from_system(s);
  const auto table = build_table(s, TableOrder::descending_y1);
  int failures = 0;
  std::vector<std::string> lows;
  for (std::size_t k = 1; k <= 10; ++k) {
    const auto tight = tighten_L1(base, table, k);
    lows.push_back(tight.boxes()[0].lo.str());
    for (std::size_t r = 1; r <= k; ++r) {
      const bool feasible = tight.feasible(table.rows[r - 1].y);
      if (feasible != (r < k)) ++failures;
    }
  }
  return {table.rows.size() == 10 && failures == 0,
          "L1' for k=1..10: " + Join(lows, " ") + ", failures " + std::to_string(failures)};
}

Outcome GrowthProbe() {
  std::vector<long double> xs, ys;
  std::ostringstream os;
  bool ok = true;
  std::size_t n12 = 0;
  const auto rows = min_cnf_growth(12);
  for (const auto& row : rows) {
    const std::size_t n = row.n, c = row.c;
    const auto brute = oracle::brute_prime_implicates(n, c);
    const auto lib = prime_implicates_cardinality(n, c);
    const std::set<Clause> got(lib.clauses().begin(), lib.clauses().end());
    const std::size_t closed = oracle::binom(n, c + 1) + oracle::binom(n, n - c + 1);
    ok = ok && got == brute && row.implicate_count == brute.size() && brute.size() == closed;
    if (n <= 5) ok = ok && row.verified_minimal.value_or(false);
    if (n <= 6) {
      xs.push_back(static_cast<long double>(n));
      ys.push_back(static_cast<long double>(row.implicate_count));
    }
    if (n == 12) n12 = row.implicate_count;
    os << row.implicate_count << (n == 12 ? "" : " ");
  }
  const auto fit = fit_quadratic(xs, ys);
  const long double predicted = fit(12);
  const long double ratio = static_cast<long double>(n12) / predicted;
  ok = ok && rows.size() == 11 && ratio > 5;
  std::ostringstream detail;
  detail << "counts n=2..12: " << os.str() << "; n=12 count " << n12
         << " (oracle, closed form C(12,7)+C(12,7)); quadratic fit at 12 = "
         << static_cast<double>(predicted) << ", ratio " << static_cast<double>(ratio);
  return {ok, detail.str()};
}

Outcome EncoderSoundness() {
  std::mt19937_64 rng(8);
  int specs = 0, failures = 0;
  for (; specs < 60; ++specs) {
    const std::size_t n = 1 + rng() % 8;
    std::optional<std::vector<std::uint64_t>> weights;
    std::uint64_t total = n;
    if (specs % 4 != 0) {
      weights.emplace(n);
      total = 0;
      for (auto& w : *weights) total += (w = rng() % 31);
    }
    const std::uint64_t c = rng() % (total + 1);
    const CardinalitySpec spec(n, c, weights);
    const auto f = encode_cpp(spec);
    const auto expected = oracle::weighted_solutions(
        weights ? *weights : std::vector<std::uint64_t>(n, 1), c);
    if (!equiv_check(f, spec) || oracle::projected_models(f, n) != expected) ++failures;
  }
  return {specs >= 50 && failures == 0,
          std::to_string(specs) + " specs, " + std::to_string(failures) + " failures"};
}

Outcome DpllAgreement() {
  std::mt19937_64 rng(9);
  int formulas = 0, disagreements = 0, sat = 0;
  for (; formulas < 250; ++formulas) {
    const std::size_t nv = 1 + rng() % 10;
    const auto f = oracle::random_cnf(rng, nv, 1 + rng() % (5 * nv), 3);
    const auto r = dpll(f);
    const bool truth = oracle::truth_table_sat(f);
    if (r.sat != truth || (r.sat && !r.model.satisfies(f))) ++disagreements;
    sat += truth;
  }
  return {formulas >= 200 && disagreements == 0,
          std::to_string(formulas) + " formulas (" + std::to_string(sat) + " SAT), " +
              std::to_string(disagreements) + " disagreements"};
}

bool Holds(const CnfFormula& f, std::uint64_t mask) {
  for (const auto& c : f.clauses())
    if (!oracle::clause_true(c, mask)) return false;
  return true;
}

Outcome TranspositionTriples() {
  std::mt19937_64 rng(10);
  int triples = 0, violations = 0, oracle_mismatch = 0, attempts = 0;
  while (triples < 120 && attempts < 20000) {
    ++attempts;
    const std::size_t nv = 2 + rng() % 5;
    const auto phi = oracle::random_cnf(rng, nv, 1 + rng() % 3, 3);
    const auto f = oracle::random_cnf(rng, nv, 1 + rng() % 3, 3);
    const auto h = oracle::random_cnf(rng, nv, 1 + rng() % 2, 2);
    bool compatible = false, premise = true, conclusion = true;
    for (std::uint64_t m = 0; m < (1u << nv); ++m) {
      const bool pf = Holds(phi, m) && Holds(f, m);
      compatible = compatible || pf;
      if (pf && !Holds(h, m)) premise = false;
      if (Holds(phi, m) && !Holds(h, m) && Holds(f, m)) conclusion = false;
    }
    if (!compatible || !premise) continue;
    ++triples;
    const auto v = transposition_check(phi, f, h);
    if (!v.premise_holds || v.conclusion_holds != conclusion) ++oracle_mismatch;
    if (!v.conclusion_holds) ++violations;
  }
  return {triples >= 100 && violations == 0 && oracle_mismatch == 0,
          std::to_string(triples) + " compatible triples with premise, " +
              std::to_string(violations) + " conclusion failures, " +
              std::to_string(oracle_mismatch) + " truth-table mismatches"};
}

Outcome ThroughputAccounting() {
  std::vector<const SuiteResult*> runs{&HundredSystemSuite()};
  static std::vector<SuiteResult> extra;
  SuiteOptions small;
  small.n_max = 5;
  for (std::uint64_t seed : {1, 2, 3}) extra.push_back(run_property_suite(30, seed, small));
  for (const auto& r : extra) runs.push_back(&r);
  bool ok = true;
  std::ostringstream os;
  for (const SuiteResult* r : runs) {
    const auto& c = r->counters;
    bool run_ok = c.steps() > 0 && c.infs() <= c.steps();
    for (const auto& f : r->failures) run_ok = run_ok && f.check != "throughput";
    if (run_ok) run_ok = throughput_report(c).throughput <= Rational(1, 1);
    ok = ok && run_ok;
    os << "I=" << c.infs() << " N=" << c.steps() << (run_ok ? " ok; " : " VIOLATED; ");
  }
  return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria{
      {1, "worked example elimination and back-substitution", 1, WorkedElimination},
      {2, "cardinality link (52,-15,-3)B = (1,1,1)", 1, CardinalityLinkOnWorkedExample},
      {3, "bijection on the worked example", 1, WorkedBijection},
      {4, "property suite over 100 generated systems", 30, PropertySuite},
      {5, "descending generator distinctness", 30, DescendingDistinct},
      {6, "L1 tightening on generate_descending(5), c=3", 5, Tightening},
      {7, "prime-implicate growth probe", 60, GrowthProbe},
      {8, "encoder soundness", 30, EncoderSoundness},
      {9, "dpll against truth tables", 30, DpllAgreement},
      {10, "transposition check on random triples", 30, TranspositionTriples},
      {11, "throughput accounting I <= N", 30, ThroughputAccounting},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }

  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << secs;
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " ("
              << t.str() << " s, limit " << c.limit_seconds << " s"
              << (in_time ? "" : ", OVER TIME") << ")\n      " << o.detail << "\n";
  }
  if (ran == 0) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
