// substlab: command-line front end for the substitution-system workbench.
//
// Exit codes: 0 success, 1 check failure, 2 usage or input error,
// 3 enumeration budget exceeded.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "substlab/cnf_lab.hpp"
#include "substlab/exact_arith.hpp"
#include "substlab/oracle_enum.hpp"
#include "substlab/subst_core.hpp"
#include "substlab/workbench.hpp"

namespace {

using namespace substlab;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

bool g_json = false;

int emit(const ExperimentReport& r) {
  std::cout << (g_json ? r.to_json() : r.to_text());
  return r.ok() ? kOk : kCheckFailed;
}

ExperimentReport report_for(const std::string& command, const InstanceFile& f) {
  return ExperimentReport(command, digest(render_instance_file(f)), f.seed);
}

const SubstSystem& require_system(const InstanceFile& f, const std::string& path) {
  if (!f.system) throw FormatError(path + ": command needs a 'system' section");
  return *f.system;
}

// Row i of a matrix written as a substitution x_i = Σ m_ij y_j.
std::string substitution(const IntMatrix& m, std::size_t i) {
  EliminationStep s;
  s.y_coeffs = m.row(i);
  s.x_coeffs.assign(m.cols(), 0);
  return to_string(s, i);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

int cmd_selftest() { return emit(selftest_worked_example()); }

int cmd_gen(std::size_t n, std::uint64_t seed, long long bound, bool descending,
            std::optional<long long> c, const std::string& out) {
  std::optional<ExactInt> card;
  if (c) card = *c;
  SubstSystem s = descending ? generate_descending(n, seed, bound, card)
                             : generate_note1(n, seed, bound, card);
  InstanceFile f{kFormatVersion, descending ? "descending" : "note1", seed,
                 instance_from_system(s), std::move(s)};
  write_text(out, render_instance_file(f));
  return kOk;
}

int cmd_elim(const std::string& path) {
  const InstanceFile f = load_instance_file(path);
  const SubstSystem& s = require_system(f, path);
  ExperimentReport r = report_for("elim", f);
  try {
    const EliminationTrace t = forward_eliminate(s);
    for (std::size_t i = 0; i < t.steps.size(); ++i)
      r.add("elimination", "step " + std::to_string(i + 1), to_string(t.steps[i], i),
            "forward_eliminate");
    const auto size = intermediate_size_check(t, s.matrix());
    r.check("bounds", "intermediate sizes <= 4*size(B)", size.holds,
            std::to_string(size.max_coeff_size) + " <= " + std::to_string(size.bound),
            "intermediate_size_check");
  } catch (const PivotError& e) {
    r.check("elimination", "step " + std::to_string(e.step()), false, e.what(),
            "forward_eliminate");
  }
  const auto mb = minor_bound_check(s.matrix());
  r.check("bounds", "minors <= n!*M^n", mb.holds, mb.max_minor.str() + " <= " + mb.bound.str(),
          "minor_bound_check");
  return emit(r);
}

int cmd_invert(const std::string& path, const std::vector<long long>& omega) {
  const InstanceFile f = load_instance_file(path);
  const SubstSystem& s = require_system(f, path);
  ExperimentReport r = report_for("invert", f);
  const IntMatrix& inv = s.inverse();
  for (std::size_t i = 0; i < inv.rows(); ++i)
    r.add("inverse", "x" + std::to_string(i + 1), substitution(inv, i), "integer_inverse");
  try {
    r.check("inverse", "back substitution agrees", back_substitute(forward_eliminate(s)) == inv,
            "", "back_substitute");
  } catch (const PivotError& e) {
    r.check("inverse", "back substitution agrees", false, e.what(), "forward_eliminate");
  }
  std::vector<ExactInt> coeffs(omega.begin(), omega.end());
  const auto sb = size_bound_check(s, PolyBound(coeffs), f.instance.lg3());
  r.add("sizes", "LG3", std::to_string(f.instance.lg3()), "lg3");
  r.add("sizes", "size(B)", std::to_string(sb.size_b), "size_matrix");
  r.add("sizes", "size(B^-1)", std::to_string(sb.size_inverse), "size_matrix");
  r.add("sizes", "Omega(LG3)", sb.omega.str(), "size_bound_check");
  r.add("sizes", "within Omega", sb.holds ? "true" : "false", "size_bound_check");
  return emit(r);
}

int cmd_boxes(const std::string& path) {
  const InstanceFile f = load_instance_file(path);
  const SubstSystem& s = require_system(f, path);
  ExperimentReport r = report_for("boxes", f);
  const R1Report r1 = verify_r1(f.instance, s);
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    const auto& row = r1.rows[i];
    r.check("R1", "y" + std::to_string(i + 1), row.ok,
            "instance [" + row.instance.lo.str() + ", " + row.instance.hi.str() + "] derived [" +
                row.derived.lo.str() + ", " + row.derived.hi.str() + "]",
            "verify_r1");
  }
  const auto link = verify_cardinality_link(f.instance, s);
  r.add("cardinality", "a^T B", to_string(link.coefficients), "verify_cardinality_link");
  r.add("cardinality", "linked", link.linked ? "true" : "false", "verify_cardinality_link");
  return emit(r);
}

int cmd_table(const std::string& path, const std::string& order) {
  const InstanceFile f = load_instance_file(path);
  const SubstSystem& s = require_system(f, path);
  ExperimentReport r = report_for("table", f);
  const auto t = build_table(s, order == "desc" ? TableOrder::descending_y1
                                                : TableOrder::lexicographic_x);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    r.add("rows", std::to_string(i + 1), to_string(t.rows[i].x) + " -> " + to_string(t.rows[i].y),
          "build_table");
  return emit(r);
}

int cmd_bijection(const std::string& path, std::uint64_t budget) {
  const InstanceFile f = load_instance_file(path);
  const SubstSystem& s = require_system(f, path);
  ExperimentReport r = report_for("bijection", f);
  Counters counters;
  const auto b = verify_bijection(f.instance, s, budget, &counters);
  r.add("bijection", "x_count", std::to_string(b.x_count), "enum_x");
  r.add("bijection", "y_count", std::to_string(b.y_count), "enum_y_bruteforce");
  r.add("bijection", "matched", std::to_string(b.matched), "verify_bijection");
  for (const auto& y : b.extra_y) r.add("extra_y", to_string(y), "no 0/1 preimage", "verify_bijection");
  for (const auto& x : b.out_of_box_x) r.add("out_of_box_x", to_string(x), "image outside boxes", "verify_bijection");
  const auto th = throughput_report(counters);
  r.add("throughput", "I", std::to_string(th.infs), "throughput_report");
  r.add("throughput", "N", std::to_string(th.steps), "throughput_report");
  r.add("throughput", "TH", th.throughput.str(), "throughput_report");
  r.check("bijection", "holds", b.holds(), "", "verify_bijection");
  return emit(r);
}

int cmd_tighten(const std::string& path, std::size_t k, const std::string& out) {
  const InstanceFile f = load_instance_file(path);
  const SubstSystem& s = require_system(f, path);
  const auto table = build_table(s, TableOrder::descending_y1);
  const SubstInstance tightened = tighten_L1(f.instance, table, k);
  ExperimentReport r = report_for("tighten", f);
  r.add("tighten", "L1", tightened.boxes()[0].lo.str(), "tighten_L1");
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    r.add("feasibility", "row " + std::to_string(i + 1) + " y1=" + table.rows[i].y[0].str(),
          tightened.feasible(table.rows[i].y) ? "feasible" : "infeasible", "tighten_L1");
  bool prefix = true;
  for (std::size_t i = 0; i + 1 < k; ++i) prefix = prefix && tightened.feasible(table.rows[i].y);
  r.check("tighten", "rows 1..k-1 feasible", prefix, "", "tighten_L1");
  r.check("tighten", "row k infeasible", !tightened.feasible(table.rows[k - 1].y), "", "tighten_L1");
  if (!out.empty()) {
    InstanceFile g = f;
    g.instance = tightened;
    save_instance_file(g, out);
  }
  return emit(r);
}

int cmd_encode(const std::string& path, const std::string& out, bool weighted) {
  const InstanceFile f = load_instance_file(path);
  std::optional<CardinalitySpec> spec;
  if (weighted || !f.system) {
    std::vector<std::uint64_t> w;
    for (const auto& a : f.instance.a()) {
      if (a < 0) throw FormatError(path + ": weighted encoding needs nonnegative coefficients");
      w.push_back(a.convert_to<std::uint64_t>());
    }
    if (f.instance.c() < 0) throw FormatError(path + ": weighted encoding needs c >= 0");
    spec.emplace(w.size(), f.instance.c().convert_to<std::uint64_t>(), std::move(w));
  } else {
    const auto& c = f.system->c();
    if (c < 0 || c > f.system->n()) throw FormatError(path + ": cardinality outside 0..n");
    spec.emplace(f.system->n(), c.convert_to<std::uint64_t>());
  }
  const CnfFormula cnf = encode_cpp(*spec);
  write_text(out, to_dimacs(cnf));
  if (out.empty() || out == "-") return kOk;
  ExperimentReport r = report_for("encode", f);
  r.add("cnf", "variables", std::to_string(cnf.num_vars()), "encode_cpp");
  r.add("cnf", "primary", std::to_string(cnf.aux_start()), "encode_cpp");
  r.add("cnf", "clauses", std::to_string(cnf.clauses().size()), "encode_cpp");
  if (spec->n <= 16) r.check("cnf", "equivalent to constraint", equiv_check(cnf, *spec), "", "equiv_check");
  return emit(r);
}

int cmd_primes(std::size_t n, std::size_t c, const std::string& out) {
  const CnfFormula primes = prime_implicates_cardinality(n, c);
  if (out == "-") {
    std::cout << to_dimacs(primes);
    return kOk;
  }
  if (!out.empty()) write_text(out, to_dimacs(primes));
  ExperimentReport r("primes", digest("primes n=" + std::to_string(n) + " c=" + std::to_string(c)));
  r.add("implicates", "count", std::to_string(primes.clauses().size()),
        "prime_implicates_cardinality");
  if (n <= 5)
    r.check("implicates", "minimal (exhaustive cover search)",
            minimum_cover_size(primes, n, c) == primes.clauses().size(), "", "minimum_cover_size");
  for (std::size_t i = 0; i < primes.clauses().size(); ++i) {
    std::string clause;
    for (Literal l : primes.clauses()[i])
      clause += (clause.empty() ? "" : " | ") + std::string(l < 0 ? "~" : "") +
                primes.var_names()[static_cast<std::size_t>(std::abs(l)) - 1];
    r.add("clauses", std::to_string(i + 1), clause.empty() ? "(empty)" : clause,
          "prime_implicates_cardinality");
  }
  return emit(r);
}

int cmd_growth(std::size_t n_max, const std::string& out) { return emit(run_growth(n_max, out)); }

int cmd_suite(std::size_t count, std::uint64_t seed, const SuiteOptions& opts) {
  return emit(run_property_suite(count, seed, opts).report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"substlab: integer substitution systems, enumeration oracles and CNF probes"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "Print reports as JSON");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in worked example");

  std::size_t gen_n = 3;
  std::uint64_t gen_seed = 0;
  long long gen_bound = 10;
  bool gen_desc = false;
  std::optional<long long> gen_c;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a unit-pivot substitution system and its instance");
  gen->add_option("--n", gen_n, "Number of variables")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--bound", gen_bound, "Off-pivot coefficient bound")->required()->check(CLI::PositiveNumber);
  gen->add_flag("--descending", gen_desc, "Superincreasing first row");
  gen->add_option("--c", gen_c, "Cardinality target (default n/2)");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  std::string file;
  auto add_file = [&file](CLI::App* sub) {
    sub->add_option("FILE", file, "Instance file")->required();
  };
  auto* elim = app.add_subcommand("elim", "Forward elimination with unit pivots");
  add_file(elim);
  std::vector<long long> omega{0, 0, 1};
  auto* invert = app.add_subcommand("invert", "Integer inverse and size bounds");
  add_file(invert);
  invert->add_option("--omega", omega, "Omega coefficients, lowest degree first (default x^2)");
  auto* boxes = app.add_subcommand("boxes", "Derived boxes, R1 and cardinality link");
  add_file(boxes);
  std::string order = "lex";
  auto* table = app.add_subcommand("table", "Interpretation table");
  add_file(table);
  table->add_option("--order", order, "Row order")->check(CLI::IsMember({"lex", "desc"}));
  auto* bijection = app.add_subcommand("bijection", "Brute-force bijection check");
  add_file(bijection);
  std::size_t tighten_k = 1;
  std::string tighten_out;
  auto* tighten = app.add_subcommand("tighten", "Raise L1 to exclude row k of the descending table");
  add_file(tighten);
  tighten->add_option("--k", tighten_k, "1-based row index")->required()->check(CLI::PositiveNumber);
  tighten->add_option("--out", tighten_out, "Write the tightened instance file");
  std::string encode_out;
  bool encode_weighted = false;
  auto* encode = app.add_subcommand("encode", "Encode the cardinality constraint as DIMACS CNF");
  add_file(encode);
  encode->add_option("--out", encode_out, "DIMACS output file ('-' for stdout)")->required();
  encode->add_flag("--weighted", encode_weighted, "Encode a·x = c from the instance instead");

  std::size_t primes_n = 0, primes_c = 0;
  std::string primes_out;
  auto* primes = app.add_subcommand("primes", "Prime implicates of exactly-c-of-n");
  primes->add_option("--n", primes_n)->required()->check(CLI::Range(1, 16));
  primes->add_option("--c", primes_c)->required();
  primes->add_option("--out", primes_out, "DIMACS output file ('-' for stdout)");

  std::size_t growth_n_max = 0;
  std::string growth_out;
  auto* growth = app.add_subcommand("growth", "Prime-implicate growth table as CSV");
  growth->add_option("--n-max", growth_n_max)->required()->check(CLI::Range(2, 16));
  growth->add_option("--out", growth_out, "CSV output file")->required();

  std::size_t suite_count = 100;
  std::uint64_t suite_seed = 0;
  SuiteOptions suite_opts;
  std::optional<std::size_t> inject;
  auto* suite = app.add_subcommand("suite", "Property suite over generated systems");
  suite->add_option("--count", suite_count)->required()->check(CLI::PositiveNumber);
  suite->add_option("--seed", suite_seed)->required();
  suite->add_option("--n-min", suite_opts.n_min)->check(CLI::PositiveNumber);
  suite->add_option("--n-max", suite_opts.n_max)->check(CLI::PositiveNumber);
  suite->add_option("--bound", suite_opts.coeff_bound)->check(CLI::PositiveNumber);
  suite->add_option("--inject-singular", inject, "Replace system #i with a singular matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const std::uint64_t budget = budget_from_env();
    if (*selftest) return cmd_selftest();
    if (*gen) return cmd_gen(gen_n, gen_seed, gen_bound, gen_desc, gen_c, gen_out);
    if (*elim) return cmd_elim(file);
    if (*invert) return cmd_invert(file, omega);
    if (*boxes) return cmd_boxes(file);
    if (*table) return cmd_table(file, order);
    if (*bijection) return cmd_bijection(file, budget);
    if (*tighten) return cmd_tighten(file, tighten_k, tighten_out);
    if (*encode) return cmd_encode(file, encode_out, encode_weighted);
    if (*primes) return cmd_primes(primes_n, primes_c, primes_out);
    if (*growth) return cmd_growth(growth_n_max, growth_out);
    if (*suite) {
      suite_opts.budget = budget;
      suite_opts.inject_singular_at = inject;
      return cmd_suite(suite_count, suite_seed, suite_opts);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const CnfBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kUsage;
  } catch (const IndexOutOfRange& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
