#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "substlab/cnf_lab.hpp"

namespace substlab {

CnfFormula::CnfFormula(std::size_t primary, const std::string& prefix) {
  for (std::size_t i = 1; i <= primary; ++i) add_primary(prefix + std::to_string(i));
}

Literal CnfFormula::add_primary(std::string name) {
  if (primary_ != names_.size())
    throw CnfError("primary variables must precede auxiliaries");
  if (name.empty()) name = "x" + std::to_string(names_.size() + 1);
  names_.push_back(std::move(name));
  ++primary_;
  return static_cast<Literal>(names_.size());
}

Literal CnfFormula::add_aux(std::string name) {
  if (name.empty()) name = "aux" + std::to_string(names_.size() + 1);
  names_.push_back(std::move(name));
  return static_cast<Literal>(names_.size());
}

bool CnfFormula::add_clause(Clause clause) {
  for (Literal l : clause)
    if (l == 0 || static_cast<std::size_t>(std::abs(l)) > names_.size())
      throw CnfError("literal " + std::to_string(l) + " out of range");
  std::sort(clause.begin(), clause.end(), [](Literal a, Literal b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i)
    if (clause[i] == -clause[i - 1]) return false;
  clauses_.push_back(std::move(clause));
  return true;
}

void CnfFormula::remove_clause(std::size_t index) {
  if (index >= clauses_.size()) throw CnfError("clause index out of range");
  clauses_.erase(clauses_.begin() + static_cast<std::ptrdiff_t>(index));
}

CnfFormula conjoin(const CnfFormula& a, const CnfFormula& b) {
  const CnfFormula& wide = a.aux_start() >= b.aux_start() ? a : b;
  CnfFormula out;
  for (std::size_t v = 0; v < wide.aux_start(); ++v) out.add_primary(wide.var_names()[v]);
  auto import = [&out](const CnfFormula& f) {
    const auto shift = static_cast<Literal>(out.num_vars() - f.aux_start());
    for (std::size_t v = f.aux_start(); v < f.num_vars(); ++v) out.add_aux(f.var_names()[v]);
    for (const auto& c : f.clauses()) {
      Clause mapped;
      for (Literal l : c) {
        const auto v = static_cast<std::size_t>(std::abs(l));
        if (v <= f.aux_start())
          mapped.push_back(l);
        else
          mapped.push_back(l > 0 ? l + shift : l - shift);
      }
      out.add_clause(std::move(mapped));
    }
  };
  import(a);
  import(b);
  return out;
}

CnfFormula negate(const CnfFormula& f) {
  if (f.num_vars() != f.aux_start()) throw CnfError("negation of a formula with auxiliaries");
  CnfFormula out;
  for (const auto& name : f.var_names()) out.add_primary(name);
  Clause some_clause_false;
  for (std::size_t j = 0; j < f.clauses().size(); ++j) {
    const Literal sel = out.add_aux("sel" + std::to_string(j + 1));
    some_clause_false.push_back(sel);
    for (Literal l : f.clauses()[j]) out.add_clause({-sel, -l});
  }
  // An empty conjunction is true, so its negation is the empty clause.
  out.add_clause(std::move(some_clause_false));
  return out;
}

bool Assignment::value(Literal lit) const {
  const auto v = static_cast<std::size_t>(std::abs(lit));
  const bool b = v <= values.size() && values[v - 1];
  return lit > 0 ? b : !b;
}

bool Assignment::satisfies(const Clause& c) const {
  return std::any_of(c.begin(), c.end(), [this](Literal l) { return value(l); });
}

bool Assignment::satisfies(const CnfFormula& f) const {
  return std::all_of(f.clauses().begin(), f.clauses().end(),
                     [this](const Clause& c) { return satisfies(c); });
}

namespace {

class Dpll {
 public:
  explicit Dpll(const CnfFormula& f) : clauses_(f.clauses()), val_(f.num_vars(), kUnset) {}

  bool assume(Literal l) {
    const int cur = lit_value(l);
    if (cur == 0) return false;
    if (cur == kUnset) assign(l);
    return true;
  }

  bool solve() {
    if (!propagate()) return false;
    const Literal branch = choose();
    if (branch == 0) return true;
    for (Literal l : {branch, -branch}) {
      const std::size_t mark = trail_.size();
      assign(l);
      if (solve()) return true;
      undo(mark);
    }
    return false;
  }

  Assignment model() const {
    Assignment a;
    a.values.reserve(val_.size());
    for (auto v : val_) a.values.push_back(v == 1 ? 1 : 0);
    return a;
  }

 private:
  static constexpr int kUnset = -1;

  int lit_value(Literal l) const {
    const int v = val_[static_cast<std::size_t>(std::abs(l)) - 1];
    if (v == kUnset) return kUnset;
    return l > 0 ? v : 1 - v;
  }

  void assign(Literal l) {
    val_[static_cast<std::size_t>(std::abs(l)) - 1] = l > 0 ? 1 : 0;
    trail_.push_back(l);
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      val_[static_cast<std::size_t>(std::abs(trail_.back())) - 1] = kUnset;
      trail_.pop_back();
    }
  }

  bool propagate() {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& c : clauses_) {
        Literal unit = 0;
        std::size_t open = 0;
        bool sat = false;
        for (Literal l : c) {
          const int v = lit_value(l);
          if (v == 1) {
            sat = true;
            break;
          }
          if (v == kUnset) {
            ++open;
            unit = l;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          assign(unit);
          changed = true;
        }
      }
    }
    return true;
  }

  // First unassigned literal of the shortest open clause.
  Literal choose() const {
    Literal best = 0;
    std::size_t best_open = 0;
    for (const auto& c : clauses_) {
      std::size_t open = 0;
      Literal first = 0;
      bool sat = false;
      for (Literal l : c) {
        const int v = lit_value(l);
        if (v == 1) {
          sat = true;
          break;
        }
        if (v == kUnset && open++ == 0) first = l;
      }
      if (sat || open == 0) continue;
      if (best == 0 || open < best_open) {
        best = first;
        best_open = open;
      }
    }
    return best;
  }

  const std::vector<Clause>& clauses_;
  std::vector<int> val_;
  std::vector<Literal> trail_;
};

}  // namespace

SatResult dpll(const CnfFormula& f, const std::vector<Literal>& assumptions) {
  Dpll solver(f);
  for (Literal l : assumptions) {
    if (l == 0 || static_cast<std::size_t>(std::abs(l)) > f.num_vars())
      throw CnfError("assumption " + std::to_string(l) + " out of range");
    if (!solver.assume(l)) return {};
  }
  if (!solver.solve()) return {};
  return {true, solver.model()};
}

bool entails(const CnfFormula& premises, const CnfFormula& conclusion) {
  if (conclusion.num_vars() != conclusion.aux_start())
    throw CnfError("entailment target must not contain auxiliaries");
  if (conclusion.aux_start() > premises.aux_start())
    throw CnfError("entailment target uses variables unknown to the premises");
  for (const auto& c : conclusion.clauses()) {
    std::vector<Literal> refute;
    for (Literal l : c) refute.push_back(-l);
    if (dpll(premises, refute).sat) return false;
  }
  return true;
}

TranspositionVerdict transposition_check(const CnfFormula& phi, const CnfFormula& f,
                                         const CnfFormula& h) {
  const CnfFormula phi_f = conjoin(phi, f);
  if (!dpll(phi_f).sat) throw PremiseIncompatible("φ ∧ F is unsatisfiable");
  const std::size_t width = std::max(phi_f.aux_start(), h.aux_start());
  const CnfFormula premises = conjoin(phi_f, CnfFormula(width));
  const CnfFormula target = conjoin(CnfFormula(width), h);

  TranspositionVerdict verdict;
  // Clause-wise refutation: φ ∧ F ∧ ¬C unsatisfiable for each clause C of H.
  verdict.premise_holds = entails(premises, target);
  // Selector route: φ ∧ ¬H ⊨ ¬F iff φ ∧ ¬H ∧ F has no model.
  verdict.conclusion_holds = !dpll(conjoin(conjoin(phi, negate(h)), f)).sat;
  return verdict;
}

void write_dimacs(const CnfFormula& f, std::ostream& out) {
  out << "c substlab cnf\n";
  out << "c primary " << f.aux_start() << '\n';
  out << "c auxiliary " << f.num_vars() - f.aux_start() << '\n';
  for (std::size_t v = 0; v < f.num_vars(); ++v)
    out << "c var " << v + 1 << ' ' << f.var_names()[v] << '\n';
  out << "p cnf " << f.num_vars() << ' ' << f.clauses().size() << '\n';
  for (const auto& c : f.clauses()) {
    for (Literal l : c) out << l << ' ';
    out << "0\n";
  }
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream os;
  write_dimacs(f, os);
  return os.str();
}

CnfFormula read_dimacs(std::istream& in) {
  std::string line;
  std::optional<std::size_t> primary;
  std::vector<std::string> names;
  long long vars = -1, declared = -1;
  std::vector<Clause> clauses;
  Clause current;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "c") {
      std::string key;
      if (!(ls >> key)) continue;
      if (key == "primary") {
        std::size_t k;
        if (ls >> k) primary = k;
      } else if (key == "var") {
        std::size_t idx;
        std::string name;
        if (ls >> idx >> name && idx >= 1) {
          if (names.size() < idx) names.resize(idx);
          names[idx - 1] = name;
        }
      }
      continue;
    }
    if (head == "p") {
      std::string fmt;
      if (vars >= 0) throw DimacsError("duplicate problem line");
      if (!(ls >> fmt >> vars >> declared) || fmt != "cnf" || vars < 0 || declared < 0)
        throw DimacsError("malformed problem line: " + line);
      continue;
    }
    if (vars < 0) throw DimacsError("clause before problem line");
    std::istringstream toks(line);
    long long lit;
    std::string tok;
    while (toks >> tok) {
      char* end = nullptr;
      lit = std::strtoll(tok.c_str(), &end, 10);
      if (*end != '\0') throw DimacsError("bad literal '" + tok + "'");
      if (lit == 0) {
        clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::llabs(lit) > vars) throw DimacsError("literal " + tok + " exceeds variable count");
        current.push_back(static_cast<Literal>(lit));
      }
    }
  }
  if (vars < 0) throw DimacsError("missing problem line");
  if (!current.empty()) throw DimacsError("unterminated clause");
  if (static_cast<long long>(clauses.size()) != declared)
    throw DimacsError("header declares " + std::to_string(declared) + " clauses, found " +
                      std::to_string(clauses.size()));
  const auto nv = static_cast<std::size_t>(vars);
  const std::size_t np = primary.value_or(nv);
  if (np > nv) throw DimacsError("primary count exceeds variable count");
  names.resize(nv);
  CnfFormula f;
  for (std::size_t v = 0; v < nv; ++v) {
    if (v < np)
      f.add_primary(names[v]);
    else
      f.add_aux(names[v]);
  }
  for (auto& c : clauses) f.add_clause(std::move(c));
  return f;
}

}  // namespace substlab
