#include "substlab/workbench.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace substlab {

namespace {

using Json = nlohmann::ordered_json;

std::string int_str(const ExactInt& v) { return v.str(); }

ExactInt parse_int(const Json& j, const std::string& where) {
  if (!j.is_string()) throw FormatError(where + ": integers must be decimal strings");
  static const std::regex kDecimal("[+-]?[0-9]+");
  std::string s = j.get<std::string>();
  if (!std::regex_match(s, kDecimal)) throw FormatError(where + ": not a decimal integer: " + s);
  if (s.front() == '+') s.erase(0, 1);
  return ExactInt(s);
}

IntVector parse_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) throw FormatError(where + ": expected an array");
  IntVector v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(parse_int(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

Json vector_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& e : v) a.push_back(int_str(e));
  return a;
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw FormatError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

}  // namespace

std::string render_instance_file(const InstanceFile& f) {
  Json j;
  j["format_version"] = f.format_version;
  j["generator"] = f.generator;
  if (f.seed) j["seed"] = std::to_string(*f.seed);
  Json inst;
  inst["a"] = vector_json(f.instance.a());
  inst["c"] = int_str(f.instance.c());
  Json boxes = Json::array();
  for (const auto& b : f.instance.boxes()) boxes.push_back(Json::array({int_str(b.lo), int_str(b.hi)}));
  inst["boxes"] = std::move(boxes);
  j["instance"] = std::move(inst);
  if (f.system) {
    Json sys;
    Json rows = Json::array();
    for (std::size_t i = 0; i < f.system->n(); ++i) rows.push_back(vector_json(f.system->matrix().row(i)));
    sys["matrix"] = std::move(rows);
    sys["offset"] = vector_json(f.system->offset());
    sys["c"] = int_str(f.system->c());
    j["system"] = std::move(sys);
  }
  return j.dump(2) + "\n";
}

InstanceFile parse_instance_file(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  const Json& version = member(j, "format_version", "document");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
    throw FormatError("unsupported format_version " + version.dump());

  const Json& inst = member(j, "instance", "document");
  IntVector a = parse_vector(member(inst, "a", "instance"), "instance.a");
  ExactInt c = parse_int(member(inst, "c", "instance"), "instance.c");
  const Json& boxes_j = member(inst, "boxes", "instance");
  if (!boxes_j.is_array()) throw FormatError("instance.boxes: expected an array");
  std::vector<Box> boxes;
  for (std::size_t i = 0; i < boxes_j.size(); ++i) {
    const std::string where = "instance.boxes[" + std::to_string(i) + "]";
    IntVector pair = parse_vector(boxes_j[i], where);
    if (pair.size() != 2) throw FormatError(where + ": expected [lo, hi]");
    boxes.push_back({pair[0], pair[1]});
  }

  std::optional<std::uint64_t> seed;
  if (j.contains("seed")) {
    const ExactInt s = parse_int(j["seed"], "seed");
    if (s < 0 || s > std::numeric_limits<std::uint64_t>::max()) throw FormatError("seed out of range");
    seed = s.convert_to<std::uint64_t>();
  }
  std::string generator;
  if (j.contains("generator")) {
    if (!j["generator"].is_string()) throw FormatError("generator must be a string");
    generator = j["generator"].get<std::string>();
  }

  try {
    InstanceFile f{kFormatVersion, std::move(generator), seed,
                   SubstInstance(std::move(a), std::move(c), std::move(boxes)), std::nullopt};
    if (j.contains("system")) {
      const Json& sys = j["system"];
      const Json& rows_j = member(sys, "matrix", "system");
      if (!rows_j.is_array()) throw FormatError("system.matrix: expected an array of rows");
      std::vector<IntVector> rows;
      for (std::size_t i = 0; i < rows_j.size(); ++i)
        rows.push_back(parse_vector(rows_j[i], "system.matrix[" + std::to_string(i) + "]"));
      if (rows.empty()) throw FormatError("system.matrix: empty");
      IntMatrix b(rows);
      IntVector offset = sys.contains("offset") ? parse_vector(sys["offset"], "system.offset")
                                                : IntVector(b.rows());
      ExactInt sc = parse_int(member(sys, "c", "system"), "system.c");
      f.system.emplace(std::move(b), std::move(offset), std::move(sc));
    }
    return f;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("invalid contents: ") + e.what());
  }
}

InstanceFile load_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance_file(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_instance_file(const InstanceFile& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << render_instance_file(f);
  if (!out) throw IoError("write failed for " + path.string());
}

std::string digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

ExperimentReport::ExperimentReport(std::string command, std::string input_digest,
                                   std::optional<std::uint64_t> seed)
    : command_(std::move(command)), input_digest_(std::move(input_digest)), seed_(seed) {}

ReportSection& ExperimentReport::section(const std::string& name) {
  for (auto& s : sections_)
    if (s.name == name) return s;
  sections_.push_back({name, {}});
  return sections_.back();
}

void ExperimentReport::add(const std::string& sec, std::string key, std::string value,
                           std::string operation) {
  section(sec).entries.push_back({std::move(key), std::move(value), std::move(operation)});
}

void ExperimentReport::check(const std::string& sec, std::string key, bool passed,
                             std::string detail, std::string operation) {
  ok_ = ok_ && passed;
  std::string value = passed ? "pass" : "FAIL";
  if (!detail.empty()) value += ": " + detail;
  add(sec, std::move(key), std::move(value), std::move(operation));
}

const ReportEntry* ExperimentReport::find(const std::string& sec, const std::string& key) const {
  for (const auto& s : sections_)
    if (s.name == sec)
      for (const auto& e : s.entries)
        if (e.key == key) return &e;
  return nullptr;
}

std::string ExperimentReport::to_json() const {
  Json j;
  j["format_version"] = kFormatVersion;
  j["command"] = command_;
  j["input_digest"] = input_digest_;
  if (seed_) j["seed"] = std::to_string(*seed_);
  j["ok"] = ok_;
  Json secs = Json::array();
  for (const auto& s : sections_) {
    Json entries = Json::array();
    for (const auto& e : s.entries)
      entries.push_back({{"key", e.key},
                         {"value", e.value},
                         {"operation", e.operation},
                         {"input_digest", input_digest_}});
    secs.push_back({{"name", s.name}, {"entries", std::move(entries)}});
  }
  j["sections"] = std::move(secs);
  return j.dump(2) + "\n";
}

std::string ExperimentReport::to_text() const {
  std::ostringstream os;
  os << command_ << " (format " << kFormatVersion << ", input " << input_digest_;
  if (seed_) os << ", seed " << *seed_;
  os << ")\n";
  for (const auto& s : sections_) {
    os << "[" << s.name << "]\n";
    for (const auto& e : s.entries) os << "  " << e.key << ": " << e.value << "\n";
  }
  os << (ok_ ? "OK" : "FAILED") << "\n";
  return os.str();
}

SubstInstance worked_instance() {
  return SubstInstance({52, -15, -3}, 2, {{-2, 2}, {-3, 7}, {-23, 2}});
}

SubstSystem worked_system() {
  return SubstSystem(IntMatrix{{1, 1, -2}, {3, 4, -3}, {2, -3, -20}}, 2);
}

ExperimentReport selftest_worked_example() {
  const SubstInstance inst = worked_instance();
  const SubstSystem sys = worked_system();
  ExperimentReport r("selftest",
                     digest(render_instance_file({kFormatVersion, "worked-example", std::nullopt, inst, sys})));

  auto compare = [&r](const std::string& sec, const std::string& key, const std::string& expected,
                      const std::string& actual, const std::string& op) {
    const bool same = expected == actual;
    r.check(sec, key, same, same ? actual : "expected " + expected + ", got " + actual, op);
  };

  const char* expected_steps[] = {"x1 = y1 - x2 + 2x3", "x2 = -3y1 + y2 - 3x3",
                                  "x3 = 17y1 - 5y2 - y3"};
  try {
    const EliminationTrace trace = forward_eliminate(sys);
    for (std::size_t i = 0; i < 3; ++i)
      compare("elimination", "step " + std::to_string(i + 1), expected_steps[i],
              to_string(trace.steps[i], i), "forward_eliminate");

    const IntMatrix expected_inverse{{89, -26, -5}, {-54, 16, 3}, {17, -5, -1}};
    compare("inversion", "back substitution", to_string(expected_inverse),
            to_string(back_substitute(trace)), "back_substitute");
    compare("inversion", "adjugate inverse", to_string(expected_inverse),
            to_string(integer_inverse(sys.matrix())), "integer_inverse");
    const auto size = intermediate_size_check(trace, sys.matrix());
    r.check("bounds", "intermediate sizes <= 4*size(B)", size.holds,
            std::to_string(size.max_coeff_size) + " <= " + std::to_string(size.bound),
            "intermediate_size_check");
  } catch (const SubstError& e) {
    r.check("elimination", "forward elimination", false, e.what(), "forward_eliminate");
  }

  const auto mb = minor_bound_check(sys.matrix());
  r.check("bounds", "minors <= n!*M^n", mb.holds, mb.max_minor.str() + " <= " + mb.bound.str(),
          "minor_bound_check");

  std::string boxes;
  for (const auto& b : derive_boxes(sys))
    boxes += (boxes.empty() ? "" : ", ") + ("[" + b.lo.str() + ", " + b.hi.str() + "]");
  compare("boxes", "derived boxes", "[-2, 2], [-3, 7], [-23, 2]", boxes, "derive_boxes");
  r.check("boxes", "R1 containment", verify_r1(inst, sys).all_ok(), "", "verify_r1");

  const auto link = verify_cardinality_link(inst, sys);
  compare("cardinality", "a^T B", "(1, 1, 1)", to_string(link.coefficients),
          "verify_cardinality_link");
  r.check("cardinality", "linked", link.linked, "", "verify_cardinality_link");

  // The printed image rows must satisfy the instance. Whether the box holds
  // any further solutions is reported, not compared: nothing is printed for it.
  const auto report = verify_bijection(inst, sys);
  r.check("bijection", "images of enum_x(3, 2) inside boxes",
          report.out_of_box_x.empty() && report.matched == report.x_count && report.x_count == 3,
          std::to_string(report.matched) + " of " + std::to_string(report.x_count),
          "verify_bijection");
  r.add("bijection", "box points scanned", box_volume(inst).str(), "enum_y_bruteforce");
  r.add("bijection", "y solutions in boxes", std::to_string(report.y_count), "enum_y_bruteforce");
  std::string extra;
  for (const auto& y : report.extra_y) extra += (extra.empty() ? "" : " ") + to_string(y);
  r.add("bijection", "y solutions without 0/1 preimage", extra.empty() ? "none" : extra,
        "verify_bijection");
  r.add("bijection", "bijection holds", report.holds() ? "true" : "false", "verify_bijection");
  return r;
}

std::string growth_csv(const std::vector<GrowthRow>& rows) {
  std::ostringstream os;
  os << "n,c,implicate_count,verified_minimal\n";
  for (const auto& row : rows) {
    os << row.n << ',' << row.c << ',' << row.implicate_count << ',';
    if (row.verified_minimal) os << (*row.verified_minimal ? "true" : "false");
    os << '\n';
  }
  return os.str();
}

ExperimentReport run_growth(std::size_t n_max, const std::filesystem::path& out) {
  const auto rows = min_cnf_growth(n_max);
  const std::string csv = growth_csv(rows);
  {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw IoError("cannot write " + out.string());
    f << csv;
    if (!f) throw IoError("write failed for " + out.string());
  }
  ExperimentReport r("growth", digest("growth n_max=" + std::to_string(n_max)));
  for (const auto& row : rows) {
    std::string v = std::to_string(row.implicate_count);
    if (row.verified_minimal) v += *row.verified_minimal ? " (verified minimal)" : " (NOT minimal)";
    r.add("implicates", "n=" + std::to_string(row.n) + " c=" + std::to_string(row.c), v,
          "prime_implicates_cardinality");
    if (row.verified_minimal)
      r.check("minimality", "n=" + std::to_string(row.n), *row.verified_minimal, "",
              "minimum_cover_size");
  }
  r.add("output", "csv", out.string() + " (" + digest(csv) + ")", "run_growth");
  return r;
}

std::uint64_t suite_system_seed(std::uint64_t suite_seed, std::size_t index) {
  // splitmix64 step over (seed, index)
  std::uint64_t z = suite_seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

struct SystemChecks {
  std::vector<std::pair<std::string, std::string>> failures;  // check, detail
  bool bijection_checked = false;
  Counters counters;
};

SystemChecks check_system(const SubstSystem& s, std::uint64_t budget) {
  SystemChecks out;
  auto fail = [&out](std::string check, std::string detail) {
    out.failures.emplace_back(std::move(check), std::move(detail));
  };
  const std::size_t n = s.n();

  try {
    const EliminationTrace trace = forward_eliminate(s);
    for (int p : trace.pivots())
      if (p != 1 && p != -1) fail("elimination", "pivot " + std::to_string(p));
    const IntMatrix inv = back_substitute(trace);
    if (inv != s.inverse()) fail("inverse", "back substitution differs from adjugate inverse");
    if (s.matrix() * inv != IntMatrix::identity(n)) fail("inverse", "B * B^-1 != I");
    const auto size = intermediate_size_check(trace, s.matrix());
    if (!size.holds)
      fail("intermediate size",
           std::to_string(size.max_coeff_size) + " > " + std::to_string(size.bound));
  } catch (const SubstError& e) {
    fail("elimination", e.what());
  }

  const auto mb = minor_bound_check(s.matrix());
  if (!mb.holds) fail("minor bound", mb.max_minor.str() + " > " + mb.bound.str());

  build_table(s, TableOrder::lexicographic_x, &out.counters);
  try {
    const auto report = verify_bijection(instance_from_system(s), s, budget, &out.counters);
    out.bijection_checked = true;
    if (!report.holds()) {
      std::string detail = "x=" + std::to_string(report.x_count) +
                           " y=" + std::to_string(report.y_count) +
                           " extra_y=" + std::to_string(report.extra_y.size()) +
                           " out_of_box_x=" + std::to_string(report.out_of_box_x.size());
      if (!report.extra_y.empty()) detail += " first extra " + to_string(report.extra_y.front());
      fail("bijection", detail);
    }
  } catch (const BudgetExceeded&) {
  }

  try {
    const auto th = throughput_report(out.counters);
    if (Rational(1, 1) < th.throughput) fail("throughput", "TH = " + th.throughput.str() + " > 1");
  } catch (const EnumError& e) {
    fail("throughput", e.what());
  }
  return out;
}

}  // namespace

SuiteResult run_property_suite(std::size_t count, std::uint64_t seed, const SuiteOptions& options) {
  if (options.n_min < 1 || options.n_max < options.n_min)
    throw std::invalid_argument("suite needs 1 <= n_min <= n_max");
  SuiteResult result{0, 0, 0, {}, {},
                     ExperimentReport("suite", digest("suite count=" + std::to_string(count) +
                                                      " seed=" + std::to_string(seed)),
                                      seed)};
  ExperimentReport& r = result.report;
  const std::size_t span = options.n_max - options.n_min + 1;
  std::uint64_t last_infs = 0, last_steps = 0;

  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t sys_seed = suite_system_seed(seed, i);
    const std::size_t n = options.n_min + static_cast<std::size_t>(sys_seed % span);
    auto record = [&](const std::string& check, const std::string& detail) {
      result.failures.push_back({i, sys_seed, n, check, detail});
      r.check("failures",
              "system " + std::to_string(i) + " (gen --n " + std::to_string(n) + " --seed " +
                  std::to_string(sys_seed) + " --bound " + std::to_string(options.coeff_bound) + ")",
              false, check + ": " + detail, "run_property_suite");
    };
    ++result.systems;

    std::optional<SubstSystem> sys;
    try {
      SubstSystem generated = generate_note1(n, sys_seed, options.coeff_bound);
      if (options.inject_singular_at == i) {
        IntMatrix b = generated.matrix();
        for (std::size_t j = 0; j < n; ++j) b(n - 1, j) = n > 1 ? b(0, j) : ExactInt(0);
        sys.emplace(std::move(b), generated.c());
      } else {
        sys.emplace(std::move(generated));
      }
    } catch (const std::exception& e) {
      record("construction", e.what());
      continue;
    }

    SystemChecks checks = check_system(*sys, options.budget);
    for (auto& [check, detail] : checks.failures) record(check, detail);
    if (checks.bijection_checked)
      ++result.bijection_checked;
    else
      ++result.bijection_skipped;
    result.counters.merge(checks.counters);
    if (result.counters.infs() < last_infs || result.counters.steps() < last_steps)
      record("throughput", "counters decreased");
    last_infs = result.counters.infs();
    last_steps = result.counters.steps();
  }

  r.add("summary", "systems", std::to_string(result.systems), "generate_note1");
  r.add("summary", "failures", std::to_string(result.failures.size()), "run_property_suite");
  r.add("summary", "bijection checked", std::to_string(result.bijection_checked),
        "verify_bijection");
  r.add("summary", "bijection skipped (over budget)", std::to_string(result.bijection_skipped),
        "verify_bijection");
  r.add("throughput", "infs I", std::to_string(result.counters.infs()), "throughput_report");
  r.add("throughput", "steps N", std::to_string(result.counters.steps()), "throughput_report");
  if (result.counters.steps() > 0) {
    try {
      const auto th = throughput_report(result.counters);
      r.check("throughput", "TH = I/N <= 1", !(Rational(1, 1) < th.throughput), th.throughput.str(),
              "throughput_report");
    } catch (const EnumError& e) {
      r.check("throughput", "TH = I/N <= 1", false, e.what(), "throughput_report");
    }
  }
  return result;
}

std::uint64_t budget_from_env() {
  const char* raw = std::getenv("SUBSTLAB_BUDGET");
  if (!raw || !*raw) return kDefaultBudget;
  std::uint64_t v = 0;
  const char* end = raw + std::char_traits<char>::length(raw);
  const auto [ptr, ec] = std::from_chars(raw, end, v);
  if (ec != std::errc() || ptr != end || v == 0)
    throw std::invalid_argument(std::string("SUBSTLAB_BUDGET must be a positive integer, got '") +
                                raw + "'");
  return v;
}

}  // namespace substlab
