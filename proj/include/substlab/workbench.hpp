#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "substlab/cnf_lab.hpp"
#include "substlab/oracle_enum.hpp"
#include "substlab/subst_core.hpp"

namespace substlab {

inline constexpr int kFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON document with every integer stored as a decimal string.
struct InstanceFile {
  int format_version = kFormatVersion;
  std::string generator;
  std::optional<std::uint64_t> seed;
  SubstInstance instance;
  std::optional<SubstSystem> system;

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

std::string render_instance_file(const InstanceFile& f);
InstanceFile parse_instance_file(const std::string& text);
InstanceFile load_instance_file(const std::filesystem::path& path);
void save_instance_file(const InstanceFile& f, const std::filesystem::path& path);

/// Stable 64-bit FNV-1a digest, rendered as 16 hex digits.
std::string digest(const std::string& text);

struct ReportEntry {
  std::string key;
  std::string value;
  std::string operation;
};

struct ReportSection {
  std::string name;
  std::vector<ReportEntry> entries;
};

class ExperimentReport {
 public:
  ExperimentReport(std::string command, std::string input_digest,
                   std::optional<std::uint64_t> seed = std::nullopt);

  void add(const std::string& section, std::string key, std::string value,
           std::string operation);
  /// Records a check; any failed check marks the report failed.
  void check(const std::string& section, std::string key, bool passed, std::string detail,
             std::string operation);

  bool ok() const { return ok_; }
  const std::string& command() const { return command_; }
  const std::string& input_digest() const { return input_digest_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  const std::vector<ReportSection>& sections() const { return sections_; }
  const ReportEntry* find(const std::string& section, const std::string& key) const;

  std::string to_json() const;
  std::string to_text() const;

 private:
  ReportSection& section(const std::string& name);

  std::string command_;
  std::string input_digest_;
  std::optional<std::uint64_t> seed_;
  std::vector<ReportSection> sections_;
  bool ok_ = true;
};

/// The worked example: 52y1 − 15y2 − 3y3 = 2 with its substitution system.
SubstInstance worked_instance();
SubstSystem worked_system();

ExperimentReport selftest_worked_example();

std::string growth_csv(const std::vector<GrowthRow>& rows);
ExperimentReport run_growth(std::size_t n_max, const std::filesystem::path& out);

struct SuiteOptions {
  std::size_t n_min = 1;
  std::size_t n_max = 8;
  long long coeff_bound = 10;
  std::uint64_t budget = kDefaultBudget;
  /// Replace system #index with a singular matrix (negative control).
  std::optional<std::size_t> inject_singular_at;
};

struct SuiteFailure {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string check;
  std::string detail;
};

struct SuiteResult {
  std::size_t systems = 0;
  std::size_t bijection_checked = 0;
  std::size_t bijection_skipped = 0;  // box product over budget
  std::vector<SuiteFailure> failures;
  Counters counters;
  ExperimentReport report;
};

/// Per-system generator seed derived from the suite seed.
std::uint64_t suite_system_seed(std::uint64_t suite_seed, std::size_t index);

SuiteResult run_property_suite(std::size_t count, std::uint64_t seed,
                               const SuiteOptions& options = {});

/// SUBSTLAB_BUDGET if set and valid, otherwise the default budget.
std::uint64_t budget_from_env();

}  // namespace substlab
