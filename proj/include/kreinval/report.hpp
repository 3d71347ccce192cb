#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kreinval {

/// One inequality or identity instance. `margin` is sign-adjusted so that
/// margin >= -tol means the case holds.
struct CheckCase {
  std::string label;
  std::vector<int> indices;
  std::vector<int> indices2;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  bool soft = false;

  bool passed() const noexcept { return margin >= -tol; }
};

enum class Outcome { Ok, NotAdmissibleInput, NotAdmissibleSum, NumericalFailure };

const char* to_string(Outcome o);

struct InstanceDescriptor {
  int p = 0;
  int q = 0;
  std::uint64_t seed = 0;
  std::uint64_t instance = 0;
};

class CheckReport {
 public:
  CheckReport() = default;
  CheckReport(std::string check_name, InstanceDescriptor instance)
      : check_name_(std::move(check_name)), instance_(instance) {}

  /// lhs >= rhs
  void add_ge(std::string label, std::vector<int> idx, double lhs, double rhs, double tol,
              std::vector<int> idx2 = {});
  /// lhs <= rhs
  void add_le(std::string label, std::vector<int> idx, double lhs, double rhs, double tol,
              std::vector<int> idx2 = {});
  /// |lhs - rhs| <= tol
  void add_eq(std::string label, std::vector<int> idx, double lhs, double rhs, double tol);
  /// Existential check verified by search; counted toward the soft success rate only.
  void add_soft_ge(std::string label, std::vector<int> idx, double lhs, double rhs, double tol);

  void fail(Outcome outcome, std::string detail);
  void set_instance(InstanceDescriptor d) { instance_ = d; }
  void set_note(std::string note) { note_ = std::move(note); }

  const std::string& check_name() const noexcept { return check_name_; }
  const InstanceDescriptor& instance() const noexcept { return instance_; }
  Outcome outcome() const noexcept { return outcome_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<CheckCase>& cases() const noexcept { return cases_; }

  /// Minimum margin over hard cases; +inf when there are none.
  double worst_margin() const noexcept;
  /// Outcome is Ok and every hard case holds.
  bool passed() const noexcept;
  int hard_cases() const noexcept;
  int hard_failures() const noexcept;
  int soft_attempts() const noexcept;
  int soft_successes() const noexcept;

  /// Appends another report's cases (same check, e.g. per-k parts); labels
  /// become "prefix:label" when a prefix is given.
  void merge(const CheckReport& other, const std::string& label_prefix = "");

 private:
  std::string check_name_;
  InstanceDescriptor instance_;
  Outcome outcome_ = Outcome::Ok;
  std::string detail_;
  std::string note_;
  std::vector<CheckCase> cases_;

  friend nlohmann::json to_json_value(const CheckReport& r);
};

nlohmann::json to_json_value(const CheckReport& r);

/// Columns: suite, instance, case_id, indices, lhs, rhs, margin, pass.
void write_csv_header(std::ostream& os);
void write_csv_rows(std::ostream& os, const CheckReport& r);

/// "1 2" or "1 2|1 3" when a second tuple is present.
std::string format_indices(const CheckCase& c);

}  // namespace kreinval
