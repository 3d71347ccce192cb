#include "kreinval/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace kreinval {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Ok: return "ok";
    case Outcome::NotAdmissibleInput: return "not_admissible_input";
    case Outcome::NotAdmissibleSum: return "not_admissible_sum";
    case Outcome::NumericalFailure: return "numerical_failure";
  }
  return "ok";
}

void CheckReport::add_ge(std::string label, std::vector<int> idx, double lhs, double rhs, double tol,
                         std::vector<int> idx2) {
  cases_.push_back({std::move(label), std::move(idx), std::move(idx2), lhs, rhs, lhs - rhs, tol, false});
}

void CheckReport::add_le(std::string label, std::vector<int> idx, double lhs, double rhs, double tol,
                         std::vector<int> idx2) {
  cases_.push_back({std::move(label), std::move(idx), std::move(idx2), lhs, rhs, rhs - lhs, tol, false});
}

void CheckReport::add_eq(std::string label, std::vector<int> idx, double lhs, double rhs, double tol) {
  cases_.push_back({std::move(label), std::move(idx), {}, lhs, rhs, -std::abs(lhs - rhs), tol, false});
}

void CheckReport::add_soft_ge(std::string label, std::vector<int> idx, double lhs, double rhs, double tol) {
  cases_.push_back({std::move(label), std::move(idx), {}, lhs, rhs, lhs - rhs, tol, true});
}

void CheckReport::fail(Outcome outcome, std::string detail) {
  outcome_ = outcome;
  detail_ = std::move(detail);
}

double CheckReport::worst_margin() const noexcept {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : cases_)
    if (!c.soft) worst = std::min(worst, c.margin);
  return worst;
}

bool CheckReport::passed() const noexcept {
  if (outcome_ != Outcome::Ok) return false;
  return std::all_of(cases_.begin(), cases_.end(), [](const CheckCase& c) { return c.soft || c.passed(); });
}

int CheckReport::hard_cases() const noexcept {
  return static_cast<int>(std::count_if(cases_.begin(), cases_.end(), [](const CheckCase& c) { return !c.soft; }));
}

int CheckReport::hard_failures() const noexcept {
  return static_cast<int>(
      std::count_if(cases_.begin(), cases_.end(), [](const CheckCase& c) { return !c.soft && !c.passed(); }));
}

int CheckReport::soft_attempts() const noexcept {
  return static_cast<int>(std::count_if(cases_.begin(), cases_.end(), [](const CheckCase& c) { return c.soft; }));
}

int CheckReport::soft_successes() const noexcept {
  return static_cast<int>(
      std::count_if(cases_.begin(), cases_.end(), [](const CheckCase& c) { return c.soft && c.passed(); }));
}

void CheckReport::merge(const CheckReport& other, const std::string& label_prefix) {
  for (const auto& c : other.cases_) {
    cases_.push_back(c);
    if (!label_prefix.empty()) cases_.back().label = label_prefix + ":" + c.label;
  }
  if (outcome_ == Outcome::Ok && other.outcome_ != Outcome::Ok) {
    outcome_ = other.outcome_;
    detail_ = other.detail_;
  }
  if (note_.empty()) note_ = other.note_;
}

namespace {

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json_value(const CheckReport& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases_) {
    nlohmann::json jc{{"label", c.label},   {"indices", c.indices},          {"lhs", finite_or_null(c.lhs)},
                      {"rhs", finite_or_null(c.rhs)}, {"margin", finite_or_null(c.margin)},
                      {"tol", c.tol},       {"pass", c.passed()}};
    if (!c.indices2.empty()) jc["indices2"] = c.indices2;
    if (c.soft) jc["soft"] = true;
    cases.push_back(std::move(jc));
  }
  nlohmann::json j{
      {"check_name", r.check_name_},
      {"instance", {{"p", r.instance_.p}, {"q", r.instance_.q}, {"seed", r.instance_.seed}, {"index", r.instance_.instance}}},
      {"outcome", to_string(r.outcome_)},
      {"worst_margin", finite_or_null(r.worst_margin())},
      {"pass", r.passed()},
      {"cases", std::move(cases)},
  };
  if (!r.detail_.empty()) j["detail"] = r.detail_;
  if (!r.note_.empty()) j["note"] = r.note_;
  if (r.soft_attempts() > 0)
    j["soft"] = {{"attempts", r.soft_attempts()}, {"successes", r.soft_successes()}};
  return j;
}

std::string format_indices(const CheckCase& c) {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.indices.size(); ++i) os << (i ? " " : "") << c.indices[i];
  if (!c.indices2.empty()) {
    os << "|";
    for (std::size_t i = 0; i < c.indices2.size(); ++i) os << (i ? " " : "") << c.indices2[i];
  }
  return os.str();
}

void write_csv_header(std::ostream& os) { os << "suite,instance,case_id,indices,lhs,rhs,margin,pass\n"; }

void write_csv_rows(std::ostream& os, const CheckReport& r) {
  const auto num = [](double x) { return nlohmann::json(x).dump(); };
  if (r.outcome() != Outcome::Ok && r.cases().empty()) {
    os << r.check_name() << ',' << r.instance().instance << ",-1," << to_string(r.outcome()) << ",,,,0\n";
    return;
  }
  for (std::size_t i = 0; i < r.cases().size(); ++i) {
    const auto& c = r.cases()[i];
    os << r.check_name() << ',' << r.instance().instance << ',' << i << ',' << c.label << ':'
       << format_indices(c) << ',' << num(c.lhs) << ',' << num(c.rhs) << ',' << num(c.margin) << ','
       << (c.passed() ? 1 : 0) << '\n';
  }
}

}  // namespace kreinval
