#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kreinval/core_model.hpp"
#include "kreinval/report.hpp"
#include "kreinval/sampling.hpp"

namespace kreinval {

inline constexpr const char* kVersion = "0.1.0";

/// Suite names accepted by --suite, in execution order.
const std::vector<std::string>& suite_names();

struct SuiteConfig {
  int p = 2;
  int q = 1;
  int instances = 10;
  std::uint64_t seed = 0;
  std::vector<std::string> suites;  // empty means all
  int max_m = 4;
  std::string out = "kreinval-out";
  std::string format = "json";
  int threads = 0;  // 0: OpenMP default

  double tol_struct = 1e-10;
  double tol_eig = 1e-8;  // planted recovery, scaled by cond(U)^2
  double tol_check = 1e-8;
  double tol_eq = 1e-9;
  double tol_trace = 1e-9;
  double tol_lp = 1e-9;
  double soft_tol = 1e-6;
  double soft_threshold = 0.95;

  double gap_min = 0.25;
  double value_lo = -3.0;
  double value_hi = 3.0;
  double boost_scale = 1.0;
  double cond_cap = 1e4;
  double contraction_cap = 0.9;
  int max_retries = 64;

  int rayleigh_samples = 1000;
  int cf_subspaces = 500;
  int ky_fan_frames = 200;
  int wielandt_flags = 50;
  int wielandt_frames = 20;
  int ascent_iters = 200;
  int restarts = 3;
  int tuple_full_limit = 4;
  int tuple_sample_count = 200;

  Signature signature() const { return Signature(p, q); }
  SamplerConfig sampler() const;
  /// Selected suites in canonical order.
  std::vector<std::string> active_suites() const;

  /// Throws Config naming the offending field.
  void validate() const;
  nlohmann::json to_json() const;
  /// Unknown keys and wrong types throw Config with the field name.
  void apply_json(const nlohmann::json& j);
};

/// Parses a JSON config file; parse errors report line and column.
SuiteConfig load_config(const std::string& path, SuiteConfig base = {});

struct SuiteAggregate {
  int reports = 0;
  int cases = 0;
  int passes = 0;
  int hard_failures = 0;
  int failed_reports = 0;
  int soft_attempts = 0;
  int soft_successes = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::map<std::string, int> outcomes;

  void add(const CheckReport& r);
  std::optional<double> soft_success_rate() const;
  nlohmann::json to_json() const;
};

struct RunSummary {
  SuiteConfig config;
  std::map<std::string, SuiteAggregate> suites;
  int instances = 0;
  int failed_reports = 0;
  int soft_attempts = 0;
  int soft_successes = 0;

  bool hard_pass() const { return failed_reports == 0; }
  bool soft_pass() const;
  bool passed() const { return hard_pass() && soft_pass(); }
  int exit_code() const { return passed() ? 0 : 1; }
  /// Deterministic: no wall time or timestamps.
  nlohmann::json to_json() const;
};

/// Every selected suite on instance `index` (A, B sampled from stream (seed, index)).
std::vector<CheckReport> run_instance(const SuiteConfig& config, std::uint64_t index);

/// Called once per instance, in index order.
using InstanceSink = std::function<void(std::uint64_t index, const std::vector<CheckReport>&)>;

/// Instance-parallel run (OpenMP), results merged in index order.
RunSummary run_suite(const SuiteConfig& config, const InstanceSink& sink = {});
/// Serial reference; same results as run_suite.
RunSummary run_suite_serial(const SuiteConfig& config, const InstanceSink& sink = {});

/// Writes summary.json, instances.jsonl or cases.csv, counterexamples.jsonl and
/// meta.json (wall time, timestamp) into config.out. Validates before touching disk.
RunSummary run_to_directory(const SuiteConfig& config, bool parallel = true);

// Matrix files: {"p": .., "q": .., "entries": [[[re, im], ...], ...]}
nlohmann::json matrix_to_json(const ComplexMatrix& m, Signature sig);
PseudoHermitianMatrix matrix_from_json(const nlohmann::json& j, double tol = kTolStruct);
void write_matrix(const std::string& path, const PseudoHermitianMatrix& a);
PseudoHermitianMatrix read_matrix(const std::string& path, double tol = kTolStruct);

}  // namespace kreinval
