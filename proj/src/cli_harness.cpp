#include "kreinval/cli_harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "kreinval/polyhedral.hpp"
#include "kreinval/spectral.hpp"
#include "kreinval/variational_suite.hpp"

namespace kreinval {

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::Config, "config field '" + field + "': " + what);
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

template <class T>
void read_field(const nlohmann::json& j, const std::string& key, T& out) {
  try {
    out = j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_error(key, std::string("wrong type (") + e.what() + ")");
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"structural",      "trace",  "weyl",     "lidskii",   "thompson_freede",
                                              "courant_fischer", "ky_fan", "wielandt", "polyhedral"};
  return names;
}

SamplerConfig SuiteConfig::sampler() const {
  SamplerConfig s;
  s.seed = seed;
  s.gap_min = gap_min;
  s.value_lo = value_lo;
  s.value_hi = value_hi;
  s.boost_scale = boost_scale;
  s.cond_cap = cond_cap;
  s.contraction_cap = contraction_cap;
  s.max_retries = max_retries;
  return s;
}

std::vector<std::string> SuiteConfig::active_suites() const {
  if (suites.empty()) return suite_names();
  std::vector<std::string> out;
  for (const auto& name : suite_names())
    if (std::find(suites.begin(), suites.end(), name) != suites.end()) out.push_back(name);
  return out;
}

void SuiteConfig::validate() const {
  if (p < 0) config_error("p", "must be >= 0");
  if (q < 0) config_error("q", "must be >= 0");
  if (p + q < 1) config_error("p", "p + q must be >= 1");
  if (instances < 1) config_error("instances", "must be >= 1");
  if (max_m < 1) config_error("max_m", "must be >= 1");
  if (format != "json" && format != "csv") config_error("format", "must be json or csv, got '" + format + "'");
  if (out.empty()) config_error("out", "must not be empty");
  if (threads < 0) config_error("threads", "must be >= 0");
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      config_error("suites", "unknown suite '" + s + "'");
  const std::pair<const char*, double> tols[] = {{"tol_struct", tol_struct}, {"tol_eig", tol_eig},
                                                 {"tol_check", tol_check},   {"tol_eq", tol_eq},
                                                 {"tol_trace", tol_trace},   {"tol_lp", tol_lp},
                                                 {"soft_tol", soft_tol}};
  for (const auto& [name, v] : tols)
    if (!(v > 0.0) || !std::isfinite(v)) config_error(name, "must be finite and > 0");
  if (!(soft_threshold >= 0.0 && soft_threshold <= 1.0)) config_error("soft_threshold", "must lie in [0, 1]");
  const std::pair<const char*, int> counts[] = {
      {"rayleigh_samples", rayleigh_samples}, {"cf_subspaces", cf_subspaces},       {"ky_fan_frames", ky_fan_frames},
      {"wielandt_flags", wielandt_flags},     {"wielandt_frames", wielandt_frames}, {"ascent_iters", ascent_iters},
      {"tuple_sample_count", tuple_sample_count}};
  for (const auto& [name, v] : counts)
    if (v < 1) config_error(name, "must be >= 1");
  if (restarts < 0) config_error("restarts", "must be >= 0");
  if (tuple_full_limit < 0) config_error("tuple_full_limit", "must be >= 0");
  try {
    sampler().validate();
  } catch (const Error& e) {
    config_error("sampler", e.what());
  }
  const auto active = active_suites();
  if (std::find(active.begin(), active.end(), "polyhedral") != active.end() &&
      factorial(p) * factorial(q) > kVertexCap)
    config_error("suites", "polyhedral suite needs p! * q! <= " + std::to_string(kVertexCap));
}

nlohmann::json SuiteConfig::to_json() const {
  return {{"p", p},
          {"q", q},
          {"instances", instances},
          {"seed", seed},
          {"suites", active_suites()},
          {"max_m", max_m},
          {"format", format},
          {"tol_struct", tol_struct},
          {"tol_eig", tol_eig},
          {"tol_check", tol_check},
          {"tol_eq", tol_eq},
          {"tol_trace", tol_trace},
          {"tol_lp", tol_lp},
          {"soft_tol", soft_tol},
          {"soft_threshold", soft_threshold},
          {"gap_min", gap_min},
          {"value_lo", value_lo},
          {"value_hi", value_hi},
          {"boost_scale", boost_scale},
          {"cond_cap", cond_cap},
          {"contraction_cap", contraction_cap},
          {"max_retries", max_retries},
          {"rayleigh_samples", rayleigh_samples},
          {"cf_subspaces", cf_subspaces},
          {"ky_fan_frames", ky_fan_frames},
          {"wielandt_flags", wielandt_flags},
          {"wielandt_frames", wielandt_frames},
          {"ascent_iters", ascent_iters},
          {"restarts", restarts},
          {"tuple_full_limit", tuple_full_limit},
          {"tuple_sample_count", tuple_sample_count}};
}

void SuiteConfig::apply_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "p") read_field(v, key, p);
    else if (key == "q") read_field(v, key, q);
    else if (key == "instances") read_field(v, key, instances);
    else if (key == "seed") read_field(v, key, seed);
    else if (key == "suites") read_field(v, key, suites);
    else if (key == "max_m") read_field(v, key, max_m);
    else if (key == "out") read_field(v, key, out);
    else if (key == "format") read_field(v, key, format);
    else if (key == "threads") read_field(v, key, threads);
    else if (key == "tol_struct") read_field(v, key, tol_struct);
    else if (key == "tol_eig") read_field(v, key, tol_eig);
    else if (key == "tol_check") read_field(v, key, tol_check);
    else if (key == "tol_eq") read_field(v, key, tol_eq);
    else if (key == "tol_trace") read_field(v, key, tol_trace);
    else if (key == "tol_lp") read_field(v, key, tol_lp);
    else if (key == "soft_tol") read_field(v, key, soft_tol);
    else if (key == "soft_threshold") read_field(v, key, soft_threshold);
    else if (key == "gap_min") read_field(v, key, gap_min);
    else if (key == "value_lo") read_field(v, key, value_lo);
    else if (key == "value_hi") read_field(v, key, value_hi);
    else if (key == "boost_scale") read_field(v, key, boost_scale);
    else if (key == "cond_cap") read_field(v, key, cond_cap);
    else if (key == "contraction_cap") read_field(v, key, contraction_cap);
    else if (key == "max_retries") read_field(v, key, max_retries);
    else if (key == "rayleigh_samples") read_field(v, key, rayleigh_samples);
    else if (key == "cf_subspaces") read_field(v, key, cf_subspaces);
    else if (key == "ky_fan_frames") read_field(v, key, ky_fan_frames);
    else if (key == "wielandt_flags") read_field(v, key, wielandt_flags);
    else if (key == "wielandt_frames") read_field(v, key, wielandt_frames);
    else if (key == "ascent_iters") read_field(v, key, ascent_iters);
    else if (key == "restarts") read_field(v, key, restarts);
    else if (key == "tuple_full_limit") read_field(v, key, tuple_full_limit);
    else if (key == "tuple_sample_count") read_field(v, key, tuple_sample_count);
    else config_error(key, "unknown field");
  }
}

SuiteConfig load_config(const std::string& path, SuiteConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Config, path + ": " + e.what());
  }
  base.apply_json(j);
  return base;
}

void SuiteAggregate::add(const CheckReport& r) {
  ++reports;
  for (const auto& c : r.cases()) {
    if (c.soft) {
      ++soft_attempts;
      soft_successes += c.passed() ? 1 : 0;
      continue;
    }
    ++cases;
    passes += c.passed() ? 1 : 0;
  }
  worst_margin = std::min(worst_margin, r.worst_margin());
  hard_failures += r.hard_failures();
  failed_reports += r.passed() ? 0 : 1;
  ++outcomes[to_string(r.outcome())];
}

std::optional<double> SuiteAggregate::soft_success_rate() const {
  if (soft_attempts == 0) return std::nullopt;
  return static_cast<double>(soft_successes) / soft_attempts;
}

nlohmann::json SuiteAggregate::to_json() const {
  nlohmann::json j{{"reports", reports},
                   {"cases", cases},
                   {"passes", passes},
                   {"hard_failures", hard_failures},
                   {"failed_reports", failed_reports},
                   {"worst_margin", finite_or_null(worst_margin)},
                   {"outcomes", outcomes}};
  if (const auto rate = soft_success_rate())
    j["soft"] = {{"attempts", soft_attempts}, {"successes", soft_successes}, {"success_rate", *rate}};
  return j;
}

bool RunSummary::soft_pass() const {
  if (soft_attempts == 0) return true;
  return static_cast<double>(soft_successes) / soft_attempts >= config.soft_threshold;
}

nlohmann::json RunSummary::to_json() const {
  nlohmann::json per_suite = nlohmann::json::object();
  for (const auto& name : config.active_suites()) {
    const auto it = suites.find(name);
    per_suite[name] = it == suites.end() ? SuiteAggregate{}.to_json() : it->second.to_json();
  }
  nlohmann::json j{{"version", kVersion},
                   {"config", config.to_json()},
                   {"instances", instances},
                   {"suites", std::move(per_suite)},
                   {"failed_reports", failed_reports},
                   {"hard_pass", hard_pass()},
                   {"soft_pass", soft_pass()},
                   {"pass", passed()}};
  if (soft_attempts > 0)
    j["soft"] = {{"attempts", soft_attempts},
                 {"successes", soft_successes},
                 {"success_rate", static_cast<double>(soft_successes) / soft_attempts},
                 {"threshold", config.soft_threshold}};
  return j;
}

namespace {

std::uint64_t suite_stream_id(const std::string& name) {
  const auto& names = suite_names();
  return static_cast<std::uint64_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

CheckReport run_one(const SuiteConfig& cfg, const std::string& name, const PlantedInstance& a,
                    const PlantedInstance& b, std::uint64_t suite_seed) {
  const Signature sig = cfg.signature();
  const SamplerConfig sampler = cfg.sampler();
  Rng rng = Rng::stream(suite_seed, suite_stream_id(name));
  const TupleEnumeration policy{cfg.tuple_full_limit, cfg.tuple_sample_count, rng.next_u64()};
  const auto& ma = a.matrix;
  const auto& mb = b.matrix;

  if (name == "structural") {
    CheckReport r = check_planted_recovery(a, cfg.tol_eig, cfg.tol_struct);
    r.merge(check_planted_recovery(b, cfg.tol_eig, cfg.tol_struct), "B");
    return r;
  }
  if (name == "trace") return check_trace_identity(ma, mb, cfg.tol_trace);
  if (name == "weyl") return check_weyl(ma, mb, cfg.tol_check);
  if (name == "lidskii") return check_lidskii_wielandt(ma, mb, cfg.max_m, cfg.tol_check, policy);
  if (name == "thompson_freede") return check_thompson_freede(ma, mb, cfg.tol_check, policy);
  if (name == "courant_fischer") {
    CheckReport r = check_courant_fischer(ma, cfg.cf_subspaces, rng, sampler, cfg.tol_check, cfg.tol_eq);
    r.merge(check_rayleigh_bounds(ma, cfg.rayleigh_samples, rng, sampler, cfg.tol_check, cfg.tol_eq));
    return r;
  }
  if (name == "ky_fan") {
    CheckReport r("ky_fan", {});
    for (int k = 1; k <= sig.p(); ++k)
      r.merge(check_ky_fan(ma, k, cfg.ky_fan_frames, rng, sampler, cfg.tol_check, cfg.tol_eq));
    return r;
  }
  if (name == "wielandt") {
    CheckReport r("wielandt", {});
    WielandtOptions opt;
    opt.n_flags = cfg.wielandt_flags;
    opt.n_frames = cfg.wielandt_frames;
    opt.ascent_iters = cfg.ascent_iters;
    opt.restarts = cfg.restarts;
    opt.tol = cfg.tol_check;
    opt.soft_tol = cfg.soft_tol;
    opt.tol_eq = cfg.tol_eq;
    for (const auto& dims : index_tuples(cfg.max_m, sig.p(), policy)) {
      std::ostringstream tag;
      for (int k = 0; k < dims.size(); ++k) tag << (k ? " " : "") << dims[k];
      r.merge(check_wielandt_flag(ma, dims, rng, opt, sampler), tag.str());
    }
    return r;
  }
  if (name == "polyhedral") {
    CheckReport r = check_diag_membership(ma, cfg.tol_lp);
    r.merge(check_sum_membership(ma, mb, cfg.tol_lp));
    return r;
  }
  throw Error(ErrorKind::Config, "unknown suite '" + name + "'");
}

}  // namespace

std::vector<CheckReport> run_instance(const SuiteConfig& config, std::uint64_t index) {
  const Signature sig = config.signature();
  const InstanceDescriptor desc{sig.p(), sig.q(), config.seed, index};
  const auto suites = config.active_suites();
  std::vector<CheckReport> out;
  Rng rng = Rng::stream(config.seed, index);
  std::optional<PlantedInstance> a;
  std::optional<PlantedInstance> b;
  std::string sample_error;
  try {
    a = sample_admissible(sig, config.sampler(), rng);
    b = sample_admissible(sig, config.sampler(), rng);
  } catch (const Error& e) {
    sample_error = e.what();
  }
  const std::uint64_t suite_seed = rng.next_u64();
  for (const auto& name : suites) {
    CheckReport r(name, desc);
    if (!sample_error.empty()) {
      r.fail(Outcome::NumericalFailure, "sampling: " + sample_error);
    } else {
      try {
        r.merge(run_one(config, name, *a, *b, suite_seed));
      } catch (const Error& e) {
        r = CheckReport(name, desc);
        r.fail(Outcome::NumericalFailure, e.what());
      }
    }
    r.set_instance(desc);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

void accumulate(RunSummary& s, const std::vector<CheckReport>& reports) {
  ++s.instances;
  for (const auto& r : reports) {
    s.suites[r.check_name()].add(r);
    s.failed_reports += r.passed() ? 0 : 1;
    s.soft_attempts += r.soft_attempts();
    s.soft_successes += r.soft_successes();
  }
}

}  // namespace

RunSummary run_suite(const SuiteConfig& config, const InstanceSink& sink) {
  config.validate();
  RunSummary summary;
  summary.config = config;
  const int n = config.instances;
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
  // Instances finish out of order; the ordered block merges and emits by index.
#pragma omp parallel for ordered schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    auto reports = run_instance(config, static_cast<std::uint64_t>(i));
#pragma omp ordered
    {
      accumulate(summary, reports);
      if (sink) sink(static_cast<std::uint64_t>(i), reports);
    }
  }
  return summary;
}

RunSummary run_suite_serial(const SuiteConfig& config, const InstanceSink& sink) {
  config.validate();
  RunSummary summary;
  summary.config = config;
  for (int i = 0; i < config.instances; ++i) {
    const auto reports = run_instance(config, static_cast<std::uint64_t>(i));
    accumulate(summary, reports);
    if (sink) sink(static_cast<std::uint64_t>(i), reports);
  }
  return summary;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return os;
}

}  // namespace

RunSummary run_to_directory(const SuiteConfig& config, bool parallel) {
  config.validate();
  const std::filesystem::path dir(config.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + dir.string() + "': " + ec.message());

  const bool csv = config.format == "csv";
  std::ofstream detail = open_out(dir / (csv ? "cases.csv" : "instances.jsonl"));
  std::ofstream counter = open_out(dir / "counterexamples.jsonl");
  if (csv) write_csv_header(detail);
  const InstanceSink sink = [&](std::uint64_t, const std::vector<CheckReport>& reports) {
    for (const auto& r : reports) {
      if (csv) write_csv_rows(detail, r);
      else detail << to_json_value(r).dump() << '\n';
      if (!r.passed()) counter << to_json_value(r).dump() << '\n';
    }
    detail.flush();
    counter.flush();
  };

  const auto start = std::chrono::steady_clock::now();
  RunSummary summary = parallel ? run_suite(config, sink) : run_suite_serial(config, sink);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  open_out(dir / "summary.json") << summary.to_json().dump(2) << '\n';
  const std::time_t now = std::time(nullptr);
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  const nlohmann::json meta{{"version", kVersion},
                            {"wall_time_s", wall},
                            {"timestamp", stamp.str()},
                            {"parallel", parallel},
                            {"threads", config.threads > 0 ? config.threads : omp_get_max_threads()}};
  open_out(dir / "meta.json") << meta.dump(2) << '\n';
  return summary;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m, Signature sig) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"p", sig.p()}, {"q", sig.q()}, {"entries", std::move(rows)}};
}

PseudoHermitianMatrix matrix_from_json(const nlohmann::json& j, double tol) {
  const auto schema = [](const std::string& what) { throw Error(ErrorKind::Schema, "matrix file: " + what); };
  if (!j.is_object()) schema("top level must be an object");
  for (const char* key : {"p", "q", "entries"})
    if (!j.contains(key)) schema(std::string("missing field '") + key + "'");
  if (!j["p"].is_number_integer() || !j["q"].is_number_integer()) schema("'p' and 'q' must be integers");
  const int p = j["p"].get<int>();
  const int q = j["q"].get<int>();
  if (p < 0 || q < 0 || p + q < 1) schema("need p, q >= 0 and p + q >= 1");
  const Signature sig(p, q);
  const int n = sig.n();
  const auto& rows = j["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    schema("'entries' must be an array of " + std::to_string(n) + " rows");
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      schema("row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    for (int k = 0; k < n; ++k) {
      const auto& e = row[static_cast<std::size_t>(k)];
      const auto where = "entry [" + std::to_string(i) + "][" + std::to_string(k) + "]";
      if (e.is_number()) {
        m(i, k) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        schema(where + " must be a number or [re, im]");
      }
    }
  }
  const double residual = pseudo_hermitian_residual(m, sig);
  if (!(residual <= tol)) {
    std::ostringstream os;
    os << "matrix is not pseudo-Hermitian: residual max|AJ - JA*| = " << residual << " > " << tol;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  return PseudoHermitianMatrix(sig, std::move(m), tol);
}

void write_matrix(const std::string& path, const PseudoHermitianMatrix& a) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  os << matrix_to_json(a.matrix(), a.signature()).dump() << '\n';
}

PseudoHermitianMatrix read_matrix(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Schema, path + ": " + e.what());
  }
  return matrix_from_json(j, tol);
}

}  // namespace kreinval
