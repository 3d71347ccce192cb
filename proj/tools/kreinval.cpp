#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kreinval/cli_harness.hpp"
#include "kreinval/polyhedral.hpp"
#include "kreinval/spectral.hpp"

namespace {

constexpr int kExitChecks = 1;
constexpr int kExitConfig = 2;
constexpr int kExitError = 3;

nlohmann::json spectrum_json(const kreinval::AdmissibleSpectrum& s) {
  return {{"p", s.p()}, {"q", s.q()}, {"lambdas", s.lambdas()}, {"mus", s.mus()}, {"gap", s.p() && s.q() ? nlohmann::json(s.gap()) : nlohmann::json(nullptr)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signature-(p,q) eigenvalue inequality verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kreinval::kVersion);

  kreinval::SuiteConfig flags;
  std::string config_path;
  bool serial = false;
  auto* run = app.add_subcommand("run", "Run the seeded verification suites");
  run->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* o_p = run->add_option("--p", flags.p, "Positive index p");
  auto* o_q = run->add_option("--q", flags.q, "Negative index q");
  auto* o_inst = run->add_option("--instances", flags.instances, "Number of sampled (A, B) pairs");
  auto* o_seed = run->add_option("--seed", flags.seed, "Base seed (fallback: KREINVAL_SEED)");
  auto* o_suite = run->add_option("--suite", flags.suites, "Suite to run (repeatable; default all)");
  auto* o_tol = run->add_option("--tol", flags.tol_check, "Tolerance for one-sided inequalities");
  auto* o_boost = run->add_option("--boost-scale", flags.boost_scale, "Bound on sampled boost magnitude");
  auto* o_max_m = run->add_option("--max-m", flags.max_m, "Largest index-tuple length");
  auto* o_out = run->add_option("--out", flags.out, "Output directory");
  auto* o_fmt = run->add_option("--format", flags.format, "Detail report format")->check(CLI::IsMember({"json", "csv"}));
  auto* o_threads = run->add_option("--threads", flags.threads, "Worker threads (0: OpenMP default)");
  run->add_flag("--serial", serial, "Use the serial reference runner");

  std::string matrix_path;
  auto* spectrum = app.add_subcommand("spectrum", "Classified spectrum of a matrix file");
  spectrum->add_option("matrix", matrix_path, "Matrix JSON file")->required();
  auto* region = app.add_subcommand("region", "Polyhedral region of a matrix file's spectrum");
  region->add_option("matrix", matrix_path, "Matrix JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      kreinval::SuiteConfig cfg;
      if (const char* env = std::getenv("KREINVAL_SEED")) {
        try {
          cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
          throw kreinval::Error(kreinval::ErrorKind::Config, std::string("KREINVAL_SEED is not an integer: ") + env);
        }
      }
      if (!config_path.empty()) cfg = kreinval::load_config(config_path, cfg);
      if (o_p->count()) cfg.p = flags.p;
      if (o_q->count()) cfg.q = flags.q;
      if (o_inst->count()) cfg.instances = flags.instances;
      if (o_seed->count()) cfg.seed = flags.seed;
      if (o_suite->count()) cfg.suites = flags.suites;
      if (o_tol->count()) cfg.tol_check = flags.tol_check;
      if (o_boost->count()) cfg.boost_scale = flags.boost_scale;
      if (o_max_m->count()) cfg.max_m = flags.max_m;
      if (o_out->count()) cfg.out = flags.out;
      if (o_fmt->count()) cfg.format = flags.format;
      if (o_threads->count()) cfg.threads = flags.threads;
      const auto summary = kreinval::run_to_directory(cfg, !serial);
      std::cout << summary.to_json().dump(2) << '\n';
      return summary.passed() ? 0 : kExitChecks;
    }
    const auto a = kreinval::read_matrix(matrix_path);
    const auto spec = kreinval::check_admissible(a);
    if (*spectrum) {
      std::cout << spectrum_json(spec).dump(2) << '\n';
    } else {
      std::cout << kreinval::region_to_json(kreinval::build_region(spec)).dump(2) << '\n';
    }
    return 0;
  } catch (const kreinval::Error& e) {
    std::cerr << "kreinval: " << kreinval::to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == kreinval::ErrorKind::Config ? kExitConfig : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "kreinval: " << e.what() << '\n';
    return kExitError;
  }
}
