// otmss: sweep | verify | show-config

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "otmss/errors.hpp"
#include "otmss/pipeline/config.hpp"
#include "otmss/pipeline/outputs.hpp"
#include "otmss/pipeline/sweep.hpp"
#include "otmss/pipeline/verify.hpp"

namespace {

enum Exit : int { ok = 0, config_error = 1, runtime_failure = 2, verification_failure = 3 };

struct Overrides {
  std::string config_path;
  std::string form;
  std::string coupling_power;
  std::string eval_point;
  std::optional<int> k_points;
};

otmss::pipeline::SweepConfig resolve(const Overrides& o) {
  using namespace otmss::pipeline;
  SweepConfig cfg = load_config(o.config_path.empty()
                                    ? std::nullopt
                                    : std::optional<std::filesystem::path>(o.config_path));
  if (!o.form.empty()) set_config_value(cfg, "form", o.form);
  if (!o.coupling_power.empty()) set_config_value(cfg, "coupling_power", o.coupling_power);
  if (!o.eval_point.empty()) set_config_value(cfg, "eval_point", o.eval_point);
  if (o.k_points) set_config_value(cfg, "k_points", std::to_string(*o.k_points));
  cfg.validate();
  return cfg;
}

int run_sweep_command(const Overrides& o, const std::string& out_dir) {
  using namespace otmss::pipeline;
  const auto cfg = resolve(o);
  const auto report = run_sweep(cfg);
  const auto files = write_outputs(report, out_dir);
  const auto& s = report.summary;
  std::printf("records: %zu  failures: %zu  max|gamma-1|: %.3e  max|beta|^2: %.3e\n",
              report.records.size(), s.failures.size(), s.max_gamma_deviation, s.max_occupation);
  if (s.fit_valid) std::printf("fitted A_s: %.6e  n_s: %.6f\n", s.fitted_amplitude, s.fitted_tilt);
  std::printf("r variation: %.3e  phi variation: %.3e  (%.3f s)\n", s.r_variation,
              s.phi_variation, report.elapsed_seconds);
  for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
  for (const auto& f : s.failures) std::fprintf(stderr, "failed k = %.6e: %s\n", f.k, f.reason.c_str());
  return s.failures.empty() ? Exit::ok : Exit::runtime_failure;
}

int run_verify_command(const Overrides& o) {
  using namespace otmss::pipeline;
  const auto report = run_verify(resolve(o));
  for (const auto& c : report.checks) {
    std::printf("[%s] %-20s %s (%.2f s)\n", c.passed ? (c.degraded ? "PASS*" : "PASS") : "FAIL",
                c.name.c_str(), c.detail.c_str(), c.seconds);
  }
  std::printf("%s\n", report.passed() ? "verify: all checks passed" : "verify: FAILED");
  return report.passed() ? Exit::ok : Exit::verification_failure;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open two-mode squeezed state power spectrum pipeline"};
  app.require_subcommand(1);

  Overrides o;
  std::string out_dir = "out";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "key = value config file");
    sub->add_option("--form", o.form, "conformal | transformed | closed-reference");
    sub->add_option("--coupling-power", o.coupling_power, "literal | hamiltonian-consistent");
    sub->add_option("--k-points", o.k_points, "number of log-spaced wavenumbers");
    sub->add_option("--eval", o.eval_point, "super-horizon | horizon-crossing");
  };

  auto* sweep = app.add_subcommand("sweep", "run the k sweep and write outputs");
  add_common(sweep);
  sweep->add_option("--out", out_dir, "output directory")->capture_default_str();
  auto* verify = app.add_subcommand("verify", "run the built-in oracle checks");
  add_common(verify);
  auto* show = app.add_subcommand("show-config", "print the resolved configuration");
  add_common(show);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::config_error;
  }

  try {
    if (*sweep) return run_sweep_command(o, out_dir);
    if (*verify) return run_verify_command(o);
    if (*show) {
      std::cout << otmss::pipeline::echo_config(resolve(o));
      return Exit::ok;
    }
  } catch (const otmss::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return Exit::config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::runtime_failure;
  }
  return Exit::runtime_failure;
}
