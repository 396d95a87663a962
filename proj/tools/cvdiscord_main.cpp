#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>

#include "cvdiscord/covariance.hpp"
#include "cvdiscord/measurement.hpp"
#include "cvdiscord/sweep.hpp"
#include "cvdiscord/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitBadParams = 2;
constexpr int kExitTruncationDominated = 3;

struct PointArgs {
  std::string family = "sts";
  double n1 = 0.0, n2 = 0.0;
  double lambda = 0.0, phi = 0.0;
  double alpha = 0.0, alpha_im = 0.0;
  double r = 0.0;
  double eps = 1e-3;
  bool unsafe = false;
};

void add_point_options(CLI::App* cmd, PointArgs& args) {
  cmd->add_option("--family", args.family, "state family: sts or mts")
      ->check(CLI::IsMember({"sts", "mts"}));
  cmd->add_option("--n1", args.n1, "mean thermal photons, mode A input")->required();
  cmd->add_option("--n2", args.n2, "mean thermal photons, mode B input")->required();
  cmd->add_option("--lambda", args.lambda, "two-mode squeezing (sts)");
  cmd->add_option("--phi", args.phi, "mixing angle (mts)");
  cmd->add_option("--alpha", args.alpha, "measurement displacement, real part");
  cmd->add_option("--alpha-im", args.alpha_im, "measurement displacement, imaginary part");
  cmd->add_option("--r", args.r, "measurement squeezing");
  cmd->add_option("--eps", args.eps, "trace-error tolerance");
  cmd->add_flag("--unsafe", args.unsafe, "skip validated-range checks");
}

cvdiscord::TwoModeState state_from(const PointArgs& args) {
  using cvdiscord::TwoModeState;
  return args.family == "sts" ? TwoModeState::sts(args.n1, args.n2, args.lambda)
                              : TwoModeState::mts(args.n1, args.n2, args.phi);
}

void check_point_ranges(const PointArgs& args) {
  if (args.unsafe) return;
  const double abs_alpha = std::hypot(args.alpha, args.alpha_im);
  if (args.n1 > 2.0 || args.n2 > 2.0 || (args.family == "sts" && args.lambda > 0.6) ||
      abs_alpha > 8.0 || std::abs(args.r) > 0.6 || !(args.eps > 0.0 && args.eps <= 1e-3))
    throw std::invalid_argument("parameters outside validated ranges; pass --unsafe");
}

void print_kv(const char* key, double value) {
  std::printf("%s=%.12g\n", key, value);
}

int run_discord(const PointArgs& args) {
  check_point_ranges(args);
  const auto state = state_from(args);
  const cvdiscord::MeasurementBasis basis{{args.alpha, args.alpha_im}, args.r};
  const auto start = std::chrono::steady_clock::now();
  const auto cm = cvdiscord::standard_form(state);
  const auto dr = cvdiscord::non_gaussian_discord(state, basis, args.eps);
  const auto geo = cvdiscord::non_gaussian_geometric_discord(state, basis, args.eps);
  const long wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();

  std::printf("family=%s\n", args.family.c_str());
  print_kv("n1", state.n1);
  print_kv("n2", state.n2);
  print_kv("lambda", args.family == "sts" ? state.strength : 0.0);
  print_kv("phi", args.family == "mts" ? state.strength : 0.0);
  print_kv("alpha", args.alpha);
  print_kv("alpha_im", args.alpha_im);
  print_kv("r", args.r);
  print_kv("eps", args.eps);
  std::printf("cutoff=%d\n", dr.cutoff.dim);
  print_kv("trace_err", dr.cutoff.trace_error);
  print_kv("mi", dr.mutual_information);
  print_kv("dg", dr.gaussian_discord);
  print_kv("dng", dr.non_gaussian_discord);
  print_kv("cond_entropy", dr.conditional_entropy);
  print_kv("geo_g", cvdiscord::gaussian_geometric_discord(cm));
  print_kv("geo_ng", geo.value);
  print_kv("ent_err_bound", dr.entropy_error_bound);
  std::printf("wall_ms=%ld\n", wall);
  return (dr.truncation_dominated || geo.truncation_dominated) ? kExitTruncationDominated
                                                               : kExitOk;
}

int run_geometric(const PointArgs& args) {
  check_point_ranges(args);
  const auto state = state_from(args);
  const cvdiscord::MeasurementBasis basis{{args.alpha, args.alpha_im}, args.r};
  const auto cm = cvdiscord::standard_form(state);
  const auto geo = cvdiscord::non_gaussian_geometric_discord(state, basis, args.eps);

  std::printf("family=%s\n", args.family.c_str());
  print_kv("n1", state.n1);
  print_kv("n2", state.n2);
  print_kv("lambda", args.family == "sts" ? state.strength : 0.0);
  print_kv("phi", args.family == "mts" ? state.strength : 0.0);
  print_kv("alpha", args.alpha);
  print_kv("r", args.r);
  std::printf("cutoff=%d\n", geo.cutoff.dim);
  print_kv("purity", geo.purity);
  print_kv("geo_g", cvdiscord::gaussian_geometric_discord(cm));
  print_kv("geo_ng", geo.value);
  return geo.truncation_dominated ? kExitTruncationDominated : kExitOk;
}

int run_sweep_cmd(const std::string& config_path, const std::string& output_override,
                  bool unsafe) {
  cvdiscord::SweepConfig cfg = cvdiscord::parse_sweep_config(config_path);
  if (!output_override.empty()) cfg.output = output_override;
  if (unsafe) cfg.unsafe = true;
  const auto records = cvdiscord::run_sweep(cfg);
  size_t failed = 0;
  for (const auto& r : records)
    if (!r.error.empty()) ++failed;
  std::printf("wrote %zu rows to %s (%zu failed)\n", records.size(), cfg.output.c_str(),
              failed);
  return kExitOk;
}

int run_validate(const std::string& level) {
  using namespace cvdiscord::validate;
  const Report report = run(level == "full" ? Level::Full : Level::Fast);
  for (const auto& s : report.suites)
    std::printf("%-28s worst=%.3e threshold=%.3e %s\n", s.name.c_str(), s.worst,
                s.threshold, s.passed ? "PASS" : "FAIL");
  return report.all_passed() ? kExitOk : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian and non-Gaussian quantum discord for two-mode Gaussian states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cvdiscord::version_string());

  PointArgs discord_args;
  CLI::App* discord_cmd =
      app.add_subcommand("discord", "single-point discord report (key=value lines)");
  add_point_options(discord_cmd, discord_args);

  PointArgs geometric_args;
  CLI::App* geometric_cmd =
      app.add_subcommand("geometric", "single-point geometric discord report");
  add_point_options(geometric_cmd, geometric_args);

  std::string config_path, output_override;
  bool sweep_unsafe = false;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep from a config");
  sweep_cmd->add_option("--config", config_path, "sweep config file")->required();
  sweep_cmd->add_option("--output", output_override, "override the configured output path");
  sweep_cmd->add_flag("--unsafe", sweep_unsafe, "skip validated-range checks");

  std::string level = "fast";
  CLI::App* validate_cmd = app.add_subcommand("validate", "run cross-route validation");
  validate_cmd->add_option("--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadParams;
  }

  try {
    if (discord_cmd->parsed()) return run_discord(discord_args);
    if (geometric_cmd->parsed()) return run_geometric(geometric_args);
    if (sweep_cmd->parsed()) return run_sweep_cmd(config_path, output_override, sweep_unsafe);
    if (validate_cmd->parsed()) return run_validate(level);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadParams;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadParams;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidationFailed;
  }
  return kExitOk;
}
