#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cvdiscord/covariance.hpp"
#include "cvdiscord/measurement.hpp"

/// Parameter sweeps: plain-text configs in, CSV + manifest out. Row order is
/// lexicographic over the grid regardless of the worker-pool size, and all
/// number formatting is fixed, so identical configs produce byte-identical
/// CSV at any parallelism degree (with timing off, the default).
namespace cvdiscord {

struct SweepConfig {
  StateFamily family = StateFamily::Sts;
  std::vector<double> n1;
  std::vector<double> n2;        ///< cartesian axis; ignored when q or same is set
  std::vector<double> q;         ///< ratios N2/N1, overrides n2
  bool n2_same = true;           ///< N2 = N1 pointwise (default)
  std::vector<double> strength;  ///< lambda (sts) or phi (mts) grid
  std::vector<double> alpha{0.0};
  std::vector<double> r{0.0};
  double eps = 1e-3;
  std::string output = "sweep.csv";
  bool timing = false;
  bool unsafe = false;
  int threads = 0;  ///< 0 = hardware default; CVDISCORD_THREADS overrides
  int schema_version = 1;
  std::string raw_text;  ///< config file bytes, hashed into the manifest
};

struct GridPoint {
  TwoModeState state;
  double alpha = 0.0;
  double r = 0.0;
};

struct SweepRecord {
  StateFamily family = StateFamily::Sts;
  double n1 = 0, n2 = 0, lambda = 0, phi = 0, alpha = 0, r = 0, eps = 0;
  int cutoff = 0;
  double trace_err = 0, mi = 0, dg = 0, dng = 0, geo_g = 0, geo_ng = 0, ent_err_bound = 0;
  long wall_ms = 0;
  std::string error;  ///< empty on success; row kept either way
};

SweepConfig parse_sweep_config(const std::string& path);
SweepConfig parse_sweep_config_text(std::string_view text);

/// Throws std::invalid_argument when the grid leaves the validated ranges
/// (N <= 2, lambda <= 0.6, |alpha| <= 8, r <= 0.6) and unsafe is not set.
void check_ranges(const SweepConfig& config);

std::vector<GridPoint> expand_grid(const SweepConfig& config);

SweepRecord compute_record(const GridPoint& point, double eps, bool timing);

inline constexpr std::string_view kCsvHeader =
    "family,n1,n2,lambda,phi,alpha,r,eps,cutoff,trace_err,mi,dg,dng,geo_g,geo_ng,"
    "ent_err_bound,wall_ms,error";

std::string render_csv(const std::vector<SweepRecord>& records);

/// Runs the full sweep (worker pool over grid points, deterministic output),
/// writes the CSV and `<output>.manifest.json`. Returns the records.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);
std::string version_string();
int resolve_threads(int configured);

}  // namespace cvdiscord
