#pragma once

#include <string>
#include <vector>

#include "cvdiscord/covariance.hpp"
#include "cvdiscord/fock.hpp"

/// Cross-route validation suites behind `cvdiscord validate`: closed-form
/// kernels against exponentiated generators, the conditional-state pipeline
/// against explicit projector sandwiches, derived covariance formulas against
/// measured second moments, and the appendix-level properties (diagonality,
/// phase invariance, large-displacement convergence).
namespace cvdiscord::validate {

enum class Level { Fast, Full };

/// Test-harness fault injection: scales the closed-form two-mode squeezer
/// elements inside the kernel suite so a tampered kernel is provably caught.
struct FaultInjection {
  double two_mode_squeezer_scale = 1.0;
};

struct SuiteResult {
  std::string name;
  double worst = 0.0;      ///< worst observed discrepancy
  double threshold = 0.0;  ///< failure above this
  bool passed = true;
};

struct Report {
  std::vector<SuiteResult> suites;
  bool all_passed() const;
};

Report run(Level level, const FaultInjection& fault = {});

/// Worst discrepancy between the conditional-state pipeline at the cutoff
/// chosen for eps and the explicit projector sandwich on the oracle state at
/// oracle_dim. Raw (probability-weighted) blocks and their traces are
/// compared over the common index window, on the interior three quarters of
/// the outcome range (the truncated measurement matrices are only faithful
/// away from the edge).
double ensemble_discrepancy(const TwoModeState& state, const MeasurementBasis& basis,
                            double eps, int oracle_dim);

}  // namespace cvdiscord::validate
