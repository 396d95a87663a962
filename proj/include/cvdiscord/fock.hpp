#pragma once

#include <Eigen/Core>

#include <complex>

#include "cvdiscord/covariance.hpp"

/// Truncated Fock-space kernels: thermal statistics, closed-form matrix
/// elements of the two-mode squeezer/mixer and the single-mode squeezer and
/// displacement operators, composed measurement-basis elements, and cutoff
/// selection.
///
/// Conventions (all gated by the exponentiated-generator oracle):
///   S(λ) = exp{λ (a1† a2† − a1 a2)}        two-mode squeezer, λ ≥ 0
///   U(φ) = exp{φ (a1† a2 − a1 a2†)}        two-mode mixer, φ in [0, π/2]
///   S(r) = exp{(r/2)(a² − (a†)²)}          single-mode squeezer, r real
///   D(α) = exp{α a† − α* a}                displacement
namespace cvdiscord {

/// Hard cap on any Fock index; exceeding it throws instead of overflowing.
inline constexpr int kHardIndexCap = 4096;

struct FockCutoff {
  int dim = 1;               ///< basis size per mode, states |0> .. |dim-1>
  double trace_error = 0.0;  ///< bound on 1 - Tr rho at this cutoff
};

/// Dense complex matrix over a truncated Fock basis. Two-mode matrices are
/// dim² x dim² with pair index h*dim + n for |h>_A ⊗ |n>_B.
struct FockMatrix {
  Eigen::MatrixXcd entries;
  FockCutoff cutoff;
  bool hermitian = false;
};

/// Measurement basis Π_n = D(α) S(r) |n><n| S(r)† D(α)†.
struct MeasurementBasis {
  std::complex<double> alpha{0.0, 0.0};
  double r = 0.0;

  bool is_number_basis() const { return alpha == std::complex<double>(0.0, 0.0) && r == 0.0; }
};

/// Thermal photon-number distribution N^s / (1+N)^{s+1}; log-space for large s.
double thermal_pmf(double mean_photons, int s);

/// Smallest S with P(n > S) = (N/(1+N))^{S+1} <= tail.
int thermal_occupation_bound(double mean_photons, double tail);

/// <h n| S(λ) |s t>; exactly 0 unless t + h == s + n.
double two_mode_squeezer_element(int h, int n, int s, int t, double lambda);

/// <h n| U(φ) |s t>; exactly 0 unless h + n == s + t.
double two_mode_mixer_element(int h, int n, int s, int t, double phi);

/// <k| S(r) |q>; exactly 0 unless k - q is even.
double single_mode_squeezer_element(int k, int q, double r);

/// <k| D(α) |q> via the associated-Laguerre closed form.
std::complex<double> displacement_element(int k, int q, std::complex<double> alpha);

/// Full dim x dim matrices of S(r) and D(α), built by the stable two-term
/// recurrences seeded with the closed-form first column. These are what the
/// conditional-state pipeline consumes; the per-element closed forms above
/// stay as an independent cross-check route.
Eigen::MatrixXd squeezer_matrix(double r, int dim);
Eigen::MatrixXcd displacement_matrix(std::complex<double> alpha, int dim);

/// W = D(α) S(r) at the given cutoff (exact identity for the number basis).
Eigen::MatrixXcd measurement_matrix(const MeasurementBasis& basis, int dim);

enum class TwoModeOp { Squeezer, Mixer };

/// O'_{hk}(st) = Σ_q <k| D(α)S(r) |q> <h q| O |st>, q-sum truncated at dim.
/// If tail_fraction is given it receives |last 10% of the q-sum| / |total|.
std::complex<double> composed_element(TwoModeOp op, double strength,
                                      const MeasurementBasis& basis, int h, int k, int s,
                                      int t, int dim, double* tail_fraction = nullptr);

/// Smallest per-mode dimension such that the truncated state, after the
/// local transformation implied by the basis, keeps 1 - Tr rho <= eps.
/// The bound combines the analytic mode-A thermal tail with the numerically
/// built photon distribution of the transformed mode-B marginal.
FockCutoff choose_cutoff(const TwoModeState& state, const MeasurementBasis& basis,
                         double eps);

namespace detail {

/// Neumaier compensated accumulator in long double; the alternating
/// factorial sums near λ ~ 0.5 with indices ≳ 20 cancel catastrophically
/// in plain double.
struct CompensatedSum {
  long double sum = 0.0L;
  long double comp = 0.0L;

  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs((double)sum) >= std::fabs((double)x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  long double value() const { return sum + comp; }
};

long double log_factorial(int n);
void check_index(int n);

}  // namespace detail

}  // namespace cvdiscord
