#pragma once

#include <Eigen/Core>

#include <complex>
#include <utility>
#include <vector>

#include "cvdiscord/covariance.hpp"
#include "cvdiscord/fock.hpp"
#include "cvdiscord/measurement.hpp"

/// Independent brute-force reference route: operators built by exponentiating
/// truncated generators (scaling-and-squaring), full two-mode density
/// matrices, explicit projective measurements, and every derived quantity
/// recomputed by direct linear algebra. Slow by design; used by validation
/// suites, never by sweeps.
namespace cvdiscord::oracle {

enum class GeneratorKind { TwoModeSqueeze, TwoModeMix, SingleModeSqueeze, Displace };

struct GeneratorSpec {
  GeneratorKind kind;
  std::complex<double> parameter;  ///< real for squeezers/mixer, complex for D(α)
  int dim;                         ///< truncation, chosen with margin by the caller
};

/// Matrix exponential of the truncated generator. Fails if the unitarity
/// deficit on the inner half of the basis exceeds 1e-10 (insufficient margin).
FockMatrix operator_matrix(const GeneratorSpec& spec);

/// Two-mode squeezer/mixer kept in block form: both generators conserve a
/// charge (n1 - n2 and n1 + n2 respectively), so the exponential acts block
/// by block. Same scaling-and-squaring route, restricted to the exact blocks.
class TwoModeUnitary {
 public:
  static TwoModeUnitary squeezer(double lambda, int dim);
  static TwoModeUnitary mixer(double phi, int dim);

  int dim() const { return dim_; }
  double element(int h, int n, int s, int t) const;

  struct ColumnEntry {
    int n1, n2;
    double value;
  };
  std::vector<ColumnEntry> column(int s, int t) const;

  Eigen::MatrixXcd dense() const;
  double max_unitarity_deficit_inner() const;

 private:
  TwoModeUnitary(bool conserves_difference, int dim);
  int band_of(int n1, int n2) const;
  int local_index(int band, int n1) const;

  bool conserves_difference_;
  int dim_;
  std::vector<Eigen::MatrixXd> blocks_;
};

/// ϱ = Σ_{s,t} p_s(N1) p_t(N2) O|st><st|O† on the truncated basis; the
/// thermal tail plus exponentiation leakage is reported via cutoff.trace_error.
FockMatrix build_density_matrix(const TwoModeState& state, int dim);

/// Explicit Π_n-sandwich-and-partial-trace; no closed forms anywhere.
ConditionalEnsemble measure_and_reduce(const FockMatrix& rho, const MeasurementBasis& basis);

struct BruteQuantities {
  double mutual_information = 0.0;
  double conditional_entropy = 0.0;
  double discord = 0.0;  ///< for the given basis, no minimization
  double geometric_discord = 0.0;
};

/// All entropies via full spectral decompositions; geometric value via the
/// materialized Tr[(ϱ − ϱ^Π)²].
BruteQuantities brute_quantities(const FockMatrix& rho, const MeasurementBasis& basis);

/// Symmetrized second moments of a two-mode density matrix, quadrature order
/// (x1, p1, x2, p2), means subtracted.
Eigen::Matrix4d second_moments(const FockMatrix& rho);

/// Covariance matrix (and optionally the mean) of a single-mode matrix.
Eigen::Matrix2d mode_covariance(const Eigen::MatrixXcd& rho, Eigen::Vector2d* mean = nullptr);

double purity(const FockMatrix& rho);

/// Spectral entropy of a density matrix with tiny-negative clamping; detects
/// the conserved-charge block structure of the states built here and
/// decomposes block by block, falling back to a dense solve.
double entropy_of_density_matrix(const Eigen::MatrixXcd& m);

/// (d+, d-) from the spectrum of iΩσ; generic route, no standard-form formulas.
std::pair<double, double> symplectic_spectrum(const Eigen::Matrix4d& sigma);

/// Same, after partial transposition of mode B (p2 -> -p2).
std::pair<double, double> pt_symplectic_spectrum(const Eigen::Matrix4d& sigma);

}  // namespace cvdiscord::oracle
