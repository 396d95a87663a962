#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

#include "cvdiscord/covariance.hpp"
#include "cvdiscord/fock.hpp"

/// Conditional states, outcome probabilities and the non-Gaussian quantum
/// and geometric discord for number / squeezed-number / displaced-number
/// measurements Π_n = D(α)S(r)|n><n|S(r)†D(α)† on mode B.
namespace cvdiscord {

struct ConditionalOutcome {
  int n = 0;
  double p = 0.0;
  Eigen::MatrixXcd state;  ///< unit trace (normalized by p); empty when p < 1e-14
};

struct ConditionalEnsemble {
  std::vector<ConditionalOutcome> outcomes;  ///< one per n < cutoff.dim, in order
  double residual = 0.0;                     ///< 1 - Σ p_n
  FockCutoff cutoff;
  bool truncation_dominated = false;
};

struct DiscordResult {
  double mutual_information = 0.0;
  double gaussian_discord = 0.0;
  double conditional_entropy = 0.0;
  double non_gaussian_discord = 0.0;
  double entropy_error_bound = 0.0;  ///< residual-mass bound, in nats
  MeasurementBasis basis;
  FockCutoff cutoff;
  bool truncation_dominated = false;
};

struct GeometricResult {
  double purity = 0.0;  ///< Tr[rho^2], Gaussian closed form
  double value = 0.0;   ///< Tr[rho^2] - Σ_n p_n^2 Tr[rho_{A,n}^2]
  FockCutoff cutoff;
  bool truncation_dominated = false;
};

/// One mode-A conditional state per outcome n < cutoff.dim, with p_n.
/// Entries follow the photon-statistics expansion over the operator's
/// conserved-charge bands; no renormalization hides truncation (the missing
/// mass shows up in residual).
ConditionalEnsemble conditional_states(const TwoModeState& state,
                                       const MeasurementBasis& basis,
                                       const FockCutoff& cutoff);

/// Single outcome (p_n, state); cheaper than the full ensemble. The state is
/// normalized when p_n >= 1e-14 and left as the raw block otherwise.
std::pair<double, Eigen::MatrixXcd> conditional_state_at(const TwoModeState& state,
                                                         const MeasurementBasis& basis,
                                                         int n, const FockCutoff& cutoff);

/// Number-basis conditional entropy from the joint photon statistics,
/// H(p(A,B)) - H(p(B)). Valid for the bare number basis only.
double number_basis_conditional_entropy(const TwoModeState& state,
                                        const FockCutoff& cutoff);

/// -Σ ξ ln ξ over the self-adjoint spectrum, eigenvalues clamped to [0,1].
/// Requires a Hermitian, PSD (within 1e-10), unit-trace (within 1e-10) input;
/// throws if an eigenvalue falls below -1e-8.
double von_neumann_entropy(const Eigen::MatrixXcd& m);

/// Non-Gaussian discord h(√I2) - h(d-) - h(d+) + S^Π(A|B). Uses the joint
/// photon-statistics shortcut for the bare number basis, spectral entropies
/// otherwise. Product states short-circuit to exactly zero.
DiscordResult non_gaussian_discord(const TwoModeState& state, const MeasurementBasis& basis,
                                   double eps);

/// Non-Gaussian geometric discord Tr[rho^2] - Σ_n p_n^2 Tr[rho_{A,n}^2].
GeometricResult non_gaussian_geometric_discord(const TwoModeState& state,
                                               const MeasurementBasis& basis, double eps);

/// Max over θ and n of the l∞ distance between the sorted spectra of the
/// conditional states at α e^{iθ} and at α. Contract: <= 1e-9.
double phase_invariance_check(const TwoModeState& state, double alpha_abs,
                              std::span<const double> thetas, std::span<const int> ns,
                              double eps);

/// For each α, max over n of the trace distance between the conditional
/// states at outcome n and at outcome 0, after removing each state's first
/// moments. The outcomes differ by phase-space translations that decay only
/// like 1/α and carry no spectral content; what converges (and what the
/// discord sees) is the translation-free shape.
std::vector<double> alpha_convergence_check(const TwoModeState& state,
                                            std::span<const double> alphas,
                                            std::span<const int> ns, double eps);

/// (1/2) Σ |eig(a - b)| for Hermitian a, b.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

namespace detail {

/// Photon-statistics expansion of O (ν ⊗ ν) O† grouped by the operator's
/// conserved charge: n1 − n2 for the squeezer, n1 + n2 for the mixer.
/// Within band `key`, the mode-B index is q(h) = h + key (Sts) or key − h
/// (Mts), and M_{hk} = Σ_{(s,t) in band} p_s p_t f_h f_k with
/// f_h = <h q(h)| O |s t>.
struct Band {
  int key = 0;
  int h_lo = 0;
  Eigen::MatrixXd m;  // indexed by h - h_lo
};

struct BandModel {
  StateFamily family;
  int dim = 0;
  std::vector<Band> bands;

  int q_of(const Band& band, int h) const {
    return family == StateFamily::Sts ? h + band.key : band.key - h;
  }
};

BandModel build_band_model(const TwoModeState& state, int dim);

/// Assemble p_n * rho_{A,n} (unnormalized) for outcome n given W = D(α)S(r).
Eigen::MatrixXcd assemble_outcome(const BandModel& model, const Eigen::MatrixXcd& w, int n);

}  // namespace detail

}  // namespace cvdiscord
