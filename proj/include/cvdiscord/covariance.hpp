#pragma once

#include <Eigen/Dense>

#include <stdexcept>

/// Covariance-matrix level computations for two-mode Gaussian states in
/// standard form: entropies, symplectic invariants, Gaussian discord and
/// Gaussian geometric discord. Vacuum variance convention: 1/2, so a
/// single-mode thermal state with mean photon number N has variance N + 1/2
/// and the entropy of a mode with symplectic eigenvalue 1/2 is zero.
/// All entropies are in nats.
namespace cvdiscord {

enum class StateFamily { Sts, Mts };

/// Two thermal modes processed by a two-mode squeezer (Sts, strength = λ)
/// or a beam-splitter-like mixer (Mts, strength = φ).
struct TwoModeState {
  StateFamily family = StateFamily::Sts;
  double n1 = 0.0;        ///< mean thermal photons, mode A input
  double n2 = 0.0;        ///< mean thermal photons, mode B input
  double strength = 0.0;  ///< λ ≥ 0 for Sts, φ in [0, π/2] for Mts

  static TwoModeState sts(double n1, double n2, double lambda);
  static TwoModeState mts(double n1, double n2, double phi);
};

/// Standard-form covariance matrix
///   σ = [[A, C], [Cᵀ, B]],  A = diag(a,a), B = diag(b,b), C = diag(c1,c2),
/// quadrature order (x1, p1, x2, p2).
struct StandardFormCM {
  double a = 0.5;
  double b = 0.5;
  double c1 = 0.0;
  double c2 = 0.0;

  Eigen::Matrix4d matrix() const;
  Eigen::Matrix2d block_a() const { return Eigen::Vector2d(a, a).asDiagonal(); }
  Eigen::Matrix2d block_b() const { return Eigen::Vector2d(b, b).asDiagonal(); }
  Eigen::Matrix2d block_c() const { return Eigen::Vector2d(c1, c2).asDiagonal(); }
};

/// Symplectic invariants I1..I4 and eigenvalues d± of a standard-form CM.
struct SymplecticData {
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;
  double i4 = 0.0;
  double delta = 0.0;  ///< I1 + I2 + 2 I3
  double d_plus = 0.0;
  double d_minus = 0.0;
};

/// Covariance matrix [[mx, mxp], [mxp, mp]] of the single-mode Gaussian
/// state seeding a Gaussian POVM on mode B.
struct MeasurementCM {
  double mx = 0.5;
  double mp = 0.5;
  double mxp = 0.0;

  Eigen::Matrix2d matrix() const;
  bool valid(double slack = 1e-12) const { return mx * mp - mxp * mxp >= 0.25 - slack; }

  static MeasurementCM heterodyne() { return {0.5, 0.5, 0.0}; }
};

/// Entropy of a thermal mode with symplectic eigenvalue x ≥ 1/2:
/// (x+1/2)ln(x+1/2) − (x−1/2)ln(x−1/2), exactly 0 at x = 1/2.
/// Throws std::domain_error for x < 1/2 − 1e-12.
double mode_entropy(double x);

/// Closed-form standard-form CM of a two-mode squeezed/mixed thermal state.
StandardFormCM standard_form(const TwoModeState& state);

bool is_physical(const StandardFormCM& cm, double slack = 1e-12);

SymplecticData symplectic_data(const StandardFormCM& cm);

/// I(A:B) = h(√I1) + h(√I2) − h(d+) − h(d−).
double mutual_information(const StandardFormCM& cm);

/// Schur complement A − C (B + σ_M)⁻¹ Cᵀ: CM of mode A conditioned on a
/// Gaussian measurement of mode B. Outcome-independent by construction.
Eigen::Matrix2d conditional_cm_after_measurement(const StandardFormCM& cm,
                                                 const MeasurementCM& m);

/// Gaussian discord, closed form with the heterodyne optimum mx=mp=1/2.
/// Requires the |c2| = |c1| class (throws std::invalid_argument otherwise).
double gaussian_discord(const StandardFormCM& cm);

/// Gaussian discord by direct minimization of h(√det σ_P) over pure
/// measurement seeds σ_M(s,θ); valid for any physical CM.
double gaussian_discord_numeric(const StandardFormCM& cm);

/// Gaussian state purity 1/(4 √det σ).
double gaussian_purity(const StandardFormCM& cm);

/// Squared Hilbert–Schmidt distance ‖ϱ_AB − ϱ_P ⊗ ϱ_M‖² for a given
/// measurement seed, via Gaussian overlaps Tr[ϱ1 ϱ2] = 1/√det(σ1+σ2).
double gaussian_geometric_objective(const StandardFormCM& cm, const MeasurementCM& m);

/// Analytic minimizer mx = mp = √(ab)(√(4ab−3c²)+√(ab))/(3a), mxp = 0, for
/// the |c2| = |c1| class. Throws std::domain_error if 4ab − 3c² < 0.
MeasurementCM geometric_minimizer_cm(const StandardFormCM& cm);

/// Gaussian geometric discord: the objective at the analytic minimizer.
double gaussian_geometric_discord(const StandardFormCM& cm);

/// Smaller symplectic eigenvalue after partial transposition of mode B
/// (uses Δ̃ = I1 + I2 − 2 I3). The state is PPT-separable iff ≥ 1/2.
double pt_min_symplectic_eigenvalue(const StandardFormCM& cm);

bool is_separable(const StandardFormCM& cm);

}  // namespace cvdiscord
