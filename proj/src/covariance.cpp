#include "cvdiscord/covariance.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace cvdiscord {

namespace {
constexpr double kPi = std::numbers::pi;
}

namespace {

void check_thermal_numbers(double n1, double n2) {
  if (!(n1 >= 0.0) || !(n2 >= 0.0))
    throw std::invalid_argument("thermal photon numbers must be nonnegative");
}

}  // namespace

TwoModeState TwoModeState::sts(double n1, double n2, double lambda) {
  check_thermal_numbers(n1, n2);
  if (!(lambda >= 0.0)) throw std::invalid_argument("squeezing strength must be nonnegative");
  return {StateFamily::Sts, n1, n2, lambda};
}

TwoModeState TwoModeState::mts(double n1, double n2, double phi) {
  check_thermal_numbers(n1, n2);
  if (!(phi >= 0.0 && phi <= kPi / 2 + 1e-12))
    throw std::invalid_argument("mixing angle must lie in [0, pi/2]");
  return {StateFamily::Mts, n1, n2, phi};
}

Eigen::Matrix4d StandardFormCM::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = m(1, 1) = a;
  m(2, 2) = m(3, 3) = b;
  m(0, 2) = m(2, 0) = c1;
  m(1, 3) = m(3, 1) = c2;
  return m;
}

Eigen::Matrix2d MeasurementCM::matrix() const {
  Eigen::Matrix2d m;
  m << mx, mxp, mxp, mp;
  return m;
}

double mode_entropy(double x) {
  if (x < 0.5 - 1e-12) throw std::domain_error("mode_entropy: symplectic eigenvalue below 1/2");
  const double xm = x - 0.5;
  if (xm <= 0.0) return 0.0;  // x log x -> 0
  return (x + 0.5) * std::log(x + 0.5) - xm * std::log(xm);
}

StandardFormCM standard_form(const TwoModeState& state) {
  const double na = state.n1 + 0.5;
  const double nb = state.n2 + 0.5;
  StandardFormCM cm;
  if (state.family == StateFamily::Sts) {
    const double ch = std::cosh(state.strength);
    const double sh = std::sinh(state.strength);
    cm.a = na * ch * ch + nb * sh * sh;
    cm.b = na * sh * sh + nb * ch * ch;
    cm.c1 = (state.n1 + state.n2 + 1.0) * ch * sh;
    cm.c2 = -cm.c1;
  } else {
    const double cs = std::cos(state.strength);
    const double sn = std::sin(state.strength);
    cm.a = na * cs * cs + nb * sn * sn;
    cm.b = na * sn * sn + nb * cs * cs;
    cm.c1 = (state.n2 - state.n1) * cs * sn;
    cm.c2 = cm.c1;
  }
  return cm;
}

bool is_physical(const StandardFormCM& cm, double slack) {
  if (cm.a < 0.5 - slack || cm.b < 0.5 - slack) return false;
  const double i4 = (cm.a * cm.b - cm.c1 * cm.c1) * (cm.a * cm.b - cm.c2 * cm.c2);
  if (i4 < -slack) return false;
  return symplectic_data(cm).d_minus >= 0.5 - slack;
}

SymplecticData symplectic_data(const StandardFormCM& cm) {
  SymplecticData d;
  d.i1 = cm.a * cm.a;
  d.i2 = cm.b * cm.b;
  d.i3 = cm.c1 * cm.c2;
  d.i4 = (cm.a * cm.b - cm.c1 * cm.c1) * (cm.a * cm.b - cm.c2 * cm.c2);
  d.delta = d.i1 + d.i2 + 2.0 * d.i3;
  double disc = d.delta * d.delta - 4.0 * d.i4;
  if (disc < -1e-10) throw std::domain_error("symplectic_data: unphysical covariance matrix");
  disc = std::max(disc, 0.0);
  const double root = std::sqrt(disc);
  d.d_plus = std::sqrt(0.5 * (d.delta + root));
  d.d_minus = std::sqrt(std::max(0.5 * (d.delta - root), 0.0));
  return d;
}

double mutual_information(const StandardFormCM& cm) {
  const SymplecticData d = symplectic_data(cm);
  return mode_entropy(std::sqrt(d.i1)) + mode_entropy(std::sqrt(d.i2)) -
         mode_entropy(d.d_plus) - mode_entropy(d.d_minus);
}

Eigen::Matrix2d conditional_cm_after_measurement(const StandardFormCM& cm,
                                                 const MeasurementCM& m) {
  const Eigen::Matrix2d bm = cm.block_b() + m.matrix();
  if (std::abs(bm.determinant()) < 1e-300)
    throw std::domain_error("conditional CM: singular B + sigma_M");
  const Eigen::Matrix2d c = cm.block_c();
  return cm.block_a() - c * bm.inverse() * c.transpose();
}

namespace {

bool symmetric_cross_class(const StandardFormCM& cm) {
  return std::abs(std::abs(cm.c1) - std::abs(cm.c2)) <= 1e-12 * std::max(1.0, std::abs(cm.c1));
}

double discord_measurement_term(const StandardFormCM& cm, const MeasurementCM& m) {
  const Eigen::Matrix2d p = conditional_cm_after_measurement(cm, m);
  return mode_entropy(std::sqrt(p.determinant()));
}

double discord_from_term(const StandardFormCM& cm, double term) {
  const SymplecticData d = symplectic_data(cm);
  return mode_entropy(std::sqrt(d.i2)) - mode_entropy(d.d_minus) - mode_entropy(d.d_plus) + term;
}

MeasurementCM pure_seed(double s, double theta) {
  const double ch = std::cosh(2.0 * s);
  const double sh = std::sinh(2.0 * s);
  const double c2t = std::cos(2.0 * theta);
  const double s2t = std::sin(2.0 * theta);
  return {0.5 * (ch + sh * c2t), 0.5 * (ch - sh * c2t), 0.5 * sh * s2t};
}

}  // namespace

double gaussian_discord(const StandardFormCM& cm) {
  if (!symmetric_cross_class(cm))
    throw std::invalid_argument("gaussian_discord closed form requires |c2| = |c1|");
  return discord_from_term(cm, discord_measurement_term(cm, MeasurementCM::heterodyne()));
}

double gaussian_discord_numeric(const StandardFormCM& cm) {
  // Pure measurement seeds suffice: the optimum in this class is a pure
  // (coherent-state) POVM. Coarse grid, then shrinking local refinements.
  double best = discord_measurement_term(cm, pure_seed(0.0, 0.0));
  double bs = 0.0, bt = 0.0;
  for (int i = 0; i <= 24; ++i) {
    const double s = 1.2 * i / 24.0;
    for (int j = 0; j < 16; ++j) {
      const double theta = kPi * j / 16.0;
      const double v = discord_measurement_term(cm, pure_seed(s, theta));
      if (v < best) best = v, bs = s, bt = theta;
    }
  }
  double hs = 0.05, ht = kPi / 16.0;
  for (int round = 0; round < 6; ++round) {
    for (int i = -4; i <= 4; ++i) {
      for (int j = -4; j <= 4; ++j) {
        const double s = std::max(0.0, bs + hs * i / 4.0);
        const double theta = bt + ht * j / 4.0;
        const double v = discord_measurement_term(cm, pure_seed(s, theta));
        if (v < best) best = v, bs = s, bt = theta;
      }
    }
    hs /= 4.0;
    ht /= 4.0;
  }
  return discord_from_term(cm, best);
}

double gaussian_purity(const StandardFormCM& cm) {
  const double det = (cm.a * cm.b - cm.c1 * cm.c1) * (cm.a * cm.b - cm.c2 * cm.c2);
  return 1.0 / (4.0 * std::sqrt(det));
}

double gaussian_geometric_objective(const StandardFormCM& cm, const MeasurementCM& m) {
  const Eigen::Matrix2d sp = conditional_cm_after_measurement(cm, m);
  const Eigen::Matrix2d sm = m.matrix();
  const Eigen::Matrix4d sab = cm.matrix();
  Eigen::Matrix4d prod = Eigen::Matrix4d::Zero();
  prod.topLeftCorner<2, 2>() = sp;
  prod.bottomRightCorner<2, 2>() = sm;
  const double t1 = 1.0 / std::sqrt((2.0 * sab).determinant());
  const double t2 = 1.0 / std::sqrt((2.0 * prod).determinant());
  const double t3 = 2.0 / std::sqrt((sab + prod).determinant());
  return t1 + t2 - t3;
}

MeasurementCM geometric_minimizer_cm(const StandardFormCM& cm) {
  if (!symmetric_cross_class(cm))
    throw std::invalid_argument("geometric minimizer requires |c2| = |c1|");
  const double ab = cm.a * cm.b;
  const double c2 = cm.c1 * cm.c1;
  const double disc = 4.0 * ab - 3.0 * c2;
  if (disc < 0.0) throw std::domain_error("geometric minimizer: 4ab - 3c^2 < 0");
  const double m = std::sqrt(ab) * (std::sqrt(disc) + std::sqrt(ab)) / (3.0 * cm.a);
  return {m, m, 0.0};
}

double gaussian_geometric_discord(const StandardFormCM& cm) {
  return gaussian_geometric_objective(cm, geometric_minimizer_cm(cm));
}

double pt_min_symplectic_eigenvalue(const StandardFormCM& cm) {
  const SymplecticData d = symplectic_data(cm);
  const double delta_pt = d.i1 + d.i2 - 2.0 * d.i3;
  double disc = delta_pt * delta_pt - 4.0 * d.i4;
  disc = std::max(disc, 0.0);
  return std::sqrt(std::max(0.5 * (delta_pt - std::sqrt(disc)), 0.0));
}

bool is_separable(const StandardFormCM& cm) {
  return pt_min_symplectic_eigenvalue(cm) >= 0.5 - 1e-12;
}

}  // namespace cvdiscord
