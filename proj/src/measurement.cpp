#include "cvdiscord/measurement.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cvdiscord {

namespace detail {

BandModel build_band_model(const TwoModeState& state, int dim) {
  constexpr double kThermalTail = 1e-16;
  BandModel model;
  model.family = state.family;
  model.dim = dim;

  const int s_max = thermal_occupation_bound(state.n1, kThermalTail);
  const int t_max = thermal_occupation_bound(state.n2, kThermalTail);
  std::vector<double> ps(s_max + 1), pt(t_max + 1);
  for (int s = 0; s <= s_max; ++s) ps[s] = thermal_pmf(state.n1, s);
  for (int t = 0; t <= t_max; ++t) pt[t] = thermal_pmf(state.n2, t);

  if (state.family == StateFamily::Sts) {
    for (int key = -s_max; key <= t_max; ++key) {  // key = t - s
      const int h_lo = std::max(0, -key);
      const int h_hi = dim - std::max(0, key);  // exclusive; keeps q = h + key < dim
      if (h_hi <= h_lo) continue;
      Band band{key, h_lo, Eigen::MatrixXd::Zero(h_hi - h_lo, h_hi - h_lo)};
      Eigen::VectorXd f(h_hi - h_lo);
      bool any = false;
      for (int s = std::max(0, -key); s <= s_max; ++s) {
        const int t = s + key;
        if (t < 0 || t > t_max) continue;
        const double w = ps[s] * pt[t];
        if (w < 1e-300) continue;
        for (int h = h_lo; h < h_hi; ++h)
          f(h - h_lo) = two_mode_squeezer_element(h, h + key, s, t, state.strength);
        band.m.noalias() += w * f * f.transpose();
        any = true;
      }
      if (any) model.bands.push_back(std::move(band));
    }
  } else {
    for (int key = 0; key <= s_max + t_max; ++key) {  // key = s + t
      const int h_lo = std::max(0, key - (dim - 1));
      const int h_hi = std::min(key, dim - 1) + 1;  // exclusive
      if (h_hi <= h_lo) continue;
      Band band{key, h_lo, Eigen::MatrixXd::Zero(h_hi - h_lo, h_hi - h_lo)};
      Eigen::VectorXd f(h_hi - h_lo);
      bool any = false;
      for (int s = std::max(0, key - t_max); s <= std::min(key, s_max); ++s) {
        const int t = key - s;
        const double w = ps[s] * pt[t];
        if (w < 1e-300) continue;
        for (int h = h_lo; h < h_hi; ++h)
          f(h - h_lo) = two_mode_mixer_element(h, key - h, s, t, state.strength);
        band.m.noalias() += w * f * f.transpose();
        any = true;
      }
      if (any) model.bands.push_back(std::move(band));
    }
  }
  return model;
}

Eigen::MatrixXcd assemble_outcome(const BandModel& model, const Eigen::MatrixXcd& w, int n) {
  const int dim = model.dim;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXcd g;
  for (const Band& band : model.bands) {
    const int size = (int)band.m.rows();
    g.resize(size);
    bool any = false;
    for (int l = 0; l < size; ++l) {
      const int q = model.q_of(band, band.h_lo + l);
      g(l) = std::conj(w(q, n));
      if (g(l) != std::complex<double>(0.0, 0.0)) any = true;
    }
    if (!any) continue;
    for (int l1 = 0; l1 < size; ++l1) {
      const std::complex<double> gl = g(l1);
      if (gl == std::complex<double>(0.0, 0.0)) continue;
      for (int l2 = 0; l2 < size; ++l2) {
        if (g(l2) == std::complex<double>(0.0, 0.0)) continue;
        rho(band.h_lo + l1, band.h_lo + l2) += gl * band.m(l1, l2) * std::conj(g(l2));
      }
    }
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho;
}

}  // namespace detail

namespace {

constexpr double kOutcomeFloor = 1e-14;  // below reporting precision

bool is_product(const StandardFormCM& cm) {
  const double scale = std::max(1.0, cm.a * cm.b);
  return std::abs(cm.c1) <= 1e-14 * scale && std::abs(cm.c2) <= 1e-14 * scale;
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}

double residual_entropy_bound(double residual, int dim) {
  const double r = std::clamp(residual, 0.0, 1.0);
  return r * std::log((double)std::max(dim, 2)) + binary_entropy(r);
}

struct NumberBasisStats {
  double cond_entropy = 0.0;
  double residual = 0.0;
};

NumberBasisStats number_basis_stats(const detail::BandModel& model) {
  // joint photon statistics p(h,n) live on the band diagonals
  std::vector<double> pb(model.dim, 0.0);
  double h_joint = 0.0, total = 0.0;
  for (const detail::Band& band : model.bands) {
    for (int l = 0; l < (int)band.m.rows(); ++l) {
      const int h = band.h_lo + l;
      const int n = model.q_of(band, h);
      if (n < 0 || n >= model.dim) continue;
      const double p = band.m(l, l);
      if (p <= 0.0) continue;
      pb[n] += p;
      total += p;
      h_joint -= p * std::log(p);
    }
  }
  double h_b = 0.0;
  for (double p : pb)
    if (p > 0.0) h_b -= p * std::log(p);
  return {h_joint - h_b, std::max(0.0, 1.0 - total)};
}

}  // namespace

ConditionalEnsemble conditional_states(const TwoModeState& state,
                                       const MeasurementBasis& basis,
                                       const FockCutoff& cutoff) {
  const detail::BandModel model = detail::build_band_model(state, cutoff.dim);
  const Eigen::MatrixXcd w = measurement_matrix(basis, cutoff.dim);

  ConditionalEnsemble ens;
  ens.cutoff = cutoff;
  ens.outcomes.reserve(cutoff.dim);
  double mass = 0.0;
  for (int n = 0; n < cutoff.dim; ++n) {
    Eigen::MatrixXcd rho = detail::assemble_outcome(model, w, n);
    const double p = rho.real().trace();
    mass += p;
    ConditionalOutcome out;
    out.n = n;
    out.p = p;
    if (p >= kOutcomeFloor) out.state = rho / p;
    ens.outcomes.push_back(std::move(out));
  }
  ens.residual = std::max(0.0, 1.0 - mass);
  ens.truncation_dominated = ens.residual > std::max(cutoff.trace_error, 1e-12) + 1e-12;
  return ens;
}

std::pair<double, Eigen::MatrixXcd> conditional_state_at(const TwoModeState& state,
                                                         const MeasurementBasis& basis,
                                                         int n, const FockCutoff& cutoff) {
  if (n < 0 || n >= cutoff.dim) throw std::invalid_argument("outcome index out of range");
  const detail::BandModel model = detail::build_band_model(state, cutoff.dim);
  const Eigen::MatrixXcd w = measurement_matrix(basis, cutoff.dim);
  Eigen::MatrixXcd rho = detail::assemble_outcome(model, w, n);
  const double p = rho.real().trace();
  if (p >= kOutcomeFloor) rho /= p;
  return {p, std::move(rho)};
}

double number_basis_conditional_entropy(const TwoModeState& state,
                                        const FockCutoff& cutoff) {
  return number_basis_stats(detail::build_band_model(state, cutoff.dim)).cond_entropy;
}

double von_neumann_entropy(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("von_neumann_entropy: square input");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("von_neumann_entropy: not Hermitian");
  if (std::abs(m.real().trace() - 1.0) > 1e-10)
    throw std::invalid_argument("von_neumann_entropy: trace must be 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i) {
    const double v = eig.eigenvalues()(i);
    if (v < -1e-8) throw std::domain_error("von_neumann_entropy: negative eigenvalue");
    const double x = std::clamp(v, 0.0, 1.0);
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

DiscordResult non_gaussian_discord(const TwoModeState& state, const MeasurementBasis& basis,
                                   double eps) {
  if (!(eps > 0.0 && eps <= 1e-3 + 1e-15))
    throw std::invalid_argument("non_gaussian_discord: eps must lie in (0, 1e-3]");
  const StandardFormCM cm = standard_form(state);
  const SymplecticData sd = symplectic_data(cm);
  DiscordResult res;
  res.basis = basis;
  res.mutual_information = mutual_information(cm);
  res.gaussian_discord = gaussian_discord(cm);
  const double gauss_part = mode_entropy(std::sqrt(sd.i2)) - mode_entropy(sd.d_minus) -
                            mode_entropy(sd.d_plus);

  if (is_product(cm)) {
    // measurement on an uncorrelated mode reveals nothing about A
    res.cutoff = choose_cutoff(state, basis, eps);
    res.conditional_entropy = mode_entropy(cm.a);
    res.non_gaussian_discord = gauss_part + res.conditional_entropy;
    return res;
  }

  res.cutoff = choose_cutoff(state, basis, eps);
  double residual = 0.0;
  if (basis.is_number_basis()) {
    const auto stats =
        number_basis_stats(detail::build_band_model(state, res.cutoff.dim));
    res.conditional_entropy = stats.cond_entropy;
    residual = stats.residual;
  } else {
    const ConditionalEnsemble ens = conditional_states(state, basis, res.cutoff);
    double cond = 0.0;
    for (const ConditionalOutcome& out : ens.outcomes) {
      if (out.p < kOutcomeFloor) continue;
      cond += out.p * von_neumann_entropy(out.state);
    }
    res.conditional_entropy = cond;
    residual = ens.residual;
  }
  res.entropy_error_bound = residual_entropy_bound(residual, res.cutoff.dim);
  res.non_gaussian_discord = gauss_part + res.conditional_entropy;
  res.truncation_dominated = res.entropy_error_bound > 1e-3;
  return res;
}

GeometricResult non_gaussian_geometric_discord(const TwoModeState& state,
                                               const MeasurementBasis& basis, double eps) {
  if (!(eps > 0.0 && eps <= 1e-3 + 1e-15))
    throw std::invalid_argument("non_gaussian_geometric_discord: eps must lie in (0, 1e-3]");
  const StandardFormCM cm = standard_form(state);
  GeometricResult res;
  res.purity = gaussian_purity(cm);

  if (is_product(cm) && basis.is_number_basis()) {
    // standard-form product states are diagonal in the joint number basis
    res.cutoff = choose_cutoff(state, basis, eps);
    res.value = 0.0;
    return res;
  }

  res.cutoff = choose_cutoff(state, basis, eps);
  const ConditionalEnsemble ens = conditional_states(state, basis, res.cutoff);
  double projected = 0.0;
  for (const ConditionalOutcome& out : ens.outcomes) {
    if (out.p < kOutcomeFloor) continue;
    projected += out.p * out.p * out.state.squaredNorm();
  }
  res.value = std::max(res.purity - projected, 0.0);
  res.truncation_dominated = ens.residual > eps;
  return res;
}

namespace {

Eigen::VectorXd sorted_spectrum(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
  Eigen::VectorXd v = eig.eigenvalues();
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace

double phase_invariance_check(const TwoModeState& state, double alpha_abs,
                              std::span<const double> thetas, std::span<const int> ns,
                              double eps) {
  const MeasurementBasis base{{alpha_abs, 0.0}, 0.0};
  const FockCutoff cutoff = choose_cutoff(state, base, eps);
  const detail::BandModel model = detail::build_band_model(state, cutoff.dim);
  const Eigen::MatrixXcd w0 = measurement_matrix(base, cutoff.dim);

  std::vector<Eigen::VectorXd> ref;
  for (int n : ns) {
    Eigen::MatrixXcd rho = detail::assemble_outcome(model, w0, n);
    const double p = rho.real().trace();
    ref.push_back(sorted_spectrum(rho / p));
  }
  double worst = 0.0;
  for (double theta : thetas) {
    const MeasurementBasis rotated{std::polar(alpha_abs, theta), 0.0};
    const Eigen::MatrixXcd w = measurement_matrix(rotated, cutoff.dim);
    for (size_t i = 0; i < ns.size(); ++i) {
      Eigen::MatrixXcd rho = detail::assemble_outcome(model, w, ns[i]);
      const double p = rho.real().trace();
      const Eigen::VectorXd spec = sorted_spectrum(rho / p);
      worst = std::max(worst, (spec - ref[i]).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

namespace {

// shift a single-mode state so its first moments vanish; the conditional
// states of a displaced-number measurement differ by outcome-dependent
// phase-space translations that carry no spectral (entropy) content
Eigen::MatrixXcd remove_first_moments(const Eigen::MatrixXcd& rho) {
  const int dim = (int)rho.rows();
  std::complex<double> mean_a = 0.0;
  for (int k = 1; k < dim; ++k) mean_a += std::sqrt((double)k) * rho(k, k - 1);
  if (std::abs(mean_a) < 1e-14) return rho;
  const Eigen::MatrixXcd d = displacement_matrix(mean_a, dim);
  return d.adjoint() * rho * d;
}

}  // namespace

std::vector<double> alpha_convergence_check(const TwoModeState& state,
                                            std::span<const double> alphas,
                                            std::span<const int> ns, double eps) {
  std::vector<double> distances;
  distances.reserve(alphas.size());
  for (double alpha : alphas) {
    const MeasurementBasis basis{{alpha, 0.0}, 0.0};
    const FockCutoff cutoff = choose_cutoff(state, basis, eps);
    const detail::BandModel model = detail::build_band_model(state, cutoff.dim);
    const Eigen::MatrixXcd w = measurement_matrix(basis, cutoff.dim);

    Eigen::MatrixXcd rho0 = detail::assemble_outcome(model, w, 0);
    rho0 /= rho0.real().trace();
    rho0 = remove_first_moments(rho0);
    double worst = 0.0;
    for (int n : ns) {
      if (n == 0) continue;
      Eigen::MatrixXcd rho = detail::assemble_outcome(model, w, n);
      rho /= rho.real().trace();
      worst = std::max(worst, trace_distance(remove_first_moments(rho), rho0));
    }
    distances.push_back(worst);
  }
  return distances;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace cvdiscord
