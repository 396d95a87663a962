#include "cvdiscord/validate.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "cvdiscord/covariance.hpp"
#include "cvdiscord/fock.hpp"
#include "cvdiscord/measurement.hpp"
#include "cvdiscord/oracle.hpp"

namespace cvdiscord::validate {

namespace {

constexpr double kPi = std::numbers::pi;

// worst |closed form - expm| over valid index tuples of the four kernels
double kernel_discrepancy(int max_index, int oracle_dim, const FaultInjection& fault) {
  double worst = 0.0;

  for (double lambda : {0.1, 0.5}) {
    const auto u = oracle::TwoModeUnitary::squeezer(lambda, oracle_dim);
    for (int h = 0; h <= max_index; ++h)
      for (int n = 0; n <= max_index; ++n)
        for (int s = 0; s <= max_index; ++s) {
          const int t = s + n - h;
          if (t < 0 || t > max_index) continue;
          const double closed =
              fault.two_mode_squeezer_scale * two_mode_squeezer_element(h, n, s, t, lambda);
          worst = std::max(worst, std::abs(closed - u.element(h, n, s, t)));
        }
  }
  for (double phi : {0.3, 1.2}) {
    const auto u = oracle::TwoModeUnitary::mixer(phi, oracle_dim);
    for (int h = 0; h <= max_index; ++h)
      for (int n = 0; n <= max_index; ++n)
        for (int s = 0; s <= max_index; ++s) {
          const int t = h + n - s;
          if (t < 0 || t > max_index) continue;
          const double closed = two_mode_mixer_element(h, n, s, t, phi);
          worst = std::max(worst, std::abs(closed - u.element(h, n, s, t)));
        }
  }
  for (double r : {0.1, -0.25, 0.5}) {
    const auto m = oracle::operator_matrix(
        {oracle::GeneratorKind::SingleModeSqueeze, r, std::max(2 * max_index + 16, 48)});
    const Eigen::MatrixXd rec = squeezer_matrix(r, (int)m.entries.rows());
    for (int k = 0; k <= max_index; ++k)
      for (int q = 0; q <= max_index; ++q) {
        const double oracle_val = m.entries(k, q).real();
        worst = std::max(worst,
                         std::abs(single_mode_squeezer_element(k, q, r) - oracle_val));
        worst = std::max(worst, std::abs(rec(k, q) - oracle_val));
      }
  }
  for (std::complex<double> alpha : {std::complex<double>{0.5, 0.0},
                                     std::complex<double>{1.0, 0.7},
                                     std::complex<double>{2.5, 0.0}}) {
    const int dim = std::max(3 * max_index + 32, 96);
    const auto m = oracle::operator_matrix({oracle::GeneratorKind::Displace, alpha, dim});
    const Eigen::MatrixXcd rec = displacement_matrix(alpha, dim);
    for (int k = 0; k <= max_index; ++k)
      for (int q = 0; q <= max_index; ++q) {
        worst = std::max(worst, std::abs(displacement_element(k, q, alpha) - m.entries(k, q)));
        worst = std::max(worst, std::abs(rec(k, q) - m.entries(k, q)));
      }
  }
  return worst;
}

double moments_discrepancy(int dim) {
  double worst = 0.0;
  for (const TwoModeState& state :
       {TwoModeState::sts(1.0, 1.0, 0.5), TwoModeState::mts(1.0, 0.3, 0.7)}) {
    const auto rho = oracle::build_density_matrix(state, dim);
    const Eigen::Matrix4d sigma = oracle::second_moments(rho);
    const Eigen::Matrix4d expected = standard_form(state).matrix();
    worst = std::max(worst, (sigma - expected).cwiseAbs().maxCoeff());
  }
  return worst;
}

Eigen::MatrixXcd raw_window(const ConditionalOutcome& out, int d) {
  if (out.p < 1e-14 || out.state.size() == 0) return Eigen::MatrixXcd::Zero(d, d);
  return out.p * out.state.topLeftCorner(d, d);
}

double gaussian_layer_discrepancy() {
  double worst = 0.0;
  for (double n : {1e-5, 0.01, 0.1, 1.0})
    for (double lambda : {0.0, 0.1, 0.3, 0.5}) {
      const StandardFormCM cm = standard_form(TwoModeState::sts(n, n, lambda));
      const double closed = gaussian_discord(cm);
      worst = std::max(worst, std::abs(closed - gaussian_discord_numeric(cm)));
      if (is_separable(cm)) worst = std::max(worst, (closed - 1.0) - 1e-9);
      worst = std::max(worst, gaussian_discord(cm) - mutual_information(cm) - 1e-12);
    }
  for (double n1 : {0.1, 1.0})
    for (double qr : {0.0, 0.4})
      for (double phi : {0.3, 0.8, 1.3}) {
        const StandardFormCM cm = standard_form(TwoModeState::mts(n1, qr * n1, phi));
        worst = std::max(worst, std::abs(gaussian_discord(cm) - gaussian_discord_numeric(cm)));
      }
  return worst;
}

double purity_discrepancy(int dim) {
  const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
  const auto rho = oracle::build_density_matrix(state, dim);
  return std::abs(oracle::purity(rho) - gaussian_purity(standard_form(state)));
}

double diagonality_discrepancy() {
  double worst = 0.0;
  const MeasurementBasis number{};
  for (const TwoModeState& state :
       {TwoModeState::sts(1.0, 1.0, 0.5), TwoModeState::sts(0.1, 0.1, 0.3),
        TwoModeState::mts(1.0, 0.2, 0.9)}) {
    const FockCutoff cutoff = choose_cutoff(state, number, 1e-4);
    const ConditionalEnsemble ens = conditional_states(state, number, cutoff);
    for (const auto& out : ens.outcomes) {
      if (out.p < 1e-14) continue;
      Eigen::MatrixXcd off = out.state;
      off.diagonal().setZero();
      worst = std::max(worst, off.cwiseAbs().maxCoeff());
    }
  }
  // independent route: explicit projector sandwich on the oracle state
  const auto rho = oracle::build_density_matrix(TwoModeState::sts(1.0, 1.0, 0.5), 32);
  for (const auto& out : oracle::measure_and_reduce(rho, number).outcomes) {
    if (out.p < 1e-14) continue;
    Eigen::MatrixXcd off = out.state;
    off.diagonal().setZero();
    worst = std::max(worst, off.cwiseAbs().maxCoeff());
  }
  return worst;
}

double shortcut_discrepancy() {
  double worst = 0.0;
  const MeasurementBasis number{};
  for (const TwoModeState& state :
       {TwoModeState::sts(1.0, 1.0, 0.5), TwoModeState::mts(1.0, 0.4, 0.9)}) {
    const FockCutoff cutoff = choose_cutoff(state, number, 1e-5);
    const double shortcut = number_basis_conditional_entropy(state, cutoff);
    const ConditionalEnsemble ens = conditional_states(state, number, cutoff);
    double direct = 0.0;
    for (const auto& out : ens.outcomes)
      if (out.p >= 1e-14) direct += out.p * von_neumann_entropy(out.state);
    worst = std::max(worst, std::abs(shortcut - direct));
  }
  return worst;
}

double geometric_discrepancy(bool full) {
  double worst = 0.0;
  const int dim = 40;
  for (const TwoModeState& state :
       {TwoModeState::sts(1.0, 1.0, 0.5), TwoModeState::mts(1.0, 0.0, 0.7)}) {
    const StandardFormCM cm = standard_form(state);
    const MeasurementCM m = geometric_minimizer_cm(cm);
    const double closed = gaussian_geometric_discord(cm);

    // explicit Hilbert-Schmidt distance on truncated matrices
    const auto rho = oracle::build_density_matrix(state, dim);
    const Eigen::Matrix2d sp = conditional_cm_after_measurement(cm, m);
    auto thermal_diag = [&](double variance) {
      Eigen::VectorXd diag(dim);
      for (int k = 0; k < dim; ++k) diag(k) = thermal_pmf(variance - 0.5, k);
      return diag;
    };
    const Eigen::VectorXd pa = thermal_diag(sp(0, 0));
    const Eigen::VectorXd pb = thermal_diag(m.mx);
    Eigen::MatrixXcd product = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
    for (int h = 0; h < dim; ++h)
      for (int q = 0; q < dim; ++q) product(h * dim + q, h * dim + q) = pa(h) * pb(q);
    const double brute = (rho.entries - product).squaredNorm();
    worst = std::max(worst, std::abs(closed - brute));

    if (full) {
      // measurement-route value against the oracle sandwich
      const auto geo = non_gaussian_geometric_discord(state, MeasurementBasis{}, 1e-6);
      const auto brute_q = oracle::brute_quantities(rho, MeasurementBasis{});
      worst = std::max(worst, std::abs(geo.value - brute_q.geometric_discord));
    }
  }
  return worst;
}

double phase_invariance_worst() {
  const std::vector<double> thetas{kPi / 4, kPi / 2, kPi};
  const std::vector<int> ns{0, 1, 2};
  return phase_invariance_check(TwoModeState::sts(1.0, 1.0, 0.5), 1.0, thetas, ns, 1e-4);
}

double alpha_convergence_worst() {
  // two thermal modes at N_T = 0.5 squeezed so the CM has cosh(0.5) on the
  // diagonal: strength 0.25 in the double-angle convention used here
  const TwoModeState state = TwoModeState::sts(0.5, 0.5, 0.25);
  const std::vector<double> alphas{0.1, 1.0, 5.0};
  const std::vector<int> ns{0, 1, 2};
  const std::vector<double> dist = alpha_convergence_check(state, alphas, ns, 1e-3);
  double worst = dist.back();  // must be <= 1e-2 at alpha = 5
  for (size_t i = 1; i < dist.size(); ++i)
    if (dist[i] >= dist[i - 1]) worst = std::max(worst, 1.0);  // not decreasing
  return worst;
}

double heterodyne_limit_discrepancy() {
  const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
  const StandardFormCM cm = standard_form(state);
  const Eigen::Matrix2d sp =
      conditional_cm_after_measurement(cm, MeasurementCM::heterodyne());

  const MeasurementBasis basis{{8.0, 0.0}, 0.0};
  const FockCutoff cutoff = choose_cutoff(state, basis, 1e-4);
  const auto [p0, rho0] = conditional_state_at(state, basis, 0, cutoff);
  const Eigen::Matrix2d measured = oracle::mode_covariance(rho0);
  double worst = std::abs(measured.determinant() - sp.determinant());
  worst = std::max(worst, std::abs(von_neumann_entropy(rho0) -
                                   mode_entropy(std::sqrt(sp.determinant()))));
  return worst;
}

SuiteResult make(const std::string& name, double worst, double threshold) {
  return {name, worst, threshold, worst <= threshold};
}

}  // namespace

bool Report::all_passed() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const SuiteResult& s) { return s.passed; });
}

double ensemble_discrepancy(const TwoModeState& state, const MeasurementBasis& basis,
                            double eps, int oracle_dim) {
  const FockCutoff cutoff = choose_cutoff(state, basis, eps);
  const ConditionalEnsemble pipeline = conditional_states(state, basis, cutoff);
  const auto rho = oracle::build_density_matrix(state, oracle_dim);
  const ConditionalEnsemble reference = oracle::measure_and_reduce(rho, basis);

  const int d = std::min(cutoff.dim, oracle_dim);
  const int n_max = (3 * d) / 4;
  double worst = 0.0;
  for (int n = 0; n < n_max; ++n) {
    const Eigen::MatrixXcd raw_a = raw_window(pipeline.outcomes[n], d);
    const Eigen::MatrixXcd raw_b = raw_window(reference.outcomes[n], d);
    worst = std::max(worst, (raw_a - raw_b).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs((raw_a - raw_b).trace()));
  }
  return worst;
}

Report run(Level level, const FaultInjection& fault) {
  const bool full = level == Level::Full;
  Report report;

  report.suites.push_back(
      make("kernels-vs-oracle", kernel_discrepancy(full ? 30 : 12, full ? 76 : 44, fault),
           1e-8));
  report.suites.push_back(make("cm-second-moments", moments_discrepancy(48), 1e-6));

  double ens = ensemble_discrepancy(TwoModeState::sts(1.0, 1.0, 0.5), MeasurementBasis{},
                                    1e-6, 48);
  if (full) {
    ens = std::max(ens, ensemble_discrepancy(TwoModeState::sts(1.0, 1.0, 0.5),
                                             MeasurementBasis{{1.0, 0.0}, 0.0}, 1e-6, 56));
    ens = std::max(ens, ensemble_discrepancy(TwoModeState::sts(1.0, 1.0, 0.5),
                                             MeasurementBasis{{0.0, 0.0}, 0.3}, 1e-6, 56));
    ens = std::max(ens, ensemble_discrepancy(TwoModeState::mts(1.0, 0.0, kPi / 4),
                                             MeasurementBasis{{1.0, 0.0}, 0.0}, 1e-6, 56));
  }
  report.suites.push_back(make("ensembles-vs-oracle", ens, 1e-7));

  report.suites.push_back(make("gaussian-layer", gaussian_layer_discrepancy(), 1e-6));
  report.suites.push_back(make("purity", purity_discrepancy(44), 1e-5));
  report.suites.push_back(make("number-basis-diagonality", diagonality_discrepancy(), 1e-10));
  report.suites.push_back(make("conditional-entropy-shortcut", shortcut_discrepancy(), 1e-10));
  report.suites.push_back(make("geometric-vs-oracle", geometric_discrepancy(full),
                               full ? 1e-4 : 1e-4));

  if (full) {
    report.suites.push_back(make("phase-invariance", phase_invariance_worst(), 1e-9));
    report.suites.push_back(make("alpha-convergence", alpha_convergence_worst(), 1e-2));
    report.suites.push_back(
        make("heterodyne-limit", heterodyne_limit_discrepancy(), 1e-3));
  }
  return report;
}

}  // namespace cvdiscord::validate
