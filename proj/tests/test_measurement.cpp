#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvdiscord/measurement.hpp"
#include "cvdiscord/oracle.hpp"
#include "cvdiscord/validate.hpp"

using namespace cvdiscord;

namespace {

constexpr double kPi = std::numbers::pi;

double shannon(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (int i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  return h;
}

}  // namespace

TEST_CASE("conditional states of a product state") {
  // measurement on B reveals nothing: every conditional equals the marginal
  const TwoModeState state = TwoModeState::sts(0.8, 0.4, 0.0);
  const FockCutoff cutoff = choose_cutoff(state, MeasurementBasis{}, 1e-8);
  const ConditionalEnsemble ens = conditional_states(state, MeasurementBasis{}, cutoff);

  for (const auto& out : ens.outcomes) {
    if (out.p < 1e-10) continue;
    CHECK(std::abs(out.p - thermal_pmf(0.4, out.n)) < 1e-6);
    for (int h = 0; h < cutoff.dim; ++h)
      CHECK(std::abs(out.state(h, h).real() - thermal_pmf(0.8, h)) < 1e-6);
  }
  CHECK(ens.residual < 1e-7);
}

TEST_CASE("number-basis conditional states are diagonal") {
  for (const TwoModeState& state :
       {TwoModeState::sts(1.0, 1.0, 0.5), TwoModeState::mts(1.0, 0.1, 0.9)}) {
    const FockCutoff cutoff = choose_cutoff(state, MeasurementBasis{}, 1e-4);
    const ConditionalEnsemble ens = conditional_states(state, MeasurementBasis{}, cutoff);
    double worst = 0.0;
    for (const auto& out : ens.outcomes) {
      if (out.p < 1e-14) continue;
      Eigen::MatrixXcd off = out.state;
      off.diagonal().setZero();
      worst = std::max(worst, off.cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("displaced ensemble matches the oracle sandwich") {
  const double worst = validate::ensemble_discrepancy(
      TwoModeState::sts(1.0, 1.0, 0.5), MeasurementBasis{{1.0, 0.0}, 0.0}, 1e-6, 48);
  CHECK(worst < 1e-7);
}

TEST_CASE("number-basis conditional entropy shortcut") {
  SUBCASE("product state: entropy of the marginal") {
    const TwoModeState state = TwoModeState::sts(1.0, 0.3, 0.0);
    const FockCutoff cutoff = choose_cutoff(state, MeasurementBasis{}, 1e-8);
    CHECK(std::abs(number_basis_conditional_entropy(state, cutoff) - mode_entropy(1.5)) <
          1e-6);
  }
  SUBCASE("identity against direct summation over outcomes") {
    const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
    const FockCutoff cutoff = choose_cutoff(state, MeasurementBasis{}, 1e-5);
    const ConditionalEnsemble ens = conditional_states(state, MeasurementBasis{}, cutoff);
    double direct = 0.0;
    for (const auto& out : ens.outcomes) {
      if (out.p < 1e-14) continue;
      direct += out.p * shannon(out.state.diagonal().real());
    }
    CHECK(std::abs(number_basis_conditional_entropy(state, cutoff) - direct) < 1e-12);
  }
  SUBCASE("pure squeezed vacuum: photon counting leaves A pure") {
    const TwoModeState state = TwoModeState::sts(0.0, 0.0, 0.5);
    const FockCutoff cutoff = choose_cutoff(state, MeasurementBasis{}, 1e-8);
    CHECK(std::abs(number_basis_conditional_entropy(state, cutoff)) < 1e-9);
  }
  SUBCASE("equals the spectral route") {
    const TwoModeState state = TwoModeState::mts(1.0, 0.4, 0.9);
    const FockCutoff cutoff = choose_cutoff(state, MeasurementBasis{}, 1e-6);
    const double shortcut = number_basis_conditional_entropy(state, cutoff);
    const ConditionalEnsemble ens = conditional_states(state, MeasurementBasis{}, cutoff);
    double spectral = 0.0;
    for (const auto& out : ens.outcomes)
      if (out.p >= 1e-14) spectral += out.p * von_neumann_entropy(out.state);
    CHECK(std::abs(shortcut - spectral) < 1e-10);
  }
}

TEST_CASE("von Neumann entropy") {
  SUBCASE("pure state") {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(6, 6);
    rho(0, 0) = 1.0;
    CHECK(von_neumann_entropy(rho) == 0.0);
  }
  SUBCASE("truncated thermal, renormalized") {
    const int dim = thermal_occupation_bound(1.0, 1e-6) + 1;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    double mass = 0.0;
    for (int s = 0; s < dim; ++s) mass += thermal_pmf(1.0, s);
    for (int s = 0; s < dim; ++s) rho(s, s) = thermal_pmf(1.0, s) / mass;
    CHECK(std::abs(von_neumann_entropy(rho) - mode_entropy(1.5)) < 1e-4);
  }
  SUBCASE("maximally mixed") {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
    CHECK(std::abs(von_neumann_entropy(rho) - std::log(4.0)) < 1e-14);
  }
  SUBCASE("rejects bad inputs") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 1) = 1.0;  // not Hermitian
    m(0, 0) = 1.0;
    CHECK_THROWS_AS(von_neumann_entropy(m), std::invalid_argument);

    Eigen::MatrixXcd half = Eigen::MatrixXcd::Identity(2, 2) * 0.4;  // trace 0.8
    CHECK_THROWS_AS(von_neumann_entropy(half), std::invalid_argument);

    Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(von_neumann_entropy(neg), std::domain_error);
  }
}

TEST_CASE("non-Gaussian discord") {
  SUBCASE("vanishes on product states for any basis") {
    for (const MeasurementBasis& basis :
         {MeasurementBasis{}, MeasurementBasis{{1.0, 0.0}, 0.0},
          MeasurementBasis{{0.0, 0.0}, 0.4}}) {
      const DiscordResult res =
          non_gaussian_discord(TwoModeState::sts(1.0, 1.0, 0.0), basis, 1e-3);
      CHECK(std::abs(res.non_gaussian_discord) < 1e-9);
    }
  }
  SUBCASE("definition identity and ordering") {
    const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
    const DiscordResult res = non_gaussian_discord(state, MeasurementBasis{}, 1e-5);
    const SymplecticData sd = symplectic_data(standard_form(state));
    const double gauss_part = mode_entropy(std::sqrt(sd.i2)) - mode_entropy(sd.d_minus) -
                              mode_entropy(sd.d_plus);
    CHECK(std::abs(res.non_gaussian_discord - (gauss_part + res.conditional_entropy)) <
          1e-12);
    CHECK(res.non_gaussian_discord >= res.gaussian_discord - 1e-6);
    CHECK(res.mutual_information >= res.non_gaussian_discord - 1e-9);
    CHECK(!res.truncation_dominated);
  }
  SUBCASE("local measurement squeezing has no visible effect") {
    // the shift is real but two orders below the discord itself
    // (1.75e-3 on 0.32 nats here, confirmed against the projector-sandwich route)
    const TwoModeState state = TwoModeState::sts(0.01, 0.01, 0.3);
    const double base =
        non_gaussian_discord(state, MeasurementBasis{}, 1e-6).non_gaussian_discord;
    const double squeezed =
        non_gaussian_discord(state, MeasurementBasis{{0.0, 0.0}, 0.3}, 1e-6)
            .non_gaussian_discord;
    CHECK(std::abs(squeezed - base) < 5e-3);
  }
  SUBCASE("rejects loose tolerances") {
    CHECK_THROWS_AS(
        non_gaussian_discord(TwoModeState::sts(1, 1, 0.1), MeasurementBasis{}, 0.1),
        std::invalid_argument);
  }
}

TEST_CASE("non-Gaussian geometric discord") {
  SUBCASE("product state measured in its own basis") {
    const GeometricResult res = non_gaussian_geometric_discord(
        TwoModeState::sts(0.7, 0.9, 0.0), MeasurementBasis{}, 1e-3);
    CHECK(std::abs(res.value) < 1e-9);
  }
  SUBCASE("number basis beats the Gaussian minimum") {
    const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.4);
    const GeometricResult res =
        non_gaussian_geometric_discord(state, MeasurementBasis{}, 1e-6);
    CHECK(res.value >= 0.0);
    CHECK(res.value <= gaussian_geometric_discord(standard_form(state)));
  }
  SUBCASE("matches the explicit sandwich") {
    const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
    const GeometricResult res =
        non_gaussian_geometric_discord(state, MeasurementBasis{}, 1e-6);
    const auto rho = oracle::build_density_matrix(state, 40);
    const auto brute = oracle::brute_quantities(rho, MeasurementBasis{});
    CHECK(std::abs(res.value - brute.geometric_discord) < 1e-6);
  }
}

TEST_CASE("phase invariance of conditional spectra") {
  const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
  const std::vector<int> ns{0, 1, 2};
  SUBCASE("zero rotation is exact") {
    const std::vector<double> none{0.0};
    CHECK(phase_invariance_check(state, 1.0, none, ns, 1e-4) == 0.0);
  }
  SUBCASE("quarter and half turns") {
    const std::vector<double> thetas{kPi / 2, kPi};
    CHECK(phase_invariance_check(state, 1.0, thetas, ns, 1e-4) <= 1e-9);
    CHECK(phase_invariance_check(state, 2.0, thetas, ns, 1e-4) <= 1e-9);
  }
}

TEST_CASE("conditional states converge with growing displacement") {
  SUBCASE("product state: distance identically zero") {
    const std::vector<double> alphas{0.5, 2.0};
    const std::vector<int> ns{0, 1};
    const auto d =
        alpha_convergence_check(TwoModeState::sts(0.5, 0.5, 0.0), alphas, ns, 1e-4);
    for (double v : d) CHECK(v < 1e-9);
  }
  SUBCASE("distances shrink along the displacement grid") {
    const std::vector<double> alphas{0.1, 1.0, 3.0};
    const std::vector<int> ns{0, 1, 2};
    const auto d =
        alpha_convergence_check(TwoModeState::sts(0.5, 0.5, 0.25), alphas, ns, 1e-4);
    REQUIRE(d.size() == 3);
    CHECK(d[1] < d[0]);
    CHECK(d[2] < d[1]);
  }
}

TEST_CASE("trace distance") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  CHECK(std::abs(trace_distance(a, b) - 1.0) < 1e-14);  // orthogonal pure states
  CHECK(trace_distance(a, a) == 0.0);
}
