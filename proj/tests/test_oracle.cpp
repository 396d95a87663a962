#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvdiscord/measurement.hpp"
#include "cvdiscord/oracle.hpp"
#include "cvdiscord/validate.hpp"

using namespace cvdiscord;
using oracle::GeneratorKind;

TEST_CASE("operator matrices from exponentiated generators") {
  SUBCASE("zero parameter gives the identity") {
    for (GeneratorKind kind : {GeneratorKind::TwoModeSqueeze, GeneratorKind::TwoModeMix}) {
      const auto m = oracle::operator_matrix({kind, 0.0, 6});
      CHECK((m.entries - Eigen::MatrixXcd::Identity(36, 36)).cwiseAbs().maxCoeff() < 1e-14);
    }
    for (GeneratorKind kind : {GeneratorKind::SingleModeSqueeze, GeneratorKind::Displace}) {
      const auto m = oracle::operator_matrix({kind, 0.0, 12});
      CHECK((m.entries - Eigen::MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
  SUBCASE("two-mode squeezer columns stay unit-norm on the inner block") {
    const auto u = oracle::TwoModeUnitary::squeezer(0.5, 40);
    CHECK(u.max_unitarity_deficit_inner() < 1e-10);
  }
  SUBCASE("coherent overlap") {
    const auto d = oracle::operator_matrix({GeneratorKind::Displace, 1.0, 48});
    CHECK(std::abs(d.entries(0, 0) - std::exp(-0.5)) < 1e-10);
  }
  SUBCASE("insufficient margin is reported") {
    CHECK_THROWS_AS(oracle::operator_matrix({GeneratorKind::Displace, {6.0, 0.0}, 24}),
                    std::runtime_error);
  }
}

TEST_CASE("density matrix construction") {
  SUBCASE("no squeezing: diagonal thermal product") {
    const auto rho = oracle::build_density_matrix(TwoModeState::sts(0.6, 0.2, 0.0), 18);
    double worst = 0.0;
    for (int h = 0; h < 18; ++h)
      for (int n = 0; n < 18; ++n)
        for (int k = 0; k < 18; ++k)
          for (int m = 0; m < 18; ++m) {
            const std::complex<double> v = rho.entries(h * 18 + n, k * 18 + m);
            const double expected =
                (h == k && n == m) ? thermal_pmf(0.6, h) * thermal_pmf(0.2, n) : 0.0;
            worst = std::max(worst, std::abs(v - expected));
          }
    CHECK(worst < 1e-12);
  }
  SUBCASE("purity matches the Gaussian closed form") {
    const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
    const auto rho = oracle::build_density_matrix(state, 44);
    CHECK(std::abs(oracle::purity(rho) - gaussian_purity(standard_form(state))) < 1e-5);
  }
  SUBCASE("trace deficit is reported") {
    const auto rho = oracle::build_density_matrix(TwoModeState::sts(1.0, 1.0, 0.5), 20);
    CHECK(rho.cutoff.trace_error > 0.0);
    CHECK(rho.cutoff.trace_error < 0.05);
  }
}

TEST_CASE("measure and reduce") {
  SUBCASE("product state: conditionals equal the marginal") {
    const auto rho = oracle::build_density_matrix(TwoModeState::sts(0.8, 0.4, 0.0), 26);
    const auto ens = oracle::measure_and_reduce(rho, MeasurementBasis{});
    for (const auto& out : ens.outcomes) {
      if (out.p < 1e-10) continue;
      for (int h = 0; h < 26; ++h)
        CHECK(std::abs(out.state(h, h).real() - thermal_pmf(0.8, h)) < 1e-6);
    }
  }
  SUBCASE("number-basis cross-check against the pipeline") {
    const double worst = validate::ensemble_discrepancy(TwoModeState::sts(1.0, 1.0, 0.5),
                                                        MeasurementBasis{}, 1e-6, 48);
    CHECK(worst < 1e-7);
  }
  SUBCASE("mixed thermal state with a displaced basis") {
    const double worst = validate::ensemble_discrepancy(
        TwoModeState::mts(1.0, 0.0, std::numbers::pi / 4), MeasurementBasis{{1.0, 0.0}, 0.0},
        1e-6, 44);
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("brute quantities") {
  SUBCASE("product state carries no discord") {
    const auto rho = oracle::build_density_matrix(TwoModeState::sts(0.5, 0.5, 0.0), 26);
    const auto q = oracle::brute_quantities(rho, MeasurementBasis{});
    CHECK(std::abs(q.mutual_information) < 1e-9);
    CHECK(std::abs(q.discord) < 1e-9);
    CHECK(std::abs(q.geometric_discord) < 1e-9);
  }
  SUBCASE("number-basis discord matches the pipeline") {
    const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
    const auto rho = oracle::build_density_matrix(state, 40);
    const auto q = oracle::brute_quantities(rho, MeasurementBasis{});
    const DiscordResult res = non_gaussian_discord(state, MeasurementBasis{}, 1e-6);
    CHECK(std::abs(q.discord - res.non_gaussian_discord) < 2e-3);
    CHECK(std::abs(q.conditional_entropy - res.conditional_entropy) < 2e-3);
  }
}

TEST_CASE("large-displacement conditional entropy approaches the heterodyne value") {
  // the n = 0 element of a strongly displaced number measurement is a
  // coherent-state projection, so its conditional state carries exactly the
  // heterodyne entropy h(sqrt(det sigma_P)). The outcome-averaged entropy
  // converges much more slowly (the weight migrates to ring-like outcomes
  // near n ~ alpha^2) and is not asserted here.
  const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
  const StandardFormCM cm = standard_form(state);
  const double het_entropy = mode_entropy(
      std::sqrt(conditional_cm_after_measurement(cm, MeasurementCM::heterodyne())
                    .determinant()));
  const MeasurementBasis basis{{8.0, 0.0}, 0.0};
  const FockCutoff cutoff = choose_cutoff(state, basis, 1e-4);
  const auto [p0, rho0] = conditional_state_at(state, basis, 0, cutoff);
  REQUIRE(p0 >= 1e-14);
  CHECK(std::abs(von_neumann_entropy(rho0) - het_entropy) < 5e-3);
}

TEST_CASE("second moments of a single-mode matrix") {
  const int dim = 30;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) rho(s, s) = thermal_pmf(0.7, s);
  Eigen::Vector2d mean;
  const Eigen::Matrix2d sigma = oracle::mode_covariance(rho, &mean);
  CHECK(std::abs(sigma(0, 0) - 1.2) < 1e-8);
  CHECK(std::abs(sigma(1, 1) - 1.2) < 1e-8);
  CHECK(std::abs(sigma(0, 1)) < 1e-10);
  CHECK(mean.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("entropy of banded density matrices") {
  // diagonal product state: block route must equal the Shannon sum
  const auto rho = oracle::build_density_matrix(TwoModeState::sts(0.4, 0.6, 0.3), 24);
  const double s = oracle::entropy_of_density_matrix(rho.entries);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho.entries, Eigen::EigenvaluesOnly);
  double dense = 0.0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i) {
    const double v = std::clamp(eig.eigenvalues()(i), 0.0, 1.0);
    if (v > 0.0) dense -= v * std::log(v);
  }
  CHECK(std::abs(s - dense) < 1e-9);
}
