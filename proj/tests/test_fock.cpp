#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cvdiscord/fock.hpp"
#include "cvdiscord/oracle.hpp"

using namespace cvdiscord;
using cd = std::complex<double>;

TEST_CASE("thermal pmf") {
  CHECK(thermal_pmf(0.0, 0) == 1.0);
  CHECK(thermal_pmf(0.0, 3) == 0.0);
  CHECK(std::abs(thermal_pmf(1.0, 0) - 0.5) < 1e-15);

  // geometric partial sums
  for (double n : {0.01, 0.5, 1.7}) {
    for (int cap : {3, 17, 60}) {
      double sum = 0.0;
      for (int s = 0; s <= cap; ++s) sum += thermal_pmf(n, s);
      const double expected = 1.0 - std::pow(n / (1.0 + n), cap + 1);
      CHECK(std::abs(sum - expected) < 1e-12);
    }
  }

  // occupation bound is the advertised tail inversion
  const int s = thermal_occupation_bound(1.0, 1e-9);
  CHECK(std::pow(0.5, s + 1) <= 1e-9);
  CHECK(std::pow(0.5, s) > 1e-9);
}

TEST_CASE("two-mode squeezer elements") {
  SUBCASE("identity at zero squeezing") {
    CHECK(two_mode_squeezer_element(2, 3, 2, 3, 0.0) == 1.0);
    CHECK(two_mode_squeezer_element(2, 3, 3, 2, 0.0) == 0.0);
  }
  SUBCASE("vacuum column closed form") {
    for (double lambda : {0.1, 0.3, 0.5}) {
      const double sech = 1.0 / std::cosh(lambda);
      const double tanh = std::tanh(lambda);
      CHECK(std::abs(two_mode_squeezer_element(0, 0, 0, 0, lambda) - sech) < 1e-14);
      for (int n : {1, 4, 9})
        CHECK(std::abs(two_mode_squeezer_element(n, n, 0, 0, lambda) -
                       sech * std::pow(tanh, n)) < 1e-13);
    }
  }
  SUBCASE("selection rule is exact") {
    for (int h = 0; h <= 6; ++h)
      for (int n = 0; n <= 6; ++n)
        for (int s = 0; s <= 6; ++s)
          for (int t = 0; t <= 6; ++t)
            if (t + h != s + n) CHECK(two_mode_squeezer_element(h, n, s, t, 0.37) == 0.0);
  }
  SUBCASE("matches the exponentiated generator") {
    const auto u = oracle::TwoModeUnitary::squeezer(0.5, 48);
    double worst = 0.0;
    for (int h = 0; h <= 16; ++h)
      for (int n = 0; n <= 16; ++n)
        for (int s = 0; s <= 16; ++s) {
          const int t = s + n - h;
          if (t < 0 || t > 16) continue;
          worst = std::max(worst, std::abs(two_mode_squeezer_element(h, n, s, t, 0.5) -
                                           u.element(h, n, s, t)));
        }
    CHECK(worst < 1e-8);
  }
  SUBCASE("index hard cap") {
    CHECK_THROWS_AS(two_mode_squeezer_element(5000, 0, 0, 5000, 0.1), std::domain_error);
  }
}

TEST_CASE("two-mode mixer elements") {
  SUBCASE("identity at zero angle") {
    CHECK(two_mode_mixer_element(1, 2, 1, 2, 0.0) == 1.0);
    CHECK(two_mode_mixer_element(2, 1, 1, 2, 0.0) == 0.0);
  }
  SUBCASE("single-photon rotation") {
    for (double phi : {0.2, 0.7, 1.3}) {
      const auto u = oracle::TwoModeUnitary::mixer(phi, 24);
      CHECK(std::abs(two_mode_mixer_element(1, 0, 1, 0, phi) - std::cos(phi)) < 1e-10);
      CHECK(std::abs(two_mode_mixer_element(1, 0, 1, 0, phi) - u.element(1, 0, 1, 0)) <
            1e-10);
      CHECK(std::abs(two_mode_mixer_element(0, 1, 1, 0, phi) - u.element(0, 1, 1, 0)) <
            1e-10);
    }
  }
  SUBCASE("selection rule is exact") {
    for (int h = 0; h <= 5; ++h)
      for (int n = 0; n <= 5; ++n)
        for (int s = 0; s <= 5; ++s)
          for (int t = 0; t <= 5; ++t)
            if (h + n != s + t) CHECK(two_mode_mixer_element(h, n, s, t, 0.8) == 0.0);
  }
  SUBCASE("unitary on each photon-number block") {
    for (int total : {1, 7, 23, 40}) {
      for (int s = 0; s <= total; s += std::max(1, total / 3)) {
        const int t = total - s;
        double norm = 0.0;
        for (int h = 0; h <= total; ++h) {
          const double v = two_mode_mixer_element(h, total - h, s, t, 0.9);
          norm += v * v;
        }
        CHECK(std::abs(norm - 1.0) < 1e-10);
      }
    }
  }
}

TEST_CASE("single-mode squeezer elements") {
  SUBCASE("identity and vacuum overlap") {
    CHECK(single_mode_squeezer_element(3, 3, 0.0) == 1.0);
    for (double r : {0.1, 0.3, 0.5, -0.4})
      CHECK(std::abs(single_mode_squeezer_element(0, 0, r) - 1.0 / std::sqrt(std::cosh(r))) <
            1e-13);
  }
  SUBCASE("parity selection is exact") {
    for (int k = 0; k <= 9; ++k)
      for (int q = 0; q <= 9; ++q)
        if ((k - q) % 2 != 0) CHECK(single_mode_squeezer_element(k, q, 0.4) == 0.0);
  }
  SUBCASE("matches the exponentiated generator") {
    for (double r : {0.1, 0.5, -0.3}) {
      const auto m = oracle::operator_matrix({oracle::GeneratorKind::SingleModeSqueeze, r, 96});
      double worst = 0.0;
      for (int k = 0; k <= 24; ++k)
        for (int q = 0; q <= 24; ++q)
          worst = std::max(worst, std::abs(single_mode_squeezer_element(k, q, r) -
                                           m.entries(k, q).real()));
      CHECK(worst < 1e-9);
    }
  }
  SUBCASE("matrix builder agrees with the element form away from the edge") {
    const Eigen::MatrixXd s = squeezer_matrix(0.5, 96);
    double worst = 0.0;
    for (int k = 0; k <= 32; ++k)
      for (int q = 0; q <= 32; ++q)
        worst = std::max(worst, std::abs(s(k, q) - single_mode_squeezer_element(k, q, 0.5)));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("displacement elements") {
  SUBCASE("identity at zero displacement") {
    CHECK(displacement_element(4, 4, 0.0) == cd(1.0, 0.0));
    CHECK(displacement_element(4, 3, 0.0) == cd(0.0, 0.0));
  }
  SUBCASE("coherent-state column") {
    const cd alpha{0.8, -0.4};
    const double x = std::norm(alpha);
    cd power{1.0, 0.0};
    double logfact = 0.0;
    for (int k = 0; k <= 12; ++k) {
      if (k > 0) {
        power *= alpha;
        logfact += std::log((double)k);
      }
      const cd expected = std::exp(-x / 2.0) * power * std::exp(-0.5 * logfact);
      CHECK(std::abs(displacement_element(k, 0, alpha) - expected) < 1e-13);
    }
  }
  SUBCASE("matches the exponentiated generator") {
    for (cd alpha : {cd{1.0, 0.0}, cd{0.9, 1.1}, cd{2.5, 0.0}}) {
      const auto m = oracle::operator_matrix({oracle::GeneratorKind::Displace, alpha, 96});
      const Eigen::MatrixXcd rec = displacement_matrix(alpha, 96);
      double worst_closed = 0.0, worst_rec = 0.0;
      for (int k = 0; k <= 30; ++k)
        for (int q = 0; q <= 30; ++q) {
          worst_closed =
              std::max(worst_closed, std::abs(displacement_element(k, q, alpha) -
                                              m.entries(k, q)));
          worst_rec = std::max(worst_rec, std::abs(rec(k, q) - m.entries(k, q)));
        }
      CHECK(worst_closed < 1e-8);
      CHECK(worst_rec < 1e-10);
    }
  }
  SUBCASE("columns stay normalized at large displacement and dimension") {
    // the matrix route has to stay healthy out to the alpha ~ 8 regime
    const Eigen::MatrixXcd d = displacement_matrix({8.0, 0.0}, 220);
    for (int q = 0; q <= 120; q += 8) CHECK(std::abs(d.col(q).norm() - 1.0) < 1e-9);
  }
  SUBCASE("columns normalized at the chosen cutoff") {
    for (double a : {1.0, 2.5}) {
      const MeasurementBasis basis{{a, 0.0}, 0.0};
      const FockCutoff cutoff = choose_cutoff(TwoModeState::sts(2.0, 2.0, 0.5), basis, 1e-6);
      // columns q spread roughly |alpha| sqrt(q) beyond the state support
      const int dim = cutoff.dim + 96;
      const Eigen::MatrixXcd d = displacement_matrix({a, 0.0}, dim);
      for (int q = 0; q <= 20; ++q) CHECK(std::abs(d.col(q).norm() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("composed measurement-basis elements") {
  SUBCASE("bare composition is the identity") {
    const MeasurementBasis bare{};
    for (int h : {0, 2})
      for (int k : {0, 3}) {
        const cd composed = composed_element(TwoModeOp::Squeezer, 0.4, bare, h, k, 1, 2, 24);
        CHECK(std::abs(composed - two_mode_squeezer_element(h, k, 1, 2, 0.4)) < 1e-15);
      }
  }
  SUBCASE("squeezed composition matches oracle matrix products") {
    const int dim = 28;
    const auto o = oracle::TwoModeUnitary::squeezer(0.5, dim);
    const auto w = oracle::operator_matrix({oracle::GeneratorKind::SingleModeSqueeze, 0.3, dim});
    const MeasurementBasis basis{{0.0, 0.0}, 0.3};
    double worst = 0.0;
    for (int h : {0, 1, 3})
      for (int k : {0, 2, 4})
        for (int s : {0, 1, 2})
          for (int t : {0, 1, 3}) {
            cd expected = 0.0;
            for (int q = 0; q < dim; ++q)
              expected += w.entries(k, q) * o.element(h, q, s, t);
            const cd got = composed_element(TwoModeOp::Squeezer, 0.5, basis, h, k, s, t, dim);
            worst = std::max(worst, std::abs(got - expected));
          }
    CHECK(worst < 1e-8);
  }
  SUBCASE("displaced composition matches oracle matrix products") {
    const int dim = 32;
    const auto o = oracle::TwoModeUnitary::squeezer(0.5, dim);
    const auto w = oracle::operator_matrix({oracle::GeneratorKind::Displace, cd{1.0, 0.0}, dim});
    const MeasurementBasis basis{{1.0, 0.0}, 0.0};
    double worst = 0.0;
    for (int h : {0, 2})
      for (int k : {0, 1, 5})
        for (int s : {0, 2})
          for (int t : {0, 1}) {
            cd expected = 0.0;
            for (int q = 0; q < dim; ++q)
              expected += w.entries(k, q) * o.element(h, q, s, t);
            const cd got = composed_element(TwoModeOp::Squeezer, 0.5, basis, h, k, s, t, dim);
            worst = std::max(worst, std::abs(got - expected));
          }
    CHECK(worst < 1e-8);
  }
  SUBCASE("reports a negligible tail when the support is interior") {
    double tail = 1.0;
    composed_element(TwoModeOp::Squeezer, 0.5, MeasurementBasis{{0.0, 0.0}, 0.3}, 2, 2, 1, 1,
                     48, &tail);
    CHECK(tail < 1e-8);
  }
}

TEST_CASE("cutoff selection") {
  SUBCASE("vacuum needs one state") {
    const FockCutoff c = choose_cutoff(TwoModeState::sts(0, 0, 0), MeasurementBasis{}, 1e-3);
    CHECK(c.dim == 1);
    CHECK(c.trace_error <= 1e-3);
  }
  SUBCASE("trace deficit verified by direct summation") {
    const TwoModeState state = TwoModeState::sts(1.0, 1.0, 0.5);
    const FockCutoff c = choose_cutoff(state, MeasurementBasis{}, 1e-3);
    double mass = 0.0;
    for (int h = 0; h < c.dim; ++h)
      for (int n = 0; n < c.dim; ++n) {
        const int d = n - h;
        double p = 0.0;
        for (int s = 0; s <= 60; ++s) {
          const int t = s + d;
          if (t < 0 || t > 60) continue;
          const double amp = two_mode_squeezer_element(h, n, s, t, 0.5);
          p += thermal_pmf(1.0, s) * thermal_pmf(1.0, t) * amp * amp;
        }
        mass += p;
      }
    CHECK(1.0 - mass <= 1e-3);
    CHECK(1.0 - mass >= 0.0);
  }
  SUBCASE("thermal mass fits inside the chosen cutoff") {
    for (double eps : {1e-3, 1e-6}) {
      const TwoModeState state = TwoModeState::sts(1.0, 0.7, 0.4);
      const StandardFormCM cm = standard_form(state);
      const FockCutoff c = choose_cutoff(state, MeasurementBasis{{0.5, 0.0}, 0.2}, eps);
      double mass = 0.0;
      for (int s = 0; s < c.dim; ++s) mass += thermal_pmf(cm.a - 0.5, s);
      CHECK(mass >= 1.0 - eps);
    }
  }
  SUBCASE("displacement raises the cutoff") {
    const TwoModeState state = TwoModeState::sts(0.5, 0.5, 0.3);
    const int plain = choose_cutoff(state, MeasurementBasis{}, 1e-3).dim;
    const int displaced =
        choose_cutoff(state, MeasurementBasis{{2.5, 0.0}, 0.0}, 1e-3).dim;
    CHECK(displaced >= plain);
    const int squeezed = choose_cutoff(state, MeasurementBasis{{0.0, 0.0}, 0.5}, 1e-3).dim;
    CHECK(squeezed >= plain);
  }
  SUBCASE("rejects bad tolerances") {
    CHECK_THROWS_AS(choose_cutoff(TwoModeState::sts(0, 0, 0), MeasurementBasis{}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(choose_cutoff(TwoModeState::sts(0, 0, 0), MeasurementBasis{}, 1.5),
                    std::invalid_argument);
  }
}
