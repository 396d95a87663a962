#include "cvdiscord/fock.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace cvdiscord {

namespace detail {

long double log_factorial(int n) {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(2 * kHardIndexCap + 2);
    for (int i = 0; i < (int)t.size(); ++i) t[i] = lgammal((long double)i + 1.0L);
    return t;
  }();
  return table[n];
}

void check_index(int n) {
  if (n < 0) throw std::domain_error("Fock index must be nonnegative");
  if (n > kHardIndexCap) throw std::domain_error("Fock index exceeds hard cap 4096");
}

}  // namespace detail

using detail::CompensatedSum;
using detail::log_factorial;

double thermal_pmf(double mean_photons, int s) {
  detail::check_index(s);
  if (!(mean_photons >= 0.0)) throw std::domain_error("thermal_pmf: N must be nonnegative");
  if (mean_photons == 0.0) return s == 0 ? 1.0 : 0.0;
  const long double n = mean_photons;
  return (double)expl(s * logl(n) - (s + 1) * logl(1.0L + n));
}

int thermal_occupation_bound(double mean_photons, double tail) {
  if (mean_photons <= 0.0) return 0;
  const double ratio = mean_photons / (1.0 + mean_photons);
  const int s = (int)std::ceil(std::log(tail) / std::log(ratio)) - 1;
  return std::min(std::max(s, 0), kHardIndexCap);
}

double two_mode_squeezer_element(int h, int n, int s, int t, double lambda) {
  detail::check_index(h);
  detail::check_index(n);
  detail::check_index(s);
  detail::check_index(t);
  if (!(lambda >= 0.0)) throw std::domain_error("two-mode squeezing requires lambda >= 0");
  if (t + h != s + n) return 0.0;
  if (lambda == 0.0) return (h == s && n == t) ? 1.0 : 0.0;

  const long double log_tanh = logl(tanhl((long double)lambda));
  const long double log_sech = -logl(coshl((long double)lambda));
  const long double base =
      0.5L * (log_factorial(s) + log_factorial(t) + log_factorial(h) + log_factorial(n));

  CompensatedSum acc;
  const int k_lo = std::max(0, s - h);
  const int k_hi = std::min(s, t);
  for (int k = k_lo; k <= k_hi; ++k) {
    const int j = k + h - s;
    const long double lm = (2 * k + h - s) * log_tanh + (s + t - 2 * k + 1) * log_sech +
                           base - log_factorial(k) - log_factorial(j) -
                           log_factorial(s - k) - log_factorial(t - k);
    const long double term = expl(lm);
    acc.add((k & 1) ? -term : term);
  }
  return (double)acc.value();
}

double two_mode_mixer_element(int h, int n, int s, int t, double phi) {
  detail::check_index(h);
  detail::check_index(n);
  detail::check_index(s);
  detail::check_index(t);
  if (!(phi >= 0.0 && phi <= std::numbers::pi / 2 + 1e-12))
    throw std::domain_error("mixing angle must lie in [0, pi/2]");
  if (h + n != s + t) return 0.0;
  if (phi == 0.0) return (h == s && n == t) ? 1.0 : 0.0;

  const long double sn = sinl((long double)phi);
  const long double cs = cosl((long double)phi);
  const long double base = 0.5L * (log_factorial(h) + log_factorial(n) -
                                   log_factorial(s) - log_factorial(t));

  CompensatedSum acc;
  const int a_lo = std::max(0, h - t);
  const int a_hi = std::min(h, s);
  for (int a = a_lo; a <= a_hi; ++a) {
    const int es = s + h - 2 * a;  // sin exponent
    const int ec = t - h + 2 * a;  // cos exponent
    if ((sn == 0.0L && es > 0) || (cs == 0.0L && ec > 0)) continue;
    long double lm = base + log_factorial(s) - log_factorial(a) - log_factorial(s - a) +
                     log_factorial(t) - log_factorial(h - a) - log_factorial(t - h + a);
    if (es > 0) lm += es * logl(sn);
    if (ec > 0) lm += ec * logl(cs);
    const long double term = expl(lm);
    acc.add(((s - a) & 1) ? -term : term);
  }
  return (double)acc.value();
}

double single_mode_squeezer_element(int k, int q, double r) {
  detail::check_index(k);
  detail::check_index(q);
  if (((k ^ q) & 1) != 0) return 0.0;  // a^2 changes photon number by 2
  if (r == 0.0) return k == q ? 1.0 : 0.0;

  const long double th = tanhl((long double)r);
  const long double log_half_t = logl(fabsl(th) / 2.0L);
  const long double log_sech = -logl(coshl((long double)r));
  const long double base = 0.5L * (log_factorial(k) + log_factorial(q)) + 0.5L * log_sech;
  const bool t_neg = th < 0.0L;

  CompensatedSum acc;
  const int m_lo = std::max(0, (q - k) / 2);
  const int m_hi = q / 2;
  for (int m = m_lo; m <= m_hi; ++m) {
    const int j = (k - q) / 2 + m;
    const long double lm = base + (j + m) * log_half_t + (q - 2 * m) * log_sech -
                           log_factorial(j) - log_factorial(m) - log_factorial(q - 2 * m);
    int sign = (j & 1) ? -1 : 1;
    if (t_neg && ((j + m) & 1)) sign = -sign;
    acc.add(sign * expl(lm));
  }
  return (double)acc.value();
}

std::complex<double> displacement_element(int k, int q, std::complex<double> alpha) {
  detail::check_index(k);
  detail::check_index(q);
  if (alpha == std::complex<double>(0.0, 0.0)) return k == q ? 1.0 : 0.0;

  const int p = std::min(k, q);
  const int m = std::abs(k - q);
  const long double ar = alpha.real(), ai = alpha.imag();
  const long double x = ar * ar + ai * ai;

  // normalized associated Laguerre sum Σ_i (-1)^i C(p+m, p-i) x^i / i!
  CompensatedSum acc;
  for (int i = 0; i <= p; ++i) {
    const long double lm = log_factorial(p + m) - log_factorial(p - i) -
                           log_factorial(m + i) + i * logl(x) - log_factorial(i);
    const long double term = expl(lm);
    acc.add((i & 1) ? -term : term);
  }
  const long double log_pref =
      0.5L * (log_factorial(p) - log_factorial(p + m)) + 0.5L * m * logl(x) - x / 2.0L;
  const double scalar = (double)(acc.value() * expl(log_pref));

  const double abs_a = std::abs(alpha);
  const std::complex<double> unit =
      (k >= q) ? alpha / abs_a : -std::conj(alpha) / abs_a;
  std::complex<double> phase = 1.0;
  for (int i = 0; i < m; ++i) phase *= unit;
  return scalar * phase;
}

Eigen::MatrixXd squeezer_matrix(double r, int dim) {
  if (dim < 1 || dim > kHardIndexCap) throw std::domain_error("squeezer_matrix: bad dim");
  if (r == 0.0) return Eigen::MatrixXd::Identity(dim, dim);

  // exp{(r/2)(a^2 - a†^2)} = Λ exp(iK) Λ† with K = (r/2)(a^2 + a†^2) real
  // symmetric and Λ = diag(e^{iπk/4}); the self-adjoint solve stays accurate
  // at any r and dimension, unlike ladder recurrences
  Eigen::MatrixXd k_op = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k + 2 < dim; ++k) {
    const double amp = 0.5 * r * std::sqrt((double)(k + 1) * (double)(k + 2));
    k_op(k, k + 2) = amp;
    k_op(k + 2, k) = amp;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k_op);
  Eigen::VectorXcd phases(dim);
  for (int i = 0; i < dim; ++i)
    phases(i) = std::polar(1.0, es.eigenvalues()(i));
  const Eigen::MatrixXcd core = es.eigenvectors().cast<std::complex<double>>() *
                                phases.asDiagonal() *
                                es.eigenvectors().transpose().cast<std::complex<double>>();

  Eigen::MatrixXd s(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int q = 0; q < dim; ++q) {
      if (((k ^ q) & 1) != 0) {
        s(k, q) = 0.0;  // parity conservation is exact
        continue;
      }
      const std::complex<double> phase = std::polar(1.0, 0.25 * std::numbers::pi * (k - q));
      s(k, q) = (phase * core(k, q)).real();
    }
  return s;
}

Eigen::MatrixXcd displacement_matrix(std::complex<double> alpha, int dim) {
  if (dim < 1 || dim > kHardIndexCap) throw std::domain_error("displacement_matrix: bad dim");
  if (alpha == std::complex<double>(0.0, 0.0))
    return Eigen::MatrixXcd::Identity(dim, dim);

  // D(|α|e^{iθ})_{kq} = e^{iθ(k-q)} D(|α|)_{kq} and
  // exp{|α|(a† - a)} = Λ exp(-i|α|T) Λ† with T = a + a† tridiagonal and
  // Λ = diag(i^k); reduces to a real symmetric eigensolve
  const double abs_a = std::abs(alpha);
  const double theta = std::arg(alpha);

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    const double root = std::sqrt((double)(k + 1));
    t(k, k + 1) = root;
    t(k + 1, k) = root;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXcd phases(dim);
  for (int i = 0; i < dim; ++i)
    phases(i) = std::polar(1.0, -abs_a * es.eigenvalues()(i));
  const Eigen::MatrixXcd core = es.eigenvectors().cast<std::complex<double>>() *
                                phases.asDiagonal() *
                                es.eigenvectors().transpose().cast<std::complex<double>>();

  Eigen::MatrixXcd d(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int q = 0; q < dim; ++q) {
      // i^{k-q} from Λ, times the displacement phase
      const std::complex<double> phase =
          std::polar(1.0, (theta + 0.5 * std::numbers::pi) * (k - q));
      d(k, q) = phase * core(k, q);
    }
  return d;
}

Eigen::MatrixXcd measurement_matrix(const MeasurementBasis& basis, int dim) {
  if (basis.is_number_basis()) return Eigen::MatrixXcd::Identity(dim, dim);
  if (basis.r == 0.0) return displacement_matrix(basis.alpha, dim);
  Eigen::MatrixXcd s = squeezer_matrix(basis.r, dim).cast<std::complex<double>>();
  if (basis.alpha == std::complex<double>(0.0, 0.0)) return s;
  return displacement_matrix(basis.alpha, dim) * s;
}

std::complex<double> composed_element(TwoModeOp op, double strength,
                                      const MeasurementBasis& basis, int h, int k, int s,
                                      int t, int dim, double* tail_fraction) {
  if (dim < 1) throw std::domain_error("composed_element: bad dim");
  const Eigen::MatrixXcd w = measurement_matrix(basis, dim);
  std::complex<double> total = 0.0;
  std::complex<double> tail = 0.0;
  const int tail_start = dim - std::max(1, dim / 10);
  for (int q = 0; q < dim; ++q) {
    const double o = (op == TwoModeOp::Squeezer)
                         ? two_mode_squeezer_element(h, q, s, t, strength)
                         : two_mode_mixer_element(h, q, s, t, strength);
    if (o == 0.0) continue;
    const std::complex<double> term = w(k, q) * o;
    total += term;
    if (q >= tail_start) tail += term;
  }
  if (tail_fraction)
    *tail_fraction = std::abs(total) > 0.0 ? std::abs(tail) / std::abs(total) : 0.0;
  return total;
}

FockCutoff choose_cutoff(const TwoModeState& state, const MeasurementBasis& basis,
                         double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("choose_cutoff: eps in (0,1)");
  const StandardFormCM cm = standard_form(state);
  const double na = std::max(cm.a - 0.5, 0.0);
  const double nb = std::max(cm.b - 0.5, 0.0);

  // the transformed mode-B marginal holds at least this many photons on
  // average, so the required cutoff can never fall below it
  const double mean_floor =
      nb * std::cosh(2.0 * basis.r) + std::sinh(basis.r) * std::sinh(basis.r) +
      std::norm(basis.alpha);
  if (mean_floor > (double)kHardIndexCap)
    throw std::runtime_error("choose_cutoff: required dimension exceeds hard cap 4096");

  int probe = 32;
  for (;;) {
    if (probe > kHardIndexCap)
      throw std::runtime_error("choose_cutoff: required dimension exceeds hard cap 4096");

    // photon distribution of the transformed mode-B marginal W† ν(N_B) W.
    // W is unitary on the truncated space, so an undersized probe shows up
    // as mass piling up near the edge, not as a norm deficit.
    const Eigen::MatrixXcd w = measurement_matrix(basis, probe);
    std::vector<double> pb(probe, 0.0);
    double thermal_mass = 0.0;
    for (int mth = 0; mth < probe; ++mth) {
      const double pm = thermal_pmf(nb, mth);
      if (pm < 1e-300) break;
      thermal_mass += pm;
      for (int n = 0; n < probe; ++n) pb[n] += pm * std::norm(w(mth, n));
    }
    const double unseen = std::max(0.0, 1.0 - thermal_mass);
    double edge_mass = unseen;
    for (int n = 3 * probe / 4; n < probe; ++n) edge_mass += pb[n];
    if (edge_mass > 0.0625 * eps) {
      probe *= 2;
      continue;
    }

    // decaying tail: the unseen region beyond the probe carries less mass
    // than the (already negligible) last quarter
    std::vector<double> tail_b(probe + 1, unseen + edge_mass);
    for (int n = probe - 1; n >= 0; --n) tail_b[n] = tail_b[n + 1] + pb[n];
    const double log_ratio_a = na > 0.0 ? std::log(na / (1.0 + na)) : 0.0;
    for (int d = 1; d <= probe; ++d) {
      const double tail_a = na > 0.0 ? std::exp(d * log_ratio_a) : 0.0;
      const double deficit = tail_a + tail_b[d];
      if (deficit <= eps) return {d, deficit};
    }
    probe *= 2;
  }
}

}  // namespace cvdiscord
