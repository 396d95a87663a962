#include "cvdiscord/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cvdiscord::oracle {

namespace {

constexpr std::complex<double> kZero{0.0, 0.0};

double spectral_entropy(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i) {
    const double v = std::clamp(eig.eigenvalues()(i), 0.0, 1.0);
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& g) { return g.exp(); }

int isqrt_exact(Eigen::Index n) {
  const int r = (int)std::lround(std::sqrt((double)n));
  if ((Eigen::Index)r * r != n) throw std::invalid_argument("not a two-mode matrix");
  return r;
}

}  // namespace

TwoModeUnitary::TwoModeUnitary(bool conserves_difference, int dim)
    : conserves_difference_(conserves_difference), dim_(dim) {}

int TwoModeUnitary::band_of(int n1, int n2) const {
  return conserves_difference_ ? (n1 - n2) + (dim_ - 1) : n1 + n2;
}

int TwoModeUnitary::local_index(int band, int n1) const {
  if (conserves_difference_) {
    const int w = band - (dim_ - 1);
    return n1 - std::max(w, 0);
  }
  return n1 - std::max(0, band - (dim_ - 1));
}

TwoModeUnitary TwoModeUnitary::squeezer(double lambda, int dim) {
  if (dim < 1 || dim > kHardIndexCap) throw std::domain_error("TwoModeUnitary: bad dim");
  TwoModeUnitary u(true, dim);
  u.blocks_.resize(2 * dim - 1);
  for (int w = -(dim - 1); w <= dim - 1; ++w) {
    const int size = dim - std::abs(w);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size, size);
    for (int l = 0; l + 1 < size; ++l) {
      const int n1 = l + std::max(w, 0);
      const int n2 = l + std::max(-w, 0);
      const double amp = lambda * std::sqrt((double)(n1 + 1) * (double)(n2 + 1));
      g(l + 1, l) = amp;
      g(l, l + 1) = -amp;
    }
    u.blocks_[w + dim - 1] = g.exp();
  }
  return u;
}

TwoModeUnitary TwoModeUnitary::mixer(double phi, int dim) {
  if (dim < 1 || dim > kHardIndexCap) throw std::domain_error("TwoModeUnitary: bad dim");
  TwoModeUnitary u(false, dim);
  u.blocks_.resize(2 * dim - 1);
  for (int k = 0; k <= 2 * (dim - 1); ++k) {
    const int n1_lo = std::max(0, k - (dim - 1));
    const int n1_hi = std::min(k, dim - 1);
    const int size = n1_hi - n1_lo + 1;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size, size);
    for (int l = 0; l + 1 < size; ++l) {
      const int n1 = n1_lo + l;
      const int n2 = k - n1;
      const double amp = phi * std::sqrt((double)(n1 + 1) * (double)n2);
      g(l + 1, l) = amp;
      g(l, l + 1) = -amp;
    }
    u.blocks_[k] = g.exp();
  }
  return u;
}

double TwoModeUnitary::element(int h, int n, int s, int t) const {
  if (h < 0 || n < 0 || s < 0 || t < 0 || h >= dim_ || n >= dim_ || s >= dim_ || t >= dim_)
    throw std::out_of_range("TwoModeUnitary::element");
  const int band = band_of(h, n);
  if (band != band_of(s, t)) return 0.0;
  return blocks_[band](local_index(band, h), local_index(band, s));
}

std::vector<TwoModeUnitary::ColumnEntry> TwoModeUnitary::column(int s, int t) const {
  const int band = band_of(s, t);
  const Eigen::MatrixXd& block = blocks_[band];
  const int col = local_index(band, s);
  std::vector<ColumnEntry> entries;
  entries.reserve(block.rows());
  for (int l = 0; l < (int)block.rows(); ++l) {
    int n1, n2;
    if (conserves_difference_) {
      const int w = band - (dim_ - 1);
      n1 = l + std::max(w, 0);
      n2 = l + std::max(-w, 0);
    } else {
      n1 = std::max(0, band - (dim_ - 1)) + l;
      n2 = band - n1;
    }
    entries.push_back({n1, n2, block(l, col)});
  }
  return entries;
}

Eigen::MatrixXcd TwoModeUnitary::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_ * dim_, dim_ * dim_);
  for (int s = 0; s < dim_; ++s)
    for (int t = 0; t < dim_; ++t)
      for (const ColumnEntry& e : column(s, t))
        m(e.n1 * dim_ + e.n2, s * dim_ + t) = e.value;
  return m;
}

double TwoModeUnitary::max_unitarity_deficit_inner() const {
  double worst = 0.0;
  for (int s = 0; s < dim_ / 2; ++s) {
    for (int t = 0; t < dim_ / 2; ++t) {
      double norm2 = 0.0;
      for (const ColumnEntry& e : column(s, t)) norm2 += e.value * e.value;
      worst = std::max(worst, std::abs(1.0 - std::sqrt(norm2)));
    }
  }
  return worst;
}

namespace {

Eigen::MatrixXcd exponentiated_generator(GeneratorKind kind, std::complex<double> parameter,
                                         int dim) {
  switch (kind) {
    case GeneratorKind::TwoModeSqueeze:
    case GeneratorKind::TwoModeMix:
      throw std::logic_error("two-mode operators are built blockwise");
    case GeneratorKind::SingleModeSqueeze: {
      const double r = parameter.real();
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
      for (int k = 0; k + 2 <= dim - 1; ++k) {
        const double amp = 0.5 * r * std::sqrt((double)(k + 1) * (double)(k + 2));
        g(k, k + 2) = amp;   // (r/2) a^2
        g(k + 2, k) = -amp;  // -(r/2) (a†)^2
      }
      return g.exp().cast<std::complex<double>>();
    }
    case GeneratorKind::Displace: {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
      for (int k = 0; k + 1 <= dim - 1; ++k) {
        const double root = std::sqrt((double)(k + 1));
        g(k + 1, k) = parameter * root;
        g(k, k + 1) = -std::conj(parameter) * root;
      }
      return expm(g);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

FockMatrix operator_matrix(const GeneratorSpec& spec) {
  if (spec.dim < 1 || spec.dim > kHardIndexCap)
    throw std::domain_error("operator_matrix: bad dim");
  const bool two_mode = spec.kind == GeneratorKind::TwoModeSqueeze ||
                        spec.kind == GeneratorKind::TwoModeMix;
  const int padded_dim = std::min(spec.dim + spec.dim / 2 + 8, kHardIndexCap);
  const int quarter = spec.dim / 4;

  // unitarity holds exactly for an exponentiated truncated generator, so
  // insufficient margin is probed instead: a padded rebuild must leave the
  // deep interior untouched
  FockMatrix out;
  out.hermitian = false;
  double deficit = 0.0;

  if (two_mode) {
    auto build = [&](int dim) {
      return spec.kind == GeneratorKind::TwoModeSqueeze
                 ? TwoModeUnitary::squeezer(spec.parameter.real(), dim)
                 : TwoModeUnitary::mixer(spec.parameter.real(), dim);
    };
    const TwoModeUnitary u = build(spec.dim);
    deficit = u.max_unitarity_deficit_inner();
    if (spec.dim >= 8) {
      const TwoModeUnitary padded = build(padded_dim);
      for (int h = 0; h < quarter; ++h)
        for (int n = 0; n < quarter; ++n)
          for (int s = 0; s < quarter; ++s)
            for (int t = 0; t < quarter; ++t)
              deficit = std::max(deficit, std::abs(u.element(h, n, s, t) -
                                                   padded.element(h, n, s, t)));
    }
    out.entries = u.dense();
  } else {
    out.entries = exponentiated_generator(spec.kind, spec.parameter, spec.dim);
    for (Eigen::Index c = 0; c < out.entries.cols() / 2; ++c)
      deficit = std::max(deficit, std::abs(1.0 - out.entries.col(c).norm()));
    if (spec.dim >= 8) {
      const Eigen::MatrixXcd padded =
          exponentiated_generator(spec.kind, spec.parameter, padded_dim);
      for (int row = 0; row < quarter; ++row)
        for (int col = 0; col < quarter; ++col)
          deficit = std::max(deficit, std::abs(out.entries(row, col) - padded(row, col)));
    }
  }
  if (deficit > 1e-10)
    throw std::runtime_error("operator_matrix: truncation leakage on inner block");
  out.cutoff = {spec.dim, deficit};
  return out;
}

FockMatrix build_density_matrix(const TwoModeState& state, int dim) {
  const TwoModeUnitary u = state.family == StateFamily::Sts
                               ? TwoModeUnitary::squeezer(state.strength, dim)
                               : TwoModeUnitary::mixer(state.strength, dim);
  const int s_max = std::min(thermal_occupation_bound(state.n1, 1e-18), dim - 1);
  const int t_max = std::min(thermal_occupation_bound(state.n2, 1e-18), dim - 1);

  FockMatrix out;
  out.entries = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
  for (int s = 0; s <= s_max; ++s) {
    const double ps = thermal_pmf(state.n1, s);
    for (int t = 0; t <= t_max; ++t) {
      const double w = ps * thermal_pmf(state.n2, t);
      if (w < 1e-300) continue;
      const auto col = u.column(s, t);
      for (const auto& e1 : col) {
        const double v1 = w * e1.value;
        if (v1 == 0.0) continue;
        const int row = e1.n1 * dim + e1.n2;
        for (const auto& e2 : col)
          out.entries(row, e2.n1 * dim + e2.n2) += v1 * e2.value;
      }
    }
  }
  out.hermitian = true;
  out.cutoff = {dim, std::max(0.0, 1.0 - out.entries.real().trace())};
  return out;
}

namespace {

Eigen::MatrixXcd oracle_measurement_matrix(const MeasurementBasis& basis, int dim) {
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(dim, dim);
  if (basis.r != 0.0)
    w = operator_matrix({GeneratorKind::SingleModeSqueeze, basis.r, dim}).entries;
  if (basis.alpha != kZero)
    w = (operator_matrix({GeneratorKind::Displace, basis.alpha, dim}).entries * w).eval();
  return w;
}

}  // namespace

ConditionalEnsemble measure_and_reduce(const FockMatrix& rho, const MeasurementBasis& basis) {
  const int dim = isqrt_exact(rho.entries.rows());
  const Eigen::MatrixXcd w = oracle_measurement_matrix(basis, dim);

  ConditionalEnsemble ens;
  ens.cutoff = rho.cutoff;
  double mass = 0.0;
  for (int n = 0; n < dim; ++n) {
    const Eigen::VectorXcd wn = w.col(n);
    Eigen::MatrixXcd b(dim, dim);
    for (int h = 0; h < dim; ++h)
      for (int k = 0; k < dim; ++k)
        b(h, k) = (wn.adjoint() * rho.entries.block(h * dim, k * dim, dim, dim) * wn)(0, 0);
    b = 0.5 * (b + b.adjoint()).eval();
    const double p = b.real().trace();
    mass += p;
    ConditionalOutcome out;
    out.n = n;
    out.p = p;
    if (p >= 1e-14) out.state = b / p;
    ens.outcomes.push_back(std::move(out));
  }
  ens.residual = std::max(0.0, 1.0 - mass);
  ens.truncation_dominated = ens.residual > std::max(rho.cutoff.trace_error, 1e-12) + 1e-12;
  return ens;
}

BruteQuantities brute_quantities(const FockMatrix& rho, const MeasurementBasis& basis) {
  const int dim = isqrt_exact(rho.entries.rows());

  Eigen::MatrixXcd rho_a = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd rho_b = Eigen::MatrixXcd::Zero(dim, dim);
  for (int h = 0; h < dim; ++h)
    for (int k = 0; k < dim; ++k)
      for (int q = 0; q < dim; ++q) {
        rho_a(h, k) += rho.entries(h * dim + q, k * dim + q);
        rho_b(h, k) += rho.entries(q * dim + h, q * dim + k);
      }

  const double s_ab = entropy_of_density_matrix(rho.entries);
  const double s_a = spectral_entropy(rho_a);
  const double s_b = spectral_entropy(rho_b);

  BruteQuantities out;
  out.mutual_information = s_a + s_b - s_ab;

  const ConditionalEnsemble ens = measure_and_reduce(rho, basis);
  double cond = 0.0;
  for (const ConditionalOutcome& o : ens.outcomes)
    if (o.p >= 1e-14) cond += o.p * spectral_entropy(o.state);
  out.conditional_entropy = cond;
  out.discord = s_b - s_ab + cond;

  // geometric part: materialize the unconditional post-measurement state
  const Eigen::MatrixXcd w = oracle_measurement_matrix(basis, dim);
  Eigen::MatrixXcd rho_pi = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
  for (const ConditionalOutcome& o : ens.outcomes) {
    if (o.p < 1e-14) continue;
    const Eigen::VectorXcd wn = w.col(o.n);
    const Eigen::MatrixXcd proj = wn * wn.adjoint();
    for (int h = 0; h < dim; ++h)
      for (int k = 0; k < dim; ++k) {
        const std::complex<double> bhk = o.p * o.state(h, k);
        if (bhk == kZero) continue;
        rho_pi.block(h * dim, k * dim, dim, dim) += bhk * proj;
      }
  }
  out.geometric_discord = (rho.entries - rho_pi).squaredNorm();
  return out;
}

namespace {

// Tr[rho (A ⊗ B)]
std::complex<double> trace_two_mode(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a,
                                    const Eigen::MatrixXcd& b) {
  const int dim = (int)a.rows();
  std::complex<double> acc = 0.0;
  for (int h = 0; h < dim; ++h)
    for (int k = 0; k < dim; ++k) {
      if (a(k, h) == kZero) continue;
      std::complex<double> inner = 0.0;
      for (int q = 0; q < dim; ++q)
        for (int qp = 0; qp < dim; ++qp) {
          if (b(qp, q) == kZero) continue;
          inner += rho(h * dim + q, k * dim + qp) * b(qp, q);
        }
      acc += a(k, h) * inner;
    }
  return acc;
}

void quadratures(int dim, Eigen::MatrixXcd& x, Eigen::MatrixXcd& p) {
  x = Eigen::MatrixXcd::Zero(dim, dim);
  p = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    const double root = std::sqrt((double)(k + 1) / 2.0);
    x(k, k + 1) = root;
    x(k + 1, k) = root;
    p(k, k + 1) = std::complex<double>(0.0, root);
    p(k + 1, k) = std::complex<double>(0.0, -root);
  }
}

}  // namespace

Eigen::Matrix4d second_moments(const FockMatrix& rho) {
  const int dim = isqrt_exact(rho.entries.rows());
  Eigen::MatrixXcd x, p;
  quadratures(dim, x, p);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd* ops[2] = {&x, &p};

  Eigen::Vector4d mean;
  for (int i = 0; i < 4; ++i)
    mean(i) = (i < 2 ? trace_two_mode(rho.entries, *ops[i % 2], id)
                     : trace_two_mode(rho.entries, id, *ops[i % 2]))
                  .real();

  Eigen::Matrix4d sigma;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      std::complex<double> val;
      if (i < 2 && j < 2) {
        const Eigen::MatrixXcd sym =
            0.5 * ((*ops[i % 2]) * (*ops[j % 2]) + (*ops[j % 2]) * (*ops[i % 2]));
        val = trace_two_mode(rho.entries, sym, id);
      } else if (i >= 2 && j >= 2) {
        const Eigen::MatrixXcd sym =
            0.5 * ((*ops[i % 2]) * (*ops[j % 2]) + (*ops[j % 2]) * (*ops[i % 2]));
        val = trace_two_mode(rho.entries, id, sym);
      } else {
        // factors act on different modes, so they commute
        val = trace_two_mode(rho.entries, *ops[i % 2], *ops[j % 2]);
      }
      sigma(i, j) = sigma(j, i) = val.real() - mean(i) * mean(j);
    }
  return sigma;
}

Eigen::Matrix2d mode_covariance(const Eigen::MatrixXcd& rho, Eigen::Vector2d* mean_out) {
  const int dim = (int)rho.rows();
  Eigen::MatrixXcd x, p;
  quadratures(dim, x, p);
  const double mx = (rho * x).trace().real();
  const double mp = (rho * p).trace().real();
  Eigen::Matrix2d sigma;
  sigma(0, 0) = (rho * x * x).trace().real() - mx * mx;
  sigma(1, 1) = (rho * p * p).trace().real() - mp * mp;
  sigma(0, 1) = sigma(1, 0) =
      (rho * (x * p + p * x)).trace().real() * 0.5 - mx * mp;
  if (mean_out) *mean_out = Eigen::Vector2d(mx, mp);
  return sigma;
}

double purity(const FockMatrix& rho) { return rho.entries.squaredNorm(); }

double entropy_of_density_matrix(const Eigen::MatrixXcd& m) {
  const Eigen::Index rows = m.rows();
  const int dim = (int)std::lround(std::sqrt((double)rows));
  if ((Eigen::Index)dim * dim != rows) return spectral_entropy(m);

  auto banded = [&](bool difference) {
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < rows; ++j) {
        if (m(i, j) == kZero) continue;
        const int ci = difference ? (int)(i / dim - i % dim) : (int)(i / dim + i % dim);
        const int cj = difference ? (int)(j / dim - j % dim) : (int)(j / dim + j % dim);
        if (ci != cj) return false;
      }
    return true;
  };

  bool difference = true;
  if (!banded(true)) {
    difference = false;
    if (!banded(false)) return spectral_entropy(m);
  }

  double s = 0.0;
  const int lo = difference ? -(dim - 1) : 0;
  const int hi = difference ? dim - 1 : 2 * (dim - 1);
  for (int charge = lo; charge <= hi; ++charge) {
    std::vector<Eigen::Index> idx;
    for (int n1 = 0; n1 < dim; ++n1) {
      const int n2 = difference ? n1 - charge : charge - n1;
      if (n2 >= 0 && n2 < dim) idx.push_back((Eigen::Index)n1 * dim + n2);
    }
    if (idx.empty()) continue;
    Eigen::MatrixXcd block(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j) block(i, j) = m(idx[i], idx[j]);
    s += spectral_entropy(block);
  }
  return s;
}

namespace {

std::pair<double, double> symplectic_from(const Eigen::Matrix4d& sigma) {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> eig(omega * sigma, false);
  std::array<double, 4> mags;
  for (int i = 0; i < 4; ++i) mags[i] = std::abs(eig.eigenvalues()(i).imag());
  std::sort(mags.begin(), mags.end());
  return {0.5 * (mags[2] + mags[3]), 0.5 * (mags[0] + mags[1])};
}

}  // namespace

std::pair<double, double> symplectic_spectrum(const Eigen::Matrix4d& sigma) {
  return symplectic_from(sigma);
}

std::pair<double, double> pt_symplectic_spectrum(const Eigen::Matrix4d& sigma) {
  Eigen::Matrix4d lambda = Eigen::Matrix4d::Identity();
  lambda(3, 3) = -1.0;
  return symplectic_from(lambda * sigma * lambda);
}

}  // namespace cvdiscord::oracle
