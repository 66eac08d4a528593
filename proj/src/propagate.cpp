#include "anw/propagate.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace anw {

namespace {

double scale_of(const RMatrix& m) { return std::max(1.0, max_abs(m)); }

}  // namespace

DriftGenerator::DriftGenerator(RMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0)
    throw std::invalid_argument("drift generator must be square with even dimension");
  const double tol = 1e-12 * scale_of(matrix_);
  if (std::abs(matrix_.trace()) > tol) throw InvariantError("drift generator trace is not zero");
  const RMatrix od = symplectic_form(n_modes()) * matrix_;
  if (max_abs(od - od.transpose()) > tol) throw InvariantError("drift generator is not Hamiltonian");
}

SymplecticPropagator::SymplecticPropagator(RMatrix matrix, double z) : matrix_(std::move(matrix)), z_(z) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0)
    throw std::invalid_argument("propagator must be square with even dimension");
  const double s2 = scale_of(matrix_) * scale_of(matrix_);
  const double res = symplectic_residual(matrix_);
  if (!(res <= 1e-9 * s2)) throw InvariantError("propagator is not symplectic (residual " + std::to_string(res) + ")");
  const double det = matrix_.determinant();
  if (!(std::abs(det - 1.0) <= 1e-8 * s2)) throw InvariantError("propagator determinant " + std::to_string(det));
}

CovarianceMatrix::CovarianceMatrix(RMatrix matrix, double z) : matrix_(std::move(matrix)), z_(z) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0)
    throw std::invalid_argument("covariance must be square with even dimension");
  const double scale = scale_of(matrix_);
  if (max_abs(matrix_ - matrix_.transpose()) > 1e-12 * scale) throw InvariantError("covariance is not symmetric");
  matrix_ = 0.5 * (matrix_ + matrix_.transpose()).eval();
  const double min_eig = uncertainty_min_eigenvalue(matrix_);
  if (!(min_eig > -1e-9 * scale))
    throw InvariantError("covariance violates the uncertainty relation (min eigenvalue " + std::to_string(min_eig) +
                         ")");
  const double det = matrix_.determinant();
  if (!(std::abs(det - 1.0) <= 1e-6 * scale)) throw InvariantError("covariance is not pure (det " + std::to_string(det) + ")");
}

DriftGenerator drift_generator(const CouplingProfile& profile, const PumpProfile& pump) {
  const int n = profile.n_guides();
  if (pump.n_guides() != n)
    throw std::invalid_argument("pump has " + std::to_string(pump.n_guides()) + " guides, lattice has " +
                                std::to_string(n));
  const RMatrix cj = profile.coupling_matrix();
  RMatrix ds = RMatrix::Zero(n, n);
  RMatrix dc = RMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    ds(j, j) = pump.amplitudes()[j] * std::sin(pump.phases()[j]);
    dc(j, j) = pump.amplitudes()[j] * std::cos(pump.phases()[j]);
  }
  RMatrix d(2 * n, 2 * n);
  d.topLeftCorner(n, n) = -2.0 * ds;
  d.topRightCorner(n, n) = -cj + 2.0 * dc;
  d.bottomLeftCorner(n, n) = cj + 2.0 * dc;
  d.bottomRightCorner(n, n) = 2.0 * ds;
  return DriftGenerator(std::move(d));
}

SymplecticPropagator propagator(const DriftGenerator& gen, double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("z must be >= 0");
  return SymplecticPropagator(expm(RMatrix(gen.matrix() * z)), z);
}

CovarianceMatrix covariance_from(const SymplecticPropagator& prop) {
  return CovarianceMatrix(prop.matrix() * prop.matrix().transpose(), prop.z());
}

double cos_f(double f_squared, double z) {
  const double x = f_squared * z * z;
  if (std::abs(x) < 1e-8) return 1.0 - x / 2.0 + x * x / 24.0;
  if (f_squared > 0) return std::cos(std::sqrt(f_squared) * z);
  return std::cosh(std::sqrt(-f_squared) * z);
}

double sin_f_over_f(double f_squared, double z) {
  const double x = f_squared * z * z;
  if (std::abs(x) < 1e-8) return z * (1.0 - x / 6.0 + x * x / 120.0);
  if (f_squared > 0) {
    const double f = std::sqrt(f_squared);
    return std::sin(f * z) / f;
  }
  const double f = std::sqrt(-f_squared);
  return std::sinh(f * z) / f;
}

namespace {

void check_flat_args(double eta, double z) {
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
  if (!(z >= 0.0)) throw std::invalid_argument("z must be >= 0");
}

// Individual-guide covariance from per-supermode 2x2 blocks (xx, yy, xy).
RMatrix from_supermode_blocks(const RMatrix& m, const RVector& vxx, const RVector& vyy, const RVector& vxy) {
  const int n = static_cast<int>(m.rows());
  RMatrix v(2 * n, 2 * n);
  const RMatrix mt = m.transpose();
  v.topLeftCorner(n, n) = mt * vxx.asDiagonal() * m;
  v.bottomRightCorner(n, n) = mt * vyy.asDiagonal() * m;
  v.topRightCorner(n, n) = mt * vxy.asDiagonal() * m;
  v.bottomLeftCorner(n, n) = v.topRightCorner(n, n).transpose();
  return v;
}

}  // namespace

SupermodeBlock flat_uniform_block(double lambda, double eta, double phi, double z) {
  const double f2 = lambda * lambda - 4.0 * eta * eta;
  const double c = cos_f(f2, z);
  const double s = sin_f_over_f(f2, z);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double common = 1.0 + 8.0 * eta * eta * s * s;
  const double cross = 4.0 * eta * s * (sp * c + lambda * cp * s);
  return {common - cross, common + cross, 4.0 * eta * s * (cp * c - lambda * sp * s)};
}

CovarianceMatrix flat_uniform_covariance(const SupermodeBasis& basis, double eta, double phi, double z) {
  check_flat_args(eta, z);
  const int n = basis.size();
  RVector vxx(n), vyy(n), vxy(n);
  for (int k = 0; k < n; ++k) {
    const SupermodeBlock b = flat_uniform_block(basis.eigenvalue(k), eta, phi, z);
    vxx(k) = b.xx;
    vyy(k) = b.yy;
    vxy(k) = b.xy;
  }
  return CovarianceMatrix(from_supermode_blocks(basis.modes(), vxx, vyy, vxy), z);
}

CovarianceMatrix flat_alternating_pi_covariance(int n_guides, double eta, double phi, double z) {
  if (n_guides < 1) throw std::invalid_argument("n_guides must be >= 1");
  check_flat_args(eta, z);
  const int n = n_guides;
  const double ch = std::cosh(4.0 * eta * z);
  const double sh = std::sinh(4.0 * eta * z);
  RMatrix v = RMatrix::Zero(2 * n, 2 * n);
  for (int idx = 0; idx < n; ++idx) {
    const int j = idx + 1;
    const double parity = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^j
    v(idx, idx) = ch + parity * std::sin(phi) * sh;
    v(n + idx, n + idx) = ch - parity * std::sin(phi) * sh;
    v(idx, n + idx) = -parity * std::cos(phi) * sh;
    v(n + idx, idx) = v(idx, n + idx);
  }
  return CovarianceMatrix(std::move(v), z);
}

CovarianceMatrix odd_pump_covariance(const SupermodeBasis& basis, double eta, double z) {
  check_flat_args(eta, z);
  const int n = basis.size();
  const RMatrix& m = basis.modes();
  const int zero = basis.zero_mode();
  const double ch = std::cosh(2.0 * eta * z);
  const double sh = std::sinh(2.0 * eta * z);

  // Per-mode coefficients: a_x, a_y, b for side modes.
  RVector ax(n), ay(n), b(n);
  for (int k = 0; k < n; ++k) {
    const double lam = basis.eigenvalue(k);
    const double f2 = lam * lam - eta * eta;
    const double c = cos_f(f2, z);
    const double s = sin_f_over_f(f2, z);
    ax(k) = 1.0 + 2.0 * eta * (eta - lam) * s * s;
    ay(k) = 1.0 + 2.0 * eta * (eta + lam) * s * s;
    b(k) = 2.0 * eta * s * c;
  }

  RMatrix v(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double sigma = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^{j+1}, 1-based j
      double xx = 0.0, yy = 0.0, xy = 0.0;
      for (int k = 0; k < n; ++k) {
        const double mm = m(k, i) * m(k, j);
        if (k == zero) {
          xx += mm * std::cosh(4.0 * eta * z);
          yy += mm * std::cosh(4.0 * eta * z);
          xy += mm * std::sinh(4.0 * eta * z);
          continue;
        }
        xx += mm * (ax(k) * ch + sigma * b(k) * sh);
        yy += mm * (ay(k) * ch + sigma * b(k) * sh);
        xy += mm * (b(k) * ch + sigma * ax(k) * sh);
      }
      v(i, j) = xx;
      v(n + i, n + j) = yy;
      v(i, n + j) = xy;
    }
  }
  v.bottomLeftCorner(n, n) = v.topRightCorner(n, n).transpose();
  return CovarianceMatrix(std::move(v), z);
}

AnalyticFlatSolution flat_uniform_supermode_solution(const SupermodeBasis& basis, double eta, double phi, double z) {
  check_flat_args(eta, z);
  const int n = basis.size();
  AnalyticFlatSolution sol;
  sol.f_squared.resize(n);
  sol.rate.resize(n);
  sol.half_period.resize(n);
  sol.hyperbolic.assign(n, false);
  CVector u(n), w(n);
  const cplx eta_c = std::polar(eta, phi);
  for (int k = 0; k < n; ++k) {
    const double lam = basis.eigenvalue(k);
    const double f2 = lam * lam - 4.0 * eta * eta;
    sol.f_squared(k) = f2;
    sol.rate(k) = std::sqrt(std::abs(f2));
    sol.hyperbolic[k] = f2 <= 0.0;
    sol.half_period(k) = f2 > 0.0 ? kPi / (2.0 * sol.rate(k)) : std::numeric_limits<double>::infinity();
    const double c = cos_f(f2, z);
    const double s = sin_f_over_f(f2, z);
    u(k) = c + kI * lam * s;
    w(k) = 2.0 * kI * eta_c * s;
  }
  const CMatrix mc = basis.modes().cast<cplx>();
  sol.u_tilde = mc.transpose() * u.asDiagonal() * mc;
  sol.v_tilde = mc.transpose() * w.asDiagonal() * mc;
  return sol;
}

CMatrix linear_supermode_exponential_solution(const CMatrix& lint) {
  const Eigen::Index n = lint.rows();
  if (lint.cols() != n) throw std::invalid_argument("Lint must be square");
  CMatrix g = CMatrix::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n) = lint;
  g.bottomLeftCorner(n, n) = lint.conjugate();
  return expm(g);
}

SymplecticPropagator exponential_solution_propagator(const SupermodeBasis& basis, const PumpProfile& pump, double z) {
  const int n = basis.size();
  const CMatrix t = linear_supermode_exponential_solution(integrated_coupling_matrix(basis, pump, z));
  CVector phase(n);
  for (int k = 0; k < n; ++k) phase(k) = std::exp(kI * basis.eigenvalue(k) * z);
  const CMatrix mc = basis.modes().cast<cplx>();
  const CMatrix alpha = mc.transpose() * phase.asDiagonal() * t.topLeftCorner(n, n) * mc;
  const CMatrix beta = mc.transpose() * phase.asDiagonal() * t.topRightCorner(n, n) * mc;
  return SymplecticPropagator(bogoliubov_to_symplectic(alpha, beta), z);
}

}  // namespace anw
