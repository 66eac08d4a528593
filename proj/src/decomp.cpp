#include "anw/decomp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace anw {

namespace {

// Fix the free phase of a mode vector: largest-magnitude entry made real positive.
void normalize_phase(Eigen::Ref<CVector> v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  const double mag = std::abs(v(idx));
  if (mag > 0.0) v *= std::conj(v(idx)) / mag;
}

// Takagi vectors are fixed up to sign only: largest-magnitude entry gets a
// positive real part (positive imaginary part if the real part vanishes).
void normalize_sign(Eigen::Ref<CVector> v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  const cplx p = v(idx);
  const bool flip = std::abs(p.real()) > 1e-12 * std::abs(p) ? p.real() < 0 : p.imag() < 0;
  if (flip) v = -v;
}

}  // namespace

TakagiFactorization takagi(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("takagi: matrix must be square");
  if (max_abs(a - a.transpose()) >= 1e-10) throw std::invalid_argument("takagi: matrix is not symmetric");
  const CMatrix sym = 0.5 * (a + a.transpose());

  // Real symmetric embedding: eigenvector (x, y) with eigenvalue s > 0 gives
  // w = x + i y with A conj(w) = s w. Eigenvalues come in +-s pairs.
  RMatrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = sym.real();
  h.topRightCorner(n, n) = sym.imag();
  h.bottomLeftCorner(n, n) = sym.imag();
  h.bottomRightCorner(n, n) = -sym.real();
  const Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  if (es.info() != Eigen::Success) throw InvariantError("takagi: eigensolver did not converge");

  const double scale = max_abs(sym);
  const double tol = 1e-12 * std::max(scale, 1e-300) * static_cast<double>(std::max<Eigen::Index>(n, 1));
  CMatrix u(n, n);
  RVector sigma = RVector::Zero(n);
  Eigen::Index filled = 0;
  for (Eigen::Index m = 0; m < n; ++m) {
    const Eigen::Index idx = 2 * n - 1 - m;
    const double s = es.eigenvalues()(idx);
    if (!(s > tol)) break;
    CVector w = es.eigenvectors().col(idx).head(n).cast<cplx>() + kI * es.eigenvectors().col(idx).tail(n).cast<cplx>();
    w.normalize();
    normalize_sign(w);
    u.col(filled) = w;
    sigma(filled) = s;
    ++filled;
  }

  // Null space: Gram-Schmidt on the standard basis, largest residual first.
  while (filled < n) {
    CVector best;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      CVector v = CVector::Unit(n, j);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index c = 0; c < filled; ++c) v -= u.col(c) * u.col(c).dot(v);
      const double nv = v.norm();
      if (nv > best_norm) {
        best_norm = nv;
        best = v;
      }
    }
    best /= best_norm;
    normalize_phase(best);
    u.col(filled) = best;
    ++filled;
  }

  TakagiFactorization out{u.adjoint(), sigma};
  const CMatrix check = out.upsilon * a * out.upsilon.transpose();
  CMatrix diag = CMatrix::Zero(n, n);
  diag.diagonal() = sigma.cast<cplx>();
  const double residual = max_abs(check - diag);
  if (!(residual <= 1e-10 * std::max(1.0, scale)))
    throw InvariantError("takagi: reconstruction residual " + std::to_string(residual));
  return out;
}

RMatrix BlochMessiah::k_matrix() const {
  const Eigen::Index n = k_diag.size();
  RVector d(2 * n);
  d.head(n) = k_diag.array().exp();
  d.tail(n) = (-k_diag.array()).exp();
  return d.asDiagonal();
}

BlochMessiah bloch_messiah(const RMatrix& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0)
    throw std::invalid_argument("bloch_messiah: matrix must be square with even dimension");
  const Eigen::Index n = s.rows() / 2;
  const double scale = std::max(1.0, max_abs(s));
  const double res = symplectic_residual(s);
  if (!(res <= 1e-9 * scale * scale))
    throw InvariantError("bloch_messiah: input is not symplectic (residual " + std::to_string(res) + ")");

  // Polar decomposition S = O P, then H = log P = [[A, B], [B, -A]].
  const Eigen::JacobiSVD<RMatrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RMatrix o = svd.matrixU() * svd.matrixV().transpose();
  const RMatrix hlog = svd.matrixV() * svd.singularValues().array().log().matrix().asDiagonal() * svd.matrixV().transpose();
  const RMatrix a = 0.5 * (hlog.topLeftCorner(n, n) - hlog.bottomRightCorner(n, n));
  const RMatrix b = 0.5 * (hlog.topRightCorner(n, n) + hlog.bottomLeftCorner(n, n));
  const CMatrix z = a.cast<cplx>() + kI * b.cast<cplx>();
  const TakagiFactorization tk = takagi(CMatrix(0.5 * (z + z.transpose())));
  const RMatrix r = unitary_to_orthosymplectic(tk.upsilon.adjoint());

  BlochMessiah bm{o * r, tk.lambda_diag, r.transpose()};
  const double recon = max_abs(RMatrix(bm.r1 * bm.k_matrix() * bm.r2 - s));
  if (!(recon <= 1e-8 * scale))
    throw InvariantError("bloch_messiah: reconstruction residual " + std::to_string(recon));
  return bm;
}

BlochMessiah bloch_messiah(const SymplecticPropagator& prop) { return bloch_messiah(prop.matrix()); }

RVector squeezing_spectrum(const RMatrix& v) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0)
    throw std::invalid_argument("squeezing_spectrum: matrix must be square with even dimension");
  const double det = v.determinant();
  if (!(std::abs(det - 1.0) <= 1e-4))
    throw std::invalid_argument("squeezing_spectrum: covariance is not pure (det " + std::to_string(det) + ")");
  const Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (v + v.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

RVector squeezing_spectrum(const CovarianceMatrix& cov) { return squeezing_spectrum(cov.matrix()); }

RVector downconversion_gains(const SupermodeBasis& basis, const PumpProfile& pump, double z) {
  return takagi(integrated_coupling_matrix(basis, pump, z)).lambda_diag;
}

CMatrix nonlinear_supermode_profiles(const SupermodeBasis& basis, const PumpProfile& pump, double z) {
  const int n = basis.size();
  const TakagiFactorization tk = takagi(integrated_coupling_matrix(basis, pump, z));
  CVector phase(n);
  for (int k = 0; k < n; ++k) phase(k) = std::exp(-kI * basis.eigenvalue(k) * z);
  CMatrix p = tk.upsilon * phase.asDiagonal() * basis.modes().cast<cplx>();
  for (int m = 0; m < n; ++m) {
    CVector row = p.row(m).transpose();
    normalize_phase(row);
    p.row(m) = row.transpose();
  }
  return p;
}

RMatrix supermode_projected_covariance(const RMatrix& v, const SupermodeBasis& basis) {
  if (v.rows() != 2 * basis.size()) throw std::invalid_argument("covariance and basis sizes differ");
  const RMatrix t = block_diag2(basis.modes());
  return t * v * t.transpose();
}

SupermodeBlock projected_block(const RMatrix& v, const SupermodeBasis& basis, int k) {
  const int n = basis.size();
  if (v.rows() != 2 * n) throw std::invalid_argument("covariance and basis sizes differ");
  if (k < 0 || k >= n) throw std::invalid_argument("supermode index out of range");
  const RVector m = basis.modes().row(k).transpose();
  return {m.dot(v.topLeftCorner(n, n) * m), m.dot(v.bottomRightCorner(n, n) * m), m.dot(v.topRightCorner(n, n) * m)};
}

BlockSqueezing diagonalize_block(const SupermodeBlock& b) {
  const double mean = 0.5 * (b.xx + b.yy);
  const double radius = 0.5 * std::sqrt((b.yy - b.xx) * (b.yy - b.xx) + 4.0 * b.xy * b.xy);
  double angle = 0.5 * std::atan2(2.0 * b.xy, b.xx - b.yy);
  if (angle < 0.0) angle += kPi;
  return {angle, mean + radius, mean - radius};
}

double block_gain(const SupermodeBlock& block) {
  const BlockSqueezing d = diagonalize_block(block);
  return 0.25 * std::log(d.v_max / d.v_min);
}

SupermodeRotation supermode_rotation(const SupermodeBasis& basis, double eta, double phi, double z, int k) {
  if (k < 0 || k >= basis.size()) throw std::invalid_argument("supermode index out of range");
  if (!(eta >= 0.0) || !(z >= 0.0)) throw std::invalid_argument("eta and z must be >= 0");
  const SupermodeBlock block = flat_uniform_block(basis.eigenvalue(k), eta, phi, z);
  return {block, diagonalize_block(block)};
}

}  // namespace anw
