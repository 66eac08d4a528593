#include "anw/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>

namespace anw {

RMatrix symplectic_form(int n_modes) {
  RMatrix omega = RMatrix::Zero(2 * n_modes, 2 * n_modes);
  omega.topRightCorner(n_modes, n_modes).setIdentity();
  omega.bottomLeftCorner(n_modes, n_modes) = -RMatrix::Identity(n_modes, n_modes);
  return omega;
}

double symplectic_residual(const RMatrix& s) {
  const RMatrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return max_abs(s * omega * s.transpose() - omega);
}

double uncertainty_min_eigenvalue(const RMatrix& v) {
  const CMatrix h = v.cast<cplx>() + kI * symplectic_form(static_cast<int>(v.rows() / 2)).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

// Higham (2005) Pade-13 coefficients and the theta_13 threshold for the 1-norm.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

template <typename Mat>
Mat expm_impl(const Mat& a) {
  using Index = Eigen::Index;
  const Index n = a.rows();
  if (n == 0) return a;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return Mat::Identity(n, n);
  int squarings = 0;
  if (norm1 > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  const Mat as = a / std::ldexp(1.0, squarings);

  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = as * as;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const auto& b = kPade13;
  const Mat u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  const Mat u = as * (u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  const Mat v_inner = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  const Mat v = v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace

RMatrix expm(const RMatrix& a) { return expm_impl(a); }
CMatrix expm(const CMatrix& a) { return expm_impl(a); }

RMatrix bogoliubov_to_symplectic(const CMatrix& alpha, const CMatrix& beta) {
  const Eigen::Index n = alpha.rows();
  RMatrix s(2 * n, 2 * n);
  const CMatrix plus = alpha + beta;
  const CMatrix minus = alpha - beta;
  s.topLeftCorner(n, n) = plus.real();
  s.topRightCorner(n, n) = -minus.imag();
  s.bottomLeftCorner(n, n) = plus.imag();
  s.bottomRightCorner(n, n) = minus.real();
  return s;
}

RMatrix unitary_to_orthosymplectic(const CMatrix& u) {
  return bogoliubov_to_symplectic(u, CMatrix::Zero(u.rows(), u.cols()));
}

RMatrix block_diag2(const RMatrix& m) {
  const Eigen::Index n = m.rows();
  RMatrix t = RMatrix::Zero(2 * n, 2 * n);
  t.topLeftCorner(n, n) = m;
  t.bottomRightCorner(n, n) = m;
  return t;
}

}  // namespace anw
