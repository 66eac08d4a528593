#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace anw {

using cplx = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Raised when a computed object breaks a physical invariant
/// (symplecticity, purity, failed reconstruction, solver non-convergence).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symplectic form [[0, I], [-I, 0]] in (x_1..x_N, y_1..y_N) ordering.
RMatrix symplectic_form(int n_modes);

/// max-abs of S Omega S^T - Omega.
double symplectic_residual(const RMatrix& s);

/// Smallest eigenvalue of the Hermitian matrix V + i Omega.
double uncertainty_min_eigenvalue(const RMatrix& v);

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

/// exp(A) by scaling and squaring with a degree-13 Pade approximant.
RMatrix expm(const RMatrix& a);
CMatrix expm(const CMatrix& a);

/// Real symplectic matrix of the Bogoliubov map a -> alpha a + beta a^dagger,
/// with x = a + a^dagger and y = i (a^dagger - a).
RMatrix bogoliubov_to_symplectic(const CMatrix& alpha, const CMatrix& beta);

/// Orthogonal-symplectic matrix [[Re U, -Im U], [Im U, Re U]] of a unitary U.
RMatrix unitary_to_orthosymplectic(const CMatrix& u);

/// diag(m, m): maps individual quadratures to supermode quadratures when the
/// rows of m are the supermodes.
RMatrix block_diag2(const RMatrix& m);

}  // namespace anw
