#pragma once

#include "anw/lattice.hpp"
#include "anw/linalg.hpp"
#include "anw/pump.hpp"

namespace anw {

/// Linear drift generator in the quadrature ordering (x_1..x_N, y_1..y_N),
/// d(xi)/dz = Delta xi. Construction checks trace(Delta) = 0 and that
/// Omega * Delta is symmetric.
class DriftGenerator {
 public:
  explicit DriftGenerator(RMatrix matrix);
  const RMatrix& matrix() const { return matrix_; }
  int n_modes() const { return static_cast<int>(matrix_.rows() / 2); }

 private:
  RMatrix matrix_;
};

/// Real symplectic propagator S(z). Construction checks S Omega S^T = Omega
/// and det S = 1, with tolerances scaled by ||S||^2.
class SymplecticPropagator {
 public:
  SymplecticPropagator(RMatrix matrix, double z);
  const RMatrix& matrix() const { return matrix_; }
  double z() const { return z_; }
  int n_modes() const { return static_cast<int>(matrix_.rows() / 2); }

 private:
  RMatrix matrix_;
  double z_;
};

/// Pure-state covariance matrix (shot noise = 1). Construction checks
/// symmetry, V + i Omega >= 0 and det V = 1.
class CovarianceMatrix {
 public:
  CovarianceMatrix(RMatrix matrix, double z);
  const RMatrix& matrix() const { return matrix_; }
  double z() const { return z_; }
  int n_modes() const { return static_cast<int>(matrix_.rows() / 2); }

  double var_x(int i) const { return matrix_(i, i); }
  double var_y(int i) const { return matrix_(n_modes() + i, n_modes() + i); }

 private:
  RMatrix matrix_;
  double z_;
};

DriftGenerator drift_generator(const CouplingProfile& profile, const PumpProfile& pump);
SymplecticPropagator propagator(const DriftGenerator& gen, double z);
CovarianceMatrix covariance_from(const SymplecticPropagator& prop);

/// cos(F z) and sin(F z)/F as functions of F^2, continued to cosh/sinh for
/// F^2 < 0 and replaced by a Taylor series when |F^2| z^2 < 1e-8.
double cos_f(double f_squared, double z);
double sin_f_over_f(double f_squared, double z);

/// 2x2 quadrature covariance of a single linear supermode.
struct SupermodeBlock {
  double xx = 1.0;
  double yy = 1.0;
  double xy = 0.0;
};

/// Supermode block of propagation constant lambda under a flat pump.
SupermodeBlock flat_uniform_block(double lambda, double eta, double phi, double z);

/// Flat pump of strength eta and phase phi on every guide.
CovarianceMatrix flat_uniform_covariance(const SupermodeBasis& basis, double eta, double phi, double z);

/// Flat pump with phases (j+1) pi + phi: independent single-mode squeezers.
CovarianceMatrix flat_alternating_pi_covariance(int n_guides, double eta, double phi, double z);

/// Pump eta on odd guides only, phi = 0.
CovarianceMatrix odd_pump_covariance(const SupermodeBasis& basis, double eta, double z);

struct AnalyticFlatSolution {
  RVector f_squared;     ///< lambda_k^2 - 4 eta^2
  RVector rate;          ///< sqrt(|f_squared|)
  std::vector<bool> hyperbolic;
  RVector half_period;   ///< pi / (2 F_k), infinity on hyperbolic modes
  CMatrix u_tilde;       ///< A_j(z) = sum_j' U_jj' A_j'(0) + V_jj' A_j'^dag(0)
  CMatrix v_tilde;
};

AnalyticFlatSolution flat_uniform_supermode_solution(const SupermodeBasis& basis, double eta, double phi, double z);

/// exp([[0, Lint], [Lint^*, 0]]), the interaction-picture Bogoliubov map for
/// the supermode amplitudes (b, b^dag).
CMatrix linear_supermode_exponential_solution(const CMatrix& lint);

/// Individual-guide symplectic propagator built from the exponential solution
/// with Lint = integrated_coupling_matrix(basis, pump, z).
SymplecticPropagator exponential_solution_propagator(const SupermodeBasis& basis, const PumpProfile& pump, double z);

}  // namespace anw
