#pragma once

#include "anw/lattice.hpp"
#include "anw/linalg.hpp"
#include "anw/propagate.hpp"
#include "anw/pump.hpp"

namespace anw {

/// upsilon * A * upsilon^T = diag(lambda_diag), upsilon unitary,
/// lambda_diag >= 0 descending.
struct TakagiFactorization {
  CMatrix upsilon;
  RVector lambda_diag;
};

/// Autonne-Takagi factorization of a complex symmetric matrix. Throws
/// std::invalid_argument when ||A - A^T|| >= 1e-10 and InvariantError if the
/// reconstruction check fails.
TakagiFactorization takagi(const CMatrix& a);

/// S = r1 * diag(e^r, e^-r) * r2 with orthogonal-symplectic r1, r2 and
/// r = k_diag >= 0 descending.
struct BlochMessiah {
  RMatrix r1;
  RVector k_diag;
  RMatrix r2;

  RMatrix k_matrix() const;
};

BlochMessiah bloch_messiah(const RMatrix& s);
BlochMessiah bloch_messiah(const SymplecticPropagator& prop);

/// Eigenvalues of a pure-state covariance, ascending. The first entry is the
/// generalized squeezed variance. Rejects |det V - 1| > 1e-4.
RVector squeezing_spectrum(const RMatrix& v);
RVector squeezing_spectrum(const CovarianceMatrix& cov);

/// Takagi values of the integrated coupling matrix (low-gain squeezing
/// parameters of the nonlinear supermodes), descending.
RVector downconversion_gains(const SupermodeBasis& basis, const PumpProfile& pump, double z);

/// Row m is the spatial profile of nonlinear supermode m over the guides,
/// normalized and phased so its largest component is real positive.
CMatrix nonlinear_supermode_profiles(const SupermodeBasis& basis, const PumpProfile& pump, double z);

/// Covariance in the linear supermode basis, T V T^T with T = diag(M, M).
RMatrix supermode_projected_covariance(const RMatrix& v, const SupermodeBasis& basis);

/// 2x2 block of supermode k taken from an individual-guide covariance.
SupermodeBlock projected_block(const RMatrix& v, const SupermodeBasis& basis, int k);

struct BlockSqueezing {
  double angle;  ///< rotation in [0, pi) that puts V_max on x' = cos(a) x + sin(a) y
  double v_max;
  double v_min;
};

BlockSqueezing diagonalize_block(const SupermodeBlock& block);

/// Squeezing parameter r of a pure single-mode block, V_min = e^{-2r}.
double block_gain(const SupermodeBlock& block);

struct SupermodeRotation {
  SupermodeBlock block;
  BlockSqueezing squeezing;
};

/// Phase-space rotation diagonalizing supermode k under a flat pump.
SupermodeRotation supermode_rotation(const SupermodeBasis& basis, double eta, double phi, double z, int k);

}  // namespace anw
