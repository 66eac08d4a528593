#pragma once

#include "anw/lattice.hpp"
#include "anw/propagate.hpp"
#include "anw/pump.hpp"

namespace anw {

/// Square-wave sign modulation of the nonlinearity. The first domain starts
/// at z = 0 with the unflipped sign and has length period * duty_cycle.
struct QpmGrating {
  int target_mode = 0;  ///< 0-based supermode index
  double period = 0.0;  ///< mm
  double duty_cycle = 0.5;

  QpmGrating(int target, double period_mm, double duty = 0.5);
};

/// Grating of period |pi / lambda_k| phase-matching supermode k and its
/// partner. Rejects the zero supermode.
QpmGrating qpm_grating_for(const SupermodeBasis& basis, int k, double duty = 0.5);

/// Exact piecewise evolution with phi_j -> phi_j + pi on flipped domains.
SymplecticPropagator qpm_propagator(const CouplingProfile& profile, const PumpProfile& pump, const QpmGrating& grating,
                                    double z);

/// First-order Fourier estimate of the per-supermode squeezing parameters
/// under a flat pump and 50% duty grating: every supermode sees an effective
/// strength 2 eta / pi with residual detuning 2(|lambda_k| - |lambda_target|).
/// Matched modes give (4 eta / pi) z.
RVector qpm_approx_gain(const SupermodeBasis& basis, const PumpProfile& pump, const QpmGrating& grating, double z);

/// Squeezing parameter of each linear supermode's 2x2 covariance block.
/// Exact per-mode gains whenever the pump keeps supermodes decoupled.
RVector supermode_block_gains(const RMatrix& v, const SupermodeBasis& basis);

}  // namespace anw
