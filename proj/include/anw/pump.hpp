#pragma once

#include "anw/lattice.hpp"
#include "anw/linalg.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace anw {

enum class PumpPattern {
  flat_uniform,
  flat_alternating_pi,
  flat_alternating_general,
  odd_only,
  even_only,
  central_only,
  custom
};

std::string_view to_string(PumpPattern pattern);
PumpPattern pump_pattern_from_string(std::string_view name);

/// Per-guide nonlinear strengths eta_j = |eta_j| exp(i phi_j), mm^-1.
/// Phases are stored unwrapped.
class PumpProfile {
 public:
  PumpProfile(PumpPattern pattern, std::vector<double> amplitudes, std::vector<double> phases);

  PumpPattern pattern() const { return pattern_; }
  int n_guides() const { return static_cast<int>(amplitudes_.size()); }
  const std::vector<double>& amplitudes() const { return amplitudes_; }
  const std::vector<double>& phases() const { return phases_; }
  cplx eta(int j) const { return std::polar(amplitudes_[j], phases_[j]); }

  /// Same profile with every phase shifted by delta (delta = pi flips the
  /// sign of the nonlinearity).
  PumpProfile phase_shifted(double delta) const;

 private:
  PumpPattern pattern_;
  std::vector<double> amplitudes_;
  std::vector<double> phases_;
};

/// phase_params by pattern:
///   flat_uniform, flat_alternating_pi, odd_only, even_only, central_only: {phi}
///   flat_alternating_general: {phi_odd, phi_even} (guides 1,3,5,... and 2,4,...)
/// An empty list means phi = 0. Use PumpProfile directly for custom profiles.
PumpProfile build_pump_profile(PumpPattern pattern, int n_guides, double eta, std::span<const double> phase_params);

/// (phi_odd, phi_even) from the half-sum and half-difference phases.
std::vector<double> alternating_phases(double dphi_plus, double dphi_minus);

/// Local joint supermode coupling matrix L(z) (complex symmetric, mm^-1).
struct CouplingMatrixL {
  CMatrix entries;
  double z = 0.0;
};

CouplingMatrixL coupling_matrix(const SupermodeBasis& basis, const PumpProfile& pump, double z);

/// Analytic integral of L over [0, z]. Near-resonant pairs
/// (|lambda_k + lambda_k'| z < 1e-6) use the second-order series.
CMatrix integrated_coupling_matrix(const SupermodeBasis& basis, const PumpProfile& pump, double z);

}  // namespace anw
