#include "anw/pump.hpp"

#include <cmath>
#include <string>

namespace anw {

std::string_view to_string(PumpPattern pattern) {
  switch (pattern) {
    case PumpPattern::flat_uniform: return "flat_uniform";
    case PumpPattern::flat_alternating_pi: return "flat_alternating_pi";
    case PumpPattern::flat_alternating_general: return "flat_alternating_general";
    case PumpPattern::odd_only: return "odd_only";
    case PumpPattern::even_only: return "even_only";
    case PumpPattern::central_only: return "central_only";
    case PumpPattern::custom: return "custom";
  }
  return "custom";
}

PumpPattern pump_pattern_from_string(std::string_view name) {
  for (PumpPattern p : {PumpPattern::flat_uniform, PumpPattern::flat_alternating_pi,
                        PumpPattern::flat_alternating_general, PumpPattern::odd_only, PumpPattern::even_only,
                        PumpPattern::central_only, PumpPattern::custom}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown pump pattern '" + std::string(name) + "'");
}

PumpProfile::PumpProfile(PumpPattern pattern, std::vector<double> amplitudes, std::vector<double> phases)
    : pattern_(pattern), amplitudes_(std::move(amplitudes)), phases_(std::move(phases)) {
  if (amplitudes_.empty()) throw std::invalid_argument("pump profile needs at least one guide");
  if (amplitudes_.size() != phases_.size()) throw std::invalid_argument("pump amplitudes and phases differ in length");
  for (double a : amplitudes_) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("pump amplitudes must be finite and >= 0");
  }
  for (double p : phases_) {
    if (!std::isfinite(p)) throw std::invalid_argument("pump phases must be finite");
  }
}

PumpProfile PumpProfile::phase_shifted(double delta) const {
  std::vector<double> shifted = phases_;
  for (double& p : shifted) p += delta;
  return PumpProfile(pattern_, amplitudes_, std::move(shifted));
}

PumpProfile build_pump_profile(PumpPattern pattern, int n_guides, double eta, std::span<const double> phase_params) {
  if (n_guides < 1) throw std::invalid_argument("n_guides must be >= 1");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("pump strength eta must be >= 0");
  const std::size_t n = static_cast<std::size_t>(n_guides);
  const std::size_t expected = pattern == PumpPattern::flat_alternating_general ? 2 : 1;
  if (pattern == PumpPattern::custom) throw std::invalid_argument("construct custom pumps from explicit vectors");
  if (!phase_params.empty() && phase_params.size() != expected)
    throw std::invalid_argument(std::string(to_string(pattern)) + " takes " + std::to_string(expected) +
                                " phase parameter(s)");
  const double phi = phase_params.empty() ? 0.0 : phase_params[0];

  std::vector<double> amp(n, 0.0);
  std::vector<double> ph(n, phi);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const int j = static_cast<int>(idx) + 1;  // 1-based guide label
    const bool odd = j % 2 == 1;
    switch (pattern) {
      case PumpPattern::flat_uniform:
        amp[idx] = eta;
        break;
      case PumpPattern::flat_alternating_pi:
        amp[idx] = eta;
        ph[idx] = (j + 1) * kPi + phi;
        break;
      case PumpPattern::flat_alternating_general:
        amp[idx] = eta;
        ph[idx] = phase_params.empty() ? 0.0 : (odd ? phase_params[0] : phase_params[1]);
        break;
      case PumpPattern::odd_only:
        amp[idx] = odd ? eta : 0.0;
        break;
      case PumpPattern::even_only:
        amp[idx] = odd ? 0.0 : eta;
        break;
      case PumpPattern::central_only:
        if (n_guides % 2 == 0) throw std::invalid_argument("central_only pumping requires an odd number of guides");
        amp[idx] = (j == (n_guides + 1) / 2) ? eta : 0.0;
        break;
      case PumpPattern::custom:
        break;
    }
  }
  return PumpProfile(pattern, std::move(amp), std::move(ph));
}

std::vector<double> alternating_phases(double dphi_plus, double dphi_minus) {
  return {dphi_plus - dphi_minus, dphi_plus + dphi_minus};
}

namespace {

void check_dims(const SupermodeBasis& basis, const PumpProfile& pump) {
  if (basis.size() != pump.n_guides())
    throw std::invalid_argument("pump has " + std::to_string(pump.n_guides()) + " guides, lattice has " +
                                std::to_string(basis.size()));
}

// sum_j eta_j M_kj M_k'j, the z-independent part of L.
CMatrix pump_overlap(const SupermodeBasis& basis, const PumpProfile& pump) {
  const int n = basis.size();
  const RMatrix& m = basis.modes();
  CVector eta(n);
  for (int j = 0; j < n; ++j) eta(j) = pump.eta(j);
  CMatrix w = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int kp = k; kp < n; ++kp) {
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) acc += eta(j) * m(k, j) * m(kp, j);
      w(k, kp) = acc;
      w(kp, k) = acc;
    }
  }
  return w;
}

}  // namespace

CouplingMatrixL coupling_matrix(const SupermodeBasis& basis, const PumpProfile& pump, double z) {
  check_dims(basis, pump);
  if (z < 0.0) throw std::invalid_argument("z must be >= 0");
  const int n = basis.size();
  const CMatrix w = pump_overlap(basis, pump);
  CMatrix l(n, n);
  for (int k = 0; k < n; ++k) {
    for (int kp = k; kp < n; ++kp) {
      const double detune = basis.eigenvalue(k) + basis.eigenvalue(kp);
      l(k, kp) = 2.0 * kI * w(k, kp) * std::exp(-kI * detune * z);
      l(kp, k) = l(k, kp);
    }
  }
  return {std::move(l), z};
}

CMatrix integrated_coupling_matrix(const SupermodeBasis& basis, const PumpProfile& pump, double z) {
  check_dims(basis, pump);
  if (z < 0.0) throw std::invalid_argument("z must be >= 0");
  const int n = basis.size();
  const CMatrix w = pump_overlap(basis, pump);
  CMatrix out(n, n);
  for (int k = 0; k < n; ++k) {
    for (int kp = k; kp < n; ++kp) {
      const double s = basis.eigenvalue(k) + basis.eigenvalue(kp);
      const double sz = s * z;
      // int_0^z exp(-i s z') dz' = z exp(-i s z / 2) sinc(s z / 2)
      cplx integral;
      if (std::abs(sz) < 1e-6) {
        integral = z * (1.0 - 0.5 * kI * sz - sz * sz / 6.0);
      } else {
        const double half = 0.5 * sz;
        integral = z * std::exp(-kI * half) * (std::sin(half) / half);
      }
      out(k, kp) = 2.0 * kI * w(k, kp) * integral;
      out(kp, k) = out(k, kp);
    }
  }
  return out;
}

}  // namespace anw
