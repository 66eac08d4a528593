#include "anw/qpm.hpp"

#include "anw/decomp.hpp"

#include <cmath>
#include <string>

namespace anw {

QpmGrating::QpmGrating(int target, double period_mm, double duty)
    : target_mode(target), period(period_mm), duty_cycle(duty) {
  if (target < 0) throw std::invalid_argument("QPM target mode must be >= 0");
  if (!(period > 0.0)) throw std::invalid_argument("QPM period must be > 0");
  if (!(duty > 0.0 && duty < 1.0)) throw std::invalid_argument("QPM duty cycle must lie in (0, 1)");
}

QpmGrating qpm_grating_for(const SupermodeBasis& basis, int k, double duty) {
  if (k < 0 || k >= basis.size()) throw std::invalid_argument("QPM target mode out of range");
  const double lam = basis.eigenvalue(k);
  if (k == basis.zero_mode() || std::abs(lam) < 1e-12)
    throw std::invalid_argument("the zero supermode is phase matched already and takes no QPM grating");
  return QpmGrating(k, kPi / std::abs(lam), duty);
}

SymplecticPropagator qpm_propagator(const CouplingProfile& profile, const PumpProfile& pump, const QpmGrating& grating,
                                    double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("z must be >= 0");
  const RMatrix d_up = drift_generator(profile, pump).matrix();
  const RMatrix d_down = drift_generator(profile, pump.phase_shifted(kPi)).matrix();
  const double len_up = grating.period * grating.duty_cycle;
  const double len_down = grating.period - len_up;
  const Eigen::Index dim = d_up.rows();

  const double periods = std::floor(z / grating.period);
  double rest = z - periods * grating.period;
  if (rest < 0.0) rest = 0.0;

  RMatrix s = RMatrix::Identity(dim, dim);
  if (periods > 0) {
    // One period is up then down; raise it to the integer power by squaring.
    RMatrix base = expm(RMatrix(d_down * len_down)) * expm(RMatrix(d_up * len_up));
    auto count = static_cast<long long>(periods);
    while (count > 0) {
      if (count & 1) s = base * s;
      count >>= 1;
      if (count > 0) base = base * base;
    }
  }
  if (rest > 0.0) {
    if (rest <= len_up) {
      s = expm(RMatrix(d_up * rest)) * s;
    } else {
      s = expm(RMatrix(d_down * (rest - len_up))) * expm(RMatrix(d_up * len_up)) * s;
    }
  }
  return SymplecticPropagator(std::move(s), z);
}

RVector qpm_approx_gain(const SupermodeBasis& basis, const PumpProfile& pump, const QpmGrating& grating, double z) {
  if (std::abs(grating.duty_cycle - 0.5) > 1e-12)
    throw std::invalid_argument("the first-order QPM estimate holds for a 50% duty cycle only");
  if (pump.n_guides() != basis.size()) throw std::invalid_argument("pump and lattice sizes differ");
  if (!(z >= 0.0)) throw std::invalid_argument("z must be >= 0");
  const cplx eta0 = pump.eta(0);
  for (int j = 1; j < pump.n_guides(); ++j) {
    if (std::abs(pump.eta(j) - eta0) > 1e-12 * std::max(1.0, std::abs(eta0)))
      throw std::invalid_argument("the first-order QPM estimate requires a flat pump");
  }
  if (grating.target_mode >= basis.size()) throw std::invalid_argument("QPM target mode out of range");
  const double eta_eff = 2.0 * std::abs(eta0) / kPi;
  const double lam_t = std::abs(basis.eigenvalue(grating.target_mode));
  RVector r(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    const double half_detuning = std::abs(basis.eigenvalue(k)) - lam_t;
    const bool matched = k == grating.target_mode || k == basis.partner(grating.target_mode);
    r(k) = matched ? 2.0 * eta_eff * z : block_gain(flat_uniform_block(half_detuning, eta_eff, std::arg(eta0), z));
  }
  return r;
}

RVector supermode_block_gains(const RMatrix& v, const SupermodeBasis& basis) {
  RVector r(basis.size());
  for (int k = 0; k < basis.size(); ++k) r(k) = block_gain(projected_block(v, basis, k));
  return r;
}

}  // namespace anw
