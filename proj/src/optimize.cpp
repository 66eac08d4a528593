#include "anw/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace anw {

GridRange::GridRange(double lo, double hi, int n_steps) : min(lo), max(hi), steps(n_steps) {
  if (!(lo < hi)) throw std::invalid_argument("grid range needs min < max");
  if (n_steps < 2) throw std::invalid_argument("grid range needs at least 2 steps");
}

CovarianceMatrix state_covariance(const CouplingProfile& profile, PumpPattern pattern, double eta,
                                  std::span<const double> phase_params, double z) {
  if (pattern == PumpPattern::flat_uniform) {
    const double phi = phase_params.empty() ? 0.0 : phase_params[0];
    return flat_uniform_covariance(supermode_basis(profile), eta, phi, z);
  }
  const auto pump = build_pump_profile(pattern, profile.n_guides(), eta, phase_params);
  return covariance_from(propagator(drift_generator(profile, pump), z));
}

std::vector<SweepRow> sweep_nullifiers(const SweepGrid& grid, const ClusterSpec& spec) {
  if (spec.size() != grid.n_guides) throw std::invalid_argument("cluster and lattice sizes differ");
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(grid.c0_range.steps) * grid.eta_range.steps);
  for (int a = 0; a < grid.c0_range.steps; ++a) {
    const double c0 = grid.c0_range.at(a);
    const auto profile = build_coupling_profile(grid.lattice, grid.n_guides, c0);
    for (int b = 0; b < grid.eta_range.steps; ++b) {
      const double eta = grid.eta_range.at(b);
      auto var = nullifier_variances(state_covariance(profile, grid.pattern, eta, grid.phase_params, grid.z), spec);
      const bool flag = std::all_of(var.begin(), var.end(), [](double x) { return x < 2.0 / 3.0; });
      rows.push_back({c0, eta, std::move(var), flag});
    }
  }
  return rows;
}

void EsConfig::validate() const {
  if (parents < 1 || population < parents) throw std::invalid_argument("ES needs 1 <= parents <= population");
  if (generations < 0) throw std::invalid_argument("ES generations must be >= 0");
  if (!(initial_sigma > 0.0)) throw std::invalid_argument("ES initial sigma must be > 0");
}

double cluster_fitness(const SupermodeBasis& basis, double eta, double phi, double z, const ClusterSpec& spec) {
  const auto var = nullifier_variances(flat_uniform_covariance(basis, eta, phi, z), spec);
  return std::accumulate(var.begin(), var.end(), 0.0);
}

EsResult es_optimize_eta(const SupermodeBasis& basis, double z, double eta_max, const EsConfig& cfg,
                         const ClusterSpec& spec, double phi) {
  if (!(eta_max > 0.0)) throw std::invalid_argument("eta_max must be > 0");
  if (spec.size() != basis.size()) throw std::invalid_argument("cluster and lattice sizes differ");
  cfg.validate();

  const double eta_min = eta_max * 1e-9;
  const double tau = 1.0 / std::sqrt(2.0);
  auto fitness = [&](double eta) { return cluster_fitness(basis, eta, phi, z, spec); };

  double mean = 0.5 * eta_max;
  double sigma = cfg.initial_sigma * eta_max;
  EsResult res;
  res.eta = mean;
  res.fitness = fitness(mean);

  struct Child {
    double eta, sigma, f;
  };
  std::vector<Child> kids(cfg.population);
  std::vector<int> order(cfg.population);
  for (int g = 0; g < cfg.generations; ++g) {
    for (int i = 0; i < cfg.population; ++i) {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(i)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> gauss;
      const double s = std::min(sigma * std::exp(tau * gauss(rng)), eta_max);
      const double x = std::clamp(mean + s * gauss(rng), eta_min, eta_max);
      kids[i] = {x, s, 0.0};
    }
    for (auto& k : kids) k.f = fitness(k.eta);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return kids[a].f < kids[b].f; });

    double m = 0.0, log_s = 0.0;
    for (int r = 0; r < cfg.parents; ++r) {
      m += kids[order[r]].eta;
      log_s += std::log(kids[order[r]].sigma);
    }
    mean = m / cfg.parents;
    sigma = std::exp(log_s / cfg.parents);

    const Child& top = kids[order[0]];
    if (top.f < res.fitness) {
      res.fitness = top.f;
      res.eta = top.eta;
    }
    res.trace.push_back({g, mean, sigma, top.f, res.fitness, res.eta});
  }
  res.variances = nullifier_variances(flat_uniform_covariance(basis, res.eta, phi, z), spec);
  return res;
}

EsResult es_optimize_eta(double c0, double z, int n_guides, double eta_max, const EsConfig& cfg,
                         const ClusterSpec& spec, double phi) {
  const auto basis = supermode_basis(build_coupling_profile(ProfileKind::homogeneous, n_guides, c0));
  return es_optimize_eta(basis, z, eta_max, cfg, spec, phi);
}

std::string_view to_string(LoObjective objective) { return objective == LoObjective::sum ? "sum" : "max"; }

LoObjective lo_objective_from_string(std::string_view name) {
  if (name == "sum") return LoObjective::sum;
  if (name == "max") return LoObjective::max;
  throw std::invalid_argument("unknown LO objective '" + std::string(name) + "'");
}

double lo_objective_value(const std::vector<double>& variances, LoObjective objective) {
  if (objective == LoObjective::sum) return std::accumulate(variances.begin(), variances.end(), 0.0);
  return *std::max_element(variances.begin(), variances.end());
}

namespace {

// Nullifier variances from 2x2 mode blocks, touching only the modes each
// nullifier involves.
class NullifierEvaluator {
 public:
  NullifierEvaluator(const RMatrix& v, const ClusterSpec& spec) : v_(v), n_(spec.size()) {
    nodes_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      const double w = 1.0 / std::sqrt(1.0 + spec.degree(i));
      nodes_[i].push_back({i, kPi / 2, w});
      for (int k = 0; k < n_; ++k)
        if (spec.adjacency()(i, k)) nodes_[i].push_back({k, 0.0, -w});
    }
    touched_.resize(n_);
    for (int i = 0; i < n_; ++i)
      for (const auto& t : nodes_[i]) touched_[t.mode].push_back(i);
  }

  double node(int i, const std::vector<double>& theta) const {
    double acc = 0.0;
    for (const auto& a : nodes_[i]) {
      const double ta = theta[a.mode] + a.offset;
      const double ca = a.weight * std::cos(ta), sa = a.weight * std::sin(ta);
      for (const auto& b : nodes_[i]) {
        const double tb = theta[b.mode] + b.offset;
        const double cb = b.weight * std::cos(tb), sb = b.weight * std::sin(tb);
        const int p = a.mode, q = b.mode;
        acc += ca * cb * v_(p, q) + ca * sb * v_(p, n_ + q) + sa * cb * v_(n_ + p, q) + sa * sb * v_(n_ + p, n_ + q);
      }
    }
    return acc;
  }

  std::vector<double> all(const std::vector<double>& theta) const {
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = node(i, theta);
    return out;
  }

  const std::vector<int>& touched(int mode) const { return touched_[mode]; }

 private:
  struct Term {
    int mode;
    double offset;
    double weight;
  };
  const RMatrix& v_;
  int n_;
  std::vector<std::vector<Term>> nodes_;
  std::vector<std::vector<int>> touched_;
};

double wrap_phase(double t) {
  t = std::fmod(t, 2 * kPi);
  return t < 0 ? t + 2 * kPi : t;
}

template <class Objective>
void coordinate_descent(const NullifierEvaluator& eval, const LoOptConfig& cfg, const Objective& value,
                        std::vector<double>& theta, std::vector<double>& var) {
  const int n = static_cast<int>(theta.size());
  const double step = 2 * kPi / cfg.grid_points;
  double best = value(var);

  // Objective as a function of one phase, everything else held fixed.
  auto coord_value = [&](int k, double t) {
    std::vector<double> trial = var;
    const double keep = theta[k];
    theta[k] = t;
    for (int i : eval.touched(k)) trial[i] = eval.node(i, theta);
    theta[k] = keep;
    return value(trial);
  };

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const double start = best;
    for (int k = 0; k < n; ++k) {
      double t_best = theta[k];
      double f_best = best;
      for (int s = 0; s < cfg.grid_points; ++s) {
        const double f = coord_value(k, s * step);
        if (f < f_best) {
          f_best = f;
          t_best = s * step;
        }
      }
      // Golden-section refinement around the best grid point.
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = t_best - step, b = t_best + step;
      double c = b - gr * (b - a), d = a + gr * (b - a);
      double fc = coord_value(k, c), fd = coord_value(k, d);
      for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
        if (fc < fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - gr * (b - a);
          fc = coord_value(k, c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + gr * (b - a);
          fd = coord_value(k, d);
        }
      }
      const double t_ref = 0.5 * (a + b);
      const double f_ref = coord_value(k, t_ref);
      if (f_ref < f_best) {
        f_best = f_ref;
        t_best = t_ref;
      }
      if (f_best < best) {
        theta[k] = wrap_phase(t_best);
        for (int i : eval.touched(k)) var[i] = eval.node(i, theta);
        best = value(var);
      }
    }
    if (start - best <= cfg.tolerance) break;
  }
}

// Joint moves of all phases, needed where the optimum is not coordinate-wise
// reachable (typically several nodes tied at the max).
template <class Objective>
void es_polish(const NullifierEvaluator& eval, const LoOptConfig& cfg, const Objective& value,
               std::vector<double>& theta) {
  const int n = static_cast<int>(theta.size());
  const auto f = [&](const std::vector<double>& th) { return value(eval.all(th)); };
  double f_best = f(theta);
  std::vector<double> mean = theta;
  double sigma = cfg.es_sigma;
  const double tau = 1.0 / std::sqrt(2.0 * n);
  struct Child {
    std::vector<double> th;
    double sigma, f;
  };
  std::vector<Child> kids(cfg.es_population);
  std::vector<int> order(cfg.es_population);
  for (int g = 0; g < cfg.es_generations; ++g) {
    for (int i = 0; i < cfg.es_population; ++i) {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(i)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> gauss;
      Child& k = kids[i];
      k.sigma = sigma * std::exp(tau * gauss(rng));
      k.th = mean;
      for (double& t : k.th) t += k.sigma * gauss(rng);
      k.f = f(k.th);
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return kids[a].f < kids[b].f; });
    std::fill(mean.begin(), mean.end(), 0.0);
    double log_s = 0.0;
    for (int r = 0; r < cfg.es_parents; ++r) {
      for (int j = 0; j < n; ++j) mean[j] += kids[order[r]].th[j] / cfg.es_parents;
      log_s += std::log(kids[order[r]].sigma) / cfg.es_parents;
    }
    sigma = std::exp(log_s);
    if (kids[order[0]].f < f_best) {
      f_best = kids[order[0]].f;
      theta = kids[order[0]].th;
    }
  }
  for (double& t : theta) t = wrap_phase(t);
}

}  // namespace

LoOptResult optimize_lo_phases(const RMatrix& v, const ClusterSpec& spec, const LoOptConfig& cfg) {
  const int n = spec.size();
  if (v.rows() != 2 * n || v.cols() != 2 * n) throw std::invalid_argument("cluster and covariance sizes differ");
  if (cfg.grid_points < 8) throw std::invalid_argument("LO optimizer needs at least 8 grid points");
  const NullifierEvaluator eval(v, spec);
  const double step = 2 * kPi / cfg.grid_points;

  LoOptResult res;
  res.baseline_objective = std::numeric_limits<double>::infinity();
  for (int s = 0; s < cfg.grid_points; ++s) {
    const std::vector<double> th(n, s * step);
    auto var = eval.all(th);
    const double f = lo_objective_value(var, cfg.objective);
    if (f < res.baseline_objective) {
      res.baseline_objective = f;
      res.baseline_theta = s * step;
      res.baseline_variances = std::move(var);
    }
  }

  std::vector<double> theta(n, res.baseline_theta);
  std::vector<double> var = res.baseline_variances;
  std::vector<double> best_theta = theta;
  std::vector<double> best_var = var;

  // The max objective is non-smooth and stalls plain coordinate descent where
  // several nodes share the maximum; approach it through p-norms first.
  std::vector<double> orders = {1.0};
  if (cfg.objective == LoObjective::max) orders = {8.0, 32.0, 128.0, 512.0, 0.0};
  for (double p : orders) {
    auto value = [p](const std::vector<double>& x) {
      if (p == 0.0) return *std::max_element(x.begin(), x.end());
      if (p == 1.0) return std::accumulate(x.begin(), x.end(), 0.0);
      const double top = *std::max_element(x.begin(), x.end());
      double acc = 0.0;
      for (double e : x) acc += std::pow(e / top, p);
      return top * std::pow(acc, 1.0 / p);
    };
    coordinate_descent(eval, cfg, value, theta, var);
    if (cfg.es_generations > 0) {
      es_polish(eval, cfg, value, theta);
      var = eval.all(theta);
    }
    if (lo_objective_value(var, cfg.objective) < lo_objective_value(best_var, cfg.objective)) {
      best_theta = theta;
      best_var = var;
    }
  }

  res.theta = best_theta;
  res.variances = nullifier_variances(v, spec.with_phases(best_theta));
  res.objective = lo_objective_value(res.variances, cfg.objective);
  return res;
}

LoOptResult optimize_lo_phases(const CovarianceMatrix& cov, const ClusterSpec& spec, const LoOptConfig& cfg) {
  return optimize_lo_phases(cov.matrix(), spec, cfg);
}

std::vector<ZScanRow> optimize_eta_over_z(const SupermodeBasis& basis, const std::vector<double>& zs, double eta_max,
                                          const EsConfig& cfg, const ClusterSpec& spec, double phi) {
  std::vector<ZScanRow> rows;
  rows.reserve(zs.size());
  for (double z : zs) {
    auto r = es_optimize_eta(basis, z, eta_max, cfg, spec, phi);
    const bool flag = std::all_of(r.variances.begin(), r.variances.end(), [](double x) { return x < 2.0 / 3.0; });
    rows.push_back({z, r.eta, r.fitness, std::move(r.variances), flag});
  }
  return rows;
}

std::vector<ZInterval> cluster_intervals(const std::vector<ZScanRow>& rows) {
  std::vector<ZInterval> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].cluster) continue;
    std::size_t j = i;
    while (j + 1 < rows.size() && rows[j + 1].cluster) ++j;
    out.push_back({rows[i].z, rows[j].z});
    i = j;
  }
  return out;
}

}  // namespace anw
