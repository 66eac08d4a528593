#pragma once

#include "anw/cluster.hpp"
#include "anw/lattice.hpp"
#include "anw/pump.hpp"

#include <cstdint>
#include <vector>

namespace anw {

struct GridRange {
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  GridRange(double lo, double hi, int n_steps);
  double at(int i) const { return min + (max - min) * i / (steps - 1); }
  bool operator==(const GridRange&) const = default;
};

struct SweepGrid {
  GridRange c0_range;
  GridRange eta_range;
  double z = 0.0;
  int n_guides = 5;
  PumpPattern pattern = PumpPattern::flat_uniform;
  std::vector<double> phase_params{-kPi / 2};
  ProfileKind lattice = ProfileKind::homogeneous;
};

struct SweepRow {
  double c0;
  double eta;
  std::vector<double> variances;
  bool cluster;  ///< every nullifier variance below 2/3
};

/// Covariance at z for a built-in lattice and pump pattern. Uses the closed
/// forms where they exist and the matrix exponential otherwise.
CovarianceMatrix state_covariance(const CouplingProfile& profile, PumpPattern pattern, double eta,
                                  std::span<const double> phase_params, double z);

/// Nullifier variances on the (C0, eta) plane, C0-major.
std::vector<SweepRow> sweep_nullifiers(const SweepGrid& grid, const ClusterSpec& spec);

struct EsConfig {
  int parents = 3;
  int population = 12;
  int generations = 200;
  double initial_sigma = 0.25;  ///< relative to the search width eta_max
  std::uint64_t seed = 42;

  void validate() const;
};

struct EsGeneration {
  int generation;
  double mean_eta;
  double sigma;
  double generation_best;
  double best_fitness;  ///< best so far
  double best_eta;
};

struct EsResult {
  double eta = 0.0;
  double fitness = 0.0;
  std::vector<double> variances;
  std::vector<EsGeneration> trace;
};

/// Sum of nullifier variances for a flat-uniform pump on a given lattice.
double cluster_fitness(const SupermodeBasis& basis, double eta, double phi, double z, const ClusterSpec& spec);

/// (mu/mu, lambda) evolution strategy with log-normal self-adaptation of the
/// step size, minimizing cluster_fitness over eta in (0, eta_max].
EsResult es_optimize_eta(const SupermodeBasis& basis, double z, double eta_max, const EsConfig& cfg,
                         const ClusterSpec& spec, double phi = -kPi / 2);
EsResult es_optimize_eta(double c0, double z, int n_guides, double eta_max, const EsConfig& cfg,
                         const ClusterSpec& spec, double phi = -kPi / 2);

enum class LoObjective { sum, max };

std::string_view to_string(LoObjective objective);
LoObjective lo_objective_from_string(std::string_view name);

struct LoOptConfig {
  LoObjective objective = LoObjective::sum;
  int grid_points = 720;
  int max_sweeps = 100;
  double tolerance = 1e-13;
  // Joint evolution-strategy polish after the coordinate sweeps.
  int es_parents = 5;
  int es_population = 20;
  int es_generations = 300;
  double es_sigma = 0.05;  ///< rad
  std::uint64_t seed = 42;
};

struct LoOptResult {
  std::vector<double> theta;
  std::vector<double> variances;
  double objective = 0.0;
  double baseline_theta = 0.0;  ///< best uniform phase
  std::vector<double> baseline_variances;
  double baseline_objective = 0.0;
};

/// Cyclic coordinate descent over the LO phases, each coordinate minimized by
/// a grid scan followed by golden-section refinement, then a seeded
/// (mu/mu, lambda) evolution strategy over all phases jointly. Starts from the
/// best uniform phase and never returns anything worse.
LoOptResult optimize_lo_phases(const RMatrix& v, const ClusterSpec& spec, const LoOptConfig& cfg = {});
LoOptResult optimize_lo_phases(const CovarianceMatrix& cov, const ClusterSpec& spec, const LoOptConfig& cfg = {});

double lo_objective_value(const std::vector<double>& variances, LoObjective objective);

struct ZScanRow {
  double z;
  double eta;
  double fitness;
  std::vector<double> variances;
  bool cluster;
};

struct ZInterval {
  double begin;
  double end;
};

/// Optimized eta at each z.
std::vector<ZScanRow> optimize_eta_over_z(const SupermodeBasis& basis, const std::vector<double>& zs, double eta_max,
                                          const EsConfig& cfg, const ClusterSpec& spec, double phi = -kPi / 2);

/// Maximal runs of consecutive rows with the cluster flag set.
std::vector<ZInterval> cluster_intervals(const std::vector<ZScanRow>& rows);

}  // namespace anw
