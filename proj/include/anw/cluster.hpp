#pragma once

#include "anw/linalg.hpp"
#include "anw/propagate.hpp"

#include <vector>

namespace anw {

/// Shaped local oscillator: per-guide phase theta_j and electronic gain G_j.
struct LoProfile {
  std::vector<double> phases;
  std::vector<double> gains;

  LoProfile(std::vector<double> phases_rad, std::vector<double> gains_abs);
};

/// Unit-weight graph with one LO phase per node. Node i is guide i.
class ClusterSpec {
 public:
  ClusterSpec(Eigen::MatrixXi adjacency, std::vector<double> lo_phases);

  int size() const { return static_cast<int>(adjacency_.rows()); }
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  const std::vector<double>& lo_phases() const { return lo_phases_; }
  int degree(int i) const { return adjacency_.row(i).sum(); }

  ClusterSpec with_phases(std::vector<double> lo_phases) const;

 private:
  Eigen::MatrixXi adjacency_;
  std::vector<double> lo_phases_;
};

/// Path graph 1-2-...-N with uniform LO phase theta.
ClusterSpec linear_cluster(int n_nodes, double theta = 0.0);

/// Coefficients of x_j(theta) = cos(theta) x_j + sin(theta) y_j.
RVector quadrature_vector(int n_guides, int j, double theta);

/// Variance of sum_j G_j x_j(theta_j) / sqrt(sum G^2).
double lo_variance(const RMatrix& v, const LoProfile& lo);

/// Coefficients of the normalized nullifier of node i.
RVector nullifier_vector(const ClusterSpec& spec, int i);

std::vector<double> nullifier_variances(const RMatrix& v, const ClusterSpec& spec);
std::vector<double> nullifier_variances(const CovarianceMatrix& cov, const ClusterSpec& spec);

struct VlfPair {
  int first;  ///< 0-based index of the left node
  double sum;
  double bound;
  bool violated;
};

struct VlfReport {
  std::vector<VlfPair> pairs;
  bool all_violated = false;
  bool sufficient = false;  ///< every nullifier variance below 2/3
};

/// Adjacent-pair inseparability tests for a linear cluster.
VlfReport vlf_check(const std::vector<double>& variances);

/// (V(x_j, x_j) + V(y_j, y_j) - 2) / 4.
double mean_photon_number(const RMatrix& v, int j);
double mean_photon_number(const CovarianceMatrix& cov, int j);

}  // namespace anw
