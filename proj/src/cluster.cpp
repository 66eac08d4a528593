#include "anw/cluster.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace anw {

LoProfile::LoProfile(std::vector<double> phases_rad, std::vector<double> gains_abs)
    : phases(std::move(phases_rad)), gains(std::move(gains_abs)) {
  if (phases.empty() || phases.size() != gains.size())
    throw std::invalid_argument("LO phases and gains must be non-empty and of equal length");
  double total = 0.0;
  for (double g : gains) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("LO gains must be finite and >= 0");
    total += g;
  }
  if (total == 0.0) throw std::invalid_argument("LO gains are all zero");
}

ClusterSpec::ClusterSpec(Eigen::MatrixXi adjacency, std::vector<double> lo_phases)
    : adjacency_(std::move(adjacency)), lo_phases_(std::move(lo_phases)) {
  const Eigen::Index n = adjacency_.rows();
  if (n < 1 || adjacency_.cols() != n) throw std::invalid_argument("adjacency must be square and non-empty");
  if (static_cast<Eigen::Index>(lo_phases_.size()) != n)
    throw std::invalid_argument("need one LO phase per cluster node");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0) throw std::invalid_argument("adjacency diagonal must be zero");
    for (Eigen::Index k = 0; k < n; ++k) {
      const int a = adjacency_(i, k);
      if (a != 0 && a != 1) throw std::invalid_argument("adjacency entries must be 0 or 1");
      if (a != adjacency_(k, i)) throw std::invalid_argument("adjacency must be symmetric");
    }
  }
}

ClusterSpec ClusterSpec::with_phases(std::vector<double> lo_phases) const {
  return ClusterSpec(adjacency_, std::move(lo_phases));
}

ClusterSpec linear_cluster(int n_nodes, double theta) {
  if (n_nodes < 1) throw std::invalid_argument("cluster needs at least one node");
  Eigen::MatrixXi j = Eigen::MatrixXi::Zero(n_nodes, n_nodes);
  for (int i = 0; i + 1 < n_nodes; ++i) j(i, i + 1) = j(i + 1, i) = 1;
  return ClusterSpec(std::move(j), std::vector<double>(n_nodes, theta));
}

RVector quadrature_vector(int n_guides, int j, double theta) {
  if (j < 0 || j >= n_guides) throw std::invalid_argument("mode index " + std::to_string(j) + " out of range");
  RVector c = RVector::Zero(2 * n_guides);
  c(j) = std::cos(theta);
  c(n_guides + j) = std::sin(theta);
  return c;
}

double lo_variance(const RMatrix& v, const LoProfile& lo) {
  const int n = static_cast<int>(v.rows() / 2);
  if (static_cast<int>(lo.gains.size()) != n) throw std::invalid_argument("LO profile and covariance sizes differ");
  RVector c = RVector::Zero(2 * n);
  double norm2 = 0.0;
  for (int j = 0; j < n; ++j) {
    c += lo.gains[j] * quadrature_vector(n, j, lo.phases[j]);
    norm2 += lo.gains[j] * lo.gains[j];
  }
  return c.dot(v * c) / norm2;
}

RVector nullifier_vector(const ClusterSpec& spec, int i) {
  const int n = spec.size();
  RVector c = quadrature_vector(n, i, spec.lo_phases()[i] + kPi / 2);
  for (int k = 0; k < n; ++k)
    if (spec.adjacency()(i, k)) c -= quadrature_vector(n, k, spec.lo_phases()[k]);
  return c / std::sqrt(1.0 + spec.degree(i));
}

std::vector<double> nullifier_variances(const RMatrix& v, const ClusterSpec& spec) {
  if (v.rows() != 2 * spec.size()) throw std::invalid_argument("cluster and covariance sizes differ");
  std::vector<double> out(spec.size());
  for (int i = 0; i < spec.size(); ++i) {
    const RVector c = nullifier_vector(spec, i);
    out[i] = c.dot(v * c);
  }
  return out;
}

std::vector<double> nullifier_variances(const CovarianceMatrix& cov, const ClusterSpec& spec) {
  return nullifier_variances(cov.matrix(), spec);
}

VlfReport vlf_check(const std::vector<double>& variances) {
  const int n = static_cast<int>(variances.size());
  if (n < 2) throw std::invalid_argument("VLF check needs at least two nodes");
  VlfReport report;
  report.all_violated = true;
  for (int i = 0; i + 1 < n; ++i) {
    const bool end_pair = i == 0 || i == n - 2;
    const double bound = end_pair ? std::sqrt(8.0 / 3.0) : 4.0 / 3.0;
    const double sum = variances[i] + variances[i + 1];
    report.pairs.push_back({i, sum, bound, sum < bound});
    report.all_violated = report.all_violated && sum < bound;
  }
  report.sufficient = true;
  for (double x : variances) report.sufficient = report.sufficient && x < 2.0 / 3.0;
  return report;
}

double mean_photon_number(const RMatrix& v, int j) {
  const int n = static_cast<int>(v.rows() / 2);
  if (j < 0 || j >= n) throw std::invalid_argument("mode index " + std::to_string(j) + " out of range");
  return (v(j, j) + v(n + j, n + j) - 2.0) / 4.0;
}

double mean_photon_number(const CovarianceMatrix& cov, int j) { return mean_photon_number(cov.matrix(), j); }

}  // namespace anw
