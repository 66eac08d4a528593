#pragma once

#include "anw/linalg.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace anw {

enum class ProfileKind { homogeneous, parabolic, square_root, custom };

std::string_view to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(std::string_view name);

/// Nearest-neighbour coupling profile of an N-guide array. Coupling between
/// guides j and j+1 is c0 * weights[j] (0-based), in mm^-1.
class CouplingProfile {
 public:
  CouplingProfile(ProfileKind kind, std::vector<double> weights, double c0);

  ProfileKind kind() const { return kind_; }
  int n_guides() const { return static_cast<int>(weights_.size()) + 1; }
  const std::vector<double>& weights() const { return weights_; }
  double c0() const { return c0_; }

  /// Symmetric tridiagonal coupling matrix c0 * J(f), zero diagonal.
  RMatrix coupling_matrix() const;

 private:
  ProfileKind kind_;
  std::vector<double> weights_;
  double c0_;
};

CouplingProfile build_coupling_profile(ProfileKind kind, int n_guides, double c0,
                                       std::optional<std::vector<double>> custom_weights = std::nullopt);

/// Linear supermodes. Row k of modes() is the k-th supermode; eigenvalues are
/// the propagation constants (mm^-1), strictly descending. The first nonzero
/// entry of every row is positive.
class SupermodeBasis {
 public:
  SupermodeBasis(RMatrix modes, RVector eigenvalues);

  int size() const { return static_cast<int>(eigenvalues_.size()); }
  const RMatrix& modes() const { return modes_; }
  const RVector& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(int k) const { return eigenvalues_(k); }

  /// Index of the lambda = 0 supermode for odd N, -1 otherwise.
  int zero_mode() const { return size() % 2 == 1 ? size() / 2 : -1; }
  /// Index of the partner side supermode N+1-k (0-based: N-1-k).
  int partner(int k) const { return size() - 1 - k; }

 private:
  RMatrix modes_;
  RVector eigenvalues_;
};

/// Eigendecomposition of the Jacobi coupling matrix. Throws InvariantError
/// on solver failure or when the spectrum is numerically degenerate.
SupermodeBasis supermode_basis(const CouplingProfile& profile);

/// Supermodes from the known closed forms: Chebyshev (homogeneous),
/// Krawtchouk (parabolic), Glauber-Fock/Hermite (square root).
SupermodeBasis closed_form_basis(ProfileKind kind, int n_guides, double c0);

}  // namespace anw
