#include "anw/lattice.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace anw {

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::homogeneous: return "homogeneous";
    case ProfileKind::parabolic: return "parabolic";
    case ProfileKind::square_root: return "square_root";
    case ProfileKind::custom: return "custom";
  }
  return "custom";
}

ProfileKind profile_kind_from_string(std::string_view name) {
  if (name == "homogeneous") return ProfileKind::homogeneous;
  if (name == "parabolic") return ProfileKind::parabolic;
  if (name == "square_root") return ProfileKind::square_root;
  if (name == "custom") return ProfileKind::custom;
  throw std::invalid_argument("unknown lattice kind '" + std::string(name) + "'");
}

CouplingProfile::CouplingProfile(ProfileKind kind, std::vector<double> weights, double c0)
    : kind_(kind), weights_(std::move(weights)), c0_(c0) {
  if (!(c0_ > 0.0) || !std::isfinite(c0_)) throw std::invalid_argument("coupling strength c0 must be > 0");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("coupling weights must be > 0");
  }
}

RMatrix CouplingProfile::coupling_matrix() const {
  const int n = n_guides();
  RMatrix c = RMatrix::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    c(j, j + 1) = c0_ * weights_[j];
    c(j + 1, j) = c0_ * weights_[j];
  }
  return c;
}

CouplingProfile build_coupling_profile(ProfileKind kind, int n_guides, double c0,
                                       std::optional<std::vector<double>> custom_weights) {
  if (n_guides < 1) throw std::invalid_argument("n_guides must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(n_guides - 1));
  switch (kind) {
    case ProfileKind::homogeneous:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case ProfileKind::parabolic:
      for (int j = 1; j < n_guides; ++j) w[j - 1] = std::sqrt(static_cast<double>(j) * (n_guides - j)) / 2.0;
      break;
    case ProfileKind::square_root:
      for (int j = 1; j < n_guides; ++j) w[j - 1] = std::sqrt(static_cast<double>(j));
      break;
    case ProfileKind::custom:
      if (!custom_weights) throw std::invalid_argument("custom profile requires weights");
      if (custom_weights->size() != w.size())
        throw std::invalid_argument("custom profile needs " + std::to_string(w.size()) + " weights, got " +
                                    std::to_string(custom_weights->size()));
      w = *custom_weights;
      break;
  }
  return CouplingProfile(kind, std::move(w), c0);
}

SupermodeBasis::SupermodeBasis(RMatrix modes, RVector eigenvalues)
    : modes_(std::move(modes)), eigenvalues_(std::move(eigenvalues)) {
  if (modes_.rows() != modes_.cols() || modes_.rows() != eigenvalues_.size())
    throw std::invalid_argument("supermode basis dimensions disagree");
}

namespace {

// Sort rows by descending eigenvalue and make the first nonzero entry of
// every row positive.
SupermodeBasis canonicalize(const RMatrix& vectors_as_columns, const RVector& values) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values(a) > values(b); });
  RMatrix modes(n, n);
  RVector lam(n);
  for (int k = 0; k < n; ++k) {
    RVector row = vectors_as_columns.col(order[k]);
    const double scale = row.cwiseAbs().maxCoeff();
    for (int j = 0; j < n; ++j) {
      if (std::abs(row(j)) > 1e-12 * scale) {
        if (row(j) < 0) row = -row;
        break;
      }
    }
    modes.row(k) = row.transpose();
    lam(k) = values(order[k]);
  }
  return SupermodeBasis(std::move(modes), std::move(lam));
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Generalized binomial C(a, m) for integer a >= 0; zero when m > a.
double binomial(int a, int m) {
  if (m < 0 || m > a) return 0.0;
  return std::round(std::exp(log_factorial(a) - log_factorial(m) - log_factorial(a - m)));
}

// Normalized Hermite functions h_n(x) = H_n(x) / sqrt(2^n n!), n = 0..count-1.
RVector normalized_hermite(double x, int count) {
  RVector h(count + 1);
  h(0) = 1.0;
  if (count >= 1) h(1) = std::sqrt(2.0) * x;
  for (int n = 1; n < count; ++n)
    h(n + 1) = std::sqrt(2.0 / (n + 1)) * x * h(n) - std::sqrt(static_cast<double>(n) / (n + 1)) * h(n - 1);
  return h;
}

// Roots of H_n by sign-change bracketing and bisection on the normalized
// three-term recurrence. All roots lie inside |x| < sqrt(2n+1).
std::vector<double> hermite_roots(int n) {
  std::vector<double> roots;
  if (n == 0) return roots;
  const double bound = std::sqrt(2.0 * n + 1.0) + 0.1;
  const int samples = 400 * n + 1000;
  auto hn = [n](double x) { return normalized_hermite(x, n)(n); };
  double prev_x = -bound;
  double prev_v = hn(prev_x);
  for (int i = 1; i <= samples; ++i) {
    const double x = -bound + 2.0 * bound * i / samples;
    const double v = hn(x);
    if (v == 0.0) {
      roots.push_back(x);
    } else if ((prev_v < 0) != (v < 0) && prev_v != 0.0) {
      double lo = prev_x, hi = x, vlo = prev_v;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double vm = hn(mid);
        if ((vm < 0) == (vlo < 0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_v = v;
  }
  if (static_cast<int>(roots.size()) != n)
    throw InvariantError("Hermite root search found " + std::to_string(roots.size()) + " of " + std::to_string(n));
  return roots;
}

}  // namespace

SupermodeBasis supermode_basis(const CouplingProfile& profile) {
  const int n = profile.n_guides();
  if (n == 1) return SupermodeBasis(RMatrix::Ones(1, 1), RVector::Zero(1));

  RVector diag = RVector::Zero(n);
  RVector sub(n - 1);
  for (int j = 0; j + 1 < n; ++j) sub(j) = profile.c0() * profile.weights()[j];

  Eigen::SelfAdjointEigenSolver<RMatrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw InvariantError("tridiagonal eigensolver did not converge");

  SupermodeBasis basis = canonicalize(es.eigenvectors(), es.eigenvalues());
  double min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < n; ++k) min_gap = std::min(min_gap, basis.eigenvalue(k) - basis.eigenvalue(k + 1));
  if (!(min_gap > 1e-10 * profile.c0()))
    throw InvariantError("coupling spectrum is numerically degenerate (min gap " + std::to_string(min_gap) + ")");
  return basis;
}

SupermodeBasis closed_form_basis(ProfileKind kind, int n_guides, double c0) {
  if (n_guides < 1) throw std::invalid_argument("n_guides must be >= 1");
  if (!(c0 > 0.0)) throw std::invalid_argument("coupling strength c0 must be > 0");
  const int n = n_guides;
  if (kind == ProfileKind::custom)
    throw std::invalid_argument("closed-form supermodes exist only for homogeneous, parabolic and square_root");
  if (n == 1) return SupermodeBasis(RMatrix::Ones(1, 1), RVector::Zero(1));
  RMatrix cols(n, n);  // column k holds supermode k
  RVector lam(n);

  switch (kind) {
    case ProfileKind::homogeneous:
      for (int k = 1; k <= n; ++k) {
        lam(k - 1) = 2.0 * c0 * std::cos(k * kPi / (n + 1));
        for (int j = 1; j <= n; ++j) cols(j - 1, k - 1) = std::sin(j * k * kPi / (n + 1));
        cols.col(k - 1).normalize();
      }
      break;
    case ProfileKind::parabolic:
      // Krawtchouk form: 2^(j-(N+1)/2) sqrt((j-1)!(N-j)!/((k-1)!(N-k)!)) P_{j-1}^{(N-k+1-j, k-j)}(0),
      // with P_{j-1}(0) = 2^{-(j-1)} sum_s (-1)^s C(N-k, j-1-s) C(k-1, s).
      for (int k = 1; k <= n; ++k) {
        lam(k - 1) = 0.5 * (n - 2 * k + 1) * c0;
        for (int j = 1; j <= n; ++j) {
          double jacobi = 0.0;
          for (int s = 0; s <= j - 1; ++s)
            jacobi += ((s % 2 == 0) ? 1.0 : -1.0) * binomial(n - k, j - 1 - s) * binomial(k - 1, s);
          jacobi *= std::ldexp(1.0, -(j - 1));
          const double log_ratio =
              0.5 * (log_factorial(j - 1) + log_factorial(n - j) - log_factorial(k - 1) - log_factorial(n - k));
          cols(j - 1, k - 1) = std::pow(2.0, j - 0.5 * (n + 1)) * std::exp(log_ratio) * jacobi;
        }
      }
      break;
    case ProfileKind::square_root: {
      const std::vector<double> roots = hermite_roots(n);
      for (int k = 0; k < n; ++k) {
        const double x = roots[k];
        lam(k) = std::sqrt(2.0) * c0 * x;
        const RVector h = normalized_hermite(x, n);
        cols.col(k) = h.head(n) / h.head(n).norm();
      }
      break;
    }
    case ProfileKind::custom:
      throw std::invalid_argument("closed-form supermodes exist only for homogeneous, parabolic and square_root");
  }
  return canonicalize(cols, lam);
}

}  // namespace anw
