#include "ggse/spectral.hpp"

#include "ggse/error.hpp"

#include <cmath>
#include <limits>

namespace ggse {
namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kPsdTol = 1e-9;
constexpr double kRadiusTol = 1e-9;
constexpr double kEigRangeTol = 1e-9;
constexpr double kRemainderFloor = 1e-6;
constexpr double kEigSnap = 1e-12;

void require_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, std::string(what) + " must be square");
}

}  // namespace

void apply_sign_convention(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    auto col = vectors.col(c);
    const double peak = col.cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (std::abs(col(r)) >= peak * (1.0 - 1e-12)) {
        if (col(r) < 0.0) col = -col;
        break;
      }
    }
  }
}

double max_asymmetry(const Eigen::MatrixXd& x) {
  if (x.rows() != x.cols()) return std::numeric_limits<double>::infinity();
  return (x - x.transpose()).cwiseAbs().maxCoeff();
}

SpectralBasis eig_sym(const Eigen::MatrixXd& matrix, SortOrder order) {
  require_square(matrix, "eig_sym input");
  if (matrix.size() == 0) return {Eigen::VectorXd{}, Eigen::MatrixXd{}, order};
  const double asym = max_asymmetry(matrix);
  if (!(asym <= kSymmetryTol)) {
    throw Error(Errc::NotSymmetric, "max asymmetry " + std::to_string(asym));
  }
  const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw Error(Errc::NoConvergence, "eigensolver failed");

  SpectralBasis out;
  out.order = order;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  if (order == SortOrder::Descending) {
    out.eigenvalues.reverseInPlace();
    out.eigenvectors.rowwise().reverseInPlace();
  }
  apply_sign_convention(out.eigenvectors);
  return out;
}

Eigen::VectorXd gft(const Eigen::MatrixXd& basis, const Eigen::VectorXd& signal) {
  if (basis.rows() != signal.size()) throw Error(Errc::DimensionMismatch, "gft: signal length");
  return basis.transpose() * signal;
}

Eigen::VectorXd igft(const Eigen::MatrixXd& basis, const Eigen::VectorXd& coefficients) {
  if (basis.cols() != coefficients.size()) {
    throw Error(Errc::DimensionMismatch, "igft: coefficient length");
  }
  return basis * coefficients;
}

Eigen::MatrixXd sqrt_psd_exact(const Eigen::MatrixXd& matrix) {
  const SpectralBasis basis = eig_sym(matrix, SortOrder::Ascending);
  if (basis.eigenvalues.size() == 0) return {};
  const double smallest = basis.eigenvalues(0);
  if (smallest < -kPsdTol) {
    throw Error(Errc::NotPSD, "smallest eigenvalue " + std::to_string(smallest));
  }
  // sqrt is not Lipschitz at zero: a computed 1e-16 would become 1e-8.
  // Anything inside the eigensolver's roundoff is treated as an exact zero.
  const double scale = std::max(1.0, basis.eigenvalues.cwiseAbs().maxCoeff());
  const double floor = static_cast<double>(basis.eigenvalues.size()) * 4.0 *
                       std::numeric_limits<double>::epsilon() * scale;
  const Eigen::VectorXd roots =
      basis.eigenvalues.unaryExpr([floor](double v) { return v <= floor ? 0.0 : std::sqrt(v); });
  Eigen::MatrixXd root = basis.eigenvectors * roots.asDiagonal() * basis.eigenvectors.transpose();
  return 0.5 * (root + root.transpose());
}

double taylor_coeff(int k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "taylor_coeff: k must be >= 1");
  // b_k = (2k)! / (4^k (k!)^2), b_1 = 1/2.
  double b = 0.5;
  for (int j = 1; j < k; ++j) b *= (2.0 * j + 1.0) / (2.0 * j + 2.0);
  return b / (2.0 * k - 1.0);
}

Eigen::MatrixXd sqrt_taylor(const Eigen::MatrixXd& adjacency, int order) {
  require_square(adjacency, "sqrt_taylor input");
  if (order < 1) throw Error(Errc::InvalidArgument, "sqrt_taylor: order must be >= 1");
  const Eigen::Index n = adjacency.rows();
  if (n > 0) {
    const SpectralBasis basis = eig_sym(adjacency);
    const double radius = basis.eigenvalues.cwiseAbs().maxCoeff();
    if (radius > 1.0 + kRadiusTol) {
      throw Error(Errc::SpectralRadiusExceeded, "spectral radius " + std::to_string(radius));
    }
  }
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd power = adjacency;
  for (int k = 1; k <= order; ++k) {
    if (k > 1) power = adjacency * power;
    result -= taylor_coeff(k) * power;
  }
  return 0.5 * (result + result.transpose());
}

namespace {

// Σ_{k>order} c_k r^k for r in [0, 1]: the remainder with every term taken in
// absolute value, finite even where the derivative bound blows up.
double absolute_tail(int order, double r) {
  if (r == 0.0) return 0.0;
  if (r > 0.5) {
    double head = 0.0, rk = 1.0;
    for (int k = 1; k <= order; ++k) {
      rk *= r;
      head += taylor_coeff(k) * rk;
    }
    return std::max(0.0, (1.0 - std::sqrt(1.0 - r)) - head);
  }
  double rk = std::pow(r, order), sum = 0.0;
  for (int k = order + 1; k < order + 2000; ++k) {
    rk *= r;
    const double term = taylor_coeff(k) * rk;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

double taylor_error_bound(int order, const Eigen::VectorXd& laplacian_eigenvalues) {
  if (order < 1) throw Error(Errc::InvalidArgument, "taylor_error_bound: order must be >= 1");
  const int n = order + 1;
  // |f^(n)(y)| / n! for f = sqrt equals coef * y^(1/2 - n) with
  // coef = Π_{j<n} |1/2 - j| / (j + 1).
  double coef = 1.0;
  for (int j = 0; j < n; ++j) coef *= std::abs(0.5 - j) / (j + 1.0);

  double total = 0.0;
  for (const double lambda : laplacian_eigenvalues) {
    if (lambda < -kEigRangeTol || lambda > 2.0 + kEigRangeTol || std::isnan(lambda)) {
      throw Error(Errc::EigenvalueOutOfRange, "eigenvalue " + std::to_string(lambda));
    }
    // The tail falls like sqrt(1 - r) below r = 1, so a zero eigenvalue
    // computed as 1e-16 would shave 1e-8 off the bound. Within roundoff of
    // either end, r snaps to 1; the tail only grows with r.
    double r = std::min(std::abs(lambda - 1.0), 1.0);
    if (r >= 1.0 - kEigSnap) r = 1.0;
    double term = absolute_tail(order, r);
    if (lambda >= kRemainderFloor) {
      // The derivative magnitude decreases in y, so the supremum over the
      // interval between lambda and 1 sits at its left end.
      const double y = std::min(lambda, 1.0);
      term = std::min(term, coef * std::pow(y, 0.5 - n) * std::pow(r, n));
    }
    total += term;
  }
  return total;
}

double criterion_error_bound(double sqrt_bound, const Eigen::VectorXd& cooperation) {
  if (sqrt_bound < 0.0) throw Error(Errc::InvalidArgument, "d_K must be non-negative");
  if ((cooperation.array() < 0.0).any()) {
    throw Error(Errc::InvalidArgument, "cooperation weights must be non-negative");
  }
  const double m_norm = cooperation.norm();
  if (sqrt_bound == 0.0 || m_norm == 0.0) return 0.0;
  return sqrt_bound * sqrt_bound * m_norm;
}

double criterion_error_bound_full(double sqrt_bound, const Eigen::VectorXd& cooperation) {
  if (sqrt_bound < 0.0) throw Error(Errc::InvalidArgument, "d_K must be non-negative");
  if ((cooperation.array() < 0.0).any()) {
    throw Error(Errc::InvalidArgument, "cooperation weights must be non-negative");
  }
  const double m_max = cooperation.size() ? cooperation.maxCoeff() : 0.0;
  if (sqrt_bound == 0.0 || m_max == 0.0) return 0.0;
  return m_max * sqrt_bound * (2.0 * std::sqrt(2.0) + sqrt_bound);
}

TaylorBound taylor_bound(int order, const Eigen::VectorXd& laplacian_eigenvalues,
                         const Eigen::VectorXd& cooperation) {
  TaylorBound b;
  b.order = order;
  b.d_k = taylor_error_bound(order, laplacian_eigenvalues);
  b.d_km = criterion_error_bound(b.d_k, cooperation);
  b.d_km_full = criterion_error_bound_full(b.d_k, cooperation);
  return b;
}

}  // namespace ggse
