#pragma once

#include <Eigen/Dense>

namespace ggse {

enum class SortOrder { Ascending, Descending };

/// Full eigendecomposition of a symmetric matrix. Columns of `eigenvectors`
/// are orthonormal and follow `sign_convention`.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  SortOrder order = SortOrder::Ascending;
};

/// Flips each column so that its entry of largest magnitude is positive.
/// Entries within a relative 1e-12 of the column maximum count as ties and
/// the lowest index wins.
void apply_sign_convention(Eigen::MatrixXd& vectors);

/// Largest absolute asymmetry |X_ij - X_ji|.
double max_asymmetry(const Eigen::MatrixXd& x);

/// Throws NotSymmetric when max_asymmetry(matrix) > 1e-10.
SpectralBasis eig_sym(const Eigen::MatrixXd& matrix, SortOrder order = SortOrder::Ascending);

/// Graph Fourier transform x̂ = Uᵀx and its inverse x = U x̂.
Eigen::VectorXd gft(const Eigen::MatrixXd& basis, const Eigen::VectorXd& signal);
Eigen::VectorXd igft(const Eigen::MatrixXd& basis, const Eigen::VectorXd& coefficients);

/// Principal square root U Λ^{1/2} Uᵀ. Eigenvalues at or below the roundoff
/// floor 4·n·ε·max(1, |λ|max) are taken as zero; below -1e-9 throws NotPSD.
Eigen::MatrixXd sqrt_psd_exact(const Eigen::MatrixXd& matrix);

/// Coefficient c_k of  sqrt(1 - a) = 1 - Σ_k c_k a^k,
/// c_k = (2k)! / (4^k (k!)^2 (2k - 1)). Evaluated by the ratio
/// b_{k+1} = b_k (2k + 1) / (2k + 2) on the central binomial term, so no
/// factorial is ever formed.
double taylor_coeff(int k);

/// I - Σ_{k=1..order} c_k A^k, with powers built as A^{k+1} = A·A^k.
/// Throws SpectralRadiusExceeded if the spectral radius of A exceeds 1 + 1e-9.
Eigen::MatrixXd sqrt_taylor(const Eigen::MatrixXd& adjacency, int order);

/// Lagrange-remainder bound Σ_i |R_K(λ_i)| on ||L^{1/2} - truncation||_F.
/// The derivative is evaluated at its supremum on the interval between λ_i
/// and 1. Per eigenvalue the smaller of that and the absolute series tail
/// Σ_{k>K} c_k |1 - λ_i|^k is used; the tail alone covers λ_i near 0, where
/// the derivative supremum does not exist. Throws EigenvalueOutOfRange
/// outside [0, 2] (1e-9 slack). Eigenvalues within 1e-12 of 0 or 2 are
/// taken as exactly 0 or 2.
double taylor_error_bound(int order, const Eigen::VectorXd& laplacian_eigenvalues);

/// d_K^2 · ||M||_F for the criterion matrix built from a truncated root.
/// Only the second-order term E M E is covered; see the full variant below.
double criterion_error_bound(double sqrt_bound, const Eigen::VectorXd& cooperation);

/// Bound that keeps the first-order cross terms: with E = L^{1/2} - T_K,
/// L^{1/2} M L^{1/2} - T_K M T_K = E M L^{1/2} + L^{1/2} M E - E M E, so the
/// distance is at most m_max · d_K · (2√2 + d_K) since ||L^{1/2}||_2 <= √2.
double criterion_error_bound_full(double sqrt_bound, const Eigen::VectorXd& cooperation);

struct TaylorBound {
  int order = 1;
  double d_k = 0.0;
  double d_km = 0.0;       ///< d_K^2 ||M||_F
  double d_km_full = 0.0;  ///< criterion_error_bound_full
};

TaylorBound taylor_bound(int order, const Eigen::VectorXd& laplacian_eigenvalues,
                         const Eigen::VectorXd& cooperation);

}  // namespace ggse
