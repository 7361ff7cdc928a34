#pragma once

#include "ggse/spectral.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>

namespace ggse {

/// Diagonal of the cooperation matrix M: one non-negative importance weight
/// per node. A binary instance doubles as a Slepian selection S.
class CooperationWeights {
public:
  explicit CooperationWeights(Eigen::VectorXd weights);

  static CooperationWeights ones(Eigen::Index n);
  /// 1 on `selected`, 0 elsewhere.
  static CooperationWeights selection(Eigen::Index n, std::span<const Eigen::Index> selected);

  const Eigen::VectorXd& values() const noexcept { return m_; }
  Eigen::Index size() const noexcept { return m_.size(); }
  double max() const noexcept { return max_; }
  bool is_binary() const;
  /// Number of zero entries (z_S for a selection).
  Eigen::Index zero_count() const;

private:
  Eigen::VectorXd m_;
  double max_ = 0.0;
};

/// Number of lowest-frequency Laplacian eigenvectors a signal may combine.
class Bandwidth {
public:
  Bandwidth(Eigen::Index w, Eigen::Index n);
  Eigen::Index value() const noexcept { return w_; }

private:
  Eigen::Index w_;
};

enum class CriterionKind { Mu, Xi, Zeta };

struct SlepianSet {
  Eigen::MatrixXd vectors;  ///< n × r, vertex domain
  Eigen::VectorXd values;
  CriterionKind kind = CriterionKind::Zeta;
  /// g_kᵀ M g_k and g_kᵀ L^{1/2} M L^{1/2} g_k; filled for kind Zeta.
  Eigen::VectorXd companion_mu;
  Eigen::VectorXd companion_xi;
};

/// Energy concentration: eigenpairs of C = U_Wᵀ S U_W, μ descending,
/// returned as g = U_W ĝ. `basis` must be the ascending Laplacian basis.
SlepianSet concentration_slepians(const SpectralBasis& basis, const CooperationWeights& selection,
                                  Bandwidth bandwidth);

/// Modified embedded distance: eigenpairs of U_Wᵀ L^{1/2} S L^{1/2} U_W,
/// ξ ascending.
SlepianSet embedded_distance_slepians(const SpectralBasis& basis, const Eigen::MatrixXd& lhalf,
                                      const CooperationWeights& selection, Bandwidth bandwidth);

/// M - L^{1/2} M L^{1/2}, symmetrized.
Eigen::MatrixXd guided_matrix_exact(const CooperationWeights& m, const Eigen::MatrixXd& lhalf);

/// (MA + AM) / 2
Eigen::MatrixXd guided_matrix_linear(const CooperationWeights& m, const Eigen::MatrixXd& a);

/// (MA + AM) / 2 + (MA² + A²M) / 8 - AMA / 4
Eigen::MatrixXd guided_matrix_quadratic(const CooperationWeights& m, const Eigen::MatrixXd& a);

/// Series form of the criterion, Σ_k c_k (MA^k + A^k M) - Σ c_{k1} c_{k2} A^{k1} M A^{k2},
/// keeping every term whose total power of A is at most `order`. Orders 1
/// and 2 coincide with the linear and quadratic closed forms.
Eigen::MatrixXd guided_matrix_series(const CooperationWeights& m, const Eigen::MatrixXd& a,
                                     int order);

/// M - T_K M T_K with T_K = sqrt_taylor(A, K).
Eigen::MatrixXd guided_matrix_truncated_root(const CooperationWeights& m,
                                             const Eigen::MatrixXd& a, int order);

/// Taylor-approximated criterion matrix as used for the approximated ζ
/// spectra: the closed forms for orders 1 and 2, the truncated-root form
/// M - T_K M T_K beyond.
Eigen::MatrixXd guided_matrix_approx(const CooperationWeights& m, const Eigen::MatrixXd& a,
                                     int order);

/// Full eigendecomposition of a criterion matrix, ζ descending, with the
/// companion μ and ξ quadratic forms of every eigenvector.
SlepianSet guided_slepians(const Eigen::MatrixXd& criterion, const CooperationWeights& m,
                           const Eigen::MatrixXd& lhalf);

struct DegeneracyReport {
  Eigen::Index near_one = 0;   ///< values within tol of 1
  Eigen::Index near_zero = 0;  ///< values within tol of 0
  Eigen::Index selection_zeros = 0;  ///< z_S
  /// Mu: value multiset equals diag(S). Xi: z_λ >= z_S, and z_λ == z_S when
  /// the graph is known to be connected.
  bool holds = false;
  bool equality_expected = false;
};

/// Checks the full-bandwidth degeneracy of a mu or xi set against the
/// selection that produced it.
DegeneracyReport verify_degeneracy(const SlepianSet& set, const CooperationWeights& selection,
                                   double tol, std::optional<bool> graph_connected = std::nullopt);

/// Orthogonal projector onto the span of `vectors` (columns need not be
/// orthonormal).
Eigen::MatrixXd span_projector(const Eigen::MatrixXd& vectors);

}  // namespace ggse
