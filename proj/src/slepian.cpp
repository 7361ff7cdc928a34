#include "ggse/slepian.hpp"

#include "ggse/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ggse {
namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& x) { return 0.5 * (x + x.transpose()); }

void require_binary(const CooperationWeights& s) {
  if (!s.is_binary()) throw Error(Errc::NonBinarySelection, "selection entries must be 0 or 1");
}

void require_size(const CooperationWeights& m, Eigen::Index n) {
  if (m.size() != n) throw Error(Errc::DimensionMismatch, "cooperation weights length");
}

}  // namespace

CooperationWeights::CooperationWeights(Eigen::VectorXd weights) : m_(std::move(weights)) {
  for (const double w : m_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(Errc::InvalidArgument, "cooperation weights must be finite and non-negative");
    }
  }
  max_ = m_.size() > 0 ? m_.maxCoeff() : 0.0;
}

CooperationWeights CooperationWeights::ones(Eigen::Index n) {
  return CooperationWeights(Eigen::VectorXd::Ones(n));
}

CooperationWeights CooperationWeights::selection(Eigen::Index n,
                                                 std::span<const Eigen::Index> selected) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  for (const auto i : selected) {
    if (i < 0 || i >= n) throw Error(Errc::IndexOutOfRange, "selected node index");
    m(i) = 1.0;
  }
  return CooperationWeights(std::move(m));
}

bool CooperationWeights::is_binary() const {
  return std::all_of(m_.begin(), m_.end(), [](double w) { return w == 0.0 || w == 1.0; });
}

Eigen::Index CooperationWeights::zero_count() const {
  return static_cast<Eigen::Index>(std::count(m_.begin(), m_.end(), 0.0));
}

Bandwidth::Bandwidth(Eigen::Index w, Eigen::Index n) : w_(w) {
  if (w < 1 || w > n) {
    throw Error(Errc::InvalidArgument,
                "bandwidth " + std::to_string(w) + " outside [1, " + std::to_string(n) + "]");
  }
}

SlepianSet concentration_slepians(const SpectralBasis& basis, const CooperationWeights& selection,
                                  Bandwidth bandwidth) {
  require_binary(selection);
  require_size(selection, basis.eigenvectors.rows());
  if (basis.order != SortOrder::Ascending) {
    throw Error(Errc::InvalidArgument, "concentration_slepians needs an ascending basis");
  }
  const auto uw = basis.eigenvectors.leftCols(bandwidth.value());
  const Eigen::MatrixXd concentration =
      symmetrized(uw.transpose() * selection.values().asDiagonal() * uw);
  const SpectralBasis inner = eig_sym(concentration, SortOrder::Descending);

  SlepianSet out;
  out.kind = CriterionKind::Mu;
  out.values = inner.eigenvalues;
  out.vectors = uw * inner.eigenvectors;
  apply_sign_convention(out.vectors);
  return out;
}

SlepianSet embedded_distance_slepians(const SpectralBasis& basis, const Eigen::MatrixXd& lhalf,
                                      const CooperationWeights& selection, Bandwidth bandwidth) {
  require_binary(selection);
  require_size(selection, basis.eigenvectors.rows());
  if (lhalf.rows() != basis.eigenvectors.rows() || lhalf.cols() != lhalf.rows()) {
    throw Error(Errc::DimensionMismatch, "L^{1/2} shape");
  }
  if (basis.order != SortOrder::Ascending) {
    throw Error(Errc::InvalidArgument, "embedded_distance_slepians needs an ascending basis");
  }
  const auto uw = basis.eigenvectors.leftCols(bandwidth.value());
  const Eigen::MatrixXd projected = lhalf * uw;
  const Eigen::MatrixXd distance =
      symmetrized(projected.transpose() * selection.values().asDiagonal() * projected);
  const SpectralBasis inner = eig_sym(distance, SortOrder::Ascending);

  SlepianSet out;
  out.kind = CriterionKind::Xi;
  out.values = inner.eigenvalues;
  out.vectors = uw * inner.eigenvectors;
  apply_sign_convention(out.vectors);
  return out;
}

Eigen::MatrixXd guided_matrix_exact(const CooperationWeights& m, const Eigen::MatrixXd& lhalf) {
  require_size(m, lhalf.rows());
  Eigen::MatrixXd out = -(lhalf * m.values().asDiagonal() * lhalf);
  out.diagonal() += m.values();
  return symmetrized(out);
}

Eigen::MatrixXd guided_matrix_linear(const CooperationWeights& m, const Eigen::MatrixXd& a) {
  require_size(m, a.rows());
  const auto md = m.values().asDiagonal();
  const Eigen::MatrixXd ma = md * a;
  return symmetrized(0.5 * (ma + ma.transpose()));
}

Eigen::MatrixXd guided_matrix_quadratic(const CooperationWeights& m, const Eigen::MatrixXd& a) {
  require_size(m, a.rows());
  const auto md = m.values().asDiagonal();
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd out = 0.5 * (md * a + a * md) + 0.125 * (md * a2 + a2 * md) -
                              0.25 * (a * md * a);
  return symmetrized(out);
}

Eigen::MatrixXd guided_matrix_series(const CooperationWeights& m, const Eigen::MatrixXd& a,
                                     int order) {
  require_size(m, a.rows());
  if (order < 1) throw Error(Errc::InvalidArgument, "series order must be >= 1");
  const Eigen::Index n = a.rows();
  const auto md = m.values().asDiagonal();

  // partial[j] = Σ_{k=1..j} c_k A^k, so the double sum over k1 + k2 <= K
  // collapses to Σ_{k1} c_{k1} A^{k1} M partial[K - k1].
  std::vector<Eigen::MatrixXd> powers(static_cast<std::size_t>(order) + 1);
  std::vector<Eigen::MatrixXd> partial(static_cast<std::size_t>(order) + 1);
  powers[0] = Eigen::MatrixXd::Identity(n, n);
  partial[0] = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= order; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    powers[ku] = a * powers[ku - 1];
    partial[ku] = partial[ku - 1] + taylor_coeff(k) * powers[ku];
  }

  const Eigen::MatrixXd single = md * partial[static_cast<std::size_t>(order)];
  Eigen::MatrixXd out = single + single.transpose();
  for (int k1 = 1; k1 < order; ++k1) {
    out -= taylor_coeff(k1) * powers[static_cast<std::size_t>(k1)] * md *
           partial[static_cast<std::size_t>(order - k1)];
  }
  return symmetrized(out);
}

Eigen::MatrixXd guided_matrix_truncated_root(const CooperationWeights& m,
                                             const Eigen::MatrixXd& a, int order) {
  require_size(m, a.rows());
  const Eigen::MatrixXd root = sqrt_taylor(a, order);
  return guided_matrix_exact(m, root);
}

Eigen::MatrixXd guided_matrix_approx(const CooperationWeights& m, const Eigen::MatrixXd& a,
                                     int order) {
  switch (order) {
    case 1: return guided_matrix_linear(m, a);
    case 2: return guided_matrix_quadratic(m, a);
    default:
      if (order < 1) throw Error(Errc::InvalidArgument, "approximation order must be >= 1");
      return guided_matrix_truncated_root(m, a, order);
  }
}

SlepianSet guided_slepians(const Eigen::MatrixXd& criterion, const CooperationWeights& m,
                           const Eigen::MatrixXd& lhalf) {
  require_size(m, criterion.rows());
  if (lhalf.rows() != criterion.rows() || lhalf.cols() != criterion.cols()) {
    throw Error(Errc::DimensionMismatch, "L^{1/2} shape");
  }
  const SpectralBasis basis = eig_sym(criterion, SortOrder::Descending);

  SlepianSet out;
  out.kind = CriterionKind::Zeta;
  out.values = basis.eigenvalues;
  out.vectors = basis.eigenvectors;
  const Eigen::MatrixXd smoothed = lhalf * out.vectors;
  out.companion_mu =
      (out.vectors.array().square().colwise() * m.values().array()).colwise().sum().transpose();
  out.companion_xi =
      (smoothed.array().square().colwise() * m.values().array()).colwise().sum().transpose();
  return out;
}

DegeneracyReport verify_degeneracy(const SlepianSet& set, const CooperationWeights& selection,
                                   double tol, std::optional<bool> graph_connected) {
  require_binary(selection);
  const Eigen::Index n = selection.size();
  if (set.vectors.rows() != n || set.values.size() != n) {
    throw Error(Errc::InvalidArgument, "degeneracy check requires a full-bandwidth set");
  }
  if (set.kind == CriterionKind::Zeta) {
    throw Error(Errc::InvalidArgument, "degeneracy check applies to mu or xi sets");
  }

  DegeneracyReport r;
  r.selection_zeros = selection.zero_count();
  for (const double v : set.values) {
    if (std::abs(v - 1.0) <= tol) ++r.near_one;
    if (std::abs(v) <= tol) ++r.near_zero;
  }

  if (set.kind == CriterionKind::Mu) {
    std::vector<double> got(set.values.begin(), set.values.end());
    std::vector<double> want(selection.values().begin(), selection.values().end());
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    r.holds = true;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (std::abs(got[i] - want[i]) > tol) r.holds = false;
    }
    r.equality_expected = true;
  } else {
    r.equality_expected = graph_connected.value_or(false);
    r.holds = r.equality_expected ? r.near_zero == r.selection_zeros
                                  : r.near_zero >= r.selection_zeros;
  }
  return r;
}

Eigen::MatrixXd span_projector(const Eigen::MatrixXd& vectors) {
  if (vectors.cols() == 0) return Eigen::MatrixXd::Zero(vectors.rows(), vectors.rows());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vectors);
  const Eigen::Index rank = qr.rank();
  const Eigen::MatrixXd q = Eigen::MatrixXd(qr.householderQ()).leftCols(rank);
  return q * q.transpose();
}

}  // namespace ggse
