#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include "ggse/error.hpp"
#include "ggse/graph.hpp"
#include "ggse/slepian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace support {

using ggse::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline double unit(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Erdős–Rényi graph with a random spanning tree added, so it is always
/// connected. Weights 1 or uniform in [0.5, 2].
inline Mat random_connected_weights(int n, double p, std::mt19937_64& rng, bool weighted = false) {
  Mat w = Mat::Zero(n, n);
  auto weight = [&] { return weighted ? 0.5 + 1.5 * unit(rng) : 1.0; };
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 1; i < n; ++i) {
    const int a = order[static_cast<std::size_t>(i)];
    const int b = order[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, i - 1)(rng))];
    w(a, b) = w(b, a) = weight();
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (w(i, j) == 0.0 && unit(rng) < p) w(i, j) = w(j, i) = weight();
    }
  }
  return w;
}

inline ggse::Graph random_connected(int n, double p, std::mt19937_64& rng, bool weighted = false) {
  return ggse::Graph::from_weights(random_connected_weights(n, p, rng, weighted));
}

/// Triple-loop product, deliberately not Eigen's.
inline Mat naive_mul(const Mat& a, const Mat& b) {
  Mat c = Mat::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline Mat naive_pow(const Mat& a, int k) {
  Mat r = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) r = naive_mul(r, a);
  return r;
}

/// c_k from factorials in long double: (2k)! / (4^k (k!)^2 (2k - 1)).
inline double coeff_by_factorials(int k) {
  long double f2k = 1, fk = 1, four = 1;
  for (int i = 1; i <= 2 * k; ++i) f2k *= i;
  for (int i = 1; i <= k; ++i) fk *= i;
  for (int i = 0; i < k; ++i) four *= 4;
  return static_cast<double>(f2k / (four * fk * fk * (2 * k - 1)));
}

/// Series criterion keeping every term with total power of A at most `order`:
/// Σ c_k (M A^k + A^k M) − Σ c_p c_q A^p M A^q, written out term by term.
inline Mat brute_series(const Vec& m, const Mat& a, int order) {
  const Index n = a.rows();
  const Mat mm = m.asDiagonal();
  Mat out = Mat::Zero(n, n);
  for (int k = 1; k <= order; ++k) {
    const Mat ak = naive_pow(a, k);
    out += coeff_by_factorials(k) * (naive_mul(mm, ak) + naive_mul(ak, mm));
  }
  for (int p = 1; p <= order; ++p)
    for (int q = 1; p + q <= order; ++q) {
      out -= coeff_by_factorials(p) * coeff_by_factorials(q) *
             naive_mul(naive_mul(naive_pow(a, p), mm), naive_pow(a, q));
    }
  return out;
}

/// Symmetric normalization written without the library.
inline Mat normalized_adjacency(const Mat& w) {
  const Vec d = w.rowwise().sum();
  Mat a(w.rows(), w.cols());
  for (Index i = 0; i < w.rows(); ++i)
    for (Index j = 0; j < w.cols(); ++j) a(i, j) = w(i, j) / std::sqrt(d(i) * d(j));
  return a;
}

/// Principal square root of a 2×2 SPD matrix: (X + √det I) / √(tr + 2√det).
inline Eigen::Matrix2d sqrt2x2(const Eigen::Matrix2d& x) {
  const double s = std::sqrt(x.determinant());
  const double t = std::sqrt(x.trace() + 2.0 * s);
  return (x + s * Eigen::Matrix2d::Identity()) / t;
}

inline Eigen::Matrix2d random_orthogonal2(std::mt19937_64& rng) {
  const double th = 2.0 * M_PI * unit(rng);
  Eigen::Matrix2d r;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  if (unit(rng) < 0.5) r.col(1) *= -1.0;
  return r;
}

/// Q = (1/2w) Σ_ij (A_ij − d_i d_j / 2w) δ(c_i, c_j), the plain double sum.
inline double modularity_double_sum(const Mat& a, const std::vector<int>& labels) {
  const Vec d = a.rowwise().sum();
  const double two_w = d.sum();
  double q = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)])
        q += a(i, j) - d(i) * d(j) / two_w;
  return q / two_w;
}

/// Direct silhouette formula.
inline Vec silhouette_direct(const Mat& pts, const std::vector<int>& labels) {
  const Index n = pts.rows();
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  Vec s = Vec::Zero(n);
  for (Index i = 0; i < n; ++i) {
    std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
    std::vector<int> cnt(static_cast<std::size_t>(k), 0);
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      sum[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])] += (pts.row(i) - pts.row(j)).norm();
      ++cnt[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])];
    }
    const auto own = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
    if (cnt[own] == 0) continue;
    const double a = sum[own] / cnt[own];
    double b = INFINITY;
    for (std::size_t c = 0; c < sum.size(); ++c)
      if (c != own && cnt[c] > 0) b = std::min(b, sum[c] / cnt[c]);
    if (std::max(a, b) > 0.0) s(i) = (b - a) / std::max(a, b);
  }
  return s;
}

/// Code of the ggse::Error thrown by f, empty if nothing was thrown.
template <class F>
std::optional<ggse::Errc> code_of(F&& f) {
  try {
    f();
  } catch (const ggse::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ggse_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace support
