#include "ggse/analysis.hpp"

#include "ggse/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace ggse {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Library distributions are implementation-defined; these two keep draws
// identical across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  const auto idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(bound));
  return std::min(idx, bound - 1);
}

double squared_distance(const Eigen::MatrixXd& points, Index i, const Eigen::MatrixXd& centroids,
                        Index c) {
  return (points.row(i) - centroids.row(c)).squaredNorm();
}

Index distinct_rows(const Eigen::MatrixXd& points) {
  std::set<std::vector<double>> seen;
  for (Index i = 0; i < points.rows(); ++i) {
    const Eigen::RowVectorXd row = points.row(i);
    seen.emplace(row.data(), row.data() + row.size());
  }
  return static_cast<Index>(seen.size());
}

Index sample_by_weight(const Eigen::VectorXd& weights, std::mt19937_64& rng) {
  const Index n = weights.size();
  const double total = weights.sum();
  if (!(total > 0.0)) return static_cast<Index>(uniform_index(rng, static_cast<std::size_t>(n)));
  double target = uniform01(rng) * total;
  Index pick = n - 1;
  for (Index i = 0; i < n; ++i) {
    target -= weights(i);
    if (target < 0.0 && weights(i) > 0.0) {
      pick = i;
      break;
    }
  }
  while (weights(pick) == 0.0 && pick > 0) --pick;
  return pick;
}

// Greedy k-means++: each new centre is the best of 2 + floor(ln k) D²-weighted
// candidates, judged by the potential it leaves behind.
Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const Index n = points.rows();
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  Eigen::MatrixXd centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Index>(uniform_index(rng, static_cast<std::size_t>(n))));
  Eigen::VectorXd nearest(n);
  for (Index i = 0; i < n; ++i) nearest(i) = squared_distance(points, i, centroids, 0);

  for (int c = 1; c < k; ++c) {
    Index best = -1;
    double best_potential = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_nearest;
    for (int t = 0; t < trials; ++t) {
      const Index cand = sample_by_weight(nearest, rng);
      Eigen::VectorXd updated(n);
      for (Index i = 0; i < n; ++i) {
        updated(i) = std::min(nearest(i), (points.row(i) - points.row(cand)).squaredNorm());
      }
      const double potential = updated.sum();
      if (potential < best_potential) {
        best_potential = potential;
        best = cand;
        best_nearest = std::move(updated);
      }
    }
    centroids.row(c) = points.row(best);
    nearest = std::move(best_nearest);
  }
  return centroids;
}

void renumber_by_first_member(ClusterAssignment& a) {
  std::vector<int> remap(static_cast<std::size_t>(a.k), -1);
  int next = 0;
  for (int& label : a.labels) {
    auto& slot = remap[static_cast<std::size_t>(label)];
    if (slot < 0) slot = next++;
    label = slot;
  }
}

void validate_labels(Index n, std::span<const int> labels) {
  if (static_cast<Index>(labels.size()) != n) {
    throw Error(Errc::DimensionMismatch, "label count differs from node count");
  }
  for (const int l : labels) {
    if (l < 0) throw Error(Errc::InvalidArgument, "cluster ids must be non-negative");
  }
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t task) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(task + 0x632BE59BD9B4E019ULL)));
}

ClusterAssignment lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids,
                        const KMeansOptions& options, std::vector<double>* inertia_history) {
  const Index n = points.rows();
  const auto k = static_cast<int>(centroids.rows());
  ClusterAssignment out;
  out.k = k;
  out.labels.assign(static_cast<std::size_t>(n), 0);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double inertia = 0.0;
    Eigen::VectorXd cost(n);
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, centroids, 0);
      for (int c = 1; c < k; ++c) {
        const double d = squared_distance(points, i, centroids, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      out.labels[static_cast<std::size_t>(i)] = best;
      cost(i) = best_d;
      inertia += best_d;
    }
    if (inertia_history) inertia_history->push_back(inertia);

    Eigen::MatrixXd updated = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const int c = out.labels[static_cast<std::size_t>(i)];
      updated.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        updated.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move it onto the worst-served point.
      Index worst = 0;
      cost.maxCoeff(&worst);
      updated.row(c) = points.row(worst);
      cost(worst) = 0.0;
    }
    const double shift = (updated - centroids).rowwise().norm().maxCoeff();
    centroids = std::move(updated);
    if (shift < options.tolerance) break;
  }

  // Final labels against the final centroids; inertia w.r.t. the cluster means.
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = squared_distance(points, i, centroids, 0);
    for (int c = 1; c < k; ++c) {
      const double d = squared_distance(points, i, centroids, c);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out.labels[static_cast<std::size_t>(i)] = best;
  }
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(k, points.cols());
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < n; ++i) {
    means.row(out.labels[static_cast<std::size_t>(i)]) += points.row(i);
    ++counts[static_cast<std::size_t>(out.labels[static_cast<std::size_t>(i)])];
  }
  out.inertia = 0.0;
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
  }
  for (Index i = 0; i < n; ++i) {
    out.inertia += squared_distance(points, i, means, out.labels[static_cast<std::size_t>(i)]);
  }
  return out;
}

ClusterAssignment kmeans(const Eigen::MatrixXd& points, int k, int repetitions, std::uint64_t seed,
                         const KMeansOptions& options) {
  const Index n = points.rows();
  if (k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");
  if (repetitions < 1) throw Error(Errc::InvalidArgument, "repetitions must be >= 1");
  if (k > n) throw Error(Errc::TooManyClusters, "k exceeds the number of points");
  if (k > distinct_rows(points)) {
    throw Error(Errc::TooManyClusters, "k exceeds the number of distinct points");
  }

  ClusterAssignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < repetitions; ++rep) {
    auto rng = make_stream(seed, static_cast<std::uint64_t>(rep));
    ClusterAssignment run = lloyd(points, plus_plus_init(points, k, rng), options);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  renumber_by_first_member(best);
  return best;
}

Eigen::VectorXd silhouette_values(const Eigen::MatrixXd& points, std::span<const int> labels) {
  const Index n = points.rows();
  validate_labels(n, labels);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (n == 0) return out;
  const int k = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (const int l : labels) ++sizes[static_cast<std::size_t>(l)];

  Eigen::VectorXd sums(k);
  for (Index i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
    if (sizes[own] <= 1) continue;
    sums.setZero();
    for (Index j = 0; j < n; ++j) {
      if (j != i) sums(labels[static_cast<std::size_t>(j)]) += (points.row(i) - points.row(j)).norm();
    }
    const double a = sums(static_cast<Index>(own)) / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (static_cast<std::size_t>(c) == own || sizes[static_cast<std::size_t>(c)] == 0) continue;
      b = std::min(b, sums(c) / static_cast<double>(sizes[static_cast<std::size_t>(c)]));
    }
    if (!std::isfinite(b)) continue;
    const double denom = std::max(a, b);
    out(i) = denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return out;
}

SilhouetteSelection silhouette_select(const Eigen::MatrixXd& points, int k_min, int k_max,
                                      int repetitions, std::uint64_t seed) {
  const Index n = points.rows();
  if (k_min < 2 || k_max < k_min || k_max > n - 1) {
    throw Error(Errc::InvalidArgument, "k range must lie within [2, n - 1]");
  }
  const Index distinct = distinct_rows(points);

  SilhouetteSelection best;
  bool found = false;
  for (int k = k_min; k <= k_max; ++k) {
    if (k > distinct) break;
    ClusterAssignment a = kmeans(points, k, repetitions, make_stream(seed, 1000 + k)());
    Eigen::VectorXd s = silhouette_values(points, a.labels);
    SilhouetteCandidate cand{k, static_cast<int>((s.array() < 0.0).count()), s.mean(), a.inertia};
    best.candidates.push_back(cand);

    bool better = !found;
    if (found) {
      const auto& cur = best.candidates[static_cast<std::size_t>(best.k - k_min)];
      if (cand.negatives != cur.negatives) {
        better = cand.negatives < cur.negatives;
      } else if (std::abs(cand.mean - cur.mean) > 1e-12) {
        better = cand.mean > cur.mean;
      }
    }
    if (better) {
      found = true;
      best.k = k;
      best.assignment = std::move(a);
      best.silhouettes = std::move(s);
    }
  }
  if (!found) {
    best.k = 1;
    best.assignment.k = 1;
    best.assignment.labels.assign(static_cast<std::size_t>(n), 0);
    const Eigen::RowVectorXd centre = points.colwise().mean();
    best.assignment.inertia = (points.rowwise() - centre).rowwise().squaredNorm().sum();
    best.silhouettes = Eigen::VectorXd::Zero(n);
  }
  return best;
}

double modularity(const Eigen::MatrixXd& binary_adjacency, std::span<const int> labels) {
  const Index n = binary_adjacency.rows();
  if (binary_adjacency.cols() != n) throw Error(Errc::DimensionMismatch, "adjacency must be square");
  validate_labels(n, labels);
  for (Index i = 0; i < n; ++i) {
    if (binary_adjacency(i, i) != 0.0) throw Error(Errc::SelfLoop, "adjacency diagonal");
    for (Index j = 0; j < n; ++j) {
      const double v = binary_adjacency(i, j);
      if (v != 0.0 && v != 1.0) throw Error(Errc::InvalidArgument, "adjacency must be binary");
      if (v != binary_adjacency(j, i)) throw Error(Errc::NotSymmetric, "adjacency");
    }
  }
  const double two_w = binary_adjacency.sum();
  if (two_w == 0.0) throw Error(Errc::EmptyGraph, "modularity undefined without edges");

  const int k = n > 0 ? *std::max_element(labels.begin(), labels.end()) + 1 : 0;
  std::vector<double> inside(static_cast<std::size_t>(k), 0.0);
  std::vector<double> volume(static_cast<std::size_t>(k), 0.0);
  const Eigen::VectorXd degree = binary_adjacency.rowwise().sum();
  for (Index i = 0; i < n; ++i) {
    const auto ci = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
    volume[ci] += degree(i);
    for (Index j = 0; j < n; ++j) {
      if (binary_adjacency(i, j) != 0.0 &&
          labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)]) {
        inside[ci] += 1.0;
      }
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < inside.size(); ++c) {
    const double share = volume[c] / two_w;
    q += inside[c] / two_w - share * share;
  }
  return q;
}

ModularityTest permutation_test(const Eigen::MatrixXd& binary_adjacency,
                                std::span<const int> labels, int draws, std::uint64_t seed,
                                NullModel model) {
  if (draws < 1) throw Error(Errc::InvalidArgument, "draws must be >= 1");
  ModularityTest out;
  out.q_observed = modularity(binary_adjacency, labels);

  const std::vector<int> observed(labels.begin(), labels.end());
  const std::set<int> ids_set(observed.begin(), observed.end());
  const std::vector<int> ids(ids_set.begin(), ids_set.end());

  out.null_samples.reserve(static_cast<std::size_t>(draws));
  int at_least = 0;
  for (int d = 0; d < draws; ++d) {
    auto rng = make_stream(seed, static_cast<std::uint64_t>(d));
    std::vector<int> shuffled = observed;
    if (model == NullModel::Permute) {
      for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[uniform_index(rng, i)]);
      }
    } else {
      for (auto& l : shuffled) l = ids[uniform_index(rng, ids.size())];
    }
    const double q = modularity(binary_adjacency, shuffled);
    out.null_samples.push_back(q);
    if (q >= out.q_observed) ++at_least;
  }
  out.p_value = (1.0 + at_least) / (1.0 + draws);
  return out;
}

std::vector<int> with_off_focus_group(Index n, std::span<const Index> focus,
                                      std::span<const int> focus_labels, int k) {
  if (focus.size() != focus_labels.size()) {
    throw Error(Errc::DimensionMismatch, "focus labels length");
  }
  std::vector<int> out(static_cast<std::size_t>(n), k);
  for (std::size_t i = 0; i < focus.size(); ++i) {
    if (focus[i] < 0 || focus[i] >= n) throw Error(Errc::IndexOutOfRange, "focus node index");
    out[static_cast<std::size_t>(focus[i])] = focus_labels[i];
  }
  return out;
}

}  // namespace ggse
