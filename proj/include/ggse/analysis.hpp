#pragma once

#include "ggse/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ggse {

/// Deterministic per-task random stream: the 64-bit seed and a task index are
/// mixed with splitmix64, so restarts and permutation draws are reproducible
/// and independent of evaluation order.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t task);

struct ClusterAssignment {
  std::vector<int> labels;
  int k = 0;
  double inertia = 0.0;
};

struct KMeansOptions {
  int max_iterations = 300;
  double tolerance = 1e-10;  ///< stop when no centroid moves farther than this
};

/// One Lloyd run from given initial centroids. `inertia_history` receives the
/// inertia after every assignment step when non-null.
ClusterAssignment lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids,
                        const KMeansOptions& options = {},
                        std::vector<double>* inertia_history = nullptr);

/// Best of `repetitions` k-means++-seeded Lloyd runs. Cluster ids are
/// renumbered in order of each cluster's first member.
ClusterAssignment kmeans(const Eigen::MatrixXd& points, int k, int repetitions, std::uint64_t seed,
                         const KMeansOptions& options = {});

/// Per-point silhouette (b - a) / max(a, b). Singletons and points with
/// a = b = 0 score 0.
Eigen::VectorXd silhouette_values(const Eigen::MatrixXd& points, std::span<const int> labels);

struct SilhouetteCandidate {
  int k = 0;
  int negatives = 0;
  double mean = 0.0;
  double inertia = 0.0;
};

struct SilhouetteSelection {
  int k = 1;
  ClusterAssignment assignment;
  Eigen::VectorXd silhouettes;
  std::vector<SilhouetteCandidate> candidates;
};

/// Clusters for every k in [k_min, k_max] and keeps the k with the fewest
/// negative silhouettes; ties go to the higher mean silhouette, then the
/// smaller k. Values of k above the number of distinct points are skipped;
/// if none remain the result is a single cluster with zero silhouettes.
SilhouetteSelection silhouette_select(const Eigen::MatrixXd& points, int k_min, int k_max,
                                      int repetitions, std::uint64_t seed);

/// Newman-Girvan modularity of a partition of a binary undirected graph.
/// Throws EmptyGraph when the graph has no edge.
double modularity(const Eigen::MatrixXd& binary_adjacency, std::span<const int> labels);

enum class NullModel {
  Permute,  ///< shuffle the observed labels (cluster sizes kept)
  Uniform,  ///< i.i.d. uniform labels over the observed cluster ids
};

struct ModularityTest {
  double q_observed = 0.0;
  std::vector<double> null_samples;
  double p_value = 1.0;  ///< (1 + #{null >= observed}) / (1 + draws)
};

ModularityTest permutation_test(const Eigen::MatrixXd& binary_adjacency,
                                std::span<const int> labels, int draws, std::uint64_t seed,
                                NullModel model = NullModel::Permute);

/// Full-graph labels for a clustering of focus nodes: focus node
/// `focus[i]` gets `focus_labels[i]`, every other node the extra id k.
std::vector<int> with_off_focus_group(Index n, std::span<const Index> focus,
                                      std::span<const int> focus_labels, int k);

}  // namespace ggse
