#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ggse {

using Index = Eigen::Index;

/// How records for the same node pair coming from different layers are
/// combined into a single undirected weight.
enum class LayerMerge {
  Or,   ///< 1 if the pair is connected in any selected layer
  Max,  ///< largest per-layer weight
  Sum,  ///< sum of per-layer weights
};

std::optional<LayerMerge> parse_layer_merge(std::string_view name);
std::string_view layer_merge_name(LayerMerge merge);

struct EdgeRecord {
  std::string source;
  std::string target;
  double weight = 1.0;
  std::string layer;
};

struct NodeRecord {
  std::string id;
  std::string label;
  std::string node_class;
};

struct LoadOptions {
  /// Layers to keep; empty keeps every layer.
  std::set<std::string> layers;
  LayerMerge merge = LayerMerge::Or;
  bool binarize = false;
};

/// Undirected weighted graph with per-node metadata. Immutable once built;
/// the only way to obtain one is through the loaders and transforms below,
/// which check symmetry, a zero diagonal and non-negative weights.
class Graph {
public:
  using PairLayers = std::map<std::pair<Index, Index>, std::set<std::string>>;

  Graph() = default;

  Index size() const noexcept { return weights_.rows(); }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  /// Layers contributing to each stored edge, keyed by (i, j) with i < j.
  const PairLayers& edge_layers() const noexcept { return edge_layers_; }

  Eigen::VectorXd degrees() const { return weights_.rowwise().sum(); }
  std::optional<Index> index_of(std::string_view label) const;
  std::vector<Index> nodes_of_class(std::string_view node_class) const;
  Graph subgraph(std::span<const Index> keep) const;

  /// Checked constructor; throws on asymmetric, negative, or self-loop weights.
  static Graph from_weights(Eigen::MatrixXd weights, std::vector<std::string> labels = {},
                            std::vector<std::string> classes = {}, PairLayers edge_layers = {});

private:
  Eigen::MatrixXd weights_;
  std::vector<std::string> labels_;
  std::vector<std::string> classes_;
  PairLayers edge_layers_;
};

/// Builds a graph from edge and node records. Within one layer, repeated
/// records for the same ordered pair add up, and the two directions are
/// symmetrized by max(w_ij, w_ji). Layers are then combined by
/// `options.merge`, and optionally binarized.
Graph load_graph(std::span<const EdgeRecord> edges, std::span<const NodeRecord> nodes,
                 const LoadOptions& options = {});

Graph binarize(const Graph& g);

/// Maximal sets of nodes joined by non-zero weights, each sorted, ordered by
/// their smallest member.
std::vector<std::vector<Index>> connected_components(const Graph& g);

bool is_connected(const Graph& g);

/// Removes degree-0 nodes, carrying labels, classes and layer tags along.
Graph drop_isolated(const Graph& g);

struct NormalizedOperators {
  Eigen::MatrixXd adjacency;  ///< D^{-1/2} W D^{-1/2}
  Eigen::MatrixXd laplacian;  ///< I - adjacency
  Eigen::VectorXd degrees;
};

/// Symmetric normalization. Throws IsolatedNode on any zero degree.
NormalizedOperators normalize(const Graph& g);

// CSV interchange: `source,target,weight,layer` and `id,label,class`,
// '#' lines ignored.
std::vector<EdgeRecord> read_edge_csv(const std::filesystem::path& path);
std::vector<NodeRecord> read_node_csv(const std::filesystem::path& path);
std::vector<EdgeRecord> parse_edge_csv(std::string_view text);
std::vector<NodeRecord> parse_node_csv(std::string_view text);

}  // namespace ggse
