#include "ggse/graph.hpp"

#include "ggse/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace ggse {

std::optional<LayerMerge> parse_layer_merge(std::string_view name) {
  if (name == "or") return LayerMerge::Or;
  if (name == "max") return LayerMerge::Max;
  if (name == "sum") return LayerMerge::Sum;
  return std::nullopt;
}

std::string_view layer_merge_name(LayerMerge merge) {
  switch (merge) {
    case LayerMerge::Or: return "or";
    case LayerMerge::Max: return "max";
    case LayerMerge::Sum: return "sum";
  }
  return "or";
}

Graph Graph::from_weights(Eigen::MatrixXd weights, std::vector<std::string> labels,
                          std::vector<std::string> classes, PairLayers edge_layers) {
  const Index n = weights.rows();
  if (weights.cols() != n) {
    throw Error(Errc::DimensionMismatch, "weight matrix must be square");
  }
  for (Index i = 0; i < n; ++i) {
    if (weights(i, i) != 0.0) {
      throw Error(Errc::SelfLoop, "non-zero diagonal at node " + std::to_string(i));
    }
    for (Index j = 0; j < n; ++j) {
      const double w = weights(i, j);
      if (!std::isfinite(w)) throw Error(Errc::InvalidArgument, "non-finite weight");
      if (w < 0.0) throw Error(Errc::NegativeWeight, "negative weight");
      if (w != weights(j, i)) throw Error(Errc::NotSymmetric, "weight matrix is not symmetric");
    }
  }
  if (labels.empty()) {
    labels.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (classes.empty()) classes.assign(static_cast<std::size_t>(n), std::string{});
  if (static_cast<Index>(labels.size()) != n || static_cast<Index>(classes.size()) != n) {
    throw Error(Errc::DimensionMismatch, "metadata length differs from node count");
  }

  Graph g;
  g.weights_ = std::move(weights);
  g.labels_ = std::move(labels);
  g.classes_ = std::move(classes);
  g.edge_layers_ = std::move(edge_layers);
  return g;
}

std::optional<Index> Graph::index_of(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Index>(it - labels_.begin());
}

std::vector<Index> Graph::nodes_of_class(std::string_view node_class) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i] == node_class) out.push_back(static_cast<Index>(i));
  }
  return out;
}

Graph Graph::subgraph(std::span<const Index> keep) const {
  const auto m = static_cast<Index>(keep.size());
  Eigen::MatrixXd w(m, m);
  std::vector<std::string> labels;
  std::vector<std::string> classes;
  std::vector<Index> new_index(static_cast<std::size_t>(size()), -1);
  for (Index a = 0; a < m; ++a) {
    const Index i = keep[static_cast<std::size_t>(a)];
    if (i < 0 || i >= size()) throw Error(Errc::IndexOutOfRange, "subgraph index");
    new_index[static_cast<std::size_t>(i)] = a;
    labels.push_back(labels_[static_cast<std::size_t>(i)]);
    classes.push_back(classes_[static_cast<std::size_t>(i)]);
    for (Index b = 0; b < m; ++b) w(a, b) = weights_(i, keep[static_cast<std::size_t>(b)]);
  }
  PairLayers layers;
  for (const auto& [pair, tags] : edge_layers_) {
    const Index a = new_index[static_cast<std::size_t>(pair.first)];
    const Index b = new_index[static_cast<std::size_t>(pair.second)];
    if (a >= 0 && b >= 0) layers[{std::min(a, b), std::max(a, b)}] = tags;
  }
  return from_weights(std::move(w), std::move(labels), std::move(classes), std::move(layers));
}

Graph load_graph(std::span<const EdgeRecord> edges, std::span<const NodeRecord> nodes,
                 const LoadOptions& options) {
  std::unordered_map<std::string, Index> index;
  std::vector<std::string> labels;
  std::vector<std::string> classes;
  for (const auto& rec : nodes) {
    if (!index.emplace(rec.id, static_cast<Index>(labels.size())).second) {
      throw Error(Errc::InvalidArgument, "duplicate node id '" + rec.id + "'");
    }
    labels.push_back(rec.label.empty() ? rec.id : rec.label);
    classes.push_back(rec.node_class);
  }
  const auto n = static_cast<Index>(labels.size());

  // Directed per-layer accumulation.
  std::map<std::string, Eigen::MatrixXd> per_layer;
  for (const auto& e : edges) {
    const auto src = index.find(e.source);
    const auto dst = index.find(e.target);
    if (src == index.end()) throw Error(Errc::UnknownNode, "edge source '" + e.source + "'");
    if (dst == index.end()) throw Error(Errc::UnknownNode, "edge target '" + e.target + "'");
    if (!std::isfinite(e.weight)) throw Error(Errc::InvalidArgument, "non-finite edge weight");
    if (e.weight < 0.0) {
      throw Error(Errc::NegativeWeight, e.source + " -> " + e.target);
    }
    if (src->second == dst->second) throw Error(Errc::SelfLoop, "self-loop at '" + e.source + "'");
    if (!options.layers.empty() && !options.layers.contains(e.layer)) continue;

    auto [it, fresh] = per_layer.try_emplace(e.layer);
    if (fresh) it->second = Eigen::MatrixXd::Zero(n, n);
    it->second(src->second, dst->second) += e.weight;
  }

  Eigen::MatrixXd merged = Eigen::MatrixXd::Zero(n, n);
  Graph::PairLayers edge_layers;
  for (auto& [layer, w] : per_layer) {
    const Eigen::MatrixXd sym = w.cwiseMax(w.transpose());
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double v = sym(i, j);
        if (v <= 0.0) continue;
        edge_layers[{i, j}].insert(layer);
        double& out = merged(i, j);
        switch (options.merge) {
          case LayerMerge::Or: out = 1.0; break;
          case LayerMerge::Max: out = std::max(out, v); break;
          case LayerMerge::Sum: out += v; break;
        }
      }
    }
  }
  merged = Eigen::MatrixXd(merged.selfadjointView<Eigen::Upper>());
  if (options.binarize) merged = (merged.array() > 0.0).cast<double>();

  return Graph::from_weights(std::move(merged), std::move(labels), std::move(classes),
                             std::move(edge_layers));
}

Graph binarize(const Graph& g) {
  Eigen::MatrixXd w = (g.weights().array() > 0.0).cast<double>();
  return Graph::from_weights(std::move(w), g.labels(), g.classes(), g.edge_layers());
}

std::vector<std::vector<Index>> connected_components(const Graph& g) {
  const Index n = g.size();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  };
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (g.weights()(i, j) > 0.0) {
        const Index a = find(i);
        const Index b = find(j);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  std::map<Index, std::vector<Index>> groups;
  for (Index i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<Index>> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

bool is_connected(const Graph& g) { return g.size() > 0 && connected_components(g).size() == 1; }

Graph drop_isolated(const Graph& g) {
  const Eigen::VectorXd deg = g.degrees();
  std::vector<Index> keep;
  for (Index i = 0; i < g.size(); ++i) {
    if (deg(i) > 0.0) keep.push_back(i);
  }
  return g.subgraph(keep);
}

NormalizedOperators normalize(const Graph& g) {
  const Index n = g.size();
  NormalizedOperators ops;
  ops.degrees = g.degrees();
  for (Index i = 0; i < n; ++i) {
    if (!(ops.degrees(i) > 0.0)) {
      throw Error(Errc::IsolatedNode, "node '" + g.labels()[static_cast<std::size_t>(i)] +
                                          "' has degree 0; drop isolated nodes first");
    }
  }
  const Eigen::VectorXd inv_sqrt = ops.degrees.array().sqrt().inverse();
  ops.adjacency = inv_sqrt.asDiagonal() * g.weights() * inv_sqrt.asDiagonal();
  // The product is symmetric up to rounding; copy the upper triangle down.
  ops.adjacency = Eigen::MatrixXd(ops.adjacency.selfadjointView<Eigen::Upper>());
  ops.laplacian = Eigen::MatrixXd::Identity(n, n) - ops.adjacency;
  return ops;
}

}  // namespace ggse
