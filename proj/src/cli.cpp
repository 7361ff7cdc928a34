#include "ggse/cli.hpp"

#include "ggse/analysis.hpp"
#include "ggse/error.hpp"
#include "ggse/slepian.hpp"
#include "ggse/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ggse::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

// JSON numbers carry the same 12 significant digits as the CSV files.
json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  const double r = std::strtod(fmt(x).c_str(), nullptr);
  return r == 0.0 ? 0.0 : r;
}

json num_array(const Eigen::VectorXd& v) {
  json a = json::array();
  for (const double x : v) a.push_back(num(x));
  return a;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view align_name(AlignMode m) { return m == AlignMode::Chained ? "chained" : "anchored"; }
std::string_view null_name(NullModel m) { return m == NullModel::Permute ? "permute" : "uniform"; }

json config_json(const RunConfig& c) {
  json j;
  j["edges"] = c.edges.generic_string();
  j["nodes"] = c.nodes.generic_string();
  j["layers"] = c.layers;
  j["merge"] = std::string(layer_merge_name(c.merge));
  j["binarize"] = c.binarize;
  j["drop_isolated"] = c.drop_isolated;
  j["focus_classes"] = c.focus_classes;
  j["focus_nodes"] = c.focus_nodes;
  j["steps"] = c.steps;
  j["start"] = num(c.start);
  j["end"] = num(c.end);
  j["eigvecs"] = {c.eigvecs.first, c.eigvecs.second};
  j["approx_order"] = c.approx_order ? json(*c.approx_order) : json(nullptr);
  j["align"] = std::string(align_name(c.align));
  j["bandwidths"] = c.bandwidths;
  j["orders"] = c.orders;
  j["trajectory"] = c.trajectory.generic_string();
  j["assignment"] = c.assignment.generic_string();
  j["frame"] = c.frame;
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  j["repetitions"] = c.repetitions;
  j["draws"] = c.draws;
  j["null_model"] = std::string(null_name(c.null_model));
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["out_dir"] = c.out_dir.generic_string();
  return j;
}

std::string seed_text(const RunConfig& c) { return c.seed ? std::to_string(*c.seed) : "none"; }

class Artifacts {
public:
  Artifacts(const RunConfig& c, std::string command)
      : dir_(c.out_dir), command_(std::move(command)), hash_(config_hash(c)),
        seed_(seed_text(c)) {
    fs::create_directories(dir_);
  }

  void csv(const std::string& name, const std::string& header, const std::string& body) const {
    write(name, "# ggse " + command_ + " config_hash=" + hash_ + " seed=" + seed_ + "\n" + header +
                    "\n" + body);
  }

  void values_csv(const std::string& name, const Eigen::VectorXd& v) const {
    std::string body;
    for (Index i = 0; i < v.size(); ++i) body += std::to_string(i + 1) + "," + fmt(v(i)) + "\n";
    csv(name, "index,value", body);
  }

  void json_file(const std::string& name, json payload, const RunConfig& c) const {
    payload["command"] = command_;
    payload["config_hash"] = hash_;
    payload["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    payload["config"] = config_json(c);
    write(name, payload.dump(2) + "\n");
  }

private:
  void write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(Errc::Io, "cannot write " + p.string());
    f << text;
    if (!f) throw Error(Errc::Io, "write failed for " + p.string());
  }

  fs::path dir_;
  std::string command_;
  std::string hash_;
  std::string seed_;
};

void require_file(const fs::path& p, std::string_view flag) {
  if (p.empty()) throw Error(Errc::InvalidArgument, std::string(flag) + " is required");
  if (!fs::is_regular_file(p)) throw Error(Errc::Io, "no such file: " + p.string());
}

Graph load_inputs(const RunConfig& c) {
  require_file(c.edges, "--edges");
  const auto edges = read_edge_csv(c.edges);
  std::vector<NodeRecord> nodes;
  if (!c.nodes.empty()) {
    require_file(c.nodes, "--nodes");
    nodes = read_node_csv(c.nodes);
  } else {
    std::set<std::string> seen;
    for (const auto& e : edges) {
      for (const auto* id : {&e.source, &e.target}) {
        if (seen.insert(*id).second) nodes.push_back({*id, *id, ""});
      }
    }
  }
  LoadOptions opts;
  opts.layers.insert(c.layers.begin(), c.layers.end());
  opts.merge = c.merge;
  opts.binarize = c.binarize;
  Graph g = load_graph(edges, nodes, opts);
  if (c.drop_isolated) g = drop_isolated(g);
  if (g.size() == 0) throw Error(Errc::EmptyGraph, "graph has no nodes");
  return g;
}

std::vector<Index> resolve_focus(const RunConfig& c, const Graph& g) {
  std::set<Index> focus;
  for (const auto& cls : c.focus_classes) {
    const auto members = g.nodes_of_class(cls);
    if (members.empty()) throw Error(Errc::EmptyFocus, "no node of class '" + cls + "'");
    focus.insert(members.begin(), members.end());
  }
  for (const auto& label : c.focus_nodes) {
    const auto i = g.index_of(label);
    if (!i) throw Error(Errc::UnknownNode, "focus node '" + label + "'");
    focus.insert(*i);
  }
  return {focus.begin(), focus.end()};
}

json degeneracy_json(const DegeneracyReport& r) {
  return {{"near_one", r.near_one},
          {"near_zero", r.near_zero},
          {"selection_zeros", r.selection_zeros},
          {"holds", r.holds},
          {"equality_expected", r.equality_expected}};
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(sep, pos);
    std::string item(text.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                                      : next - pos));
    item.erase(0, item.find_first_not_of(" \t\r"));
    item.erase(item.find_last_not_of(" \t\r") + 1);
    out.push_back(std::move(item));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string read_text(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) throw Error(Errc::InvalidArgument, "--seed is required for this command");
  return *c.seed;
}

json modularity_json(const ModularityTest& t, int groups, int draws, NullModel model) {
  Eigen::VectorXd samples = Eigen::Map<const Eigen::VectorXd>(
      t.null_samples.data(), static_cast<Index>(t.null_samples.size()));
  const double null_max = samples.size() ? samples.maxCoeff() : 0.0;
  return {{"q_observed", num(t.q_observed)},
          {"p_value", num(t.p_value)},
          {"draws", draws},
          {"groups", groups},
          {"null_model", std::string(null_name(model))},
          {"null_max", num(null_max)},
          {"null_samples", num_array(samples)}};
}

}  // namespace

std::string config_hash(const RunConfig& config) {
  return hex64(fnv1a(config_json(config).dump()));
}

void cmd_spectrum(const RunConfig& c) {
  const Graph g = load_inputs(c);
  const Index n = g.size();
  const NormalizedOperators ops = normalize(g);
  const SpectralBasis basis = eig_sym(ops.laplacian);
  const Eigen::MatrixXd lhalf = sqrt_psd_exact(ops.laplacian);
  const auto focus = resolve_focus(c, g);
  const CooperationWeights sel =
      focus.empty() ? CooperationWeights::ones(n) : CooperationWeights::selection(n, focus);
  const bool connected = is_connected(g);

  std::vector<int> widths = c.bandwidths;
  if (widths.empty()) widths.push_back(static_cast<int>(n));
  for (const int w : c.orders) {
    if (w < 1) throw Error(Errc::InvalidArgument, "Taylor orders must be >= 1");
  }

  Artifacts out(c, "spectrum");
  json report;
  report["nodes"] = n;
  report["connected"] = connected;
  report["selection_zeros"] = sel.zero_count();
  report["laplacian_min"] = num(basis.eigenvalues(0));
  report["laplacian_max"] = num(basis.eigenvalues(n - 1));

  json bw = json::array();
  for (const int w : widths) {
    const Bandwidth band(w, n);
    const SlepianSet mu = concentration_slepians(basis, sel, band);
    const SlepianSet xi = embedded_distance_slepians(basis, lhalf, sel, band);
    out.values_csv("mu_W" + std::to_string(w) + ".csv", mu.values);
    out.values_csv("xi_W" + std::to_string(w) + ".csv", xi.values);
    json entry{{"bandwidth", w}};
    if (w == n) {
      entry["mu"] = degeneracy_json(verify_degeneracy(mu, sel, 1e-8));
      entry["xi"] = degeneracy_json(verify_degeneracy(xi, sel, 1e-8, connected));
    }
    bw.push_back(std::move(entry));
  }
  report["bandwidths"] = std::move(bw);

  const Eigen::MatrixXd exact = guided_matrix_exact(sel, lhalf);
  const SlepianSet zeta = guided_slepians(exact, sel, lhalf);
  out.values_csv("zeta.csv", zeta.values);
  out.values_csv("zeta_mu.csv", zeta.companion_mu);
  out.values_csv("zeta_xi.csv", zeta.companion_xi);
  report["zeta"] = {{"max", num(zeta.values.maxCoeff())},
                    {"min", num(zeta.values.minCoeff())},
                    {"m_max", num(sel.max())},
                    {"within_bounds", zeta.values.maxCoeff() <= sel.max() + 1e-9 &&
                                          zeta.values.minCoeff() >= -2.0 * sel.max() - 1e-9}};

  json taylor = json::array();
  for (const int k : c.orders) {
    const Eigen::MatrixXd approx = guided_matrix_approx(sel, ops.adjacency, k);
    out.values_csv("zeta_K" + std::to_string(k) + ".csv", eig_sym(approx, SortOrder::Descending).eigenvalues);
    const TaylorBound b = taylor_bound(k, basis.eigenvalues, sel.values());
    const double root_dist = (lhalf - sqrt_taylor(ops.adjacency, k)).norm();
    const double crit_dist = (exact - guided_matrix_truncated_root(sel, ops.adjacency, k)).norm();
    taylor.push_back({{"order", k},
                      {"coefficient", num(taylor_coeff(k))},
                      {"d_k_bound", num(b.d_k)},
                      {"d_km_bound", num(b.d_km)},
                      {"d_km_full_bound", num(b.d_km_full)},
                      {"root_distance", num(root_dist)},
                      {"criterion_distance", num(crit_dist)}});
  }
  report["taylor"] = std::move(taylor);
  out.json_file("spectrum_report.json", std::move(report), c);
}

void cmd_sweep(const RunConfig& c) {
  const Graph g = load_inputs(c);
  const Index n = g.size();
  const auto focus = resolve_focus(c, g);
  const NormalizedOperators ops = normalize(g);
  const WeightSchedule schedule = make_schedule(n, focus, c.steps, c.start, c.end);
  SweepOptions opts;
  opts.indices = c.eigvecs;
  opts.approx_order = c.approx_order;
  opts.align = c.align;
  const Trajectory traj = trajectory_sweep(ops, schedule, opts);

  std::vector<bool> in_focus(static_cast<std::size_t>(n), false);
  for (const Index i : schedule.focus) in_focus[static_cast<std::size_t>(i)] = true;

  json steps = json::array();
  for (std::size_t s = 0; s < traj.frames.size(); ++s) {
    const auto& f = traj.frames[s];
    steps.push_back({{"step", s},
                     {"off_focus_weight", num(schedule.off_focus_levels[s])},
                     {"zeta", {num(f.zeta_values.first), num(f.zeta_values.second)}},
                     {"min_gap", num(traj.min_gaps[s])}});
  }
  json nodes = json::array();
  std::string flat;
  for (Index i = 0; i < n; ++i) {
    const Eigen::MatrixX2d path = traj.node_path(i);
    json pts = json::array();
    for (Index s = 0; s < path.rows(); ++s) {
      pts.push_back({num(path(s, 0)), num(path(s, 1))});
      flat += g.labels()[static_cast<std::size_t>(i)] + "," + std::to_string(s) + "," +
              fmt(path(s, 0)) + "," + fmt(path(s, 1)) + "\n";
    }
    nodes.push_back({{"index", i},
                     {"label", g.labels()[static_cast<std::size_t>(i)]},
                     {"class", g.classes()[static_cast<std::size_t>(i)]},
                     {"focus", static_cast<bool>(in_focus[static_cast<std::size_t>(i)])},
                     {"path", std::move(pts)}});
  }

  Artifacts out(c, "sweep");
  json payload;
  payload["eigvecs"] = {c.eigvecs.first, c.eigvecs.second};
  payload["approx_order"] = c.approx_order ? json(*c.approx_order) : json(nullptr);
  payload["align"] = std::string(align_name(c.align));
  payload["steps"] = std::move(steps);
  payload["warnings"] = traj.warnings;
  payload["nodes"] = std::move(nodes);
  out.json_file("trajectory.json", std::move(payload), c);
  out.csv("trajectory.csv", "node,step,x,y", flat);
}

void cmd_cluster(const RunConfig& c) {
  const std::uint64_t seed = require_seed(c);
  require_file(c.trajectory, "--trajectory");
  json traj;
  try {
    traj = json::parse(read_text(c.trajectory));
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, "trajectory: " + std::string(e.what()));
  }
  const Graph g = load_inputs(c);
  const Index n = g.size();

  std::vector<Index> focus;
  std::vector<std::array<double, 2>> coords;
  try {
    const auto& nodes = traj.at("nodes");
    if (static_cast<Index>(nodes.size()) != n) {
      throw Error(Errc::DimensionMismatch, "trajectory node count differs from the graph");
    }
    for (Index i = 0; i < n; ++i) {
      const auto& node = nodes[static_cast<std::size_t>(i)];
      if (node.at("label").get<std::string>() != g.labels()[static_cast<std::size_t>(i)]) {
        throw Error(Errc::DimensionMismatch, "trajectory node order differs from the graph");
      }
      if (!node.at("focus").get<bool>()) continue;
      const auto& path = node.at("path");
      const auto len = static_cast<int>(path.size());
      const int frame = c.frame < 0 ? len + c.frame : c.frame;
      if (frame < 0 || frame >= len) throw Error(Errc::IndexOutOfRange, "--frame");
      const auto& p = path[static_cast<std::size_t>(frame)];
      if (p.at(0).is_null() || p.at(1).is_null()) {
        throw Error(Errc::Parse, "non-finite coordinate in trajectory");
      }
      focus.push_back(i);
      coords.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, "trajectory: " + std::string(e.what()));
  }
  if (focus.empty()) throw Error(Errc::EmptyFocus, "trajectory has no focus node");

  const auto m = static_cast<Index>(focus.size());
  Eigen::MatrixXd points(m, 2);
  for (Index r = 0; r < m; ++r) {
    points(r, 0) = coords[static_cast<std::size_t>(r)][0];
    points(r, 1) = coords[static_cast<std::size_t>(r)][1];
  }

  SilhouetteSelection sel;
  const int k_hi = std::min<int>(c.k_max, static_cast<int>(m) - 1);
  if (c.k_min < 2 || c.k_min > c.k_max) throw Error(Errc::InvalidArgument, "need 2 <= kmin <= kmax");
  if (k_hi >= c.k_min) {
    sel = silhouette_select(points, c.k_min, k_hi, c.repetitions, seed);
  } else {
    sel.k = 1;
    sel.assignment.labels.assign(static_cast<std::size_t>(m), 0);
    sel.assignment.k = 1;
    sel.assignment.inertia = (points.rowwise() - points.colwise().mean()).squaredNorm();
    sel.silhouettes = Eigen::VectorXd::Zero(m);
  }

  Artifacts out(c, "cluster");

  // One column per cluster, members sorted by label.
  std::vector<std::vector<std::string>> columns(static_cast<std::size_t>(sel.k));
  for (Index r = 0; r < m; ++r) {
    columns[static_cast<std::size_t>(sel.assignment.labels[static_cast<std::size_t>(r)])].push_back(
        g.labels()[static_cast<std::size_t>(focus[static_cast<std::size_t>(r)])]);
  }
  std::size_t depth = 0;
  for (auto& col : columns) {
    std::sort(col.begin(), col.end());
    depth = std::max(depth, col.size());
  }
  std::string header, table;
  for (int k = 0; k < sel.k; ++k) header += (k ? ",C" : "C") + std::to_string(k + 1);
  for (std::size_t row = 0; row < depth; ++row) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (k) table += ",";
      if (row < columns[k].size()) table += columns[k][row];
    }
    table += "\n";
  }
  out.csv("clusters.csv", header, table);

  std::string sil;
  for (Index r = 0; r < m; ++r) {
    const auto i = focus[static_cast<std::size_t>(r)];
    sil += g.labels()[static_cast<std::size_t>(i)] + "," +
           std::to_string(sel.assignment.labels[static_cast<std::size_t>(r)] + 1) + "," +
           fmt(sel.silhouettes(r)) + "\n";
  }
  out.csv("silhouettes.csv", "node,cluster,silhouette", sil);

  std::string cand;
  for (const auto& cnd : sel.candidates) {
    cand += std::to_string(cnd.k) + "," + std::to_string(cnd.negatives) + "," + fmt(cnd.mean) +
            "," + fmt(cnd.inertia) + "\n";
  }
  out.csv("k_selection.csv", "k,negatives,mean_silhouette,inertia", cand);

  const auto labels = with_off_focus_group(n, focus, sel.assignment.labels, sel.k);
  const int groups = *std::max_element(labels.begin(), labels.end()) + 1;
  const Eigen::MatrixXd a_bin = binarize(g).weights();
  const ModularityTest test = permutation_test(a_bin, labels, c.draws, seed, c.null_model);
  json payload = modularity_json(test, groups, c.draws, c.null_model);
  payload["k_star"] = sel.k;
  payload["focus_nodes"] = m;
  out.json_file("modularity_test.json", std::move(payload), c);
}

void cmd_modtest(const RunConfig& c) {
  const std::uint64_t seed = require_seed(c);
  require_file(c.assignment, "--assignment");
  const Graph g = load_inputs(c);
  const Index n = g.size();

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::map<std::string, int> ids;
  bool header_seen = false;
  std::size_t label_col = 0, cluster_col = 1;
  std::istringstream lines(read_text(c.assignment));
  std::string line;
  for (int lineno = 1; std::getline(lines, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (!header_seen) {
      const auto l = std::find(fields.begin(), fields.end(), "label");
      const auto k = std::find(fields.begin(), fields.end(), "cluster");
      if (l == fields.end() || k == fields.end()) {
        throw Error(Errc::Parse, "assignment header needs 'label' and 'cluster' columns");
      }
      label_col = static_cast<std::size_t>(l - fields.begin());
      cluster_col = static_cast<std::size_t>(k - fields.begin());
      header_seen = true;
      continue;
    }
    if (fields.size() <= std::max(label_col, cluster_col)) {
      throw Error(Errc::Parse, "assignment line " + std::to_string(lineno) + ": missing field");
    }
    const auto i = g.index_of(fields[label_col]);
    if (!i) throw Error(Errc::UnknownNode, "assignment node '" + fields[label_col] + "'");
    const auto [it, fresh] = ids.try_emplace(fields[cluster_col], static_cast<int>(ids.size()));
    labels[static_cast<std::size_t>(*i)] = it->second;
  }
  if (ids.empty()) throw Error(Errc::EmptyFocus, "assignment lists no node");
  // Unlisted nodes form one additional group.
  const int extra = static_cast<int>(ids.size());
  bool any_extra = false;
  for (auto& l : labels) {
    if (l < 0) {
      l = extra;
      any_extra = true;
    }
  }

  const Eigen::MatrixXd a_bin = binarize(g).weights();
  const ModularityTest test = permutation_test(a_bin, labels, c.draws, seed, c.null_model);
  Artifacts out(c, "modtest");
  json payload = modularity_json(test, extra + (any_extra ? 1 : 0), c.draws, c.null_model);
  out.json_file("modularity_test.json", std::move(payload), c);
}

namespace {

EigvecPair parse_pair(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw Error(Errc::InvalidArgument, "--eigvecs expects two indices");
  EigvecPair p{};
  for (int k = 0; k < 2; ++k) {
    int v = 0;
    const auto& s = parts[static_cast<std::size_t>(k)];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(Errc::InvalidArgument, "--eigvecs: bad index '" + s + "'");
    }
    (k ? p.second : p.first) = v;
  }
  return p;
}

struct Flags {
  std::string merge = "or";
  std::string eigvecs = "2,3";
  std::string align = "chained";
  std::string null_model = "permute";
  int approx_order = 0;
};

void add_graph_options(CLI::App* sub, RunConfig& c, Flags& f) {
  sub->add_option("--edges", c.edges, "edge CSV (source,target,weight,layer)")->required();
  sub->add_option("--nodes", c.nodes, "node CSV (id,label,class)");
  sub->add_option("--layers", c.layers, "layers to keep (default: all)")->delimiter(',');
  sub->add_option("--merge", f.merge, "layer merge rule")
      ->check(CLI::IsMember({"or", "max", "sum"}));
  sub->add_flag("--binarize,!--no-binarize", c.binarize, "binarize merged weights (default on)");
  sub->add_flag("--drop-isolated", c.drop_isolated, "remove degree-0 nodes");
  sub->add_option("--focus-class", c.focus_classes, "focus node classes")->delimiter(',');
  sub->add_option("--focus-nodes", c.focus_nodes, "focus node labels")->delimiter(',');
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--out", c.out_dir, "output directory");
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  Flags f;
  CLI::App app{"Graph Slepian focus embeddings"};
  app.require_subcommand(1);

  auto* spectrum = app.add_subcommand("spectrum", "Slepian criterion spectra");
  add_graph_options(spectrum, c, f);
  spectrum->add_option("--bandwidths", c.bandwidths, "bandwidths W (default: n)")->delimiter(',');
  spectrum->add_option("--orders", c.orders, "Taylor orders")->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "focus sweep trajectory");
  add_graph_options(sweep, c, f);
  sweep->add_option("--steps", c.steps, "schedule length");
  sweep->add_option("--start", c.start, "initial off-focus weight");
  sweep->add_option("--end", c.end, "final off-focus weight");
  sweep->add_option("--eigvecs", f.eigvecs, "1-based eigenvector pair");
  sweep->add_option("--approx-order", f.approx_order, "Taylor order (omit for exact)");
  sweep->add_option("--align", f.align, "alignment mode")
      ->check(CLI::IsMember({"chained", "anchored"}));

  auto* cluster = app.add_subcommand("cluster", "cluster a trajectory frame");
  add_graph_options(cluster, c, f);
  cluster->add_option("--trajectory", c.trajectory, "trajectory.json from sweep")->required();
  cluster->add_option("--frame", c.frame, "frame index, negative counts from the end");
  cluster->add_option("--kmin", c.k_min);
  cluster->add_option("--kmax", c.k_max);
  cluster->add_option("--reps", c.repetitions, "k-means restarts");
  cluster->add_option("--draws", c.draws, "null draws");
  cluster->add_option("--null", f.null_model)->check(CLI::IsMember({"permute", "uniform"}));

  auto* modtest = app.add_subcommand("modtest", "modularity permutation test");
  add_graph_options(modtest, c, f);
  modtest->add_option("--assignment", c.assignment, "CSV with label,cluster")->required();
  modtest->add_option("--draws", c.draws, "null draws");
  modtest->add_option("--null", f.null_model)->check(CLI::IsMember({"permute", "uniform"}));

  std::vector<const char*> argv{"ggse"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    c.merge = *parse_layer_merge(f.merge);
    c.eigvecs = parse_pair(f.eigvecs);
    c.align = f.align == "anchored" ? AlignMode::Anchored : AlignMode::Chained;
    c.null_model = f.null_model == "uniform" ? NullModel::Uniform : NullModel::Permute;
    if (sweep->count("--approx-order")) {
      if (f.approx_order < 1) throw Error(Errc::InvalidArgument, "--approx-order must be >= 1");
      c.approx_order = f.approx_order;
    }
    if (c.repetitions < 1) throw Error(Errc::InvalidArgument, "--reps must be >= 1");
    if (c.draws < 1) throw Error(Errc::InvalidArgument, "--draws must be >= 1");

    if (spectrum->parsed()) cmd_spectrum(c);
    else if (sweep->parsed()) cmd_sweep(c);
    else if (cluster->parsed()) cmd_cluster(c);
    else cmd_modtest(c);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_numerical(e.code()) ? kExitNumerical : kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace ggse::cli
