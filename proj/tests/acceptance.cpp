// Acceptance checks: one line per criterion, non-zero exit if any fails.

#include "ggse/analysis.hpp"
#include "ggse/cli.hpp"
#include "ggse/embedding.hpp"
#include "ggse/graph.hpp"
#include "ggse/slepian.hpp"
#include "ggse/spectral.hpp"
#include "support.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#ifndef GGSE_DATA_DIR
#define GGSE_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace ggse;
using nlohmann::json;
using support::Mat;
using support::Vec;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

const fs::path kData = fs::path(GGSE_DATA_DIR) / "celegans";

bool have_connectome() {
  return fs::exists(kData / "edges.csv") && fs::exists(kData / "nodes.csv");
}

Graph connectome() {
  return load_graph(read_edge_csv(kData / "edges.csv"), read_node_csv(kData / "nodes.csv"),
                    LoadOptions{{}, LayerMerge::Or, true});
}

CooperationWeights random_selection(Index n, std::mt19937_64& rng) {
  Vec s(n);
  for (auto& v : s) v = support::unit(rng) < 0.5 ? 1.0 : 0.0;
  return CooperationWeights(s);
}

CooperationWeights random_m(Index n, std::mt19937_64& rng) {
  Vec m(n);
  for (auto& v : m) v = 3.0 * support::unit(rng);
  return CooperationWeights(m);
}

Index count_near(const Vec& v, double target, double tol) {
  return ((v.array() - target).abs() <= tol).count();
}

Vec sorted(Vec v) {
  std::sort(v.begin(), v.end());
  return v;
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  if (rc != 0) std::cerr << "cli: " << err.str();
  return rc;
}

std::vector<std::string> graph_args() {
  return {"--edges", (kData / "edges.csv").string(), "--nodes", (kData / "nodes.csv").string()};
}

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void c1(Outcome& o) {
  if (have_connectome()) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = connectome();
    const auto motor = g.nodes_of_class("motor");
    Vec s = Vec::Ones(g.size());
    for (const Index i : motor) s(i) = 0.0;
    const NormalizedOperators ops = normalize(g);
    const SlepianSet mu =
        concentration_slepians(eig_sym(ops.laplacian), CooperationWeights(s), Bandwidth(g.size(), g.size()));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Index ones = count_near(mu.values, 1.0, 1e-8), zeros = count_near(mu.values, 0.0, 1e-8);
    o.detail << "connectome n=" << g.size() << " motor=" << motor.size() << ": " << ones << " ones, " << zeros
             << " zeros in " << secs << " s; ";
    o.require(g.size() == 279 && motor.size() == 128, "279 nodes with 128 motoneurons");
    o.require(ones == 151 && zeros == 128, "151/128 split");
    o.require(secs < 10.0, "runtime");
  } else {
    o.detail << "connectome missing, synthetic only; ";
  }
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 5 + static_cast<int>(rng() % 36);
    const NormalizedOperators ops = normalize(support::random_connected(n, 0.2, rng, t % 2));
    const auto s = random_selection(n, rng);
    const SlepianSet mu = concentration_slepians(eig_sym(ops.laplacian), s, Bandwidth(n, n));
    worst = std::max(worst, (sorted(mu.values) - sorted(s.values())).cwiseAbs().maxCoeff());
  }
  o.detail << "50 random graphs: max |mu - diag(S)| = " << worst;
  o.require(worst <= 1e-8, "synthetic multiset");
}

void c2(Outcome& o) {
  if (have_connectome()) {
    const Graph g = connectome();
    Vec s = Vec::Ones(g.size());
    for (const Index i : g.nodes_of_class("motor")) s(i) = 0.0;
    const NormalizedOperators ops = normalize(g);
    const SlepianSet xi = embedded_distance_slepians(eig_sym(ops.laplacian), sqrt_psd_exact(ops.laplacian),
                                                     CooperationWeights(s), Bandwidth(g.size(), g.size()));
    const Index zeros = count_near(xi.values, 0.0, 1e-8);
    o.detail << "connectome: " << zeros << " xi zeros; ";
    o.require(zeros == 128, "128 zeros");
  }
  std::mt19937_64 rng(202);
  int mismatches = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 5 + static_cast<int>(rng() % 36);
    const NormalizedOperators ops = normalize(support::random_connected(n, 0.2, rng, t % 2));
    const auto s = random_selection(n, rng);
    const SlepianSet xi =
        embedded_distance_slepians(eig_sym(ops.laplacian), sqrt_psd_exact(ops.laplacian), s, Bandwidth(n, n));
    if (count_near(xi.values, 0.0, 1e-8) != s.zero_count()) ++mismatches;
  }
  o.detail << "connected z_lambda != z_S in " << mismatches << "/50; ";
  o.require(mismatches == 0, "z_lambda == z_S");

  // Three disjoint triangles; S keeps one node of the first and all of the
  // others, so z_S = 2 while each component adds a null vector.
  Mat w = Mat::Zero(9, 9);
  for (int b = 0; b < 9; b += 3)
    for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {0, 2}}) w(b + i, b + j) = w(b + j, b + i) = 1;
  const NormalizedOperators ops = normalize(Graph::from_weights(w));
  Vec s = Vec::Ones(9);
  s(1) = s(2) = 0.0;
  const SlepianSet xi = embedded_distance_slepians(eig_sym(ops.laplacian), sqrt_psd_exact(ops.laplacian),
                                                   CooperationWeights(s), Bandwidth(9, 9));
  const Index zl = count_near(xi.values, 0.0, 1e-8);
  o.detail << "disconnected: z_lambda=" << zl << " z_S=2";
  o.require(zl > 2, "strict inequality on disconnected graph");
}

void c3(Outcome& o) {
  std::mt19937_64 rng(303);
  double hi = -INFINITY, lo = INFINITY;
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 4 + static_cast<int>(rng() % 37);
    const NormalizedOperators ops = normalize(support::random_connected(n, 0.25, rng, t % 2));
    const auto m = random_m(n, rng);
    const Mat h = sqrt_psd_exact(ops.laplacian);
    const Vec z = guided_slepians(guided_matrix_exact(m, h), m, h).values;
    hi = std::max(hi, z(0) / m.max());
    lo = std::min(lo, z(n - 1) / m.max());
    if (z(0) > m.max() + 1e-9 || z(n - 1) < -2.0 * m.max() - 1e-9) ++violations;
  }
  o.detail << "100 graphs: zeta/m_max in [" << lo << ", " << hi << "], violations " << violations;
  o.require(violations == 0, "bounds");
}

void c4(Outcome& o) {
  std::mt19937_64 rng(404);
  double val_err = 0.0, vec_err = 0.0;
  int compared = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 5 + static_cast<int>(rng() % 26);
    const NormalizedOperators ops = normalize(support::random_connected(n, 0.3, rng, t % 2));
    const auto m = CooperationWeights::ones(n);
    const Mat h = sqrt_psd_exact(ops.laplacian);
    const SlepianSet z = guided_slepians(guided_matrix_exact(m, h), m, h);
    Eigen::SelfAdjointEigenSolver<Mat> ea(ops.adjacency);
    const Vec a_desc = ea.eigenvalues().reverse();
    val_err = std::max(val_err, (z.values - a_desc).cwiseAbs().maxCoeff());
    const SpectralBasis lb = eig_sym(ops.laplacian);
    for (int i = 0; i < n; ++i) {
      const double gap_prev = i > 0 ? lb.eigenvalues(i) - lb.eigenvalues(i - 1) : INFINITY;
      const double gap_next = i + 1 < n ? lb.eigenvalues(i + 1) - lb.eigenvalues(i) : INFINITY;
      if (std::min(gap_prev, gap_next) < 1e-6) continue;
      const Vec g = z.vectors.col(i), u = lb.eigenvectors.col(i);
      vec_err = std::max(vec_err, std::min((g - u).norm(), (g + u).norm()));
      ++compared;
    }
  }
  o.detail << "20 graphs: max eigenvalue error " << val_err << ", max eigenvector error " << vec_err << " over "
           << compared << " simple pairs";
  o.require(val_err <= 1e-9, "eigenvalues");
  o.require(vec_err <= 1e-7, "eigenvectors");
}

// Derivative-form remainder summed over the non-zero eigenvalues only, the
// way the bound reads when the forced zero is set aside.
double lagrange_nonzero(int order, const Vec& lambda) {
  const int n = order + 1;
  double coef = 1.0;
  for (int j = 0; j < n; ++j) coef *= std::abs(0.5 - j) / (j + 1.0);
  double total = 0.0;
  for (Index i = 1; i < lambda.size(); ++i) {
    total += coef * std::pow(std::min(lambda(i), 1.0), 0.5 - n) * std::pow(std::abs(lambda(i) - 1.0), n);
  }
  return total;
}

void c5(Outcome& o) {
  o.require(taylor_coeff(1) == 0.5 && taylor_coeff(2) == 0.125 && taylor_coeff(3) == 0.0625, "c_1..c_3");
  std::mt19937_64 rng(505);
  int graphs = 0, tried = 0, root_fail = 0, literal_fail = 0, full_fail = 0, loose_fail = 0, monotone_fail = 0;
  std::map<int, int> literal_by_k;
  while (graphs < 20 && tried < 10000) {
    ++tried;
    const int n = 6 + static_cast<int>(rng() % 25);
    const NormalizedOperators ops = normalize(support::random_connected(n, 0.45, rng, tried % 2));
    const SpectralBasis b = eig_sym(ops.laplacian);
    if (b.eigenvalues(1) < 0.05) continue;
    ++graphs;
    const auto m = random_m(n, rng);
    const Mat h = sqrt_psd_exact(ops.laplacian);
    const Mat exact = guided_matrix_exact(m, h);
    std::map<int, double> dist;
    for (const int k : {1, 2, 5, 10, 20}) {
      const TaylorBound tb = taylor_bound(k, b.eigenvalues, m.values());
      const double root = (h - sqrt_taylor(ops.adjacency, k)).norm();
      const double d_trunc = (exact - guided_matrix_truncated_root(m, ops.adjacency, k)).norm();
      const double d_approx = (exact - guided_matrix_approx(m, ops.adjacency, k)).norm();
      dist[k] = d_approx;
      const double worst = std::max(d_trunc, d_approx);
      if (!std::isfinite(tb.d_k) || root > tb.d_k + 1e-12) ++root_fail;
      if (worst > tb.d_km + 1e-12) {
        ++literal_fail;
        ++literal_by_k[k];
      }
      if (worst > tb.d_km_full + 1e-12) ++full_fail;
      const double loose = lagrange_nonzero(k, b.eigenvalues);
      if (worst > loose * loose * m.values().norm()) ++loose_fail;
    }
    if (dist[20] > dist[1]) ++monotone_fail;
  }
  o.detail << graphs << " graphs with lambda_2 >= 0.05, 100 (graph, K) pairs; ||L^1/2 - T_K|| <= d_K violated "
           << root_fail << "; distance <= d_K^2||M||_F violated " << literal_fail << " (by K:";
  for (const auto& [k, c] : literal_by_k) o.detail << " " << k << "->" << c;
  o.detail << "); with cross terms m_max d_K (2sqrt2 + d_K) violated " << full_fail
           << "; derivative-only bound over non-zero eigenvalues violated " << loose_fail
           << "; K=20 worse than K=1 in " << monotone_fail << " ";
  o.require(graphs == 20, "enough admissible graphs");
  o.require(root_fail == 0, "root distance within d_K");
  o.require(literal_fail == 0, "distance within d_K^2||M||_F (omits first-order cross terms)");
  o.require(monotone_fail == 0, "K=20 no worse than K=1");
}

void c6(Outcome& o) {
  std::mt19937_64 rng(606);
  int graphs = 0;
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    for (std::uint32_t mask = 1; mask < (1U << pairs.size()); ++mask) {
      Mat w = Mat::Zero(n, n);
      for (std::size_t e = 0; e < pairs.size(); ++e)
        if (mask & (1U << e)) w(pairs[e].first, pairs[e].second) = w(pairs[e].second, pairs[e].first) = 1;
      const Graph g = Graph::from_weights(w);
      if (!is_connected(g)) continue;
      ++graphs;
      const Mat a = normalize(g).adjacency;
      for (int draw = 0; draw < 3; ++draw) {
        const CooperationWeights m = draw == 0 ? CooperationWeights::ones(n) : random_m(n, rng);
        worst = std::max(worst, (guided_matrix_linear(m, a) - support::brute_series(m.values(), a, 1))
                                    .cwiseAbs().maxCoeff());
        worst = std::max(worst, (guided_matrix_quadratic(m, a) - support::brute_series(m.values(), a, 2))
                                    .cwiseAbs().maxCoeff());
      }
    }
  }
  o.detail << graphs << " connected graphs with n <= 5, max deviation " << worst;
  o.require(graphs == 1 + 4 + 38 + 728, "enumeration count");
  o.require(worst <= 1e-12, "closed forms");
}

void c7(Outcome& o) {
  Mat w = Mat::Ones(3, 3) - Mat::Identity(3, 3);
  const Mat a = normalize(Graph::from_weights(w)).adjacency;
  o.require((a - 0.5 * w).cwiseAbs().maxCoeff() < 1e-15, "normalized entries 1/2");
  double worst = 0.0;
  for (int pattern = 0; pattern < 8; ++pattern) {
    Vec m(3);
    for (int i = 0; i < 3; ++i) m(i) = (pattern >> i) & 1;
    const CooperationWeights cm(m);
    const Mat lin = guided_matrix_linear(cm, a);
    const Mat quad = guided_matrix_quadratic(cm, a) - lin;
    const Mat mm = m.asDiagonal();
    const Mat products = (support::naive_mul(mm, support::naive_mul(a, a)) +
                          support::naive_mul(support::naive_mul(a, a), mm)) / 8.0 -
                         support::naive_mul(support::naive_mul(a, mm), a) / 4.0;
    worst = std::max(worst, (quad - products).cwiseAbs().maxCoeff());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        worst = std::max(worst, std::abs(lin(i, j) - (m(i) + m(j)) / 2.0 * a(i, j)));
        double q = 0.0;
        for (int l = 0; l < 3; ++l) q += ((m(i) + m(j)) / 8.0 - m(l) / 4.0) * a(i, l) * a(l, j);
        worst = std::max(worst, std::abs(quad(i, j) - q));
      }
  }
  o.detail << "8 binary patterns on the triangle, max deviation " << worst;
  o.require(worst <= 1e-15, "path weights");
}

void c8(Outcome& o) {
  std::mt19937_64 rng(808);
  double recovery = 0.0;
  int beaten = 0;
  for (int t = 0; t < 50; ++t) {
    const Index n = 5 + static_cast<Index>(rng() % 40);
    Eigen::MatrixX2d ref(n, 2);
    for (Index i = 0; i < n; ++i) ref.row(i) << support::unit(rng) - 0.5, support::unit(rng) - 0.5;
    const Eigen::MatrixX2d moved = ref * support::random_orthogonal2(rng);
    recovery = std::max(recovery, (procrustes_align(ref, moved) - ref).cwiseAbs().maxCoeff());

    Eigen::MatrixX2d other(n, 2);
    for (Index i = 0; i < n; ++i) other.row(i) << support::unit(rng) - 0.5, support::unit(rng) - 0.5;
    const double best = (procrustes_align(ref, other) - ref).norm();
    for (int c = 0; c < 1000; ++c) {
      if ((other * support::random_orthogonal2(rng) - ref).norm() < best - 1e-12) ++beaten;
    }
  }
  o.detail << "recovery error " << recovery << "; random candidates beating the alignment: " << beaten << "/50000";
  o.require(recovery < 1e-10, "recovery");
  o.require(beaten == 0, "optimality");
}

void c9(Outcome& o) {
  {
    Mat a = Mat::Zero(6, 6);
    for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}) a(i, j) = a(j, i) = 1;
    const double q2 = modularity(a, std::vector<int>{0, 0, 0, 1, 1, 1});
    const double q1 = modularity(a, std::vector<int>(6, 0));
    o.detail << "two triangles Q=" << q2 << ", single cluster Q=" << q1 << "; ";
    o.require(q2 == 0.5 && q1 == 0.0, "synthetic modularity");
  }
  if (!have_connectome()) {
    o.detail << "connectome missing";
    return;
  }
  const fs::path dir = support::scratch_dir("acceptance_c9");
  for (const auto& [cls, reported_k] : {std::pair<std::string, int>{"sensory", 7}, {"inter", 6}}) {
    const fs::path out = dir / cls;
    if (run_cli(std::vector<std::string>{"sweep"} + graph_args() +
                std::vector<std::string>{"--focus-class", cls, "--out", out.string()}) != 0 ||
        run_cli(std::vector<std::string>{"cluster"} + graph_args() +
                std::vector<std::string>{"--trajectory", (out / "trajectory.json").string(), "--seed", "1",
                                         "--draws", "999", "--out", out.string()}) != 0) {
      o.require(false, cls + " pipeline ran");
      continue;
    }
    const json r = json::parse(support::slurp(out / "modularity_test.json"));
    const int k = r["k_star"];
    const double q = r["q_observed"], null_max = r["null_max"], p = r["p_value"];
    o.detail << cls << ": k*=" << k << " (reported " << reported_k << "), Q=" << q << " vs null max " << null_max
             << ", p=" << p << "; ";
    o.require(std::abs(k - reported_k) <= 1, cls + " k* within 1");
    o.require(q > null_max && std::abs(p - 0.001) < 1e-12, cls + " p = 1/1000");
    o.require(r["groups"].get<int>() == k + 1, cls + " off-focus group");
  }
}

void c10(Outcome& o) {
  const bool real = have_connectome();
  const fs::path dir = support::scratch_dir("acceptance_c10");
  std::vector<std::string> gargs = graph_args();
  std::string focus = "sensory";
  if (!real) {
    std::ofstream(dir / "edges.csv") << "source,target,weight,layer\na,b,1,x\nb,c,1,x\nc,a,1,x\nc,d,1,x\nd,e,1,x\n";
    std::ofstream(dir / "nodes.csv") << "id,label,class\na,a,f\nb,b,f\nc,c,g\nd,d,g\ne,e,g\n";
    gargs = {"--edges", (dir / "edges.csv").string(), "--nodes", (dir / "nodes.csv").string()};
    focus = "f";
  }
  const fs::path out = dir / "out";
  std::ofstream(dir / "assign.csv") << "label,cluster\n" << (real ? "ASHL,1\nASHR,1\nAWBL,2\n" : "a,1\nb,2\n");
  const std::vector<std::vector<std::string>> commands{
      {"spectrum", "--focus-class", focus, "--bandwidths", "3", "--orders", "1,2,5"},
      {"sweep", "--focus-class", focus, "--steps", "7"},
      {"cluster", "--focus-class", focus, "--trajectory", (out / "trajectory.json").string(), "--seed", "9",
       "--draws", "199"},
      {"modtest", "--assignment", (dir / "assign.csv").string(), "--seed", "9", "--draws", "199"},
  };
  int files = 0, differing = 0;
  for (const auto& cmd : commands) {
    std::vector<std::string> args{cmd.front()};
    args = args + gargs + std::vector<std::string>(cmd.begin() + 1, cmd.end()) +
           std::vector<std::string>{"--out", out.string()};
    std::map<std::string, std::string> first;
    for (int rep = 0; rep < 2; ++rep) {
      if (run_cli(args) != 0) {
        o.require(false, cmd.front() + " ran");
        break;
      }
      for (const auto& e : fs::directory_iterator(out)) {
        const std::string name = e.path().filename().string();
        const std::string bytes = support::slurp(e.path());
        if (rep == 0) first[name] = bytes;
        else if (first.count(name)) {
          ++files;
          if (first[name] != bytes) ++differing;
        }
      }
    }
  }
  o.detail << (real ? "connectome" : "toy graph") << ": " << files << " artifact comparisons, " << differing
           << " differ";
  o.require(files > 0 && differing == 0, "byte-identical reruns");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"full-bandwidth concentration degeneracy", c1},
      {"embedded-distance nullspace", c2},
      {"guided criterion bounds", c3},
      {"M = I reversion", c4},
      {"Taylor coefficients and error bound", c5},
      {"closed-form approximations", c6},
      {"path reweighting on the triangle", c7},
      {"Procrustes recovery and optimality", c8},
      {"clustering pipeline", c9},
      {"determinism", c10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
              << " :: " << o.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
