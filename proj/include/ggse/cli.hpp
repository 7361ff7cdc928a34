#pragma once

#include "ggse/analysis.hpp"
#include "ggse/embedding.hpp"
#include "ggse/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ggse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  std::filesystem::path edges;
  std::filesystem::path nodes;
  std::vector<std::string> layers;
  LayerMerge merge = LayerMerge::Or;
  bool binarize = true;
  bool drop_isolated = false;

  std::vector<std::string> focus_classes;
  std::vector<std::string> focus_nodes;

  int steps = 21;
  double start = 1.0;
  double end = 0.0;
  EigvecPair eigvecs{2, 3};
  std::optional<int> approx_order;
  AlignMode align = AlignMode::Chained;

  std::vector<int> bandwidths;  ///< empty: full bandwidth only
  std::vector<int> orders{1, 2, 5, 10, 20};

  std::filesystem::path trajectory;
  std::filesystem::path assignment;
  int frame = -1;  ///< trajectory frame to cluster; negative counts from the end
  int k_min = 2;
  int k_max = 10;
  int repetitions = 20;
  int draws = 999;
  NullModel null_model = NullModel::Permute;

  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";
};

/// FNV-1a digest (16 hex digits) of the canonical JSON form of the config.
std::string config_hash(const RunConfig& config);

/// Mu and xi spectra per bandwidth, exact and Taylor-approximated ζ spectra,
/// companion curves and a JSON report.
void cmd_spectrum(const RunConfig& config);

/// Focus sweep: trajectory.json and trajectory.csv.
void cmd_sweep(const RunConfig& config);

/// Silhouette-selected k-means on the focus nodes of one trajectory frame,
/// plus the modularity permutation test with off-focus nodes as an extra group.
void cmd_cluster(const RunConfig& config);

/// Modularity permutation test of a `label,cluster` assignment file.
void cmd_modtest(const RunConfig& config);

/// Parses `args` (without the program name) and runs the selected command.
/// Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ggse::cli
