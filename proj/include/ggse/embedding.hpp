#pragma once

#include "ggse/graph.hpp"
#include "ggse/slepian.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ggse {

/// Sequence of cooperation weights for a focus sweep: focus nodes stay at 1,
/// every other node follows `off_focus_levels`.
struct WeightSchedule {
  std::vector<CooperationWeights> steps;
  std::vector<Index> focus;
  std::vector<double> off_focus_levels;

  std::size_t size() const noexcept { return steps.size(); }
};

/// Off-focus weights interpolated linearly from `start` to `end`, both
/// included, over `steps` frames.
WeightSchedule make_schedule(Index n, std::span<const Index> focus, int steps, double start,
                             double end);

/// Arbitrary non-increasing, non-negative off-focus levels.
WeightSchedule schedule_from_levels(Index n, std::span<const Index> focus,
                                    std::vector<double> levels);

/// 1-based pair of criterion eigenvector indices.
using EigvecPair = std::pair<int, int>;

struct Embedding2D {
  Eigen::MatrixX2d coords;
  EigvecPair eigvec_indices{2, 3};
  std::pair<double, double> zeta_values{0.0, 0.0};
};

/// Node coordinates on two eigenvectors of a ζ set (default: second and
/// third largest).
Embedding2D embed(const SlepianSet& set, EigvecPair indices = {2, 3});

/// Orthogonal R minimizing ||target·R - reference||_F (polar factor of
/// targetᵀ·reference). Rotation or reflection; no scaling or translation.
Eigen::Matrix2d procrustes_rotation(const Eigen::MatrixX2d& reference,
                                    const Eigen::MatrixX2d& target);

Eigen::MatrixX2d procrustes_align(const Eigen::MatrixX2d& reference,
                                  const Eigen::MatrixX2d& target);

enum class AlignMode {
  Chained,   ///< each frame against the previous aligned frame
  Anchored,  ///< every frame against frame 0
};

struct SweepOptions {
  EigvecPair indices{2, 3};
  /// Taylor order of the criterion matrix; empty means exact L^{1/2}.
  std::optional<int> approx_order;
  AlignMode align = AlignMode::Chained;
  double gap_warning = 1e-6;
  /// Worker threads for the per-step decompositions; 0 picks the hardware count.
  unsigned threads = 0;
};

struct Trajectory {
  std::vector<Embedding2D> frames;           ///< aligned; frames[0] untouched
  std::vector<Eigen::MatrixX2d> raw_frames;  ///< before alignment
  std::vector<Eigen::Matrix2d> transforms;   ///< frames[k] = raw_frames[k] · transforms[k]
  /// Smallest gap between each selected eigenvalue and the next one, per step.
  std::vector<double> min_gaps;
  std::vector<std::string> warnings;

  /// Row s of path i is node i's position at step s.
  Eigen::MatrixX2d node_path(Index node) const;
};

Trajectory trajectory_sweep(const NormalizedOperators& ops, const WeightSchedule& schedule,
                            const SweepOptions& options = {});

}  // namespace ggse
