#include "ggse/embedding.hpp"

#include "ggse/error.hpp"
#include "ggse/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

namespace ggse {

WeightSchedule schedule_from_levels(Index n, std::span<const Index> focus,
                                    std::vector<double> levels) {
  if (focus.empty()) throw Error(Errc::EmptyFocus, "focus set is empty");
  if (levels.empty()) throw Error(Errc::InvalidSchedule, "schedule has no steps");
  for (std::size_t s = 0; s < levels.size(); ++s) {
    if (!(levels[s] >= 0.0) || !std::isfinite(levels[s])) {
      throw Error(Errc::InvalidSchedule, "off-focus weights must be finite and non-negative");
    }
    if (s > 0 && levels[s] > levels[s - 1]) {
      throw Error(Errc::InvalidSchedule, "off-focus weights must be non-increasing");
    }
  }
  std::vector<bool> in_focus(static_cast<std::size_t>(n), false);
  for (const Index i : focus) {
    if (i < 0 || i >= n) throw Error(Errc::IndexOutOfRange, "focus node index");
    in_focus[static_cast<std::size_t>(i)] = true;
  }

  WeightSchedule out;
  out.focus.assign(focus.begin(), focus.end());
  std::sort(out.focus.begin(), out.focus.end());
  out.focus.erase(std::unique(out.focus.begin(), out.focus.end()), out.focus.end());
  for (const double level : levels) {
    Eigen::VectorXd m(n);
    for (Index i = 0; i < n; ++i) m(i) = in_focus[static_cast<std::size_t>(i)] ? 1.0 : level;
    out.steps.emplace_back(std::move(m));
  }
  out.off_focus_levels = std::move(levels);
  return out;
}

WeightSchedule make_schedule(Index n, std::span<const Index> focus, int steps, double start,
                             double end) {
  if (steps < 2) throw Error(Errc::InvalidSchedule, "a schedule needs at least 2 steps");
  if (!(end >= 0.0) || !(end <= start)) {
    throw Error(Errc::InvalidSchedule, "need 0 <= end <= start");
  }
  std::vector<double> levels(static_cast<std::size_t>(steps));
  for (int s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) / (steps - 1);
    levels[static_cast<std::size_t>(s)] = start + t * (end - start);
  }
  levels.back() = end;
  return schedule_from_levels(n, focus, std::move(levels));
}

Embedding2D embed(const SlepianSet& set, EigvecPair indices) {
  const auto r = static_cast<int>(set.vectors.cols());
  for (const int idx : {indices.first, indices.second}) {
    if (idx < 1 || idx > r) {
      throw Error(Errc::IndexOutOfRange,
                  "eigenvector index " + std::to_string(idx) + " outside [1, " + std::to_string(r) + "]");
    }
  }
  Embedding2D out;
  out.eigvec_indices = indices;
  out.coords.resize(set.vectors.rows(), 2);
  out.coords.col(0) = set.vectors.col(indices.first - 1);
  out.coords.col(1) = set.vectors.col(indices.second - 1);
  out.zeta_values = {set.values(indices.first - 1), set.values(indices.second - 1)};
  return out;
}

Eigen::Matrix2d procrustes_rotation(const Eigen::MatrixX2d& reference,
                                    const Eigen::MatrixX2d& target) {
  if (reference.rows() != target.rows()) {
    throw Error(Errc::DimensionMismatch, "procrustes: point counts differ");
  }
  if (target.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(Errc::DegenerateTarget, "procrustes target is all zeros");
  }
  const Eigen::Matrix2d cross = target.transpose() * reference;
  if (cross.cwiseAbs().maxCoeff() == 0.0) return Eigen::Matrix2d::Identity();
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Eigen::MatrixX2d procrustes_align(const Eigen::MatrixX2d& reference,
                                  const Eigen::MatrixX2d& target) {
  return target * procrustes_rotation(reference, target);
}

Eigen::MatrixX2d Trajectory::node_path(Index node) const {
  Eigen::MatrixX2d path(static_cast<Index>(frames.size()), 2);
  for (std::size_t s = 0; s < frames.size(); ++s) {
    if (node < 0 || node >= frames[s].coords.rows()) {
      throw Error(Errc::IndexOutOfRange, "node index");
    }
    path.row(static_cast<Index>(s)) = frames[s].coords.row(node);
  }
  return path;
}

namespace {

struct StepResult {
  Embedding2D embedding;
  double min_gap = 0.0;
};

StepResult compute_step(const NormalizedOperators& ops, const Eigen::MatrixXd& lhalf,
                        const CooperationWeights& m, const SweepOptions& options) {
  const Eigen::MatrixXd criterion = options.approx_order
                                        ? guided_matrix_approx(m, ops.adjacency, *options.approx_order)
                                        : guided_matrix_exact(m, lhalf);
  const SlepianSet set = guided_slepians(criterion, m, lhalf);
  StepResult r;
  r.embedding = embed(set, options.indices);

  r.min_gap = std::numeric_limits<double>::infinity();
  const std::set<int> picked{options.indices.first, options.indices.second};
  for (const int idx : picked) {
    if (idx < set.values.size()) {
      r.min_gap = std::min(r.min_gap, set.values(idx - 1) - set.values(idx));
    }
  }
  return r;
}

}  // namespace

Trajectory trajectory_sweep(const NormalizedOperators& ops, const WeightSchedule& schedule,
                            const SweepOptions& options) {
  if (schedule.steps.empty()) throw Error(Errc::InvalidSchedule, "empty schedule");
  const Index n = ops.adjacency.rows();
  for (const auto& m : schedule.steps) {
    if (m.size() != n) throw Error(Errc::DimensionMismatch, "schedule length differs from graph");
  }
  const Eigen::MatrixXd lhalf = sqrt_psd_exact(ops.laplacian);

  // Independent decompositions per step, then an ordered alignment pass.
  const std::size_t count = schedule.size();
  std::vector<StepResult> results(count);
  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1U, static_cast<unsigned>(count));
  if (workers == 1) {
    for (std::size_t s = 0; s < count; ++s) {
      results[s] = compute_step(ops, lhalf, schedule.steps[s], options);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t s = next++; s < count; s = next++) {
            results[s] = compute_step(ops, lhalf, schedule.steps[s], options);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Trajectory traj;
  traj.frames.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Embedding2D frame = std::move(results[s].embedding);
    traj.raw_frames.push_back(frame.coords);
    traj.min_gaps.push_back(results[s].min_gap);
    Eigen::Matrix2d transform = Eigen::Matrix2d::Identity();
    if (s > 0) {
      const auto& reference =
          options.align == AlignMode::Chained ? traj.frames.back().coords : traj.frames.front().coords;
      transform = procrustes_rotation(reference, frame.coords);
      frame.coords = frame.coords * transform;
    }
    traj.transforms.push_back(transform);
    if (results[s].min_gap < options.gap_warning) {
      traj.warnings.push_back("step " + std::to_string(s) + ": eigengap " +
                              std::to_string(results[s].min_gap) +
                              " below threshold; embedding axes may swap or rotate");
    }
    traj.frames.push_back(std::move(frame));
  }
  return traj;
}

}  // namespace ggse
