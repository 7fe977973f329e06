#pragma once

#include "pushsim/dynamics.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace pushsim {

/// Closed-loop data-collection settings: the push executed in the object
/// frame each cycle, and the ring drag that returns the object to the
/// working area.
struct CollectionConfig {
  PushSpec push;
  Eigen::Vector2d ring_offset{0.0, -0.0225};  // object frame (m), off-center
  Eigen::Vector2d drag_target{0.0, 0.0};      // world frame (m)
  double drag_speed = 0.05;                   // m/s
  int cycles_per_batch = 100;
  std::vector<double> batch_starts_deg{0.0, 60.0, 120.0, 180.0, 240.0, 300.0};
  double start_noise_deg = 0.0;  // per-cycle orientation perturbation, off by default
  std::uint64_t seed = 0;
};

/// One push + reposition cycle. theta values are unwrapped: winding
/// accumulates across cycles within a batch.
struct CycleRecord {
  int batch = 0;
  int k = 0;
  Pose initial;
  double dx = 0.0;      // push outcome in the initial object frame (m)
  double dy = 0.0;      // m
  double dtheta = 0.0;  // rad
  Pose pushed;          // world pose at the end of the push phase
  Pose post_drag;       // world pose after repositioning = next initial pose
};

/// Start pose used for batch starts and for the cycle map: orientation theta,
/// placed so the drag ring sits exactly on the drag target (the pose the
/// repositioning loop itself produces).
Pose canonical_start(double theta, const CollectionConfig& cfg);

/// Drag the object by a rod pinned in the ring (stiff spring, torque-free):
/// the rod moves in a straight line from the ring's current world position to
/// `target` at `drag_speed`, then holds until the object rests. Throws
/// SimulationError on the settle time cap.
Trajectory reposition(const BodyState& state, const Eigen::Vector2d& ring_offset,
                      const Eigen::Vector2d& target, double drag_speed,
                      const ModelParams& model, const SimParams& sim);

struct CycleResult {
  CycleRecord record;
  Trajectory push;
  Trajectory drag;
};

/// One full cycle from `initial`: push in the object frame, then reposition.
CycleResult run_cycle(const BodyState& initial, const CollectionConfig& cfg,
                      const ModelParams& model, const SimParams& sim);

/// Called after every cycle when attached to run_batches.
using CycleSink = std::function<void(const CycleResult&)>;

/// Run every batch in sequence: cycles_per_batch cycles from each starting
/// orientation. Batches are independent; within a batch each cycle starts
/// from the previous post-drag pose. Deterministic given the config.
std::vector<CycleRecord> run_batches(const CollectionConfig& cfg, const ModelParams& model,
                                     const SimParams& sim, const CycleSink& sink = nullptr);

/// Sample the cycle map f(theta0) = theta1 on a grid of initial orientations
/// (degrees), one standardized cycle per grid point from the canonical start.
/// Returns (theta0_deg, f_deg) pairs; f is continuous (unwrapped) output.
std::vector<std::pair<double, double>> cycle_map_estimate(
    const CollectionConfig& cfg, const ModelParams& model, const SimParams& sim,
    const std::vector<double>& grid_deg);

}  // namespace pushsim
