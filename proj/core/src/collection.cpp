#include "pushsim/collection.hpp"

#include "pushsim/analysis.hpp"
#include "pushsim/angles.hpp"

#include <cmath>
#include <random>

namespace pushsim {

Pose canonical_start(double theta, const CollectionConfig& cfg)
{
  return {cfg.drag_target - rotated(cfg.ring_offset, theta), theta};
}

Trajectory reposition(const BodyState& state, const Eigen::Vector2d& ring_offset,
                      const Eigen::Vector2d& target, double drag_speed,
                      const ModelParams& model, const SimParams& sim)
{
  if (!(drag_speed > 0.0))
    throw std::invalid_argument("reposition: drag_speed must be positive");

  const Eigen::Vector2d rod0 = state.pose.to_world(ring_offset);
  const Eigen::Vector2d path = target - rod0;
  const double length = path.norm();
  const Eigen::Vector2d rod_vel = length > 0.0 ? Eigen::Vector2d(path / length * drag_speed)
                                               : Eigen::Vector2d(0.0, 0.0);
  const long drive_steps = length > 0.0 ? std::lround(length / drag_speed / sim.dt) : 0;
  const long settle_cap = std::lround(sim.max_settle_time / sim.dt);

  Trajectory traj;
  traj.dt = sim.dt;
  traj.samples.reserve(static_cast<std::size_t>(drive_steps / sim.sample_stride) + 64);

  BodyState st = state;
  Eigen::Vector2d rod = rod0;
  int rest_count = 0;

  auto pin_wrench = [&](const Eigen::Vector2d& rod_pos, const Eigen::Vector2d& rod_v) {
    const Eigen::Vector2d ring_world = st.pose.to_world(ring_offset);
    const Eigen::Vector2d r = ring_world - st.pose.p;
    const Eigen::Vector2d stretch = rod_pos - ring_world;
    const Eigen::Vector2d stretch_rate = rod_v - st.twist.point_velocity(r);
    const Eigen::Vector2d f =
        model.pusher.stiffness * stretch + model.pusher.damping * stretch_rate;
    return Wrench{f, cross2(r, f)};
  };

  auto record = [&](long step_index, const Wrench& pin, const Wrench& surface) {
    TrajectorySample s;
    s.t = static_cast<double>(step_index) * sim.dt;
    s.state = st;
    s.pusher_pos = rod;
    s.surface = surface;
    s.pusher = pin;
    traj.samples.push_back(s);
  };

  long n = 0;
  bool done = false;
  for (; !done; ++n) {
    const bool driving = n < drive_steps;
    rod = driving ? Eigen::Vector2d(rod0 + rod_vel * (static_cast<double>(n) * sim.dt)) : target;
    const Eigen::Vector2d rod_v = driving ? rod_vel : Eigen::Vector2d(0.0, 0.0);

    const Wrench pin = pin_wrench(rod, rod_v);
    const Wrench surface =
        patch_friction_wrench(model.patch, model.ellipse, st.pose, st.twist, sim.v_eps);

    if (n % sim.sample_stride == 0) record(n, pin, surface);

    Wrench total = surface;
    total += pin;
    st = step(st, model.body, total, sim.dt);

    if (!driving) {
      if (st.twist.v.norm() < sim.rest_speed && std::abs(st.twist.omega) < sim.rest_omega)
        ++rest_count;
      else
        rest_count = 0;
      if (rest_count >= sim.rest_steps) done = true;
      if (!done && n - drive_steps >= settle_cap)
        throw SimulationError("reposition: object still moving " +
                              std::to_string(sim.max_settle_time) + " s after the drag (|v|=" +
                              std::to_string(st.twist.v.norm()) + " m/s)");
    }
  }

  record(n, pin_wrench(target, {0.0, 0.0}),
         patch_friction_wrench(model.patch, model.ellipse, st.pose, st.twist, sim.v_eps));
  return traj;
}

CycleResult run_cycle(const BodyState& initial, const CollectionConfig& cfg,
                      const ModelParams& model, const SimParams& sim)
{
  CycleResult out;
  out.push = simulate_push(initial, cfg.push, model, sim);
  const BodyState pushed = out.push.final_state();

  out.drag = reposition(pushed, cfg.ring_offset, cfg.drag_target, cfg.drag_speed, model, sim);
  const BodyState rested = out.drag.final_state();

  const IofDelta d = to_iof(pushed.pose, initial.pose);
  out.record.initial = initial.pose;
  out.record.dx = d.dx;
  out.record.dy = d.dy;
  out.record.dtheta = d.dtheta;
  out.record.pushed = pushed.pose;
  out.record.post_drag = rested.pose;
  return out;
}

std::vector<CycleRecord> run_batches(const CollectionConfig& cfg, const ModelParams& model,
                                     const SimParams& sim, const CycleSink& sink)
{
  if (cfg.cycles_per_batch < 1)
    throw std::invalid_argument("run_batches: cycles_per_batch must be >= 1");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> noise(-deg2rad(cfg.start_noise_deg),
                                               deg2rad(cfg.start_noise_deg));

  std::vector<CycleRecord> records;
  records.reserve(cfg.batch_starts_deg.size() * static_cast<std::size_t>(cfg.cycles_per_batch));

  for (std::size_t b = 0; b < cfg.batch_starts_deg.size(); ++b) {
    BodyState state;
    state.pose = canonical_start(deg2rad(cfg.batch_starts_deg[b]), cfg);
    for (int k = 0; k < cfg.cycles_per_batch; ++k) {
      if (cfg.start_noise_deg > 0.0) state.pose.theta += noise(rng);
      CycleResult res = run_cycle(state, cfg, model, sim);
      res.record.batch = static_cast<int>(b);
      res.record.k = k;
      records.push_back(res.record);
      if (sink) sink(res);
      state = BodyState{res.record.post_drag, Twist{}};
    }
  }
  return records;
}

std::vector<std::pair<double, double>> cycle_map_estimate(
    const CollectionConfig& cfg, const ModelParams& model, const SimParams& sim,
    const std::vector<double>& grid_deg)
{
  std::vector<std::pair<double, double>> map;
  map.reserve(grid_deg.size());
  for (double theta_deg : grid_deg) {
    BodyState state;
    state.pose = canonical_start(deg2rad(theta_deg), cfg);
    const CycleResult res = run_cycle(state, cfg, model, sim);
    map.emplace_back(theta_deg, rad2deg(res.record.post_drag.theta));
  }
  return map;
}

}  // namespace pushsim
