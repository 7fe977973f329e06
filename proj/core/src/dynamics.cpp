#include "pushsim/dynamics.hpp"

#include "pushsim/angles.hpp"

#include <algorithm>
#include <cmath>

namespace pushsim {

namespace {

// Closest boundary point of the axis-aligned square of half-side h to `q`,
// with the outward normal at that point and whether q lies inside.
struct SquareQuery {
  Eigen::Vector2d closest;
  Eigen::Vector2d normal;
  bool inside;
};

SquareQuery square_closest_point(const Eigen::Vector2d& q, double h)
{
  const double cx = std::clamp(q.x(), -h, h);
  const double cy = std::clamp(q.y(), -h, h);
  if (cx != q.x() || cy != q.y()) {
    const Eigen::Vector2d closest{cx, cy};
    return {closest, (q - closest).normalized(), false};
  }
  // Inside: project to the nearest face.
  const double dx = h - std::abs(q.x());
  const double dy = h - std::abs(q.y());
  if (dx <= dy)
    return {{std::copysign(h, q.x()), q.y()}, {std::copysign(1.0, q.x()), 0.0}, true};
  return {{q.x(), std::copysign(h, q.y())}, {0.0, std::copysign(1.0, q.y())}, true};
}

double saturate(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

PusherContact pusher_contact_force(const BodyState& object, const RigidBody& body,
                                   const Eigen::Vector2d& rod_center,
                                   const Eigen::Vector2d& rod_velocity,
                                   const PusherParams& params)
{
  PusherContact c;

  const Eigen::Vector2d q = object.pose.to_body(rod_center);
  const double h = body.side / 2.0;
  const auto [closest_body, normal_body, inside] = square_closest_point(q, h);

  const double depth = inside ? params.rod_radius + (closest_body - q).norm()
                              : params.rod_radius - (q - closest_body).norm();
  if (depth <= 0.0) return c;  // separated

  const Eigen::Vector2d contact_world = object.pose.to_world(closest_body);
  const Eigen::Vector2d n = rotated(normal_body, object.pose.theta);
  const Eigen::Vector2d t = perp(n);

  const Eigen::Vector2d v_obj = object.twist.point_velocity(contact_world - object.pose.p);
  const Eigen::Vector2d v_rel = v_obj - rod_velocity;  // object relative to rod

  const double depth_rate = v_rel.dot(n);
  const double ramp = std::min(1.0, depth / std::max(params.damping_ramp, 1e-12));
  const double fn = params.stiffness * depth + params.damping * depth_rate * ramp;
  if (fn <= 0.0) return c;

  const double slip = v_rel.dot(t);
  const double ftau = -params.mu_p * fn * saturate(slip / params.v_eps);

  c.active = true;
  c.fn = fn;
  c.ftau = ftau;
  c.slip_speed = std::abs(slip);
  c.penetration = depth;
  c.normal = n;
  c.point = contact_world;
  c.force = -fn * n + ftau * t;
  return c;
}

BodyState step(const BodyState& state, const RigidBody& body, const Wrench& total, double dt)
{
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (!total.force.allFinite() || !std::isfinite(total.torque))
    throw std::invalid_argument("step: non-finite wrench");

  BodyState out = state;
  out.twist.v += total.force * (dt / body.mass);
  out.twist.omega += total.torque * (dt / body.inertia());
  out.pose.p += out.twist.v * dt;
  out.pose.theta += out.twist.omega * dt;
  return out;
}

namespace {

class RestDetector {
public:
  explicit RestDetector(const SimParams& sim) : sim_(sim) {}

  bool update(const Twist& twist)
  {
    if (twist.v.norm() < sim_.rest_speed && std::abs(twist.omega) < sim_.rest_omega)
      ++count_;
    else
      count_ = 0;
    return count_ >= sim_.rest_steps;
  }

private:
  const SimParams& sim_;
  int count_ = 0;
};

}  // namespace

Trajectory simulate_push(const BodyState& start, const PushSpec& spec,
                         const ModelParams& model, const SimParams& sim)
{
  if (!(spec.distance > 0.0) || !(spec.speed > 0.0))
    throw std::invalid_argument("simulate_push: distance and speed must be positive");
  const double dir_norm = spec.direction.norm();
  if (!(dir_norm > 0.0))
    throw std::invalid_argument("simulate_push: zero push direction");

  const Eigen::Vector2d dir = rotated(spec.direction / dir_norm, start.pose.theta);
  const Eigen::Vector2d contact0 = start.pose.to_world(spec.contact_point);
  const Eigen::Vector2d rod0 = contact0 - dir * model.pusher.rod_radius;
  const Eigen::Vector2d rod_vel = dir * spec.speed;

  const long drive_steps = std::lround(spec.distance / spec.speed / sim.dt);
  const long settle_cap = std::lround(sim.max_settle_time / sim.dt);

  Trajectory traj;
  traj.dt = sim.dt;
  traj.samples.reserve(static_cast<std::size_t>(drive_steps / sim.sample_stride) + 64);

  BodyState state = start;
  RestDetector rest(sim);
  Eigen::Vector2d rod = rod0;

  auto record = [&](long step_index, const PusherContact& pc, const Wrench& surface) {
    TrajectorySample s;
    s.t = static_cast<double>(step_index) * sim.dt;
    s.state = state;
    s.pusher_pos = rod;
    s.fn = pc.fn;
    s.ftau = pc.ftau;
    s.slip_speed = pc.slip_speed;
    s.penetration = pc.penetration;
    s.surface = surface;
    s.pusher = pc.wrench_about(state.pose.p);
    traj.samples.push_back(s);
  };

  long n = 0;
  bool done = false;
  for (; !done; ++n) {
    const bool driving = n < drive_steps;
    rod = driving ? Eigen::Vector2d(rod0 + rod_vel * (static_cast<double>(n) * sim.dt))
                  : rod;

    PusherContact pc;
    if (driving)
      pc = pusher_contact_force(state, model.body, rod, rod_vel, model.pusher);
    const Wrench surface =
        patch_friction_wrench(model.patch, model.ellipse, state.pose, state.twist, sim.v_eps);

    if (n % sim.sample_stride == 0) record(n, pc, surface);

    Wrench total = surface;
    total += pc.wrench_about(state.pose.p);
    state = step(state, model.body, total, sim.dt);

    if (!driving) {
      if (rest.update(state.twist)) done = true;
      if (!done && n - drive_steps >= settle_cap)
        throw SimulationError("simulate_push: object still moving " +
                              std::to_string(sim.max_settle_time) +
                              " s after the stroke (|v|=" + std::to_string(state.twist.v.norm()) +
                              " m/s)");
    }
  }

  // Final sample at the resting state.
  record(n, PusherContact{}, patch_friction_wrench(model.patch, model.ellipse, state.pose,
                                                   state.twist, sim.v_eps));
  return traj;
}

}  // namespace pushsim
