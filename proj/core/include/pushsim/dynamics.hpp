#pragma once

#include "pushsim/body.hpp"
#include "pushsim/friction.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace pushsim {

/// Pusher rod and its penalty-contact parameters. The rod is a rigid disc;
/// normal contact is a spring-damper on the penetration depth, tangential
/// contact is Coulomb friction with coefficient mu_p, regularized below
/// v_eps like the surface law.
struct PusherParams {
  double rod_radius = 0.005;   // m
  double stiffness = 1.0e4;    // N/m
  double damping = 100.0;      // N s/m
  double damping_ramp = 5e-5;  // m; damping fades in over this depth
  double mu_p = 0.15;
  double v_eps = 1e-3;         // m/s
};

/// One straight push, specified in the object frame at cycle start.
struct PushSpec {
  Eigen::Vector2d contact_point{-0.005, -0.045};  // on the object edge (m)
  Eigen::Vector2d direction{0.0, 1.0};            // unit, into the object
  double distance = 0.15;                         // m
  double speed = 0.02;                            // m/s
};

/// Integration and termination settings shared by all simulated phases.
struct SimParams {
  double dt = 2.5e-4;            // s
  double v_eps = 1e-3;           // m/s, surface friction regularization
  int sample_stride = 20;        // record every N steps
  double rest_speed = 1e-5;      // m/s
  double rest_omega = 1e-4;      // rad/s
  int rest_steps = 50;           // consecutive steps below thresholds
  double max_settle_time = 5.0;  // s, per phase, after the driven motion ends
};

/// Full physical model of one experiment: object, surface law, support
/// patch, pusher.
struct ModelParams {
  RigidBody body;
  LimitEllipse ellipse;
  ContactPatch patch;
  PusherParams pusher;

  static ModelParams with_defaults(const RigidBody& body, const LimitEllipse& ellipse,
                                   const PusherParams& pusher = {})
  {
    return {body, ellipse, ContactPatch::uniform_grid(body.side, 8, 8, body.weight()), pusher};
  }
};

/// Resolved rod-object contact at one instant.
struct PusherContact {
  bool active = false;
  double fn = 0.0;    // normal force magnitude, >= 0
  double ftau = 0.0;  // signed tangential force along the contact tangent
  double slip_speed = 0.0;
  double penetration = 0.0;
  Eigen::Vector2d force{0.0, 0.0};   // total force on the object
  Eigen::Vector2d point{0.0, 0.0};   // application point, world
  Eigen::Vector2d normal{0.0, 0.0};  // from object surface toward rod center

  Wrench wrench_about(const Eigen::Vector2d& com) const
  {
    if (!active) return {};
    return {force, cross2(point - com, force)};
  }
};

/// Penalty contact between the rod disc and the square footprint.
/// Returns zero forces on separation. F_n = max(0, k dn + c dn_dot), with the
/// damping faded in over `damping_ramp` so the force is continuous at first
/// touch; |F_tau| <= mu_p F_n always.
PusherContact pusher_contact_force(const BodyState& object, const RigidBody& body,
                                   const Eigen::Vector2d& rod_center,
                                   const Eigen::Vector2d& rod_velocity,
                                   const PusherParams& params);

/// One semi-implicit Euler step under a total wrench about the mass center:
/// twist += M^-1 F dt, then pose += twist dt. Throws on non-finite input.
BodyState step(const BodyState& state, const RigidBody& body, const Wrench& total, double dt);

struct TrajectorySample {
  double t = 0.0;
  BodyState state;
  Eigen::Vector2d pusher_pos{0.0, 0.0};
  double fn = 0.0;
  double ftau = 0.0;
  double slip_speed = 0.0;
  double penetration = 0.0;
  Wrench surface;  // friction wrench from the table
  Wrench pusher;   // wrench from the rod (contact or pin spring)
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;  // integration step behind the samples

  const BodyState& final_state() const { return samples.back().state; }
};

class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Simulate one push: the rod starts touching the commanded contact point
/// and drives along the push line at constant speed for the given distance,
/// is then withdrawn, and the simulation continues until the object rests.
/// Throws SimulationError if the object is still moving after
/// max_settle_time past the end of the stroke.
Trajectory simulate_push(const BodyState& start, const PushSpec& spec,
                         const ModelParams& model, const SimParams& sim);

}  // namespace pushsim
