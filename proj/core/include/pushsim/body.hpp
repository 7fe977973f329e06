#pragma once

#include "pushsim/angles.hpp"

#include <Eigen/Core>

#include <stdexcept>

namespace pushsim {

/// Pushed object: a homogeneous square of side `side` sliding on the surface.
/// Planar inertia is derived, never stored: I = m L^2 / 6.
struct RigidBody {
  double mass = 0.8;      // kg
  double side = 0.09;     // m
  double gravity = 9.81;  // m/s^2

  RigidBody() = default;
  RigidBody(double mass_kg, double side_m, double g = 9.81)
      : mass(mass_kg), side(side_m), gravity(g)
  {
    if (!(mass > 0.0) || !(side > 0.0) || !(gravity > 0.0))
      throw std::invalid_argument("RigidBody: mass, side and gravity must be positive");
  }

  double inertia() const { return mass * side * side / 6.0; }
  double weight() const { return mass * gravity; }
};

/// Planar pose (x, y, theta). theta is unwrapped: it accumulates winding.
struct Pose {
  Eigen::Vector2d p{0.0, 0.0};
  double theta = 0.0;

  Eigen::Vector2d to_world(const Eigen::Vector2d& body_point) const
  {
    return p + rotated(body_point, theta);
  }
  Eigen::Vector2d to_body(const Eigen::Vector2d& world_point) const
  {
    return rotated(world_point - p, -theta);
  }
};

struct Twist {
  Eigen::Vector2d v{0.0, 0.0};
  double omega = 0.0;

  /// Velocity of a material point at world offset r from the mass center.
  Eigen::Vector2d point_velocity(const Eigen::Vector2d& r) const
  {
    return v + omega * perp(r);
  }
};

struct BodyState {
  Pose pose;
  Twist twist;
};

}  // namespace pushsim
