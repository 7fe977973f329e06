#pragma once

#include "pushsim/body.hpp"

#include <Eigen/Core>

#include <vector>

namespace pushsim {

/// Friction coefficient vector of a sliding point contact, expressed both in
/// the ellipse principal axes (m, n) and in the surface frame (x, y).
struct FrictionCoefficientVector {
  double mu_m = 0.0;
  double mu_n = 0.0;
  Eigen::Vector2d surface{0.0, 0.0};  // (mu_x, mu_y)
};

/// Offset-elliptic limit circle of anisotropic point friction.
///
/// The admissible coefficient vectors (mu_m, mu_n) satisfy
///   ((mu_m - m0)/mu_a)^2 + ((mu_n - n0)/mu_b)^2 = 1,
/// where the (m, n) axes are rotated by phi from the surface (x, y) axes.
/// The axes are fixed in the surface frame: the anisotropy belongs to the
/// supporting surface, not to the object.
///
/// Setting mu_a = mu_b = mu, m0 = n0 = 0 recovers the Coulomb limit circle.
class LimitEllipse {
public:
  /// Throws std::invalid_argument unless mu_a, mu_b > 0 and the origin is
  /// strictly inside the ellipse ((m0/mu_a)^2 + (n0/mu_b)^2 < 1). The latter
  /// guarantees mu(v).v > 0 for every nonzero sliding velocity.
  LimitEllipse(double mu_a, double mu_b, double m0, double n0, double phi);

  /// Isotropic Coulomb circle of radius mu.
  static LimitEllipse circle(double mu) { return {mu, mu, 0.0, 0.0, 0.0}; }

  double mu_a() const { return mu_a_; }
  double mu_b() const { return mu_b_; }
  double m0() const { return m0_; }
  double n0() const { return n0_; }
  double phi() const { return phi_; }

  /// ((mu_m - m0)/mu_a)^2 + ((mu_n - n0)/mu_b)^2: < 1 inside, 1 on the
  /// boundary, > 1 outside.
  double residual(const FrictionCoefficientVector& mu) const;

  /// Maximum-dissipation coefficient for sliding velocity v (surface frame).
  /// Returns the boundary point maximizing mu.v. Throws std::domain_error on
  /// zero velocity; regularization of the rest case lives in
  /// point_friction_force.
  FrictionCoefficientVector max_dissipation_coefficient(const Eigen::Vector2d& v) const;

  /// Boundary point at ellipse parameter t, in surface-frame components.
  Eigen::Vector2d boundary_point(double t) const;

  /// Coefficient vector from ellipse-axis components.
  FrictionCoefficientVector from_axis_components(double mu_m, double mu_n) const;

  /// Rotate a surface-frame vector into the (m, n) axes.
  Eigen::Vector2d to_axes(const Eigen::Vector2d& v_surface) const;
  /// Rotate (m, n) components back into the surface frame.
  Eigen::Vector2d to_surface(const Eigen::Vector2d& v_axes) const;

private:
  double mu_a_, mu_b_, m0_, n0_, phi_;
  double cos_phi_, sin_phi_;
};

/// Friction force (N, surface frame) at one point contact under normal load
/// `normal_load`. Opposes motion: f = -N mu(v), so the dissipation -f.v is
/// positive for any nonzero v. Below the regularization speed v_eps the
/// force scales linearly with |v| (viscous-like stick approximation).
/// Throws std::invalid_argument on negative load or non-positive v_eps.
Eigen::Vector2d point_friction_force(const LimitEllipse& ellipse,
                                     const Eigen::Vector2d& v,
                                     double normal_load,
                                     double v_eps);

/// Planar force + torque about the mass center.
struct Wrench {
  Eigen::Vector2d force{0.0, 0.0};
  double torque = 0.0;

  Wrench& operator+=(const Wrench& o)
  {
    force += o.force;
    torque += o.torque;
    return *this;
  }
};

/// Support patch: rigidly connected point contacts with fixed per-point
/// normal loads. Positions are in the object frame, relative to the mass
/// center.
class ContactPatch {
public:
  ContactPatch(std::vector<Eigen::Vector2d> points, std::vector<double> normal_loads);

  /// rows x cols grid at the cell centers of the square footprint, each point
  /// carrying an equal share of the total load (weight/64 for the 8x8 grid).
  static ContactPatch uniform_grid(double side, int rows, int cols, double total_load);

  const std::vector<Eigen::Vector2d>& points() const { return points_; }
  const std::vector<double>& normal_loads() const { return normal_loads_; }
  double total_load() const { return total_load_; }
  std::size_t size() const { return points_.size(); }

private:
  std::vector<Eigen::Vector2d> points_;
  std::vector<double> normal_loads_;
  double total_load_;
};

/// Sum of the per-point friction wrenches acting at the mass center. Point
/// velocities are v_com + omega x r_i with r_i in world orientation.
Wrench patch_friction_wrench(const ContactPatch& patch,
                             const LimitEllipse& ellipse,
                             const Pose& pose,
                             const Twist& twist,
                             double v_eps);

}  // namespace pushsim
