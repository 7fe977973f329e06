#include "pushsim/friction.hpp"

#include "pushsim/angles.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pushsim {

LimitEllipse::LimitEllipse(double mu_a, double mu_b, double m0, double n0, double phi)
    : mu_a_(mu_a), mu_b_(mu_b), m0_(m0), n0_(n0), phi_(phi),
      cos_phi_(std::cos(phi)), sin_phi_(std::sin(phi))
{
  if (!(mu_a > 0.0) || !(mu_b > 0.0))
    throw std::invalid_argument("LimitEllipse: semi-axes must be positive");
  const double c = (m0 / mu_a) * (m0 / mu_a) + (n0 / mu_b) * (n0 / mu_b);
  if (!(c < 1.0))
    throw std::invalid_argument(
        "LimitEllipse: center offset places the origin outside the ellipse "
        "(non-dissipative parameters)");
}

Eigen::Vector2d LimitEllipse::to_axes(const Eigen::Vector2d& v) const
{
  return {cos_phi_ * v.x() + sin_phi_ * v.y(), -sin_phi_ * v.x() + cos_phi_ * v.y()};
}

Eigen::Vector2d LimitEllipse::to_surface(const Eigen::Vector2d& v) const
{
  return {cos_phi_ * v.x() - sin_phi_ * v.y(), sin_phi_ * v.x() + cos_phi_ * v.y()};
}

FrictionCoefficientVector LimitEllipse::from_axis_components(double mu_m, double mu_n) const
{
  FrictionCoefficientVector mu;
  mu.mu_m = mu_m;
  mu.mu_n = mu_n;
  mu.surface = to_surface({mu_m, mu_n});
  return mu;
}

double LimitEllipse::residual(const FrictionCoefficientVector& mu) const
{
  const double dm = (mu.mu_m - m0_) / mu_a_;
  const double dn = (mu.mu_n - n0_) / mu_b_;
  return dm * dm + dn * dn;
}

FrictionCoefficientVector LimitEllipse::max_dissipation_coefficient(const Eigen::Vector2d& v) const
{
  // Only the direction matters; hypot keeps tiny velocities out of underflow.
  const double speed = std::hypot(v.x(), v.y());
  if (speed == 0.0)
    throw std::domain_error("max_dissipation_coefficient: zero sliding velocity");
  const Eigen::Vector2d va = to_axes(v / speed);
  const double vm = va.x();
  const double vn = va.y();
  const double den = std::sqrt(mu_a_ * mu_a_ * vm * vm + mu_b_ * mu_b_ * vn * vn);
  return from_axis_components(m0_ + mu_a_ * mu_a_ * vm / den,
                              n0_ + mu_b_ * mu_b_ * vn / den);
}

Eigen::Vector2d LimitEllipse::boundary_point(double t) const
{
  return to_surface({m0_ + mu_a_ * std::cos(t), n0_ + mu_b_ * std::sin(t)});
}

Eigen::Vector2d point_friction_force(const LimitEllipse& ellipse,
                                     const Eigen::Vector2d& v,
                                     double normal_load,
                                     double v_eps)
{
  if (normal_load < 0.0)
    throw std::invalid_argument("point_friction_force: negative normal load");
  if (!(v_eps > 0.0))
    throw std::invalid_argument("point_friction_force: v_eps must be positive");

  const double speed = std::hypot(v.x(), v.y());
  if (speed < 1e-30 || normal_load == 0.0) return {0.0, 0.0};

  const Eigen::Vector2d mu = ellipse.max_dissipation_coefficient(v).surface;
  const double scale = speed >= v_eps ? 1.0 : speed / v_eps;
  return -normal_load * scale * mu;
}

ContactPatch::ContactPatch(std::vector<Eigen::Vector2d> points, std::vector<double> normal_loads)
    : points_(std::move(points)), normal_loads_(std::move(normal_loads))
{
  if (points_.empty() || points_.size() != normal_loads_.size())
    throw std::invalid_argument("ContactPatch: points and loads must be nonempty and match");
  for (double w : normal_loads_)
    if (w < 0.0) throw std::invalid_argument("ContactPatch: negative normal load");
  total_load_ = std::accumulate(normal_loads_.begin(), normal_loads_.end(), 0.0);
}

ContactPatch ContactPatch::uniform_grid(double side, int rows, int cols, double total_load)
{
  if (rows < 1 || cols < 1 || !(side > 0.0) || !(total_load > 0.0))
    throw std::invalid_argument("ContactPatch::uniform_grid: bad grid spec");
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(rows) * cols);
  const double dx = side / cols;
  const double dy = side / rows;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      pts.emplace_back(-side / 2.0 + (j + 0.5) * dx, -side / 2.0 + (i + 0.5) * dy);
  std::vector<double> loads(pts.size(), total_load / static_cast<double>(pts.size()));
  return {std::move(pts), std::move(loads)};
}

Wrench patch_friction_wrench(const ContactPatch& patch,
                             const LimitEllipse& ellipse,
                             const Pose& pose,
                             const Twist& twist,
                             double v_eps)
{
  Wrench w;
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const auto& pts = patch.points();
  const auto& loads = patch.normal_loads();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector2d r{c * pts[i].x() - s * pts[i].y(),
                            s * pts[i].x() + c * pts[i].y()};
    const Eigen::Vector2d vi = twist.point_velocity(r);
    const Eigen::Vector2d fi = point_friction_force(ellipse, vi, loads[i], v_eps);
    w.force += fi;
    w.torque += cross2(r, fi);
  }
  return w;
}

}  // namespace pushsim
