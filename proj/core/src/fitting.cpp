#include "pushsim/fitting.hpp"

#include "pushsim/angles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace pushsim {

namespace {

// Conic a x^2 + b xy + c y^2 + d x + e y + f = 0 with 4ac - b^2 > 0.
struct Conic {
  double a, b, c, d, e, f;
};

// Halir & Flusser partitioning of the Fitzgibbon direct ellipse fit: solve
// the 3x3 reduced eigenproblem and keep the eigenvector satisfying the
// ellipse constraint 4ac - b^2 > 0.
Conic direct_ellipse_fit(const std::vector<Eigen::Vector2d>& pts)
{
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd d1(n, 3), d2(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = pts[static_cast<std::size_t>(i)].x();
    const double y = pts[static_cast<std::size_t>(i)].y();
    d1.row(i) << x * x, x * y, y * y;
    d2.row(i) << x, y, 1.0;
  }
  const Eigen::Matrix3d s1 = d1.transpose() * d1;
  const Eigen::Matrix3d s2 = d1.transpose() * d2;
  const Eigen::Matrix3d s3 = d2.transpose() * d2;

  Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
  if (!lu.isInvertible())
    throw EllipseFitError("fit_limit_ellipse: degenerate sample configuration");
  const Eigen::Matrix3d t = -lu.solve(s2.transpose());
  const Eigen::Matrix3d m = s1 + s2 * t;
  Eigen::Matrix3d reduced;
  reduced.row(0) = m.row(2) / 2.0;
  reduced.row(1) = -m.row(1);
  reduced.row(2) = m.row(0) / 2.0;

  const Eigen::EigenSolver<Eigen::Matrix3d> eig(reduced);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(eig.eigenvalues()(i).imag()) > 0.0) continue;
    const Eigen::Vector3d v = eig.eigenvectors().col(i).real();
    const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
    if (cond > 0.0) {
      const Eigen::Vector3d w = t * v;
      return {v(0), v(1), v(2), w(0), w(1), w(2)};
    }
  }
  throw EllipseFitError("fit_limit_ellipse: samples do not determine an ellipse");
}

EllipseParams conic_to_params(Conic c)
{
  // Center from the gradient system; then reduce to principal axes.
  Eigen::Matrix2d g;
  g << 2.0 * c.a, c.b, c.b, 2.0 * c.c;
  Eigen::FullPivLU<Eigen::Matrix2d> lu(g);
  if (!lu.isInvertible()) throw EllipseFitError("fit_limit_ellipse: singular conic");
  const Eigen::Vector2d center = lu.solve(Eigen::Vector2d(-c.d, -c.e));

  double fc = c.f + (c.d * center.x() + c.e * center.y()) / 2.0;
  Eigen::Matrix2d q;
  q << c.a, c.b / 2.0, c.b / 2.0, c.c;
  if (fc > 0.0) {
    q = -q;
    fc = -fc;
  }
  if (fc == 0.0) throw EllipseFitError("fit_limit_ellipse: degenerate (point) conic");

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(q);
  const double l0 = eig.eigenvalues()(0);
  const double l1 = eig.eigenvalues()(1);
  if (!(l0 > 0.0) || !(l1 > 0.0))
    throw EllipseFitError("fit_limit_ellipse: non-elliptic quadratic form");

  // Smaller eigenvalue -> longer axis.
  const double major = std::sqrt(-fc / l0);
  const double minor = std::sqrt(-fc / l1);
  const Eigen::Vector2d axis = eig.eigenvectors().col(0);

  EllipseParams p;
  p.mu_a = major;
  p.mu_b = minor;
  double phi = std::atan2(axis.y(), axis.x());
  phi = std::fmod(phi, kPi);
  if (phi < 0.0) phi += kPi;

  // Near-circular fits have an arbitrary axis direction: pin it to zero.
  if (major - minor < 1e-7 * major) phi = 0.0;
  p.phi = phi;

  const Eigen::Vector2d center_axes = rotated(center, -phi);
  p.m0 = center_axes.x();
  p.n0 = center_axes.y();
  return p;
}

}  // namespace

LimitEllipse fit_limit_ellipse(const std::vector<Eigen::Vector2d>& mu_samples)
{
  if (mu_samples.size() < 5)
    throw EllipseFitError("fit_limit_ellipse: need at least 5 samples, got " +
                          std::to_string(mu_samples.size()));

  const EllipseParams p = conic_to_params(direct_ellipse_fit(mu_samples));
  try {
    return {p.mu_a, p.mu_b, p.m0, p.n0, p.phi};
  } catch (const std::invalid_argument& ex) {
    throw EllipseFitError(std::string("fit_limit_ellipse: fitted ellipse rejected: ") + ex.what(),
                          p);
  }
}

PusherMuEstimate estimate_pusher_mu(const std::vector<ForceTraceSample>& trace,
                                    double slide_speed_threshold, double fn_floor)
{
  std::vector<double> sliding_ratios;
  std::vector<double> sticking_ratios;
  for (const auto& s : trace) {
    if (s.fn < fn_floor) continue;
    const double ratio = s.ftau / s.fn;
    if (s.slip_speed >= slide_speed_threshold)
      sliding_ratios.push_back(std::abs(ratio));
    else
      sticking_ratios.push_back(ratio);
  }
  if (sliding_ratios.empty())
    throw std::runtime_error("estimate_pusher_mu: no sliding samples above " +
                             std::to_string(slide_speed_threshold) + " m/s");

  const auto mid = sliding_ratios.begin() + static_cast<std::ptrdiff_t>(sliding_ratios.size() / 2);
  std::nth_element(sliding_ratios.begin(), mid, sliding_ratios.end());
  double mu = *mid;
  if (sliding_ratios.size() % 2 == 0) {
    const double above = *std::max_element(sliding_ratios.begin(), mid);
    mu = (mu + above) / 2.0;
  }

  PusherMuEstimate est;
  est.mu_p = mu;
  est.sliding_count = sliding_ratios.size();
  est.sticking_count = sticking_ratios.size();
  if (!sticking_ratios.empty()) {
    std::size_t inside = 0;
    for (double r : sticking_ratios)
      if (std::abs(r) < mu) ++inside;
    est.stick_fraction = static_cast<double>(inside) / static_cast<double>(sticking_ratios.size());
  }
  return est;
}

}  // namespace pushsim
