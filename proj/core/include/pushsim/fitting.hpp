#pragma once

#include "pushsim/friction.hpp"

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <vector>

namespace pushsim {

/// Plain tuple of the five ellipse parameters, for fit results and config.
struct EllipseParams {
  double mu_a = 0.0;
  double mu_b = 0.0;
  double m0 = 0.0;
  double n0 = 0.0;
  double phi = 0.0;  // rad
};

class EllipseFitError : public std::runtime_error {
public:
  explicit EllipseFitError(const std::string& msg,
                           std::optional<EllipseParams> fitted = std::nullopt)
      : std::runtime_error(msg), fitted_(fitted)
  {
  }
  /// Parameters of the rejected fit, when the conic was an ellipse but
  /// violated the dissipativity invariant.
  const std::optional<EllipseParams>& fitted() const { return fitted_; }

private:
  std::optional<EllipseParams> fitted_;
};

/// Direct least-squares conic fit constrained to an ellipse, on measured
/// friction-coefficient samples (mu_x, mu_y). Canonical form: mu_a >= mu_b,
/// phi in [0, pi); the center offsets are reported in the principal axes of
/// that canonical orientation. Throws EllipseFitError on fewer than 5
/// samples, a degenerate/non-elliptic fit, or a dissipativity violation
/// (the latter carries the fitted parameters).
LimitEllipse fit_limit_ellipse(const std::vector<Eigen::Vector2d>& mu_samples);

/// One sample of the pusher contact force trace.
struct ForceTraceSample {
  double t = 0.0;           // s
  double ftau = 0.0;        // N, signed tangential
  double fn = 0.0;          // N
  double slip_speed = 0.0;  // m/s, |relative tangential speed|
};

struct PusherMuEstimate {
  double mu_p = 0.0;
  double stick_fraction = 0.0;  // sticking samples with |ratio| strictly < mu_p
  std::size_t sliding_count = 0;
  std::size_t sticking_count = 0;
};

/// mu_p as the median of |F_tau / F_n| over sliding samples (slip speed at or
/// above the threshold). Samples with F_n below fn_floor are discarded.
/// Throws std::runtime_error when no sliding samples remain.
PusherMuEstimate estimate_pusher_mu(const std::vector<ForceTraceSample>& trace,
                                    double slide_speed_threshold = 1e-3,
                                    double fn_floor = 0.05);

}  // namespace pushsim
