#pragma once

#include "pushsim/body.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pushsim {

/// Push outcome expressed in the Initial Object Frame: the frame in which
/// the object starts at (0, 0, 0).
struct IofDelta {
  double dx = 0.0;      // m
  double dy = 0.0;      // m
  double dtheta = 0.0;  // rad, unwrapped
};

/// Rigid transform of `pose` into the frame of `initial`.
IofDelta to_iof(const Pose& pose, const Pose& initial);
/// Inverse of to_iof.
Pose from_iof(const IofDelta& delta, const Pose& initial);
/// Transform a whole path into the frame of its own first pose.
std::vector<IofDelta> to_iof(std::span<const Pose> path);

/// Cumulative version of a wrapped angle sequence (degrees): successive
/// output differences lie in (-180, 180], first element unchanged.
std::vector<double> unwrap_angles(std::span<const double> wrapped_deg);

/// Fixed-width histogram over [lo, hi). Out-of-range values are not clipped;
/// they land in the underflow/overflow buckets.
struct Histogram {
  double lo = 0.0;
  double bin_width = 1.0;
  std::vector<long> counts;
  long underflow = 0;
  long overflow = 0;
  bool normalized = false;  // interpretation flag for emitted output

  long total() const;
  double edge(std::size_t i) const { return lo + static_cast<double>(i) * bin_width; }
  double center(std::size_t i) const { return edge(i) + bin_width / 2.0; }
  /// Indices of bins that are local maxima (circularly) at least half as
  /// tall as the tallest bin.
  std::vector<std::size_t> peak_bins() const;
};

Histogram histogram(std::span<const double> values, double bin_width, double lo, double hi);

/// One analyzed record: initial orientation and push outcome. Angles in
/// degrees, displacements in meters.
struct PushSample {
  double theta0_deg = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double dtheta_deg = 0.0;
};

enum class Component { dx, dy, dtheta };

/// Deterministic push law: one truncated Fourier series in theta0 per
/// outcome component, 360-degree periodic by construction.
struct PushLaw {
  int order = 0;
  // Coefficient layout per component: a0, a1, b1, ..., aK, bK for
  // a0 + sum_k a_k cos(k theta) + b_k sin(k theta).
  Eigen::VectorXd coef_dx;
  Eigen::VectorXd coef_dy;
  Eigen::VectorXd coef_dtheta;
  double rmse_dx = 0.0;      // training residuals
  double rmse_dy = 0.0;
  double rmse_dtheta = 0.0;

  double eval(Component c, double theta0_deg) const;
};

/// Least-squares Fourier fit of the push outcome against theta0. Throws
/// std::runtime_error if the design matrix is numerically rank-deficient
/// (insufficient angular coverage for the requested order).
PushLaw fit_push_law(std::span<const PushSample> records, int order);

/// Histogram of the law's prediction for one component over the given
/// initial orientations.
Histogram predict_histogram(const PushLaw& law, Component c,
                            std::span<const double> theta0_deg, double bin_width, double lo,
                            double hi);

struct ErrorEntry {
  double value = 0.0;                    // sigma or RMSE, units of the quantity
  double mean = 0.0;                     // signed mean of the quantity
  std::optional<double> percent;         // 100 * value / |mean|; absent when mean == 0
};

struct ErrorTable {
  ErrorEntry dtheta;  // degrees
  ErrorEntry dx;      // m
  ErrorEntry dy;      // m
};

/// Population standard deviation of each component, normalized by the mean.
ErrorTable stddev_table(std::span<const PushSample> records);
/// Root-mean-square prediction error of the law on the records.
ErrorTable rmse_table(std::span<const PushSample> records, const PushLaw& law);

struct FixedPoint {
  double theta_deg = 0.0;  // in [0, 360)
  double slope = 0.0;      // f'(theta*)
  bool stable = false;     // |slope| < 1
};

/// Fixed points of a sampled 360-periodic map f(theta0), angles in degrees.
/// Samples must be sorted by theta. Roots of f - id are bracketed on the
/// periodic linear interpolant and refined by bisection; stability comes
/// from the local slope. Throws std::runtime_error on the degenerate
/// identity map. Returns an empty list when f - id never changes sign.
std::vector<FixedPoint> find_stable_directions(
    std::span<const std::pair<double, double>> map_samples);

/// Empirical cycle-map samples from consecutive records of each batch:
/// (theta0 wrapped to [0,360), theta0 + one-cycle advance). Sorted by theta,
/// duplicates collapsed by averaging.
struct RecordPair {
  int batch;
  int k;
  double theta0_deg_unwrapped;
};
std::vector<std::pair<double, double>> map_samples_from_series(
    std::span<const RecordPair> series);

/// Total variation distance between two histograms with identical binning,
/// each normalized to unit mass. Throws on mismatched layouts.
double total_variation(const Histogram& a, const Histogram& b);

}  // namespace pushsim
