#pragma once

#include "pushsim/analysis.hpp"
#include "pushsim/collection.hpp"
#include "pushsim/dynamics.hpp"
#include "pushsim/fitting.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace pushsim {

/// Malformed CSV input. The message names the offending row and column.
class CsvError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Full-precision decimal formatting used for every numeric CSV field.
std::string format_full(double v);

// --- trajectories (dynamics module schema) ---------------------------------
// t,x,y,theta,vx,vy,omega,pusher_x,pusher_y,Fn,Ftau  (SI units, radians)
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

// --- pusher force traces (fitting module schema) ----------------------------
// t,Ftau,Fn,vt
void write_force_trace_csv(const std::filesystem::path& path, const Trajectory& traj);
std::vector<ForceTraceSample> read_force_trace_csv(const std::filesystem::path& path);

// --- cycle records (collection module schema) -------------------------------
// batch,k,x0,y0,theta0_deg_unwrapped,dx,dy,dtheta_deg,x_post,y_post,theta_post_deg_unwrapped
void write_cycle_csv(const std::filesystem::path& path, const std::vector<CycleRecord>& records);

/// One row of the cycle-record CSV, as ingested (simulation output or an
/// externally converted dataset).
struct CycleRow {
  int batch = 0;
  int k = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double theta0_deg = 0.0;  // unwrapped
  double dx = 0.0;
  double dy = 0.0;
  double dtheta_deg = 0.0;
  double x_post = 0.0;
  double y_post = 0.0;
  double theta_post_deg = 0.0;  // unwrapped
};
std::vector<CycleRow> read_cycle_csv(const std::filesystem::path& path);

PushSample to_push_sample(const CycleRow& row);

// --- friction-coefficient samples (fitting input) ---------------------------
// mu_x,mu_y
std::vector<Eigen::Vector2d> read_mu_samples_csv(const std::filesystem::path& path);
void write_mu_samples_csv(const std::filesystem::path& path,
                          const std::vector<Eigen::Vector2d>& samples);

// --- analysis outputs (plot-data style: plain x,y columns) ------------------
void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist,
                         const std::string& value_label);
void write_error_table_csv(const std::filesystem::path& path, const std::string& metric,
                           const ErrorTable& table);
void write_push_law_csv(const std::filesystem::path& path, const PushLaw& law);
void write_stable_directions_csv(const std::filesystem::path& path,
                                 const std::vector<FixedPoint>& fps);
void write_map_csv(const std::filesystem::path& path,
                   const std::vector<std::pair<double, double>>& map_samples);

}  // namespace pushsim
