#pragma once

#include "pushsim/collection.hpp"
#include "pushsim/dynamics.hpp"
#include "pushsim/fitting.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace pushsim {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct AnalysisOptions {
  double angle_bin_deg = 4.0;
  double displacement_bin_m = 0.001;
  int fourier_order = 8;
  int burn_in = 50;
};

struct OutputOptions {
  bool write_trajectories = false;
};

/// Everything one reproducible run needs. Angles in the file are degrees
/// except the ellipse rotation, whose field is explicitly phi_rad.
struct RunConfig {
  RigidBody body;
  PusherParams pusher;
  EllipseParams surface{0.2545, 0.2346, 0.0325, 0.0082, 2.6175};
  int patch_rows = 8;
  int patch_cols = 8;
  CollectionConfig collection;  // includes the push spec
  AnalysisOptions analysis;
  SimParams sim;
  OutputOptions output;
  std::uint64_t seed = 0;
};

/// Defaults for every section; the seed still has to come from the file.
RunConfig default_run_config();

/// Parse and validate a config file. Unknown keys anywhere are rejected;
/// the seed is mandatory. Throws ConfigError with a specific message.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text);

/// Canonical serialized form; parse(serialize(c)) == c.
std::string run_config_to_json(const RunConfig& cfg);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

/// Serialize fitted ellipse parameters as a config fragment loadable under
/// the "surface" section.
std::string ellipse_fragment_json(const EllipseParams& p);

ModelParams make_model(const RunConfig& cfg);

}  // namespace pushsim
