#include "pushsim/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace pushsim {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& section, const std::set<std::string>& allowed)
{
  if (!obj.is_object()) throw ConfigError("'" + section + "' must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key))
      throw ConfigError("unknown key '" + key + "' in section '" + section + "'");
}

double get_num(const json& obj, const std::string& section, const std::string& key, double dflt)
{
  if (!obj.contains(key)) return dflt;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + section + "." + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& section, const std::string& key, int dflt)
{
  if (!obj.contains(key)) return dflt;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("'" + section + "." + key + "' must be an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& section, const std::string& key, bool dflt)
{
  if (!obj.contains(key)) return dflt;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError("'" + section + "." + key + "' must be a boolean");
  return v.get<bool>();
}

Eigen::Vector2d get_vec2(const json& obj, const std::string& section, const std::string& key,
                         const Eigen::Vector2d& dflt)
{
  if (!obj.contains(key)) return dflt;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError("'" + section + "." + key + "' must be an array of two numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

void require_positive(double v, const std::string& what)
{
  if (!(v > 0.0)) throw ConfigError("'" + what + "' must be positive");
}

void require_nonnegative(double v, const std::string& what)
{
  if (!(v >= 0.0)) throw ConfigError("'" + what + "' must be nonnegative");
}

}  // namespace

RunConfig default_run_config()
{
  return {};
}

RunConfig parse_run_config(const std::string& json_text)
{
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }

  check_keys(root, "(root)",
             {"seed", "body", "pusher", "surface", "patch", "push", "collection", "analysis",
              "sim", "output"});

  RunConfig cfg = default_run_config();

  if (!root.contains("seed")) throw ConfigError("'seed' is mandatory");
  if (!root.at("seed").is_number_unsigned())
    throw ConfigError("'seed' must be a nonnegative integer");
  cfg.seed = root.at("seed").get<std::uint64_t>();

  if (root.contains("body")) {
    const auto& b = root.at("body");
    check_keys(b, "body", {"mass_kg", "side_m", "gravity_m_per_s2"});
    const double mass = get_num(b, "body", "mass_kg", cfg.body.mass);
    const double side = get_num(b, "body", "side_m", cfg.body.side);
    const double g = get_num(b, "body", "gravity_m_per_s2", cfg.body.gravity);
    require_positive(mass, "body.mass_kg");
    require_positive(side, "body.side_m");
    require_positive(g, "body.gravity_m_per_s2");
    cfg.body = RigidBody(mass, side, g);
  }

  if (root.contains("pusher")) {
    const auto& p = root.at("pusher");
    check_keys(p, "pusher",
               {"rod_radius_m", "stiffness_n_per_m", "damping_n_s_per_m", "damping_ramp_m",
                "mu_p", "regularization_speed_m_per_s"});
    cfg.pusher.rod_radius = get_num(p, "pusher", "rod_radius_m", cfg.pusher.rod_radius);
    cfg.pusher.stiffness = get_num(p, "pusher", "stiffness_n_per_m", cfg.pusher.stiffness);
    cfg.pusher.damping = get_num(p, "pusher", "damping_n_s_per_m", cfg.pusher.damping);
    cfg.pusher.damping_ramp = get_num(p, "pusher", "damping_ramp_m", cfg.pusher.damping_ramp);
    cfg.pusher.mu_p = get_num(p, "pusher", "mu_p", cfg.pusher.mu_p);
    cfg.pusher.v_eps = get_num(p, "pusher", "regularization_speed_m_per_s", cfg.pusher.v_eps);
    require_positive(cfg.pusher.rod_radius, "pusher.rod_radius_m");
    require_positive(cfg.pusher.stiffness, "pusher.stiffness_n_per_m");
    require_nonnegative(cfg.pusher.damping, "pusher.damping_n_s_per_m");
    require_nonnegative(cfg.pusher.damping_ramp, "pusher.damping_ramp_m");
    require_nonnegative(cfg.pusher.mu_p, "pusher.mu_p");
    require_positive(cfg.pusher.v_eps, "pusher.regularization_speed_m_per_s");
  }

  if (root.contains("surface")) {
    const auto& s = root.at("surface");
    check_keys(s, "surface", {"mu_a", "mu_b", "m0", "n0", "phi_rad"});
    cfg.surface.mu_a = get_num(s, "surface", "mu_a", cfg.surface.mu_a);
    cfg.surface.mu_b = get_num(s, "surface", "mu_b", cfg.surface.mu_b);
    cfg.surface.m0 = get_num(s, "surface", "m0", cfg.surface.m0);
    cfg.surface.n0 = get_num(s, "surface", "n0", cfg.surface.n0);
    cfg.surface.phi = get_num(s, "surface", "phi_rad", cfg.surface.phi);
  }
  try {
    LimitEllipse checked(cfg.surface.mu_a, cfg.surface.mu_b, cfg.surface.m0, cfg.surface.n0,
                         cfg.surface.phi);
    (void)checked;
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("surface: ") + ex.what());
  }

  if (root.contains("patch")) {
    const auto& p = root.at("patch");
    check_keys(p, "patch", {"rows", "cols"});
    cfg.patch_rows = get_int(p, "patch", "rows", cfg.patch_rows);
    cfg.patch_cols = get_int(p, "patch", "cols", cfg.patch_cols);
    if (cfg.patch_rows < 1 || cfg.patch_cols < 1)
      throw ConfigError("patch.rows and patch.cols must be >= 1");
  }

  if (root.contains("push")) {
    const auto& p = root.at("push");
    check_keys(p, "push", {"contact_point_m", "direction", "distance_m", "speed_m_per_s"});
    auto& push = cfg.collection.push;
    push.contact_point = get_vec2(p, "push", "contact_point_m", push.contact_point);
    push.direction = get_vec2(p, "push", "direction", push.direction);
    push.distance = get_num(p, "push", "distance_m", push.distance);
    push.speed = get_num(p, "push", "speed_m_per_s", push.speed);
    require_positive(push.distance, "push.distance_m");
    require_positive(push.speed, "push.speed_m_per_s");
    if (!(push.direction.norm() > 0.0)) throw ConfigError("push.direction must be nonzero");
    push.direction.normalize();
  }

  if (root.contains("collection")) {
    const auto& c = root.at("collection");
    check_keys(c, "collection",
               {"ring_offset_m", "drag_target_m", "drag_speed_m_per_s", "cycles_per_batch",
                "batch_starts_deg", "start_noise_deg"});
    auto& col = cfg.collection;
    col.ring_offset = get_vec2(c, "collection", "ring_offset_m", col.ring_offset);
    col.drag_target = get_vec2(c, "collection", "drag_target_m", col.drag_target);
    col.drag_speed = get_num(c, "collection", "drag_speed_m_per_s", col.drag_speed);
    col.cycles_per_batch = get_int(c, "collection", "cycles_per_batch", col.cycles_per_batch);
    col.start_noise_deg = get_num(c, "collection", "start_noise_deg", col.start_noise_deg);
    if (c.contains("batch_starts_deg")) {
      const auto& arr = c.at("batch_starts_deg");
      if (!arr.is_array() || arr.empty())
        throw ConfigError("collection.batch_starts_deg must be a nonempty array");
      col.batch_starts_deg.clear();
      for (const auto& v : arr) {
        if (!v.is_number()) throw ConfigError("collection.batch_starts_deg must hold numbers");
        col.batch_starts_deg.push_back(v.get<double>());
      }
    }
    if (!(col.ring_offset.norm() > 0.0))
      throw ConfigError("collection.ring_offset_m must be off-center (nonzero)");
    require_positive(col.drag_speed, "collection.drag_speed_m_per_s");
    if (col.cycles_per_batch < 1) throw ConfigError("collection.cycles_per_batch must be >= 1");
    require_nonnegative(col.start_noise_deg, "collection.start_noise_deg");
  }
  cfg.collection.seed = cfg.seed;

  if (root.contains("analysis")) {
    const auto& a = root.at("analysis");
    check_keys(a, "analysis",
               {"angle_bin_deg", "displacement_bin_m", "fourier_order", "burn_in"});
    cfg.analysis.angle_bin_deg = get_num(a, "analysis", "angle_bin_deg", cfg.analysis.angle_bin_deg);
    cfg.analysis.displacement_bin_m =
        get_num(a, "analysis", "displacement_bin_m", cfg.analysis.displacement_bin_m);
    cfg.analysis.fourier_order = get_int(a, "analysis", "fourier_order", cfg.analysis.fourier_order);
    cfg.analysis.burn_in = get_int(a, "analysis", "burn_in", cfg.analysis.burn_in);
    require_positive(cfg.analysis.angle_bin_deg, "analysis.angle_bin_deg");
    require_positive(cfg.analysis.displacement_bin_m, "analysis.displacement_bin_m");
    if (cfg.analysis.fourier_order < 0) throw ConfigError("analysis.fourier_order must be >= 0");
    if (cfg.analysis.burn_in < 0) throw ConfigError("analysis.burn_in must be >= 0");
  }

  if (root.contains("sim")) {
    const auto& s = root.at("sim");
    check_keys(s, "sim",
               {"dt_s", "surface_v_eps_m_per_s", "sample_stride", "rest_speed_m_per_s",
                "rest_omega_rad_per_s", "rest_steps", "max_settle_time_s"});
    cfg.sim.dt = get_num(s, "sim", "dt_s", cfg.sim.dt);
    cfg.sim.v_eps = get_num(s, "sim", "surface_v_eps_m_per_s", cfg.sim.v_eps);
    cfg.sim.sample_stride = get_int(s, "sim", "sample_stride", cfg.sim.sample_stride);
    cfg.sim.rest_speed = get_num(s, "sim", "rest_speed_m_per_s", cfg.sim.rest_speed);
    cfg.sim.rest_omega = get_num(s, "sim", "rest_omega_rad_per_s", cfg.sim.rest_omega);
    cfg.sim.rest_steps = get_int(s, "sim", "rest_steps", cfg.sim.rest_steps);
    cfg.sim.max_settle_time = get_num(s, "sim", "max_settle_time_s", cfg.sim.max_settle_time);
    require_positive(cfg.sim.dt, "sim.dt_s");
    require_positive(cfg.sim.v_eps, "sim.surface_v_eps_m_per_s");
    if (cfg.sim.sample_stride < 1) throw ConfigError("sim.sample_stride must be >= 1");
    require_positive(cfg.sim.rest_speed, "sim.rest_speed_m_per_s");
    require_positive(cfg.sim.rest_omega, "sim.rest_omega_rad_per_s");
    if (cfg.sim.rest_steps < 1) throw ConfigError("sim.rest_steps must be >= 1");
    require_positive(cfg.sim.max_settle_time, "sim.max_settle_time_s");
  }

  if (root.contains("output")) {
    const auto& o = root.at("output");
    check_keys(o, "output", {"write_trajectories"});
    cfg.output.write_trajectories =
        get_bool(o, "output", "write_trajectories", cfg.output.write_trajectories);
  }

  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_run_config(ss.str());
}

std::string run_config_to_json(const RunConfig& cfg)
{
  json root;
  root["seed"] = cfg.seed;
  root["body"] = {{"mass_kg", cfg.body.mass},
                  {"side_m", cfg.body.side},
                  {"gravity_m_per_s2", cfg.body.gravity}};
  root["pusher"] = {{"rod_radius_m", cfg.pusher.rod_radius},
                    {"stiffness_n_per_m", cfg.pusher.stiffness},
                    {"damping_n_s_per_m", cfg.pusher.damping},
                    {"damping_ramp_m", cfg.pusher.damping_ramp},
                    {"mu_p", cfg.pusher.mu_p},
                    {"regularization_speed_m_per_s", cfg.pusher.v_eps}};
  root["surface"] = {{"mu_a", cfg.surface.mu_a},
                     {"mu_b", cfg.surface.mu_b},
                     {"m0", cfg.surface.m0},
                     {"n0", cfg.surface.n0},
                     {"phi_rad", cfg.surface.phi}};
  root["patch"] = {{"rows", cfg.patch_rows}, {"cols", cfg.patch_cols}};
  const auto& push = cfg.collection.push;
  root["push"] = {{"contact_point_m", {push.contact_point.x(), push.contact_point.y()}},
                  {"direction", {push.direction.x(), push.direction.y()}},
                  {"distance_m", push.distance},
                  {"speed_m_per_s", push.speed}};
  const auto& col = cfg.collection;
  root["collection"] = {{"ring_offset_m", {col.ring_offset.x(), col.ring_offset.y()}},
                        {"drag_target_m", {col.drag_target.x(), col.drag_target.y()}},
                        {"drag_speed_m_per_s", col.drag_speed},
                        {"cycles_per_batch", col.cycles_per_batch},
                        {"batch_starts_deg", col.batch_starts_deg},
                        {"start_noise_deg", col.start_noise_deg}};
  root["analysis"] = {{"angle_bin_deg", cfg.analysis.angle_bin_deg},
                      {"displacement_bin_m", cfg.analysis.displacement_bin_m},
                      {"fourier_order", cfg.analysis.fourier_order},
                      {"burn_in", cfg.analysis.burn_in}};
  root["sim"] = {{"dt_s", cfg.sim.dt},
                 {"surface_v_eps_m_per_s", cfg.sim.v_eps},
                 {"sample_stride", cfg.sim.sample_stride},
                 {"rest_speed_m_per_s", cfg.sim.rest_speed},
                 {"rest_omega_rad_per_s", cfg.sim.rest_omega},
                 {"rest_steps", cfg.sim.rest_steps},
                 {"max_settle_time_s", cfg.sim.max_settle_time}};
  root["output"] = {{"write_trajectories", cfg.output.write_trajectories}};
  return root.dump(2) + "\n";
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg)
{
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write config file: " + path.string());
  os << run_config_to_json(cfg);
}

std::string ellipse_fragment_json(const EllipseParams& p)
{
  json frag;
  frag["surface"] = {{"mu_a", p.mu_a}, {"mu_b", p.mu_b}, {"m0", p.m0}, {"n0", p.n0},
                     {"phi_rad", p.phi}};
  return frag.dump(2) + "\n";
}

ModelParams make_model(const RunConfig& cfg)
{
  return {cfg.body,
          LimitEllipse(cfg.surface.mu_a, cfg.surface.mu_b, cfg.surface.m0, cfg.surface.n0,
                       cfg.surface.phi),
          ContactPatch::uniform_grid(cfg.body.side, cfg.patch_rows, cfg.patch_cols,
                                     cfg.body.weight()),
          cfg.pusher};
}

}  // namespace pushsim
