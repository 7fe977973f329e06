// Command line front end: reproducible simulation, analysis and fitting runs.
// Every run writes a manifest echoing the exact inputs next to its outputs.

#include "pushsim/analysis.hpp"
#include "pushsim/angles.hpp"
#include "pushsim/collection.hpp"
#include "pushsim/config.hpp"
#include "pushsim/io.hpp"
#include "pushsim/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pushsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;    // bad invocation, config, missing input
constexpr int kExitRuntime = 2;  // simulation / numerical / data failures

/// Usage-class failure (exit 1), as opposed to runtime failures (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path require_input(const std::string& path)
{
  if (!fs::exists(path)) throw UsageError("input file not found: " + path);
  return path;
}

fs::path prepare_out_dir(const std::string& out)
{
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + out + ": " + ec.message());
  return dir;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& inputs,
                    const std::vector<std::string>& outputs)
{
  json m;
  m["tool"] = "pushsim";
  m["version"] = kVersion;
  m["command"] = command;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  std::ofstream os(dir / "manifest.json");
  os << m.dump(2) << "\n";
}

RunConfig load_config_with_seed(const std::string& path, std::optional<std::uint64_t> seed)
{
  RunConfig cfg = load_run_config(require_input(path));
  if (seed) {
    cfg.seed = *seed;
    cfg.collection.seed = *seed;
  }
  return cfg;
}

std::vector<double> parse_grid(const std::string& spec)
{
  double start = 0.0, stop = 360.0, step = 5.0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
    throw UsageError("bad --grid, expected START:STOP:STEP, got '" + spec + "'");
  if (!(step > 0.0) || !(stop > start)) throw UsageError("bad --grid range '" + spec + "'");
  std::vector<double> grid;
  for (double a = start; a < stop - 1e-12; a += step) grid.push_back(a);
  if (grid.empty()) throw UsageError("empty --grid '" + spec + "'");
  return grid;
}

int cmd_simulate(const std::string& config_path, const std::string& out,
                 std::optional<std::uint64_t> seed)
{
  const RunConfig cfg = load_config_with_seed(config_path, seed);
  const fs::path dir = prepare_out_dir(out);
  const ModelParams model = make_model(cfg);

  std::vector<std::string> outputs{"cycles.csv"};
  CycleSink sink;
  if (cfg.output.write_trajectories) {
    sink = [&](const CycleResult& res) {
      char name[64];
      std::snprintf(name, sizeof name, "trajectory_b%d_k%03d_push.csv", res.record.batch,
                    res.record.k);
      write_trajectory_csv(dir / name, res.push);
      outputs.emplace_back(name);
      std::snprintf(name, sizeof name, "trajectory_b%d_k%03d_drag.csv", res.record.batch,
                    res.record.k);
      write_trajectory_csv(dir / name, res.drag);
      outputs.emplace_back(name);
      std::snprintf(name, sizeof name, "force_trace_b%d_k%03d.csv", res.record.batch,
                    res.record.k);
      write_force_trace_csv(dir / name, res.push);
      outputs.emplace_back(name);
    };
  }

  const auto records = run_batches(cfg.collection, model, cfg.sim, sink);
  write_cycle_csv(dir / "cycles.csv", records);

  write_manifest(dir, "simulate",
                 {{"config_path", config_path}, {"seed", cfg.seed},
                  {"config", json::parse(run_config_to_json(cfg))}},
                 outputs);
  std::cout << "wrote " << records.size() << " cycle records to " << (dir / "cycles.csv").string()
            << "\n";
  return kExitOk;
}

int cmd_analyze(const std::string& records_path, const std::string& out, double bins_deg,
                int order, int burn_in)
{
  const auto rows = read_cycle_csv(require_input(records_path));
  if (rows.empty()) throw CsvError("no records in " + records_path);
  const fs::path dir = prepare_out_dir(out);

  // Initial-orientation histogram after burn-in, wrapped to [0, 360).
  std::vector<double> theta0_wrapped;
  for (const auto& r : rows)
    if (r.k >= burn_in) theta0_wrapped.push_back(wrap_360(r.theta0_deg));
  Histogram theta0_hist = histogram(theta0_wrapped, bins_deg, 0.0, 360.0);
  write_histogram_csv(dir / "theta0_hist.csv", theta0_hist, "theta0_deg");

  // Push-outcome samples over the full record stream.
  std::vector<PushSample> samples;
  samples.reserve(rows.size());
  for (const auto& r : rows) samples.push_back(to_push_sample(r));

  double lo = samples[0].dtheta_deg, hi = samples[0].dtheta_deg;
  for (const auto& s : samples) {
    lo = std::min(lo, s.dtheta_deg);
    hi = std::max(hi, s.dtheta_deg);
  }

  const PushLaw law = fit_push_law(samples, order);
  write_push_law_csv(dir / "push_law.csv", law);

  std::vector<double> theta0_all, dtheta_all, predicted;
  for (const auto& s : samples) {
    theta0_all.push_back(s.theta0_deg);
    dtheta_all.push_back(s.dtheta_deg);
    const double p = law.eval(Component::dtheta, s.theta0_deg);
    predicted.push_back(p);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  lo = std::floor(lo / bins_deg) * bins_deg;
  hi = std::ceil(hi / bins_deg) * bins_deg + bins_deg;
  write_histogram_csv(dir / "dtheta_hist.csv", histogram(dtheta_all, bins_deg, lo, hi),
                      "dtheta_deg");
  write_histogram_csv(dir / "predicted_dtheta_hist.csv", histogram(predicted, bins_deg, lo, hi),
                      "dtheta_deg");

  // Unwrapped theta0 series, the raw material of the winding plots.
  {
    std::ofstream os(dir / "theta0_series.csv");
    os << "batch,k,theta0_deg_unwrapped\n";
    for (const auto& r : rows)
      os << r.batch << ',' << r.k << ',' << format_full(r.theta0_deg) << '\n';
  }

  write_error_table_csv(dir / "stddev_table.csv", "sigma", stddev_table(samples));
  write_error_table_csv(dir / "rmse_table.csv", "rmse", rmse_table(samples, law));

  // Empirical cycle map from consecutive records; may legitimately have no
  // fixed points (constant advance) or be degenerate.
  std::vector<RecordPair> series;
  for (const auto& r : rows) series.push_back({r.batch, r.k, r.theta0_deg});
  std::vector<FixedPoint> fps;
  const auto map_samples = map_samples_from_series(series);
  if (map_samples.size() >= 2) {
    try {
      fps = find_stable_directions(map_samples);
    } catch (const std::runtime_error& ex) {
      std::cerr << "stable-direction scan: " << ex.what() << "\n";
    }
  }
  write_stable_directions_csv(dir / "stable_directions.csv", fps);

  write_manifest(dir, "analyze",
                 {{"records_path", records_path}, {"bins_deg", bins_deg}, {"order", order},
                  {"burn_in", burn_in}},
                 {"theta0_hist.csv", "dtheta_hist.csv", "predicted_dtheta_hist.csv",
                  "theta0_series.csv", "push_law.csv", "stddev_table.csv", "rmse_table.csv",
                  "stable_directions.csv"});
  std::cout << "analyzed " << rows.size() << " records; " << fps.size()
            << " fixed point(s) found\n";
  return kExitOk;
}

int cmd_fit_ellipse(const std::string& input, const std::string& out)
{
  const auto samples = read_mu_samples_csv(require_input(input));
  const fs::path dir = prepare_out_dir(out);
  try {
    const LimitEllipse e = fit_limit_ellipse(samples);
    const EllipseParams p{e.mu_a(), e.mu_b(), e.m0(), e.n0(), e.phi()};
    std::ofstream os(dir / "fitted_ellipse.json");
    os << ellipse_fragment_json(p);
    write_manifest(dir, "fit ellipse",
                   {{"input", input}, {"samples", samples.size()}}, {"fitted_ellipse.json"});
    std::cout << "mu_a=" << format_full(p.mu_a) << " mu_b=" << format_full(p.mu_b)
              << " m0=" << format_full(p.m0) << " n0=" << format_full(p.n0)
              << " phi_rad=" << format_full(p.phi) << "\n";
    return kExitOk;
  } catch (const EllipseFitError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    if (ex.fitted()) {
      const auto& p = *ex.fitted();
      std::cerr << "rejected fit: mu_a=" << p.mu_a << " mu_b=" << p.mu_b << " m0=" << p.m0
                << " n0=" << p.n0 << " phi_rad=" << p.phi << "\n";
    }
    return kExitRuntime;
  }
}

int cmd_fit_pusher_mu(const std::string& input, const std::string& out)
{
  const auto trace = read_force_trace_csv(require_input(input));
  const fs::path dir = prepare_out_dir(out);
  const PusherMuEstimate est = estimate_pusher_mu(trace);

  json frag;
  frag["pusher"] = {{"mu_p", est.mu_p}};
  std::ofstream os(dir / "fitted_pusher_mu.json");
  os << frag.dump(2) << "\n";
  write_manifest(dir, "fit pusher-mu",
                 {{"input", input},
                  {"sliding_samples", est.sliding_count},
                  {"sticking_samples", est.sticking_count},
                  {"stick_fraction", est.stick_fraction}},
                 {"fitted_pusher_mu.json"});
  std::cout << "mu_p=" << format_full(est.mu_p) << " stick_fraction="
            << format_full(est.stick_fraction) << "\n";
  return kExitOk;
}

int cmd_cycle_map(const std::string& config_path, const std::string& out,
                  const std::string& grid_spec, std::optional<std::uint64_t> seed)
{
  const RunConfig cfg = load_config_with_seed(config_path, seed);
  const std::vector<double> grid = parse_grid(grid_spec);
  const fs::path dir = prepare_out_dir(out);
  const ModelParams model = make_model(cfg);

  const auto map = cycle_map_estimate(cfg.collection, model, cfg.sim, grid);
  write_map_csv(dir / "cycle_map.csv", map);

  std::vector<FixedPoint> fps;
  if (map.size() >= 2) {
    try {
      fps = find_stable_directions(map);
    } catch (const std::runtime_error& ex) {
      std::cerr << "stable-direction scan: " << ex.what() << "\n";
    }
  }
  write_stable_directions_csv(dir / "stable_directions.csv", fps);

  write_manifest(dir, "cycle-map",
                 {{"config_path", config_path}, {"seed", cfg.seed}, {"grid", grid_spec},
                  {"config", json::parse(run_config_to_json(cfg))}},
                 {"cycle_map.csv", "stable_directions.csv"});
  std::cout << "sampled " << map.size() << " grid points; " << fps.size()
            << " fixed point(s) found\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"planar pushing simulator and analysis toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir, records_path, input_path;
  std::string grid_spec = "0:360:5";
  std::optional<std::uint64_t> seed;
  double bins_deg = 4.0;
  int order = 8;
  int burn_in = 50;

  auto* sim = app.add_subcommand("simulate", "run the push/reposition collection loop");
  sim->add_option("--config", config_path, "config file (JSON)")->required();
  sim->add_option("--out", out_dir, "output directory")->required();
  sim->add_option("--seed", seed, "override the config seed");

  auto* ana = app.add_subcommand("analyze", "analyze a cycle-record CSV");
  ana->add_option("records", records_path, "cycle-record CSV")->required();
  ana->add_option("--out", out_dir, "output directory")->required();
  ana->add_option("--bins", bins_deg, "angle bin width (degrees)");
  ana->add_option("--order", order, "Fourier order of the fitted law");
  ana->add_option("--burn-in", burn_in, "cycles dropped from the theta0 histogram");

  auto* fit = app.add_subcommand("fit", "identify model parameters from data");
  fit->require_subcommand(1);
  auto* fit_e = fit->add_subcommand("ellipse", "fit the limit ellipse to mu samples");
  fit_e->add_option("input", input_path, "CSV with mu_x,mu_y columns")->required();
  fit_e->add_option("--out", out_dir, "output directory")->required();
  auto* fit_p = fit->add_subcommand("pusher-mu", "estimate mu_p from a force trace");
  fit_p->add_option("input", input_path, "CSV with t,Ftau,Fn,vt columns")->required();
  fit_p->add_option("--out", out_dir, "output directory")->required();

  auto* cmap = app.add_subcommand("cycle-map", "sample the cycle map on a grid");
  cmap->add_option("--config", config_path, "config file (JSON)")->required();
  cmap->add_option("--out", out_dir, "output directory")->required();
  cmap->add_option("--grid", grid_spec, "grid as START:STOP:STEP degrees");
  cmap->add_option("--seed", seed, "override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir, seed);
    if (ana->parsed()) return cmd_analyze(records_path, out_dir, bins_deg, order, burn_in);
    if (fit->parsed() && fit_e->parsed()) return cmd_fit_ellipse(input_path, out_dir);
    if (fit->parsed() && fit_p->parsed()) return cmd_fit_pusher_mu(input_path, out_dir);
    if (cmap->parsed()) return cmd_cycle_map(config_path, out_dir, grid_spec, seed);
  } catch (const UsageError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
