// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expensive artifacts (the 600-cycle runs) are shared between
// criteria.

#include "pushsim/analysis.hpp"
#include "pushsim/angles.hpp"
#include "pushsim/collection.hpp"
#include "pushsim/config.hpp"
#include "pushsim/fitting.hpp"
#include "pushsim/io.hpp"

#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pushsim;
using namespace pushsim::testing;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what)
  {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double circular_distance_deg(double a, double b)
{
  return std::abs(wrap_pm_180(a - b));
}

/// Shared artifacts of the default-configuration experiment.
struct Artifacts {
  RunConfig cfg = default_run_config();
  std::vector<CycleRecord> aniso;
  std::vector<CycleRecord> iso;
  std::vector<std::pair<double, double>> map72;

  const std::vector<CycleRecord>& aniso_records()
  {
    if (aniso.empty()) {
      cfg.seed = 20260808;
      cfg.collection.seed = cfg.seed;
      aniso = run_batches(cfg.collection, make_model(cfg), cfg.sim);
    }
    return aniso;
  }

  const std::vector<CycleRecord>& iso_records()
  {
    if (iso.empty()) {
      RunConfig icfg = cfg;
      const double mu = (icfg.surface.mu_a + icfg.surface.mu_b) / 2.0;
      icfg.surface = {mu, mu, 0.0, 0.0, 0.0};
      icfg.seed = 20260808;
      icfg.collection.seed = icfg.seed;
      iso = run_batches(icfg.collection, make_model(icfg), icfg.sim);
    }
    return iso;
  }

  const std::vector<std::pair<double, double>>& cycle_map()
  {
    if (map72.empty()) {
      std::vector<double> grid;
      for (int i = 0; i < 72; ++i) grid.push_back(i * 5.0);
      map72 = cycle_map_estimate(cfg.collection, make_model(cfg), cfg.sim, grid);
    }
    return map72;
  }

  std::vector<PushSample> aniso_samples()
  {
    std::vector<PushSample> s;
    for (const auto& r : aniso_records())
      s.push_back({wrap_360(rad2deg(r.initial.theta)), r.dx, r.dy, rad2deg(r.dtheta)});
    return s;
  }

  Histogram aniso_theta0_hist(int burn_in)
  {
    std::vector<double> theta0;
    for (const auto& r : aniso_records())
      if (r.k >= burn_in) theta0.push_back(wrap_360(rad2deg(r.initial.theta)));
    return histogram(theta0, cfg.analysis.angle_bin_deg, 0.0, 360.0);
  }
};

Artifacts art;

Check criterion_1_max_dissipation_oracle()
{
  Check c;
  std::mt19937_64 rng(424242u);
  double worst_rel = 0.0, worst_residual = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const LimitEllipse e = random_dissipative_ellipse(rng);
    const Eigen::Vector2d v = random_velocity(rng);
    const auto mu = e.max_dissipation_coefficient(v);
    worst_residual = std::max(worst_residual, std::abs(e.residual(mu) - 1.0));
    const double closed = mu.surface.dot(v);
    const double best = brute_force_max_power(e, v, 100'000);
    worst_rel = std::max(worst_rel, std::abs(closed - best) / std::abs(best));
    if (closed < best - 1e-9) {
      c.expect(false, "sampled boundary point beats the closed form");
      break;
    }
  }
  c.expect(worst_rel <= 1e-3, "relative gap " + std::to_string(worst_rel));
  c.expect(worst_residual <= 1e-9, "boundary residual " + std::to_string(worst_residual));
  return c;
}

Check criterion_2_isotropic_reduction()
{
  Check c;
  std::mt19937_64 rng(31337u);
  std::uniform_real_distribution<double> mu_dist(0.05, 1.0);
  std::uniform_real_distribution<double> phi_dist(0.0, kPi);
  std::uniform_real_distribution<double> load(0.0, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const double mu = mu_dist(rng);
    const LimitEllipse e(mu, mu, 0.0, 0.0, phi_dist(rng));
    const Eigen::Vector2d v = random_velocity(rng);
    const double n = load(rng);
    const Eigen::Vector2d f = point_friction_force(e, v, n, 1e-6);
    worst = std::max(worst, (f + mu * n * v.normalized()).norm());
  }
  c.expect(worst <= 1e-12, "max deviation " + std::to_string(worst));
  return c;
}

Check criterion_3_rotation_invariance()
{
  Check c;
  const ModelParams model = ModelParams::with_defaults(RigidBody{}, isotropic_equivalent());
  const RunConfig cfg = default_run_config();

  std::vector<std::vector<IofDelta>> paths;
  for (double deg : {0.0, 60.0, 120.0, 240.0}) {
    BodyState start;
    start.pose.theta = deg2rad(deg);
    const Trajectory traj = simulate_push(start, cfg.collection.push, model, cfg.sim);
    std::vector<Pose> poses;
    for (const auto& s : traj.samples) poses.push_back(s.state.pose);
    paths.push_back(to_iof(poses));
  }
  double worst = 0.0;
  for (std::size_t run = 1; run < paths.size(); ++run) {
    c.expect(std::abs(static_cast<long>(paths[run].size()) -
                      static_cast<long>(paths[0].size())) <= 2,
             "trajectory lengths diverge");
    const std::size_t n = std::min(paths[run].size(), paths[0].size());
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max({worst, std::abs(paths[run][i].dx - paths[0][i].dx),
                        std::abs(paths[run][i].dy - paths[0][i].dy),
                        std::abs(paths[run][i].dtheta - paths[0][i].dtheta)});
    }
  }
  c.expect(worst <= 1e-6, "max pointwise IOF deviation " + std::to_string(worst));
  return c;
}

Check criterion_4_convergence()
{
  Check c;
  const auto& records = art.aniso_records();
  const int cycles = art.cfg.collection.cycles_per_batch;
  const std::size_t batches = art.cfg.collection.batch_starts_deg.size();
  c.expect(records.size() == batches * static_cast<std::size_t>(cycles), "record count");

  std::vector<double> final_theta(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double prev = 0.0;
    for (const auto& r : records) {
      if (r.batch != static_cast<int>(b)) continue;
      const double th = rad2deg(r.initial.theta);
      if (r.k > 50) {
        const double adv = std::abs(th - prev);
        if (adv >= 2.0)
          c.expect(false, "batch " + std::to_string(b) + " advance " + std::to_string(adv) +
                              " deg at k " + std::to_string(r.k));
      }
      prev = th;
      final_theta[b] = th;
    }
  }
  for (std::size_t b = 1; b < batches; ++b) {
    const double d = circular_distance_deg(final_theta[b], final_theta[0]);
    c.expect(d <= art.cfg.analysis.angle_bin_deg,
             "batches " + std::to_string(b) + " and 0 land " + std::to_string(d) + " deg apart");
  }
  return c;
}

Check criterion_5_bias_contrast()
{
  Check c;
  const Histogram aniso = art.aniso_theta0_hist(art.cfg.analysis.burn_in);
  long top = 0;
  for (long n : aniso.counts) top = std::max(top, n);
  const double top_mass = static_cast<double>(top) / static_cast<double>(aniso.total());
  c.expect(top_mass > 0.25, "anisotropic top-bin mass " + std::to_string(top_mass));

  std::vector<double> iso_theta0;
  for (const auto& r : art.iso_records())
    if (r.k >= art.cfg.analysis.burn_in) iso_theta0.push_back(wrap_360(rad2deg(r.initial.theta)));
  const Histogram iso = histogram(iso_theta0, art.cfg.analysis.angle_bin_deg, 0.0, 360.0);
  long iso_top = 0;
  for (long n : iso.counts) iso_top = std::max(iso_top, n);
  const double mean_mass =
      static_cast<double>(iso.total()) / static_cast<double>(iso.counts.size());
  c.expect(static_cast<double>(iso_top) < 3.0 * mean_mass,
           "isotropic top bin " + std::to_string(iso_top) + " vs mean " +
               std::to_string(mean_mass));
  return c;
}

Check criterion_6_map_histogram_correspondence()
{
  Check c;
  const auto fps = find_stable_directions(art.cycle_map());
  std::size_t stable_count = 0;
  const Histogram hist = art.aniso_theta0_hist(art.cfg.analysis.burn_in);
  const auto peaks = hist.peak_bins();
  c.expect(!peaks.empty(), "no histogram peaks");
  for (const auto& fp : fps) {
    if (!fp.stable) continue;
    ++stable_count;
    double best = 360.0;
    for (std::size_t bin : peaks)
      best = std::min(best, circular_distance_deg(fp.theta_deg, hist.center(bin)));
    c.expect(best <= art.cfg.analysis.angle_bin_deg,
             "stable direction " + std::to_string(fp.theta_deg) + " deg is " +
                 std::to_string(best) + " deg from the nearest peak");
  }
  c.expect(stable_count >= 1, "no stable fixed point in the estimated map");
  return c;
}

Check criterion_7_histogram_recreation()
{
  Check c;
  const auto samples = art.aniso_samples();
  const PushLaw law = fit_push_law(samples, art.cfg.analysis.fourier_order);

  std::vector<double> actual, theta0;
  for (const auto& s : samples) {
    actual.push_back(s.dtheta_deg);
    theta0.push_back(s.theta0_deg);
  }
  double lo = actual[0], hi = actual[0];
  for (const auto& s : samples) {
    lo = std::min({lo, s.dtheta_deg, law.eval(Component::dtheta, s.theta0_deg)});
    hi = std::max({hi, s.dtheta_deg, law.eval(Component::dtheta, s.theta0_deg)});
  }
  const double w = art.cfg.analysis.angle_bin_deg;
  lo = std::floor(lo / w) * w;
  hi = std::ceil(hi / w) * w + w;

  const Histogram actual_hist = histogram(actual, w, lo, hi);
  const Histogram predicted = predict_histogram(law, Component::dtheta, theta0, w, lo, hi);
  const double tv = total_variation(predicted, actual_hist);
  c.expect(tv < 0.15, "total variation " + std::to_string(tv));
  return c;
}

Check criterion_8_variance_explanation()
{
  Check c;
  const auto samples = art.aniso_samples();
  const PushLaw law = fit_push_law(samples, art.cfg.analysis.fourier_order);
  const ErrorTable sigma = stddev_table(samples);
  const ErrorTable rmse = rmse_table(samples, law);
  c.expect(rmse.dtheta.value <= 0.6 * sigma.dtheta.value,
           "rmse " + std::to_string(rmse.dtheta.value) + " vs sigma " +
               std::to_string(sigma.dtheta.value));
  return c;
}

Check criterion_9_ellipse_fit_recovery()
{
  Check c;
  const LimitEllipse truth = plywood_ellipse();
  std::vector<Eigen::Vector2d> clean;
  for (int i = 0; i < 100; ++i) clean.push_back(truth.boundary_point(2.0 * kPi * i / 100.0));
  const LimitEllipse exact = fit_limit_ellipse(clean);
  c.expect(std::abs(exact.mu_a() - 0.2545) <= 1e-6, "mu_a");
  c.expect(std::abs(exact.mu_b() - 0.2346) <= 1e-6, "mu_b");
  c.expect(std::abs(exact.m0() - 0.0325) <= 1e-6, "m0");
  c.expect(std::abs(exact.n0() - 0.0082) <= 1e-6, "n0");
  c.expect(std::abs(exact.phi() - 2.6175) <= 1e-6, "phi");

  std::mt19937_64 rng(987654321u);
  std::normal_distribution<double> noise(0.0, 0.005);
  std::vector<Eigen::Vector2d> noisy;
  for (int i = 0; i < 500; ++i) {
    const Eigen::Vector2d p = truth.boundary_point(2.0 * kPi * i / 500.0);
    noisy.emplace_back(p.x() + noise(rng), p.y() + noise(rng));
  }
  const LimitEllipse fit = fit_limit_ellipse(noisy);
  c.expect(std::abs(fit.mu_a() - truth.mu_a()) <= 0.02 * truth.mu_a(), "noisy mu_a");
  c.expect(std::abs(fit.mu_b() - truth.mu_b()) <= 0.02 * truth.mu_b(), "noisy mu_b");
  c.expect(std::abs(fit.m0() - truth.m0()) <= 0.01, "noisy m0");
  c.expect(std::abs(fit.n0() - truth.n0()) <= 0.01, "noisy n0");
  const double dphi = std::abs(wrap_pm_pi(2.0 * (fit.phi() - truth.phi()))) / 2.0;
  c.expect(dphi <= 0.02, "noisy phi off by " + std::to_string(dphi));
  return c;
}

Check criterion_10_pusher_mu_identification()
{
  Check c;
  ModelParams model = ModelParams::with_defaults(RigidBody{}, plywood_ellipse());
  model.pusher.mu_p = 0.15;
  SimParams sim;
  PushSpec spec;
  spec.contact_point = {-0.0225, -0.045};
  const Trajectory traj = simulate_push(BodyState{}, spec, model, sim);

  std::vector<ForceTraceSample> trace;
  for (const auto& s : traj.samples) {
    trace.push_back({s.t, s.ftau, s.fn, s.slip_speed});
    if (s.fn > 1e-9)
      c.expect(std::abs(s.ftau / s.fn) <= 0.15 + 1e-9, "force ratio escapes the envelope");
  }
  const PusherMuEstimate est = estimate_pusher_mu(trace);
  c.expect(std::abs(est.mu_p - 0.15) <= 0.005,
           "estimate " + std::to_string(est.mu_p) + " off 0.15");
  return c;
}

Check criterion_11_determinism()
{
  Check c;
  const fs::path dir = fs::temp_directory_path() / "pushsim_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);

  RunConfig cfg = default_run_config();
  cfg.seed = 5150;
  cfg.collection.seed = cfg.seed;
  cfg.collection.cycles_per_batch = 3;
  cfg.collection.batch_starts_deg = {0.0, 120.0};
  save_run_config(dir / "config.json", cfg);

  const std::string base = std::string(PUSHSIM_CLI_PATH) + " simulate --config " +
                           (dir / "config.json").string();
  const int r1 =
      std::system((base + " --out " + (dir / "a").string() + " >/dev/null 2>&1").c_str());
  const int r2 =
      std::system((base + " --out " + (dir / "b").string() + " >/dev/null 2>&1").c_str());
  c.expect(WEXITSTATUS(r1) == 0 && WEXITSTATUS(r2) == 0, "CLI run failed");

  auto slurp = [](const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(dir / "a" / "cycles.csv");
  c.expect(!a.empty(), "empty records");
  c.expect(a == slurp(dir / "b" / "cycles.csv"), "record CSVs differ between runs");
  return c;
}

Check criterion_12_analysis_unit_suite()
{
  Check c;
  // Unwrap.
  const auto unwrapped = unwrap_angles(std::vector<double>{170.0, -170.0});
  c.expect(unwrapped[0] == 170.0 && std::abs(unwrapped[1] - 190.0) < 1e-12, "unwrap crossing");

  // IOF.
  const IofDelta d = to_iof({{1.0, 3.0}, deg2rad(90.0)}, {{1.0, 2.0}, deg2rad(90.0)});
  c.expect(std::abs(d.dx - 1.0) < 1e-12 && std::abs(d.dy) < 1e-12, "IOF 90-degree case");

  // Histogram.
  const Histogram h = histogram(std::vector<double>{0.0, 0.0, 1.0}, 1.0, 0.0, 2.0);
  c.expect(h.counts[0] == 2 && h.counts[1] == 1, "histogram counts");

  // Sigma and RMSE identities.
  const std::vector<PushSample> two{{0.0, 0.0, 0.0, 0.0}, {180.0, 0.0, 0.0, 2.0}};
  const ErrorTable sigma = stddev_table(two);
  c.expect(std::abs(sigma.dtheta.value - 1.0) < 1e-12 && sigma.dtheta.percent.has_value() &&
               std::abs(*sigma.dtheta.percent - 100.0) < 1e-12,
           "two-point sigma");
  PushLaw constant;
  constant.order = 0;
  constant.coef_dx = constant.coef_dy = Eigen::VectorXd::Zero(1);
  constant.coef_dtheta = Eigen::VectorXd::Constant(1, 1.0);
  const ErrorTable rmse = rmse_table(two, constant);
  c.expect(std::abs(rmse.dtheta.value - sigma.dtheta.value) < 1e-12, "rmse equals sigma");

  // Analytic fixed points of f(theta) = theta - 0.5 sin(theta).
  std::vector<std::pair<double, double>> map;
  for (int i = 0; i < 720; ++i) {
    const double th = i * 0.5;
    map.emplace_back(th, th - rad2deg(0.5 * std::sin(deg2rad(th))));
  }
  const auto fps = find_stable_directions(map);
  c.expect(fps.size() == 2, "fixed point count");
  if (fps.size() == 2) {
    c.expect(std::abs(fps[0].theta_deg - 0.0) <= 1e-6 && fps[0].stable, "stable point at 0");
    c.expect(std::abs(fps[1].theta_deg - 180.0) <= 1e-6 && !fps[1].stable,
             "unstable point at 180");
    c.expect(std::abs(fps[0].slope - 0.5) < 1e-3 && std::abs(fps[1].slope - 1.5) < 1e-3,
             "slopes");
  }
  return c;
}

struct Criterion {
  int number;
  const char* name;
  std::function<Check()> fn;
  double budget_s;  // 0 = no stated runtime budget
};

}  // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {1, "max-dissipation boundary oracle", criterion_1_max_dissipation_oracle, 30.0},
      {2, "isotropic reduction of the point force", criterion_2_isotropic_reduction, 0.0},
      {3, "rotation invariance of isotropic IOF pushes", criterion_3_rotation_invariance, 60.0},
      {4, "convergence to a stable direction within 50 cycles", criterion_4_convergence, 600.0},
      {5, "bias contrast between anisotropic and isotropic runs", criterion_5_bias_contrast, 0.0},
      {6, "cycle-map fixed points match histogram peaks", criterion_6_map_histogram_correspondence,
       0.0},
      {7, "histogram recreation through the fitted law", criterion_7_histogram_recreation, 0.0},
      {8, "fitted law explains the spread (RMSE vs sigma)", criterion_8_variance_explanation, 0.0},
      {9, "limit-ellipse recovery, clean and noisy", criterion_9_ellipse_fit_recovery, 0.0},
      {10, "pusher friction identification in closed loop", criterion_10_pusher_mu_identification,
       0.0},
      {11, "byte-identical records for identical config and seed", criterion_11_determinism, 0.0},
      {12, "analysis operation unit examples", criterion_12_analysis_unit_suite, 0.0},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = cr.fn();
    } catch (const std::exception& ex) {
      result.ok = false;
      result.detail = std::string("exception: ") + ex.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.budget_s > 0.0 && elapsed > cr.budget_s) {
      result.ok = false;
      result.detail += (result.detail.empty() ? "" : "; ") + std::string("over runtime budget ") +
                       std::to_string(cr.budget_s) + " s";
    }
    std::printf("[%2d] %s  (%.1f s)  %s%s%s\n", cr.number, result.ok ? "PASS" : "FAIL", elapsed,
                cr.name, result.detail.empty() ? "" : " -- ", result.detail.c_str());
    std::fflush(stdout);
    if (!result.ok) ++failures;
  }

  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
