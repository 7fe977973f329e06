#include "pushsim/analysis.hpp"

#include "pushsim/angles.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pushsim {

IofDelta to_iof(const Pose& pose, const Pose& initial)
{
  const Eigen::Vector2d d = rotated(pose.p - initial.p, -initial.theta);
  return {d.x(), d.y(), pose.theta - initial.theta};
}

Pose from_iof(const IofDelta& delta, const Pose& initial)
{
  return {initial.p + rotated({delta.dx, delta.dy}, initial.theta), initial.theta + delta.dtheta};
}

std::vector<IofDelta> to_iof(std::span<const Pose> path)
{
  std::vector<IofDelta> out;
  out.reserve(path.size());
  if (path.empty()) return out;
  const Pose& first = path.front();
  for (const Pose& p : path) out.push_back(to_iof(p, first));
  return out;
}

std::vector<double> unwrap_angles(std::span<const double> wrapped_deg)
{
  std::vector<double> out;
  out.reserve(wrapped_deg.size());
  if (wrapped_deg.empty()) return out;
  out.push_back(wrapped_deg.front());
  for (std::size_t i = 1; i < wrapped_deg.size(); ++i)
    out.push_back(out.back() + wrap_pm_180(wrapped_deg[i] - wrapped_deg[i - 1]));
  return out;
}

long Histogram::total() const
{
  return std::accumulate(counts.begin(), counts.end(), 0L) + underflow + overflow;
}

std::vector<std::size_t> Histogram::peak_bins() const
{
  std::vector<std::size_t> peaks;
  if (counts.empty()) return peaks;
  const long max_count = *std::max_element(counts.begin(), counts.end());
  if (max_count == 0) return peaks;
  const std::size_t n = counts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const long c = counts[i];
    if (2 * c < max_count) continue;
    if (c >= counts[(i + n - 1) % n] && c >= counts[(i + 1) % n]) peaks.push_back(i);
  }
  return peaks;
}

Histogram histogram(std::span<const double> values, double bin_width, double lo, double hi)
{
  if (!(bin_width > 0.0)) throw std::invalid_argument("histogram: bin width must be positive");
  if (!(hi > lo)) throw std::invalid_argument("histogram: empty range");

  Histogram h;
  h.lo = lo;
  h.bin_width = bin_width;
  const auto nbins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-12));
  h.counts.assign(std::max<std::size_t>(nbins, 1), 0);

  for (double v : values) {
    if (v < lo) {
      ++h.underflow;
      continue;
    }
    const auto i = static_cast<std::size_t>((v - lo) / bin_width);
    if (i >= h.counts.size())
      ++h.overflow;
    else
      ++h.counts[i];
  }
  return h;
}

namespace {

Eigen::MatrixXd fourier_design(std::span<const double> theta_deg, int order)
{
  const auto n = static_cast<Eigen::Index>(theta_deg.size());
  Eigen::MatrixXd a(n, 2 * order + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double th = deg2rad(theta_deg[i]);
    a(i, 0) = 1.0;
    for (int k = 1; k <= order; ++k) {
      a(i, 2 * k - 1) = std::cos(k * th);
      a(i, 2 * k) = std::sin(k * th);
    }
  }
  return a;
}

double eval_series(const Eigen::VectorXd& coef, double theta_deg)
{
  const double th = deg2rad(theta_deg);
  double y = coef(0);
  const int order = static_cast<int>((coef.size() - 1) / 2);
  for (int k = 1; k <= order; ++k)
    y += coef(2 * k - 1) * std::cos(k * th) + coef(2 * k) * std::sin(k * th);
  return y;
}

double rms(const Eigen::VectorXd& r)
{
  return r.size() == 0 ? 0.0 : std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
}

}  // namespace

double PushLaw::eval(Component c, double theta0_deg) const
{
  switch (c) {
    case Component::dx: return eval_series(coef_dx, theta0_deg);
    case Component::dy: return eval_series(coef_dy, theta0_deg);
    case Component::dtheta: return eval_series(coef_dtheta, theta0_deg);
  }
  return 0.0;
}

PushLaw fit_push_law(std::span<const PushSample> records, int order)
{
  if (order < 0) throw std::invalid_argument("fit_push_law: negative order");
  const auto n = static_cast<Eigen::Index>(records.size());
  const Eigen::Index cols = 2 * static_cast<Eigen::Index>(order) + 1;
  if (n < cols)
    throw std::runtime_error("fit_push_law: need at least " + std::to_string(cols) +
                             " samples for order " + std::to_string(order));

  std::vector<double> theta(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) theta[i] = records[i].theta0_deg;
  const Eigen::MatrixXd a = fourier_design(theta, order);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (svd.rank() < cols)
    throw std::runtime_error(
        "fit_push_law: rank-deficient design (insufficient angular coverage): rank " +
        std::to_string(svd.rank()) + " < " + std::to_string(cols));

  Eigen::VectorXd bx(n), by(n), bt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    bx(i) = records[static_cast<std::size_t>(i)].dx;
    by(i) = records[static_cast<std::size_t>(i)].dy;
    bt(i) = records[static_cast<std::size_t>(i)].dtheta_deg;
  }

  PushLaw law;
  law.order = order;
  law.coef_dx = svd.solve(bx);
  law.coef_dy = svd.solve(by);
  law.coef_dtheta = svd.solve(bt);
  law.rmse_dx = rms(a * law.coef_dx - bx);
  law.rmse_dy = rms(a * law.coef_dy - by);
  law.rmse_dtheta = rms(a * law.coef_dtheta - bt);
  return law;
}

Histogram predict_histogram(const PushLaw& law, Component c,
                            std::span<const double> theta0_deg, double bin_width, double lo,
                            double hi)
{
  if (theta0_deg.empty()) throw std::invalid_argument("predict_histogram: no samples");
  std::vector<double> predicted;
  predicted.reserve(theta0_deg.size());
  for (double th : theta0_deg) predicted.push_back(law.eval(c, th));
  return histogram(predicted, bin_width, lo, hi);
}

namespace {

ErrorEntry sigma_entry(std::span<const PushSample> records, double (*get)(const PushSample&))
{
  ErrorEntry e;
  const double n = static_cast<double>(records.size());
  for (const auto& r : records) e.mean += get(r) / n;
  double var = 0.0;
  for (const auto& r : records) {
    const double d = get(r) - e.mean;
    var += d * d / n;  // population variance
  }
  e.value = std::sqrt(var);
  if (e.mean != 0.0) e.percent = 100.0 * e.value / std::abs(e.mean);
  return e;
}

ErrorEntry rmse_entry(std::span<const PushSample> records, const PushLaw& law, Component c,
                      double (*get)(const PushSample&))
{
  ErrorEntry e;
  const double n = static_cast<double>(records.size());
  double sq = 0.0;
  for (const auto& r : records) {
    e.mean += get(r) / n;
    const double d = get(r) - law.eval(c, r.theta0_deg);
    sq += d * d / n;
  }
  e.value = std::sqrt(sq);
  if (e.mean != 0.0) e.percent = 100.0 * e.value / std::abs(e.mean);
  return e;
}

}  // namespace

ErrorTable stddev_table(std::span<const PushSample> records)
{
  if (records.size() < 2) throw std::invalid_argument("stddev_table: need at least 2 records");
  ErrorTable t;
  t.dtheta = sigma_entry(records, [](const PushSample& r) { return r.dtheta_deg; });
  t.dx = sigma_entry(records, [](const PushSample& r) { return r.dx; });
  t.dy = sigma_entry(records, [](const PushSample& r) { return r.dy; });
  return t;
}

ErrorTable rmse_table(std::span<const PushSample> records, const PushLaw& law)
{
  if (records.empty()) throw std::invalid_argument("rmse_table: no records");
  ErrorTable t;
  t.dtheta = rmse_entry(records, law, Component::dtheta,
                        [](const PushSample& r) { return r.dtheta_deg; });
  t.dx = rmse_entry(records, law, Component::dx, [](const PushSample& r) { return r.dx; });
  t.dy = rmse_entry(records, law, Component::dy, [](const PushSample& r) { return r.dy; });
  return t;
}

std::vector<FixedPoint> find_stable_directions(
    std::span<const std::pair<double, double>> map_samples)
{
  if (map_samples.size() < 2)
    throw std::invalid_argument("find_stable_directions: need at least 2 samples");

  const std::size_t n = map_samples.size();
  std::vector<double> theta(n), disp(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = map_samples[i].first;
    disp[i] = wrap_pm_180(map_samples[i].second - map_samples[i].first);
    if (i > 0 && !(theta[i] > theta[i - 1]))
      throw std::invalid_argument("find_stable_directions: samples must be sorted by theta");
  }

  bool all_zero = true;
  for (double d : disp)
    if (std::abs(d) > 1e-9) all_zero = false;
  if (all_zero)
    throw std::runtime_error(
        "find_stable_directions: map is the identity; every angle is a fixed point");

  std::vector<FixedPoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double t0 = theta[i];
    const double t1 = j == 0 ? theta[j] + 360.0 : theta[j];
    const double d0 = disp[i];
    const double d1 = disp[j];
    const double dt = t1 - t0;
    if (!(dt > 0.0)) continue;
    // A jump near +-360 between neighbors is the wrap branch cut, not a root.
    if (std::abs(d1 - d0) > 180.0) continue;

    const double slope = 1.0 + (d1 - d0) / dt;
    if (d0 == 0.0) {
      out.push_back({wrap_360(t0), slope, std::abs(slope) < 1.0});
      continue;
    }
    if (d0 * d1 >= 0.0) continue;

    // Bisection on the linear interpolant of the displacement.
    double a = t0, b = t1, da = d0;
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
      const double m = 0.5 * (a + b);
      const double dm = d0 + (d1 - d0) * (m - t0) / dt;
      if (dm == 0.0) {
        a = b = m;
        break;
      }
      if ((da < 0.0) == (dm < 0.0)) {
        a = m;
        da = dm;
      } else {
        b = m;
      }
    }
    out.push_back({wrap_360(0.5 * (a + b)), slope, std::abs(slope) < 1.0});
  }

  std::sort(out.begin(), out.end(),
            [](const FixedPoint& x, const FixedPoint& y) { return x.theta_deg < y.theta_deg; });
  return out;
}

std::vector<std::pair<double, double>> map_samples_from_series(std::span<const RecordPair> series)
{
  std::vector<std::pair<double, double>> samples;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    if (series[i].batch != series[i + 1].batch || series[i + 1].k != series[i].k + 1) continue;
    const double th = wrap_360(series[i].theta0_deg_unwrapped);
    const double advance = series[i + 1].theta0_deg_unwrapped - series[i].theta0_deg_unwrapped;
    samples.emplace_back(th, th + advance);
  }
  std::sort(samples.begin(), samples.end());

  // Collapse near-identical abscissae (repeated visits to a stable direction).
  std::vector<std::pair<double, double>> out;
  for (const auto& s : samples) {
    if (!out.empty() && s.first - out.back().first < 1e-9) {
      out.back().second = 0.5 * (out.back().second + s.second);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

double total_variation(const Histogram& a, const Histogram& b)
{
  if (a.counts.size() != b.counts.size() || a.lo != b.lo || a.bin_width != b.bin_width)
    throw std::invalid_argument("total_variation: histogram layouts differ");
  const double ta = static_cast<double>(a.total());
  const double tb = static_cast<double>(b.total());
  if (ta == 0.0 || tb == 0.0) throw std::invalid_argument("total_variation: empty histogram");
  double tv = std::abs(a.underflow / ta - b.underflow / tb) +
              std::abs(a.overflow / ta - b.overflow / tb);
  for (std::size_t i = 0; i < a.counts.size(); ++i)
    tv += std::abs(a.counts[i] / ta - b.counts[i] / tb);
  return tv / 2.0;
}

}  // namespace pushsim
