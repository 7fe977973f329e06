#include "pushsim/io.hpp"

#include "pushsim/angles.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pushsim {

std::string format_full(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path)
{
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  return is;
}

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& field, std::size_t row, const std::string& column)
{
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw CsvError("bad numeric field at row " + std::to_string(row) + ", column '" + column +
                   "': '" + field + "'");
  return v;
}

long parse_long(const std::string& field, std::size_t row, const std::string& column)
{
  long v = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw CsvError("bad integer field at row " + std::to_string(row) + ", column '" + column +
                   "': '" + field + "'");
  return v;
}

/// Reads a CSV with the exact expected header; returns rows of fields.
std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path,
                                                 const std::vector<std::string>& header)
{
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw CsvError("empty file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto head = split_csv(line);
  if (head != header) {
    std::string expected;
    for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
    throw CsvError("unexpected header in " + path.string() + ": got '" + line + "', expected '" +
                   expected + "'");
  }

  std::vector<std::vector<std::string>> rows;
  std::size_t row_index = 1;
  while (std::getline(is, line)) {
    ++row_index;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != header.size())
      throw CsvError("row " + std::to_string(row_index) + " of " + path.string() + " has " +
                     std::to_string(fields.size()) + " fields, expected " +
                     std::to_string(header.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj)
{
  auto os = open_out(path);
  os << "t,x,y,theta,vx,vy,omega,pusher_x,pusher_y,Fn,Ftau\n";
  for (const auto& s : traj.samples) {
    os << format_full(s.t) << ',' << format_full(s.state.pose.p.x()) << ','
       << format_full(s.state.pose.p.y()) << ',' << format_full(s.state.pose.theta) << ','
       << format_full(s.state.twist.v.x()) << ',' << format_full(s.state.twist.v.y()) << ','
       << format_full(s.state.twist.omega) << ',' << format_full(s.pusher_pos.x()) << ','
       << format_full(s.pusher_pos.y()) << ',' << format_full(s.fn) << ','
       << format_full(s.ftau) << '\n';
  }
}

void write_force_trace_csv(const std::filesystem::path& path, const Trajectory& traj)
{
  auto os = open_out(path);
  os << "t,Ftau,Fn,vt\n";
  for (const auto& s : traj.samples)
    os << format_full(s.t) << ',' << format_full(s.ftau) << ',' << format_full(s.fn) << ','
       << format_full(s.slip_speed) << '\n';
}

std::vector<ForceTraceSample> read_force_trace_csv(const std::filesystem::path& path)
{
  static const std::vector<std::string> header{"t", "Ftau", "Fn", "vt"};
  const auto rows = read_table(path, header);
  std::vector<ForceTraceSample> out;
  out.reserve(rows.size());
  std::size_t row = 1;
  for (const auto& r : rows) {
    ++row;
    out.push_back({parse_double(r[0], row, "t"), parse_double(r[1], row, "Ftau"),
                   parse_double(r[2], row, "Fn"), parse_double(r[3], row, "vt")});
  }
  return out;
}

void write_cycle_csv(const std::filesystem::path& path, const std::vector<CycleRecord>& records)
{
  auto os = open_out(path);
  os << "batch,k,x0,y0,theta0_deg_unwrapped,dx,dy,dtheta_deg,x_post,y_post,"
        "theta_post_deg_unwrapped\n";
  for (const auto& r : records) {
    os << r.batch << ',' << r.k << ',' << format_full(r.initial.p.x()) << ','
       << format_full(r.initial.p.y()) << ',' << format_full(rad2deg(r.initial.theta)) << ','
       << format_full(r.dx) << ',' << format_full(r.dy) << ',' << format_full(rad2deg(r.dtheta))
       << ',' << format_full(r.post_drag.p.x()) << ',' << format_full(r.post_drag.p.y()) << ','
       << format_full(rad2deg(r.post_drag.theta)) << '\n';
  }
}

std::vector<CycleRow> read_cycle_csv(const std::filesystem::path& path)
{
  static const std::vector<std::string> header{
      "batch", "k", "x0", "y0", "theta0_deg_unwrapped", "dx", "dy", "dtheta_deg",
      "x_post", "y_post", "theta_post_deg_unwrapped"};
  const auto rows = read_table(path, header);
  std::vector<CycleRow> out;
  out.reserve(rows.size());
  std::size_t row = 1;
  for (const auto& r : rows) {
    ++row;
    CycleRow c;
    c.batch = static_cast<int>(parse_long(r[0], row, "batch"));
    c.k = static_cast<int>(parse_long(r[1], row, "k"));
    c.x0 = parse_double(r[2], row, "x0");
    c.y0 = parse_double(r[3], row, "y0");
    c.theta0_deg = parse_double(r[4], row, "theta0_deg_unwrapped");
    c.dx = parse_double(r[5], row, "dx");
    c.dy = parse_double(r[6], row, "dy");
    c.dtheta_deg = parse_double(r[7], row, "dtheta_deg");
    c.x_post = parse_double(r[8], row, "x_post");
    c.y_post = parse_double(r[9], row, "y_post");
    c.theta_post_deg = parse_double(r[10], row, "theta_post_deg_unwrapped");
    out.push_back(c);
  }
  return out;
}

PushSample to_push_sample(const CycleRow& row)
{
  return {wrap_360(row.theta0_deg), row.dx, row.dy, row.dtheta_deg};
}

std::vector<Eigen::Vector2d> read_mu_samples_csv(const std::filesystem::path& path)
{
  static const std::vector<std::string> header{"mu_x", "mu_y"};
  const auto rows = read_table(path, header);
  std::vector<Eigen::Vector2d> out;
  out.reserve(rows.size());
  std::size_t row = 1;
  for (const auto& r : rows) {
    ++row;
    out.emplace_back(parse_double(r[0], row, "mu_x"), parse_double(r[1], row, "mu_y"));
  }
  return out;
}

void write_mu_samples_csv(const std::filesystem::path& path,
                          const std::vector<Eigen::Vector2d>& samples)
{
  auto os = open_out(path);
  os << "mu_x,mu_y\n";
  for (const auto& s : samples)
    os << format_full(s.x()) << ',' << format_full(s.y()) << '\n';
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist,
                         const std::string& value_label)
{
  auto os = open_out(path);
  os << value_label << "_lo," << value_label << "_hi,count\n";
  const double scale = hist.normalized ? static_cast<double>(hist.total()) : 1.0;
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    os << format_full(hist.edge(i)) << ',' << format_full(hist.edge(i + 1)) << ','
       << format_full(static_cast<double>(hist.counts[i]) / scale) << '\n';
  if (hist.underflow || hist.overflow) {
    os << "-inf," << format_full(hist.lo) << ','
       << format_full(static_cast<double>(hist.underflow) / scale) << '\n';
    os << format_full(hist.edge(hist.counts.size())) << ",inf,"
       << format_full(static_cast<double>(hist.overflow) / scale) << '\n';
  }
}

void write_error_table_csv(const std::filesystem::path& path, const std::string& metric,
                           const ErrorTable& table)
{
  auto os = open_out(path);
  os << "quantity," << metric << ",mean,percent_of_mean\n";
  auto row = [&](const char* name, const ErrorEntry& e) {
    os << name << ',' << format_full(e.value) << ',' << format_full(e.mean) << ','
       << (e.percent ? format_full(*e.percent) : std::string("undefined")) << '\n';
  };
  row("dtheta_deg", table.dtheta);
  row("dx", table.dx);
  row("dy", table.dy);
}

void write_push_law_csv(const std::filesystem::path& path, const PushLaw& law)
{
  auto os = open_out(path);
  os << "component,index,coefficient\n";
  auto dump = [&](const char* name, const Eigen::VectorXd& c, double rmse) {
    for (Eigen::Index i = 0; i < c.size(); ++i)
      os << name << ',' << i << ',' << format_full(c(i)) << '\n';
    os << name << ",rmse," << format_full(rmse) << '\n';
  };
  dump("dx", law.coef_dx, law.rmse_dx);
  dump("dy", law.coef_dy, law.rmse_dy);
  dump("dtheta_deg", law.coef_dtheta, law.rmse_dtheta);
}

void write_stable_directions_csv(const std::filesystem::path& path,
                                 const std::vector<FixedPoint>& fps)
{
  auto os = open_out(path);
  os << "theta_deg,stability,slope\n";
  for (const auto& fp : fps)
    os << format_full(fp.theta_deg) << ',' << (fp.stable ? "stable" : "unstable") << ','
       << format_full(fp.slope) << '\n';
}

void write_map_csv(const std::filesystem::path& path,
                   const std::vector<std::pair<double, double>>& map_samples)
{
  auto os = open_out(path);
  os << "theta0_deg,f_theta0_deg\n";
  for (const auto& [t, f] : map_samples)
    os << format_full(t) << ',' << format_full(f) << '\n';
}

}  // namespace pushsim
