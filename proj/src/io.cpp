#include "hms/io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "hms/errors.hpp"

namespace hms {

namespace {

std::atomic<int> g_log_level{static_cast<int>(LogLevel::Info)};

const char* level_tag(LogLevel lvl) {
  switch (lvl) {
  case LogLevel::Debug: return "debug";
  case LogLevel::Info: return "info";
  case LogLevel::Warn: return "warn";
  case LogLevel::Error: return "error";
  }
  return "?";
}

// %.17g survives a text round trip unchanged
std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_double(const std::string& field, double& out) {
  const char* s = field.c_str();
  char* end = nullptr;
  out = std::strtod(s, &end);
  if (end == s) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  for (std::string& f : fields) {
    size_t b = f.find_first_not_of(" \t\r");
    size_t e = f.find_last_not_of(" \t\r");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

// all data lines of a csv file, with the line number each came from
std::vector<std::pair<int, std::vector<std::string>>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open " + path);
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    rows.emplace_back(lineno, split_csv(line));
  }
  return rows;
}

bool numeric_row(const std::vector<std::string>& fields) {
  double v;
  return !fields.empty() && parse_double(fields[0], v);
}

double field_value(const std::string& path, int lineno, const std::string& field) {
  double v;
  if (!parse_double(field, v))
    raise(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": not a number: '" + field + "'");
  return v;
}

} // namespace

void set_log_level(LogLevel lvl) { g_log_level.store(static_cast<int>(lvl)); }

LogLevel log_level() { return static_cast<LogLevel>(g_log_level.load()); }

void log(LogLevel lvl, const std::string& msg) {
  if (static_cast<int>(lvl) < g_log_level.load()) return;
  std::cerr << "[" << level_tag(lvl) << "] " << msg << "\n";
}

ClimateSeries::ClimateSeries(std::vector<double> t, std::vector<double> s1, std::vector<double> s2)
    : t_(std::move(t)), s1_(std::move(s1)), s2_(std::move(s2)) {
  if (t_.empty() || t_.size() != s1_.size() || t_.size() != s2_.size())
    raise(ErrorKind::ValidationError, "climate series: empty or mismatched columns");
  for (size_t i = 0; i + 1 < t_.size(); ++i) {
    if (!(t_[i] < t_[i + 1]))
      raise(ErrorKind::NonMonotoneTime,
            "climate series: times must increase strictly (t[" + std::to_string(i + 1) +
                "] = " + fmt_g17(t_[i + 1]) + ")");
  }
}

std::array<double, 2> ClimateSeries::value(double time) const {
  if (t_.empty()) return {0.0, 0.0};
  if (time <= t_.front()) return {s1_.front(), s2_.front()};
  if (time >= t_.back()) return {s1_.back(), s2_.back()};
  // first knot strictly right of time
  size_t hi = std::upper_bound(t_.begin(), t_.end(), time) - t_.begin();
  size_t lo = hi - 1;
  double w = (time - t_[lo]) / (t_[hi] - t_[lo]);
  return {s1_[lo] + w * (s1_[hi] - s1_[lo]), s2_[lo] + w * (s2_[hi] - s2_[lo])};
}

ClimateSeries load_climate_csv(const std::string& path) {
  auto rows = read_csv_rows(path);
  std::vector<double> t, s1, s2;
  bool first = true;
  for (const auto& [lineno, fields] : rows) {
    if (first && !numeric_row(fields)) {
      first = false;
      continue; // header
    }
    first = false;
    if (fields.size() != 3)
      raise(ErrorKind::BadColumnCount, path + ":" + std::to_string(lineno) +
                                           ": expected 3 columns, got " +
                                           std::to_string(fields.size()));
    t.push_back(field_value(path, lineno, fields[0]));
    s1.push_back(field_value(path, lineno, fields[1]));
    s2.push_back(field_value(path, lineno, fields[2]));
  }
  if (t.empty()) raise(ErrorKind::BadTable, path + ": no data rows");
  return ClimateSeries(std::move(t), std::move(s1), std::move(s2));
}

MonotoneCurve load_curve_csv(const std::string& path, const std::string& name) {
  auto rows = read_csv_rows(path);
  std::vector<double> x, y;
  bool first = true;
  for (const auto& [lineno, fields] : rows) {
    if (first && !numeric_row(fields)) {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 2)
      raise(ErrorKind::BadColumnCount, path + ":" + std::to_string(lineno) +
                                           ": expected 2 columns, got " +
                                           std::to_string(fields.size()));
    x.push_back(field_value(path, lineno, fields[0]));
    y.push_back(field_value(path, lineno, fields[1]));
  }
  if (x.empty()) raise(ErrorKind::BadTable, path + ": no data rows");
  return MonotoneCurve(std::move(x), std::move(y), name);
}

Surface2 load_surface_csv(const std::string& path, const std::string& name) {
  auto rows = read_csv_rows(path);
  if (rows.size() < 3) raise(ErrorKind::BadTable, path + ": need a header row and two data rows");
  const auto& [hline, hfields] = rows.front();
  if (hfields.size() < 3)
    raise(ErrorKind::BadColumnCount,
          path + ":" + std::to_string(hline) + ": header needs at least two breakpoints");
  std::vector<double> taxis;
  for (size_t j = 1; j < hfields.size(); ++j)
    taxis.push_back(field_value(path, hline, hfields[j]));
  std::vector<double> maxis;
  std::vector<std::vector<double>> values;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& [lineno, fields] = rows[i];
    if (fields.size() != hfields.size())
      raise(ErrorKind::BadColumnCount, path + ":" + std::to_string(lineno) + ": expected " +
                                           std::to_string(hfields.size()) + " columns, got " +
                                           std::to_string(fields.size()));
    maxis.push_back(field_value(path, lineno, fields[0]));
    std::vector<double> row;
    for (size_t j = 1; j < fields.size(); ++j)
      row.push_back(field_value(path, lineno, fields[j]));
    values.push_back(std::move(row));
  }
  return Surface2(std::move(maxis), std::move(taxis), std::move(values), name);
}

void write_vtk(const std::string& path, const Mesh& mesh, const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != mesh.num_dofs())
    raise(ErrorKind::ValidationError, "vtk writer: field length does not match the mesh");
  std::ofstream out(path);
  if (!out) raise(ErrorKind::IoError, "cannot write " + path);
  const size_t n = mesh.nodes.size();
  out << "# vtk DataFile Version 3.0\n";
  out << "coupled heat and moisture field\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (const Point& pt : mesh.nodes)
    out << fmt_g17(pt.x) << " " << fmt_g17(pt.y) << " 0\n";
  out << "CELLS " << mesh.tris.size() << " " << mesh.tris.size() * 4 << "\n";
  for (const auto& t : mesh.tris) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.tris.size() << "\n";
  for (size_t i = 0; i < mesh.tris.size(); ++i) out << "5\n";
  out << "POINT_DATA " << n << "\n";
  const char* names[2] = {"theta", "moisture"};
  for (int comp = 0; comp < 2; ++comp) {
    out << "SCALARS " << names[comp] << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (size_t k = 0; k < n; ++k) out << fmt_g17(u[mesh.dof(static_cast<int>(k), comp)]) << "\n";
  }
  if (!out) raise(ErrorKind::IoError, "short write to " + path);
}

void write_probe_csv(const std::string& path, const RunResult& result) {
  std::ofstream out(path);
  if (!out) raise(ErrorKind::IoError, "cannot write " + path);
  out << "t";
  for (size_t p = 0; p < result.probe_series.size(); ++p)
    out << ",theta_" << p << ",moisture_" << p;
  out << "\n";
  const size_t steps = result.probe_series.empty() ? 0 : result.probe_series.front().size();
  for (size_t s = 0; s < steps; ++s) {
    out << fmt_g17(result.probe_series.front()[s][0]);
    for (const auto& series : result.probe_series)
      out << "," << fmt_g17(series[s][1]) << "," << fmt_g17(series[s][2]);
    out << "\n";
  }
  if (!out) raise(ErrorKind::IoError, "short write to " + path);
}

void write_convergence_csv(const std::string& path, const ConvergenceTable& table) {
  std::ofstream out(path);
  if (!out) raise(ErrorKind::IoError, "cannot write " + path);
  out << "h,h_t,error\n";
  for (const ConvergenceRow& r : table.rows)
    out << fmt_g17(r.h) << "," << fmt_g17(r.h_t) << "," << fmt_g17(r.error) << "\n";
  out << "# spatial orders:";
  for (double o : table.spatial_orders) out << " " << fmt_g17(o);
  out << "\n# temporal orders:";
  for (double o : table.temporal_orders) out << " " << fmt_g17(o);
  out << "\n";
  if (!out) raise(ErrorKind::IoError, "short write to " + path);
}

} // namespace hms
