#include "hms/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hms {

namespace {

double sgn(double v) { return (v > 0) - (v < 0); }

// One-sided slope at the ends of the table, shape-limited so the first and
// last cubic pieces cannot overshoot the data.
double edge_slope(double h0, double h1, double m0, double m1) {
  double d = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
  if (sgn(d) != sgn(m0)) return 0.0;
  if (sgn(m0) != sgn(m1) && std::abs(d) > 3 * std::abs(m0)) return 3 * m0;
  return d;
}

[[noreturn]] void out_of_domain(const std::string& name, const char* axis, double v, double lo,
                                double hi) {
  std::ostringstream os;
  os << name << ": " << axis << " = " << v << " outside [" << lo << ", " << hi << "]";
  raise(ErrorKind::OutOfDomain, os.str());
}

} // namespace

MonotoneCurve::MonotoneCurve(std::vector<double> x, std::vector<double> y, std::string name)
    : x_(std::move(x)), y_(std::move(y)), name_(std::move(name)) {
  if (x_.size() < 2 || x_.size() != y_.size())
    raise(ErrorKind::BadTable, name_ + ": need at least two breakpoints");
  for (size_t k = 0; k + 1 < x_.size(); ++k) {
    if (!(x_[k] < x_[k + 1]))
      raise(ErrorKind::NonMonotoneData, name_ + ": abscissae must be strictly increasing");
    if (y_[k + 1] < y_[k])
      raise(ErrorKind::NonMonotoneData, name_ + ": ordinates must be non-decreasing");
  }

  const size_t n = x_.size();
  d_.resize(n);
  if (n == 2) {
    d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
    return;
  }
  std::vector<double> h(n - 1), m(n - 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    m[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  for (size_t k = 1; k + 1 < n; ++k) {
    if (m[k - 1] * m[k] > 0) {
      // weighted harmonic mean of the neighbouring secants
      double w1 = 2 * h[k] + h[k - 1];
      double w2 = h[k] + 2 * h[k - 1];
      d_[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
    } else {
      d_[k] = 0.0;
    }
  }
  d_[0] = edge_slope(h[0], h[1], m[0], m[1]);
  d_[n - 1] = edge_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
}

int MonotoneCurve::interval(double x) const {
  if (x < x_.front() || x > x_.back())
    out_of_domain(name_, "x", x, x_.front(), x_.back());
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  int k = static_cast<int>(it - x_.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(x_.size()) - 2);
}

double MonotoneCurve::value(double x) const {
  int k = interval(x);
  double h = x_[k + 1] - x_[k];
  double t = (x - x_[k]) / h;
  double t2 = t * t, t3 = t2 * t;
  return y_[k] * (2 * t3 - 3 * t2 + 1) + h * d_[k] * (t3 - 2 * t2 + t) +
         y_[k + 1] * (-2 * t3 + 3 * t2) + h * d_[k + 1] * (t3 - t2);
}

double MonotoneCurve::deriv(double x) const {
  int k = interval(x);
  double h = x_[k + 1] - x_[k];
  double t = (x - x_[k]) / h;
  double t2 = t * t;
  return y_[k] * (6 * t2 - 6 * t) / h + d_[k] * (3 * t2 - 4 * t + 1) +
         y_[k + 1] * (-6 * t2 + 6 * t) / h + d_[k + 1] * (3 * t2 - 2 * t);
}

Surface2::Surface2(std::vector<double> maxis, std::vector<double> taxis,
                   std::vector<std::vector<double>> values, std::string name)
    : m_(std::move(maxis)), t_(std::move(taxis)), v_(std::move(values)), name_(std::move(name)) {
  if (m_.size() < 2 || t_.size() < 2)
    raise(ErrorKind::BadTable, name_ + ": need at least a 2x2 grid");
  if (v_.size() != m_.size())
    raise(ErrorKind::BadTable, name_ + ": row count does not match first axis");
  for (const auto& row : v_) {
    if (row.size() != t_.size())
      raise(ErrorKind::BadTable, name_ + ": column count does not match second axis");
    for (double val : row)
      if (!(val > 0)) raise(ErrorKind::BadTable, name_ + ": values must be positive");
  }
  for (size_t k = 0; k + 1 < m_.size(); ++k)
    if (!(m_[k] < m_[k + 1]))
      raise(ErrorKind::NonMonotoneData, name_ + ": first axis must be strictly increasing");
  for (size_t k = 0; k + 1 < t_.size(); ++k)
    if (!(t_[k] < t_[k + 1]))
      raise(ErrorKind::NonMonotoneData, name_ + ": second axis must be strictly increasing");
}

double Surface2::value(double m, double theta) const {
  if (m < m_.front() || m > m_.back()) out_of_domain(name_, "m", m, m_.front(), m_.back());
  if (theta < t_.front() || theta > t_.back())
    out_of_domain(name_, "theta", theta, t_.front(), t_.back());

  auto cell = [](const std::vector<double>& ax, double v) {
    auto it = std::upper_bound(ax.begin(), ax.end(), v);
    return std::clamp(static_cast<int>(it - ax.begin()) - 1, 0, static_cast<int>(ax.size()) - 2);
  };
  int i = cell(m_, m);
  int j = cell(t_, theta);
  double s = (m - m_[i]) / (m_[i + 1] - m_[i]);
  double u = (theta - t_[j]) / (t_[j + 1] - t_[j]);
  return (1 - s) * (1 - u) * v_[i][j] + s * (1 - u) * v_[i + 1][j] + (1 - s) * u * v_[i][j + 1] +
         s * u * v_[i + 1][j + 1];
}

} // namespace hms
