#pragma once

#include <string>
#include <vector>

#include "hms/errors.hpp"

namespace hms {

// Monotonicity-preserving piecewise-cubic interpolant (Fritsch-Butland style
// slope limiting, the same construction scipy's PCHIP uses). C1, reproduces
// breakpoints exactly, and for non-decreasing data the derivative never goes
// negative. Queries outside the tabulated range raise OutOfDomain rather than
// extrapolate.
class MonotoneCurve {
public:
  MonotoneCurve() = default;
  MonotoneCurve(std::vector<double> x, std::vector<double> y, std::string name = "curve");

  double value(double x) const;
  double deriv(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  size_t size() const { return x_.size(); }
  const std::string& name() const { return name_; }

private:
  int interval(double x) const;

  std::vector<double> x_, y_, d_; // breakpoints and limited slopes
  std::string name_;
};

// Bilinear interpolation on a rectangular grid. First axis is the moisture
// quantity the surface is parameterized by, second axis is temperature.
class Surface2 {
public:
  Surface2() = default;
  Surface2(std::vector<double> maxis, std::vector<double> taxis,
           std::vector<std::vector<double>> values, std::string name = "surface");

  double value(double m, double theta) const;

  double m_min() const { return m_.front(); }
  double m_max() const { return m_.back(); }
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }
  const std::string& name() const { return name_; }

private:
  std::vector<double> m_, t_;
  std::vector<std::vector<double>> v_; // v_[i][j] at (m_[i], t_[j])
  std::string name_;
};

} // namespace hms
