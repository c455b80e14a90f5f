#pragma once

#include <vector>

#include "hms/errors.hpp"

namespace hms {

// Ambient drive (sigma^1, sigma^2) sampled in time. Piecewise-linear in
// between samples, constant beyond either end, so a single row acts as a
// constant drive. Sample times must be strictly increasing.
class ClimateSeries {
public:
  ClimateSeries() = default;
  ClimateSeries(std::vector<double> t, std::vector<double> s1, std::vector<double> s2);

  std::array<double, 2> value(double time) const;

  size_t size() const { return t_.size(); }
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }

private:
  std::vector<double> t_, s1_, s2_;
};

} // namespace hms
