#include "hms/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace hms {

void SparseSystem::matvec(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(n, 0.0);
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

double SparseSystem::residual_norm(const std::vector<double>& x) const {
  double acc = 0.0;
  for (int r = 0; r < n; ++r) {
    double ax = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) ax += val[k] * x[col[k]];
    acc += (ax - rhs[r]) * (ax - rhs[r]);
  }
  return std::sqrt(acc);
}

SparseSystem TripletBuilder::finish() {
  std::stable_sort(trip_.begin(), trip_.end(),
                   [](const Entry& a, const Entry& b) { return a.r < b.r || (a.r == b.r && a.c < b.c); });
  SparseSystem s;
  s.n = n_;
  s.rhs = std::move(rhs_);
  s.row_ptr.assign(n_ + 1, 0);
  for (size_t k = 0; k < trip_.size();) {
    size_t k2 = k;
    double acc = 0.0;
    while (k2 < trip_.size() && trip_[k2].r == trip_[k].r && trip_[k2].c == trip_[k].c)
      acc += trip_[k2++].v;
    s.col.push_back(trip_[k].c);
    s.val.push_back(acc);
    ++s.row_ptr[trip_[k].r + 1];
    k = k2;
  }
  for (int r = 0; r < n_; ++r) s.row_ptr[r + 1] += s.row_ptr[r];
  return s;
}

} // namespace hms
