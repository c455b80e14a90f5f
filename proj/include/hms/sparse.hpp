#pragma once

#include <vector>

#include "hms/errors.hpp"

namespace hms {

// Square sparse matrix in CSR form together with its right-hand side.
// Column indices are sorted within each row and duplicates are merged.
struct SparseSystem {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> rhs;

  void matvec(const std::vector<double>& x, std::vector<double>& y) const;
  double residual_norm(const std::vector<double>& x) const; // |A x - rhs|_2
};

// Accumulates (row, col, value) contributions in assembly order, then merges
// them into CSR deterministically.
class TripletBuilder {
public:
  explicit TripletBuilder(int n) : n_(n), rhs_(n, 0.0) {}

  void add(int r, int c, double v) { trip_.push_back({r, c, v}); }
  void add_rhs(int r, double v) { rhs_[r] += v; }
  int size() const { return n_; }

  SparseSystem finish();

private:
  struct Entry {
    int r, c;
    double v;
  };
  int n_;
  std::vector<Entry> trip_;
  std::vector<double> rhs_;
};

} // namespace hms
