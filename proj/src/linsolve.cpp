#include "hms/linsolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hms {

namespace {

constexpr double kBreakdownEps = 1e-30;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Inverted 2x2 diagonal blocks of the interleaved system. Singular blocks
// fall back to plain diagonal scaling so the preconditioner is always usable.
class BlockJacobi {
public:
  explicit BlockJacobi(const SparseSystem& s) : n_(s.n), inv_((s.n + 1) / 2) {
    for (int blk = 0; blk < static_cast<int>(inv_.size()); ++blk) {
      int r0 = 2 * blk, r1 = 2 * blk + 1;
      double a = diag_entry(s, r0, r0), b = r1 < n_ ? diag_entry(s, r0, r1) : 0.0;
      double c = r1 < n_ ? diag_entry(s, r1, r0) : 0.0;
      double d = r1 < n_ ? diag_entry(s, r1, r1) : 1.0;
      double det = a * d - b * c;
      double scale = std::abs(a * d) + std::abs(b * c);
      if (std::abs(det) > 1e-14 * (scale > 0 ? scale : 1.0)) {
        inv_[blk] = {d / det, -b / det, -c / det, a / det};
      } else {
        inv_[blk] = {a != 0.0 ? 1.0 / a : 1.0, 0.0, 0.0, d != 0.0 ? 1.0 / d : 1.0};
      }
    }
  }

  void apply(const std::vector<double>& v, std::vector<double>& out) const {
    out.resize(n_);
    for (int blk = 0; blk < static_cast<int>(inv_.size()); ++blk) {
      int r0 = 2 * blk, r1 = 2 * blk + 1;
      const auto& m = inv_[blk];
      double v0 = v[r0];
      double v1 = r1 < n_ ? v[r1] : 0.0;
      out[r0] = m[0] * v0 + m[1] * v1;
      if (r1 < n_) out[r1] = m[2] * v0 + m[3] * v1;
    }
  }

private:
  static double diag_entry(const SparseSystem& s, int r, int c) {
    for (int k = s.row_ptr[r]; k < s.row_ptr[r + 1]; ++k)
      if (s.col[k] == c) return s.val[k];
    return 0.0;
  }

  int n_;
  std::vector<std::array<double, 4>> inv_;
};

} // namespace

LinsolveResult solve(const SparseSystem& sys, double tol, int maxiter) {
  const int n = sys.n;
  if (maxiter <= 0) maxiter = 10 * n;

  LinsolveResult res;
  res.x.assign(n, 0.0);

  const double bnorm = norm2(sys.rhs);
  if (bnorm == 0.0) {
    res.status = SolveStatus::Converged;
    return res;
  }
  const double target = tol * bnorm;

  BlockJacobi prec(sys);

  std::vector<double> r = sys.rhs; // r = b - A*0
  std::vector<double> rhat = r;
  std::vector<double> p(n, 0.0), v(n, 0.0), s(n), phat(n), shat(n), t(n);

  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double best_res = norm2(r);
  std::vector<double> best_x = res.x;

  for (int iter = 1; iter <= maxiter; ++iter) {
    double rho1 = dot(rhat, r);
    if (std::abs(rho1) < kBreakdownEps)
      raise(ErrorKind::Breakdown, "orthogonality scalar vanished");
    if (iter == 1) {
      p = r;
    } else {
      if (std::abs(omega) < kBreakdownEps)
        raise(ErrorKind::Breakdown, "stabilization scalar vanished");
      double beta = (rho1 / rho) * (alpha / omega);
      for (int k = 0; k < n; ++k) p[k] = r[k] + beta * (p[k] - omega * v[k]);
    }
    prec.apply(p, phat);
    sys.matvec(phat, v);
    double rv = dot(rhat, v);
    if (std::abs(rv) < kBreakdownEps)
      raise(ErrorKind::Breakdown, "search direction collapsed");
    alpha = rho1 / rv;
    for (int k = 0; k < n; ++k) s[k] = r[k] - alpha * v[k];

    if (norm2(s) <= target) {
      for (int k = 0; k < n; ++k) res.x[k] += alpha * phat[k];
      double true_res = sys.residual_norm(res.x);
      if (true_res <= target) {
        res.iterations = iter;
        res.residual = true_res;
        res.status = SolveStatus::Converged;
        return res;
      }
      // recurrence drifted; re-sync the residual and keep going
      sys.matvec(res.x, t);
      for (int k = 0; k < n; ++k) r[k] = sys.rhs[k] - t[k];
      rho = alpha = omega = 1.0;
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      continue;
    }

    prec.apply(s, shat);
    sys.matvec(shat, t);
    double tt = dot(t, t);
    if (tt < kBreakdownEps)
      raise(ErrorKind::Breakdown, "stabilization step vanished");
    omega = dot(t, s) / tt;
    for (int k = 0; k < n; ++k) {
      res.x[k] += alpha * phat[k] + omega * shat[k];
      r[k] = s[k] - omega * t[k];
    }
    rho = rho1;

    double rn = norm2(r);
    if (rn < best_res) {
      best_res = rn;
      best_x = res.x;
    }
    if (rn <= target) {
      double true_res = sys.residual_norm(res.x);
      if (true_res <= target) {
        res.iterations = iter;
        res.residual = true_res;
        res.status = SolveStatus::Converged;
        return res;
      }
      sys.matvec(res.x, t);
      for (int k = 0; k < n; ++k) r[k] = sys.rhs[k] - t[k];
      rho = alpha = omega = 1.0;
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
    }
  }

  res.x = std::move(best_x);
  res.iterations = maxiter;
  res.residual = sys.residual_norm(res.x);
  res.status = SolveStatus::MaxIterExceeded;
  return res;
}

} // namespace hms
