#include "hms/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hms/errors.hpp"

namespace hms {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Contour sampling: a phase step below pi/2 (with margin) is unambiguous, and
// the averaged log-derivative bound forces refinement toward any zero close
// to the contour, so a full hidden turn cannot slip between two samples.
constexpr double kMaxPhaseStep = 1.41;
constexpr double kMaxLogDerivStep = 1.0;
constexpr int kMaxRefineDepth = 48;
constexpr double kZeroOnContourRel = 1e-12;

// Subdivision: polish once a box holds at most a double zero and is small.
constexpr double kDiamStop = 1e-3;
constexpr double kDiamFloor = 1e-11;
// A polished candidate must make the determinant this small relative to its
// size one box diameter away, otherwise the box held separate zeros.
constexpr double kResidualAccept = 1e-6;

// Off-center so a symmetric box never puts its cut on the imaginary axis,
// where these determinants keep their zeros.
constexpr double kSplitFractions[] = {0.513, 0.467, 0.541, 0.429, 0.583};
constexpr double kInsetJitter[] = {1.0, 1.7, 2.9, 4.3, 7.1};
constexpr double kBaseInset = 1e-6;

// Determinant with first and second lambda-derivatives (exact, not finite
// differences) and the entry-product magnitude used as cancellation scale.
struct DetJet {
  std::complex<double> D, D1, D2;
  double scale = 0.0;
};

DetJet det_jet(const PencilProblem& p, std::complex<double> lambda) {
  const std::complex<double> i1(0.0, 1.0);
  const std::complex<double> z = i1 * lambda;
  const double oa = p.omega_a;
  const double ob = p.omega_b - p.omega_a;
  const std::complex<double> sa = std::sin(z * oa), ca = std::cos(z * oa);
  const std::complex<double> sb = std::sin(z * ob), cb = std::cos(z * ob);
  // entries are ea*u + eb*v with u = sin(z oa) cos(z ob), v = cos(z oa) sin(z ob)
  const std::complex<double> u0 = sa * cb, v0 = ca * sb;
  const std::complex<double> u1 = oa * ca * cb - ob * sa * sb;
  const std::complex<double> v1 = ob * ca * cb - oa * sa * sb;
  const double oo = oa * oa + ob * ob, xx = 2.0 * oa * ob;
  const std::complex<double> u2 = -oo * u0 - xx * v0;
  const std::complex<double> v2 = -oo * v0 - xx * u0;

  std::complex<double> e0[2][2], e1[2][2], e2[2][2];
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      e0[j][k] = p.eps_a[j][k] * u0 + p.eps_b[j][k] * v0;
      e1[j][k] = p.eps_a[j][k] * u1 + p.eps_b[j][k] * v1;
      e2[j][k] = p.eps_a[j][k] * u2 + p.eps_b[j][k] * v2;
    }
  }
  DetJet jet;
  jet.D = e0[0][0] * e0[1][1] - e0[0][1] * e0[1][0];
  const std::complex<double> dz =
      e1[0][0] * e0[1][1] + e0[0][0] * e1[1][1] - e1[0][1] * e0[1][0] - e0[0][1] * e1[1][0];
  const std::complex<double> dzz = e2[0][0] * e0[1][1] + 2.0 * e1[0][0] * e1[1][1] +
                                   e0[0][0] * e2[1][1] - e2[0][1] * e0[1][0] -
                                   2.0 * e1[0][1] * e1[1][0] - e0[0][1] * e2[1][0];
  jet.D1 = i1 * dz; // dz/dlambda = i
  jet.D2 = -dzz;
  jet.scale = std::abs(e0[0][0]) * std::abs(e0[1][1]) + std::abs(e0[0][1]) * std::abs(e0[1][0]);
  return jet;
}

struct Box {
  double re_lo, re_hi, im_lo, im_hi;
  double diam() const { return std::max(re_hi - re_lo, im_hi - im_lo); }
  std::complex<double> center() const {
    return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)};
  }
};

struct ContourSample {
  std::complex<double> z, d;
  double logd = 0.0; // |D'/D|
};

// Argument-principle zero count inside a box. Refinement is driven by both
// the observed phase step and the log-derivative bound on how much phase a
// segment can hide; a zero sitting (numerically) on the contour shows up as
// refinement that never settles, reported as nothing so the caller can move
// the contour and retry.
class WindingCounter {
public:
  explicit WindingCounter(const PencilProblem& p) : p_(p) {}

  std::optional<int> count(const Box& b) const {
    const std::complex<double> corner[4] = {{b.re_lo, b.im_lo},
                                            {b.re_hi, b.im_lo},
                                            {b.re_hi, b.im_hi},
                                            {b.re_lo, b.im_hi}};
    double acc = 0.0;
    for (int e = 0; e < 4; ++e) {
      const std::complex<double> z0 = corner[e], z1 = corner[(e + 1) % 4];
      const int n = std::max(1, static_cast<int>(std::ceil(std::abs(z1 - z0) / 0.4)));
      ContourSample prev;
      if (!sample(z0, prev)) return std::nullopt;
      for (int k = 1; k <= n; ++k) {
        ContourSample cur;
        if (!sample(z0 + (z1 - z0) * (static_cast<double>(k) / n), cur)) return std::nullopt;
        if (!segment(prev, cur, 0, acc)) return std::nullopt;
        prev = cur;
      }
    }
    const double turns = acc / (2.0 * kPi);
    const long w = std::lround(turns);
    if (std::abs(turns - static_cast<double>(w)) > 0.25) return std::nullopt;
    return static_cast<int>(w);
  }

private:
  bool sample(std::complex<double> z, ContourSample& out) const {
    const DetJet jet = det_jet(p_, z);
    if (!std::isfinite(jet.D.real()) || !std::isfinite(jet.D.imag())) return false;
    const double mag = std::abs(jet.D);
    if (!(mag > kZeroOnContourRel * jet.scale)) return false;
    out = {z, jet.D, std::abs(jet.D1) / mag};
    return true;
  }

  bool segment(const ContourSample& a, const ContourSample& b, int depth, double& acc) const {
    const double len = std::abs(b.z - a.z);
    const double step = std::arg(b.d / a.d);
    if (std::abs(step) <= kMaxPhaseStep &&
        0.5 * (a.logd + b.logd) * len <= kMaxLogDerivStep) {
      acc += step;
      return true;
    }
    if (depth >= kMaxRefineDepth) return false;
    ContourSample mid;
    if (!sample(0.5 * (a.z + b.z), mid)) return false;
    return segment(a, mid, depth + 1, acc) && segment(mid, b, depth + 1, acc);
  }

  const PencilProblem& p_;
};

// |D| at the candidate against |D| one probe length away in four directions.
// Vanishes only at an actual (possibly multiple) zero, stays O(1) at the
// critical point between two separated zeros.
double local_residual(const PencilProblem& p, std::complex<double> l, double probe) {
  const std::complex<double> i1(0.0, 1.0);
  const double num = std::abs(det_jet(p, l).D);
  const double den = std::abs(det_jet(p, l + probe).D) + std::abs(det_jet(p, l - probe).D) +
                     std::abs(det_jet(p, l + i1 * probe).D) +
                     std::abs(det_jet(p, l - i1 * probe).D);
  if (den > 0.0) return 4.0 * num / den;
  return num == 0.0 ? 0.0 : 1.0;
}

struct NewtonOut {
  std::complex<double> lambda;
  double last_step = 0.0;
  double prev_step = 0.0;
};

// Newton on D; factor m recovers the quadratic rate at an m-fold zero.
NewtonOut newton_plain(const PencilProblem& p, std::complex<double> l, int iters, double factor) {
  NewtonOut out{l, 0.0, 0.0};
  for (int i = 0; i < iters; ++i) {
    const DetJet jet = det_jet(p, l);
    if (std::abs(jet.D1) == 0.0) break;
    const std::complex<double> step = factor * jet.D / jet.D1;
    const std::complex<double> next = l - step;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    l = next;
    out.lambda = l;
    out.prev_step = out.last_step;
    out.last_step = std::abs(step);
    if (out.last_step < 1e-13 * (1.0 + std::abs(l))) break;
  }
  return out;
}

// Newton on D': a double zero of D is a simple zero of D'.
std::complex<double> newton_on_derivative(const PencilProblem& p, std::complex<double> l,
                                          int iters) {
  for (int i = 0; i < iters; ++i) {
    const DetJet jet = det_jet(p, l);
    if (std::abs(jet.D2) == 0.0) break;
    const std::complex<double> step = jet.D1 / jet.D2;
    const std::complex<double> next = l - step;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    l = next;
    if (std::abs(step) < 1e-13 * (1.0 + std::abs(l))) break;
  }
  return l;
}

PencilRoot polish_root(const PencilProblem& p, std::complex<double> seed, int m) {
  std::complex<double> l = seed;
  if (m <= 1) {
    const NewtonOut out = newton_plain(p, seed, 60, 1.0);
    l = out.lambda;
    // a steady step ratio near (m-1)/m means the winding undercounted a
    // multiple zero (it sat on a split line); refine on the derivative
    const bool stalled = out.last_step > 1e-12 * (1.0 + std::abs(l)) && out.prev_step > 0.0 &&
                         out.last_step > 0.3 * out.prev_step && out.last_step < 0.85 * out.prev_step;
    if (stalled) l = newton_on_derivative(p, l, 40);
  } else if (m == 2) {
    l = newton_on_derivative(p, seed, 40);
  } else {
    l = newton_plain(p, seed, 80, static_cast<double>(m)).lambda;
  }
  return {l, m, local_residual(p, l, 1e-3 * (1.0 + std::abs(l)))};
}

void subdivide(const PencilProblem& p, const WindingCounter& wc, const Box& b, int w, double stop,
               std::vector<PencilRoot>& out) {
  if (w <= 0) return;
  const double d = b.diam();
  if (w <= 2 && d <= stop) {
    PencilRoot r = polish_root(p, b.center(), w);
    if (r.residual <= kResidualAccept || d <= kDiamFloor) {
      out.push_back(r);
      return;
    }
    stop = d / 8.0; // unresolved cluster, keep splitting
  } else if (d <= kDiamFloor) {
    out.push_back(polish_root(p, b.center(), w));
    return;
  }
  const bool split_re = (b.re_hi - b.re_lo) >= (b.im_hi - b.im_lo);
  for (double f : kSplitFractions) {
    Box lo = b, hi = b;
    if (split_re) {
      const double cut = b.re_lo + f * (b.re_hi - b.re_lo);
      lo.re_hi = cut;
      hi.re_lo = cut;
    } else {
      const double cut = b.im_lo + f * (b.im_hi - b.im_lo);
      lo.im_hi = cut;
      hi.im_lo = cut;
    }
    const std::optional<int> w_lo = wc.count(lo);
    if (!w_lo) continue;
    const std::optional<int> w_hi = wc.count(hi);
    if (!w_hi) continue;
    if (*w_lo + *w_hi != w) continue; // cut too close to a zero, try another
    subdivide(p, wc, lo, *w_lo, stop, out);
    subdivide(p, wc, hi, *w_hi, stop, out);
    return;
  }
  raise(ErrorKind::ContourThroughZero,
        "corner pencil: every candidate split line runs through a zero");
}

} // namespace

void PencilProblem::validate() const {
  for (const auto& mat : {eps_a, eps_b}) {
    for (const auto& row : mat) {
      for (double e : row) {
        if (!std::isfinite(e) || !(e > 0.0))
          raise(ErrorKind::ValidationError, "corner pencil: conductivity entries must be positive");
      }
    }
  }
  if (!(omega_a > 0.0) || !(omega_a < omega_b) || !(omega_b <= 2.0 * kPi + 1e-12))
    raise(ErrorKind::ValidationError,
          "corner pencil: angles must satisfy 0 < omega_a < omega_b <= 2*pi");
}

std::complex<double> pencil_determinant(const PencilProblem& p, std::complex<double> lambda) {
  return det_jet(p, lambda).D;
}

double pencil_scale(const PencilProblem& p, std::complex<double> lambda) {
  return det_jet(p, lambda).scale;
}

std::vector<PencilRoot> roots_in_strip(const PencilProblem& p, const Strip& strip) {
  p.validate();
  if (!std::isfinite(strip.im_lo) || !std::isfinite(strip.im_hi) || !(strip.im_lo < strip.im_hi) ||
      !(strip.re_max > 0.0))
    raise(ErrorKind::ValidationError, "corner pencil: bad search strip");

  const WindingCounter wc(p);
  for (double jitter : kInsetJitter) {
    const double inset = kBaseInset * jitter;
    const Box outer{-strip.re_max, strip.re_max, strip.im_lo + inset, strip.im_hi - inset};
    if (!(outer.im_lo < outer.im_hi))
      raise(ErrorKind::ValidationError, "corner pencil: strip too thin for the contour inset");
    const std::optional<int> w = wc.count(outer);
    if (!w) continue;
    std::vector<PencilRoot> found;
    try {
      subdivide(p, wc, outer, *w, kDiamStop, found);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::ContourThroughZero) continue;
      throw;
    }
    // keep the open strip only, then merge what polished to the same point
    std::vector<PencilRoot> roots;
    for (const PencilRoot& r : found) {
      if (r.lambda.imag() > strip.im_lo && r.lambda.imag() < strip.im_hi &&
          std::abs(r.lambda.real()) <= strip.re_max + 1e-6)
        roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end(), [](const PencilRoot& a, const PencilRoot& b) {
      if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
      return a.lambda.real() < b.lambda.real();
    });
    std::vector<PencilRoot> merged;
    for (const PencilRoot& r : roots) {
      if (!merged.empty() && std::abs(merged.back().lambda - r.lambda) < 1e-7) {
        merged.back().multiplicity += r.multiplicity;
        merged.back().residual = std::min(merged.back().residual, r.residual);
      } else {
        merged.push_back(r);
      }
    }
    return merged;
  }
  raise(ErrorKind::ContourThroughZero,
        "corner pencil: determinant vanishes on every jittered search contour");
}

std::vector<std::complex<double>> equal_angle_root_family(double omega_a, double im_lo,
                                                          double im_hi) {
  if (!(omega_a > 0.0) || !std::isfinite(im_lo) || !std::isfinite(im_hi) || !(im_lo < im_hi))
    raise(ErrorKind::ValidationError, "corner pencil: bad root family request");
  std::vector<std::complex<double>> fam;
  const double spacing = kPi / (2.0 * omega_a);
  for (int k = 0;; ++k) {
    const double im = -spacing * k;
    if (im <= im_lo) break;
    if (im < im_hi) fam.push_back({0.0, im});
  }
  std::sort(fam.begin(), fam.end(), [](std::complex<double> a, std::complex<double> b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  return fam;
}

RegularityVerdict regularity_verdict(const PencilProblem& p) {
  RegularityVerdict v;
  v.strip_roots = roots_in_strip(p, Strip{});
  v.regular = v.strip_roots.empty();
  v.theorem_backed =
      std::abs(p.omega_b - 2.0 * p.omega_a) <= 1e-12 && p.omega_a <= kPi / 2.0 + 1e-12;
  return v;
}

PencilProblem exterior_corner_problem(const Mat2& eps, double omega_total) {
  if (!std::isfinite(omega_total) || !(omega_total > 0.0) || omega_total > 2.0 * kPi + 1e-12)
    raise(ErrorKind::ValidationError, "corner pencil: corner opening must lie in (0, 2*pi]");
  return PencilProblem{eps, eps, 0.5 * omega_total, omega_total};
}

} // namespace hms
