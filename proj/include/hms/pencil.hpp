#pragma once

#include <complex>
#include <vector>

#include "hms/materials.hpp"

namespace hms {

// Two-material corner: wedge a opens over (0, omega_a), wedge b over
// (omega_a, omega_b), both measured from the boundary edge at angle 0. The
// eps matrices are the conductivities frozen at the corner state. A pure
// one-material corner is modelled by a fictitious interface bisecting it
// (exterior_corner_problem below); the determinant is insensitive to which
// wedge is labelled first.
struct PencilProblem {
  Mat2 eps_a{{{1, 0}, {0, 1}}};
  Mat2 eps_b{{{1, 0}, {0, 1}}};
  double omega_a = 0.0;
  double omega_b = 0.0;

  void validate() const; // positive entries, 0 < omega_a < omega_b <= 2 pi
};

// Characteristic determinant D(lambda) of the corner operator pencil. Zeros
// in the strip Im(lambda) in (-1, 0) obstruct square-integrable second
// derivatives near the corner. Entries combine sin/cos of i lambda omega,
// evaluated through hyperbolic identities so large |Re lambda| stays stable.
std::complex<double> pencil_determinant(const PencilProblem& p, std::complex<double> lambda);

// Magnitude of the largest single product inside the determinant, the
// reference against which near-cancellation (a nearby zero) is measured.
double pencil_scale(const PencilProblem& p, std::complex<double> lambda);

struct PencilRoot {
  std::complex<double> lambda;
  int multiplicity = 1; // winding count of the isolating box
  double residual = 0.0;
};

struct Strip {
  double im_lo = -1.0;
  double im_hi = 0.0;
  double re_max = 12.0; // half-width of the search rectangle
};

// All pencil zeros in the open strip, located by argument-principle counts on
// an adaptively sampled rectangle, isolated by bisection and polished by
// Newton steps on the analytic derivative (double zeros are polished on the
// derivative itself). The contour is inset 1e-6 from the strip edges and
// jittered a few times before giving up with ContourThroughZero. Results
// sorted by (Im, Re).
std::vector<PencilRoot> roots_in_strip(const PencilProblem& p, const Strip& strip = {});

// Closed-form root family of the equal-ratio geometry omega_b = 2 omega_a:
// lambda_k = -i k pi / (2 omega_a), restricted to the open Im window.
std::vector<std::complex<double>> equal_angle_root_family(double omega_a, double im_lo,
                                                          double im_hi);

struct RegularityVerdict {
  bool regular = false;        // no pencil zeros with Im in (-1, 0)
  bool theorem_backed = false; // geometry inside the analysed regime
  std::vector<PencilRoot> strip_roots;
};

// regular = strip (-1, 0) free of zeros. Verdicts outside the analysed
// geometry (omega_b = 2 omega_a with omega_a <= pi/2) are computed all the
// same but flagged as extrapolated via theorem_backed = false.
RegularityVerdict regularity_verdict(const PencilProblem& p);

// Equal-material problem for a plain boundary corner of opening omega_total.
PencilProblem exterior_corner_problem(const Mat2& eps, double omega_total);

} // namespace hms
