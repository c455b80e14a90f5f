#pragma once

#include <array>
#include <string>
#include <variant>

#include "hms/curves.hpp"

namespace hms {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Vec2 = std::array<double, 2>;

// Pointwise state: component 1 is temperature theta [K], component 2 the
// moisture unknown of the active model (moisture potential for the Kiessl
// model, relative humidity for the Kunzel model, abstract for linear runs).
struct StateSample {
  double theta = 0.0;
  double m = 0.0;
};

// Frozen coefficients of the coupled system at one state.
//
// Index conventions, used consistently everywhere downstream:
//   B[j]     storage of balance equation j (enthalpy for j=0, moisture j=1)
//   b[i][j]  partial of B[j] with respect to state component i; the mass
//            coefficient of d/dt u^i in equation j is therefore b[i][j]
//   a[j][i]  conductivity multiplying grad u^i in the flux of equation j
//   fsrc[j]  constant volumetric source of equation j
struct CoefficientSet {
  Vec2 B{0, 0};
  Mat2 b{{{0, 0}, {0, 0}}};
  Mat2 a{{{0, 0}, {0, 0}}};
  Vec2 fsrc{0, 0};
};

// Kiessl-type model: moisture potential drives both vapour and liquid
// transport. w = f(m) is the water content, phi = g(m) relative humidity,
// rho_ps the saturated vapour density. Transport surfaces are parameterized
// by (w, theta) throughout.
struct KiesslParams {
  double rho0 = 0, c0 = 0;    // dry density, dry heat capacity
  double rho_w = 0, c_w = 0;  // liquid water density and heat capacity
  double e = 0;               // open porosity, bounds the water content
  double L_v = 0;             // latent heat of evaporation
  MonotoneCurve f;            // water content vs moisture potential, f(0)=0
  MonotoneCurve g;            // relative humidity vs potential, g(0)=0, g'(0)=1
  MonotoneCurve rho_ps;       // saturated vapour density vs temperature
  Surface2 lambda;            // thermal conductivity (w, theta)
  Surface2 D_w;               // liquid diffusivity (w, theta)
  Surface2 D_phi;             // vapour diffusivity (w, theta)
  Surface2 D_theta;           // thermally driven moisture diffusivity (w, theta)

  void validate() const; // raises ValidationError on broken invariants
};

// Kunzel-type model: relative humidity is the moisture unknown. w = h(phi) is
// the storage curve, p_s saturation pressure, delta/mu vapour permeability.
// lambda is parameterized by (w, theta), the liquid conduction surface by
// (phi, theta).
struct KunzelParams {
  double rho0 = 0, c0 = 0;
  double rho_w = 0, c_w = 0;
  double L_v = 0;
  double mu = 0;          // vapour diffusion resistance factor
  MonotoneCurve h;        // moisture storage, h(0)=0
  MonotoneCurve p_s;      // saturation pressure vs temperature
  MonotoneCurve delta;    // vapour permeability of still air vs temperature
  Surface2 lambda;        // (w, theta)
  Surface2 D_phi_hat;     // liquid conduction (phi, theta)

  void validate() const;
};

// Constant-coefficient counterpart used by verification runs. beta[j][i]
// multiplies d/dt u^i and kappa[j][i] multiplies grad u^i in equation j.
// Inequality and positivity requirements are the validator's business, not
// enforced on construction (verification cases legitimately zero entries).
struct LinearParams {
  Mat2 beta{{{1, 0}, {0, 1}}};
  Mat2 kappa{{{1, 0}, {0, 1}}};
  Vec2 nu{0, 0};   // boundary absorption per component
  Vec2 fsrc{0, 0}; // constant volumetric sources
};

CoefficientSet eval_kiessl(const KiesslParams& p, const StateSample& s);
CoefficientSet eval_kunzel(const KunzelParams& p, const StateSample& s);
CoefficientSet eval_linear(const LinearParams& p, const StateSample& s);

struct MaterialModel {
  std::string name;
  std::variant<LinearParams, KiesslParams, KunzelParams> params;

  CoefficientSet eval(const StateSample& s) const;
  bool is_linear() const { return std::holds_alternative<LinearParams>(params); }
  const LinearParams* linear() const { return std::get_if<LinearParams>(&params); }
  const char* kind() const;
};

// Structure-condition sweep over a state grid. Margins are the worst (lowest)
// value the strict inequality attains; pass means the margin stayed positive
// at every sample.
struct StructureReport {
  struct Item {
    std::string id;
    bool pass = true;
    double worst_margin = 0.0;
    StateSample worst_state;
  };
  Item storage_monotone;        // diagonal storage derivatives positive
  Item conductivity_positive;   // every a entry positive
  Item parabolicity;            // coupled parabolicity inequality
  Item ellipticity;             // determinant condition on the a matrix
  int samples = 0;

  // what quasilinear solvability actually needs from the tables
  bool core_pass() const {
    return storage_monotone.pass && conductivity_positive.pass && ellipticity.pass;
  }
};

StructureReport check_structure_conditions(const MaterialModel& model,
                                           std::pair<double, double> theta_range,
                                           std::pair<double, double> m_range, int n_per_axis);

// Constant-coefficient conditions, evaluated verbatim with both sides exposed.
struct LinearCheck {
  bool positivity = true;  // beta, kappa entries > 0 and nu >= 0
  bool parabolic = true;   // beta/kappa coupling inequality
  bool elliptic = true;    // kappa determinant inequality
  double parabolic_lhs = 0, parabolic_rhs = 0;
  double elliptic_lhs = 0, elliptic_rhs = 0;

  bool all_pass() const { return positivity && parabolic && elliptic; }
};

LinearCheck check_linear_conditions(const LinearParams& p);

} // namespace hms
