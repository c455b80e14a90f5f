#pragma once

#include <map>

#include "hms/materials.hpp"
#include "hms/mesh.hpp"
#include "hms/series.hpp"
#include "hms/sparse.hpp"

namespace hms {

// Exchange condition on one boundary side: flux = alpha * (trace - sigma(t))
// per component, with sigma taken from the climate series at the current step
// time. Sides without a drive are natural (zero flux).
struct BoundaryDrive {
  Vec2 alpha{0, 0};
  ClimateSeries sigma;
};

struct BoundaryDriveSet {
  std::map<Side, BoundaryDrive> by_side;
  // per-layer boundary absorption (linear verification runs only); empty
  // means zero everywhere
  std::vector<Vec2> layer_nu;
};

// One backward difference step of the coupled system, coefficients frozen per
// element: find u with
//   sum_i [ b[i][j]/h_t * M + a[j][i] * K ] u^i  +  boundary terms
//     = sum_i b[i][j]/h_t * M u_prev^i + sources + boundary data
// for each test component j. Unknowns are interleaved per node (mesh.dof).
SparseSystem assemble_step_system(const Mesh& mesh, const LayeredDomain& domain,
                                  const std::vector<CoefficientSet>& tri_coeffs,
                                  const std::vector<double>& u_prev, double h_t,
                                  const BoundaryDriveSet& drives, double t_now);

// Mismatch of the conormal flux across each interface segment: for every
// interface edge the one-sided P1 fluxes of both layers are compared against
// the shared normal, and the result is the edge-length weighted L2 norm per
// component. Exact transmission would make every entry zero; the discrete
// jump shrinks as the mesh is refined.
std::vector<Vec2> interface_flux_jump(const Mesh& mesh, const LayeredDomain& domain,
                                      const std::vector<CoefficientSet>& tri_coeffs,
                                      const std::vector<double>& u);

// Weighted Dirichlet energy of a linear-model field; the cross-coupled
// weights make its one-step decay a checkable invariant of the backward
// scheme. layer_params maps each layer to its constant coefficients.
double discrete_energy(const Mesh& mesh, const std::vector<double>& u,
                       const std::vector<LinearParams>& layer_params);

// Component totals integral(B^j) of a linear-model field, the quantities the
// undriven scheme conserves step to step.
Vec2 component_totals(const Mesh& mesh, const std::vector<double>& u,
                      const std::vector<LinearParams>& layer_params);

} // namespace hms
