#pragma once

#include "hms/stepper.hpp"

namespace hms {

// Closed-form verification case: a manufactured exact solution with matching
// volumetric sources and boundary data. Drives are given as functions of time
// and sampled onto each run's step grid, so the series interpolation is exact
// at every step time.
struct MmsCase {
  std::string name;
  std::vector<LayerRect> layers;
  std::vector<MaterialModel> materials;
  std::map<Side, Vec2> alpha;
  std::map<Side, std::function<Vec2(double t)>> sigma;
  std::vector<SourceFn> sources;
  std::function<double(int comp, double x, double y, double t)> exact;
  double t_end = 1.0;
};

// Built-in cases:
//   constant          spatially and temporally constant state (sanity)
//   linear-x          stationary field linear in x, reproduced exactly by P1
//   two-layer-spatial stationary piecewise-smooth field across a conductivity
//                     jump, for the spatial convergence order
//   smooth-temporal   single layer, smooth exponential decay in time, for the
//                     backward difference order
MmsCase mms_case(const std::string& name);
std::vector<std::string> mms_case_names();

struct ConvergenceRow {
  double h, h_t, error;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;      // full (h, h_t) grid, h outer loop
  std::vector<double> spatial_orders;    // successive h pairs at the smallest h_t
  std::vector<double> temporal_orders;   // successive h_t pairs at the smallest h
};

// Runs the case on every (h, h_t) combination and reduces observed orders.
// threads > 1 runs independent grid entries concurrently; results are
// identical either way.
ConvergenceTable mms_verify(const MmsCase& mc, const std::vector<double>& h_list,
                            const std::vector<double>& ht_list, int threads = 1);

// Nodal L2 error of a run result against the exact solution at time t.
double mms_error(const Mesh& mesh, const std::vector<double>& u, const MmsCase& mc, double t);

// Assembles the RunSetup for one (h, h_t) resolution of a case.
RunSetup mms_setup(const MmsCase& mc, double h, double h_t);

} // namespace hms
