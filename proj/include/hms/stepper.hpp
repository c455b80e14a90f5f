#pragma once

#include <functional>
#include <optional>

#include "hms/assembly.hpp"
#include "hms/linsolve.hpp"

namespace hms {

// Additional volumetric source of one layer, evaluated at element centroids.
// Used by verification runs; physical models carry no interior sources.
using SourceFn = std::function<Vec2(double x, double y, double t)>;

enum class StrategyKind { SemiImplicit, Picard };

struct StepControls {
  double eps_fp = 1e-8; // fixed-point stop on the nodal max-norm change
  int max_picard = 25;
  double lin_tol = 1e-10;
  int lin_maxiter = 0; // 0 = solver default
};

// Per-element coefficients frozen at the centroid state (vertex average) of
// the given field; layer sources are sampled at the centroid and step time.
std::vector<CoefficientSet> freeze_coefficients(const Mesh& mesh,
                                                const std::vector<MaterialModel>& layer_models,
                                                const std::vector<double>& u,
                                                const std::vector<SourceFn>& layer_sources,
                                                double t_now);

struct StepResult {
  std::vector<double> u;
  int solves = 0;             // linear systems solved within the step
  int lin_iters = 0;          // accumulated Krylov iterations
  double final_delta = 0.0;   // last fixed-point change (0 for semi-implicit)
  std::vector<double> ratios; // successive contraction ratios of the iteration
};

// One backward difference step with all coefficients frozen at the previous
// time level: a single linear solve.
StepResult semi_implicit_step(const Mesh& mesh, const LayeredDomain& domain,
                              const std::vector<MaterialModel>& layer_models,
                              const std::vector<SourceFn>& layer_sources,
                              const BoundaryDriveSet& drives, const std::vector<double>& u_prev,
                              double t_now, double h_t, const StepControls& ctl);

// One backward difference step resolved by fixed-point iteration: coefficients
// are refrozen at each iterate until the nodal max-norm change drops below
// eps_fp. Raises NonContraction when the change ratio stays at or above one
// for three consecutive iterations, MaxPicardExceeded past the iteration cap.
StepResult picard_step(const Mesh& mesh, const LayeredDomain& domain,
                       const std::vector<MaterialModel>& layer_models,
                       const std::vector<SourceFn>& layer_sources, const BoundaryDriveSet& drives,
                       const std::vector<double>& u_prev, double t_now, double h_t,
                       const StepControls& ctl);

struct RunSetup {
  LayeredDomain domain;
  double h_target = 0.1;
  std::vector<MaterialModel> materials; // one per layer
  BoundaryDriveSet drives;
  std::vector<Vec2> initial; // per-layer constant initial state
  // overrides the constants when set (verification runs): component j at (x,y)
  std::function<double(int comp, double x, double y)> initial_fn;
  std::vector<SourceFn> sources; // per layer; empty = none
  double h_t = 1.0;
  double t_end = 1.0;
  StrategyKind strategy = StrategyKind::Picard;
  StepControls controls;
  std::vector<double> snapshot_times;
  std::vector<Point> probes;
};

struct StepReport {
  double t = 0.0;
  int solves = 0;
  int lin_iters = 0;
  double final_delta = 0.0;
  std::vector<double> ratios;
  // populated when every layer is linear
  std::optional<double> energy;
  std::optional<Vec2> totals;
};

struct RunResult {
  Mesh mesh;
  std::vector<double> u; // final field
  std::vector<StepReport> steps;
  std::vector<std::pair<double, std::vector<double>>> snapshots;
  std::vector<int> probe_nodes; // nearest mesh node per requested probe
  std::vector<std::vector<std::array<double, 3>>> probe_series; // (t, theta, m)
  std::vector<std::string> warnings;
};

// Interface nodes average the constants of the layers owning them.
std::vector<double> make_initial_field(const Mesh& mesh, const RunSetup& setup);

RunResult run(const RunSetup& setup);

} // namespace hms
