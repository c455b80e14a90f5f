#include "hms/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hms {

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> solve_step(const Mesh& mesh, const LayeredDomain& domain,
                               const std::vector<CoefficientSet>& coeffs,
                               const std::vector<double>& u_prev, double t_now, double h_t,
                               const BoundaryDriveSet& drives, const StepControls& ctl,
                               int& lin_iters) {
  SparseSystem sys = assemble_step_system(mesh, domain, coeffs, u_prev, h_t, drives, t_now);
  LinsolveResult sol = solve(sys, ctl.lin_tol, ctl.lin_maxiter);
  lin_iters += sol.iterations;
  if (sol.status == SolveStatus::MaxIterExceeded) {
    std::ostringstream os;
    os << "linear solve stalled at t = " << t_now << ", residual " << sol.residual;
    raise(ErrorKind::MaxIterExceeded, os.str());
  }
  return std::move(sol.x);
}

} // namespace

std::vector<CoefficientSet> freeze_coefficients(const Mesh& mesh,
                                                const std::vector<MaterialModel>& layer_models,
                                                const std::vector<double>& u,
                                                const std::vector<SourceFn>& layer_sources,
                                                double t_now) {
  std::vector<CoefficientSet> coeffs(mesh.num_tris());
  for (int t = 0; t < mesh.num_tris(); ++t) {
    const auto& v = mesh.tris[t];
    StateSample s;
    s.theta = (u[mesh.dof(v[0], 0)] + u[mesh.dof(v[1], 0)] + u[mesh.dof(v[2], 0)]) / 3.0;
    s.m = (u[mesh.dof(v[0], 1)] + u[mesh.dof(v[1], 1)] + u[mesh.dof(v[2], 1)]) / 3.0;
    const int L = mesh.tri_layer[t];
    coeffs[t] = layer_models[L].eval(s);
    if (!layer_sources.empty() && layer_sources[L]) {
      double cx = (mesh.nodes[v[0]].x + mesh.nodes[v[1]].x + mesh.nodes[v[2]].x) / 3.0;
      double cy = (mesh.nodes[v[0]].y + mesh.nodes[v[1]].y + mesh.nodes[v[2]].y) / 3.0;
      Vec2 f = layer_sources[L](cx, cy, t_now);
      coeffs[t].fsrc[0] += f[0];
      coeffs[t].fsrc[1] += f[1];
    }
  }
  return coeffs;
}

StepResult semi_implicit_step(const Mesh& mesh, const LayeredDomain& domain,
                              const std::vector<MaterialModel>& layer_models,
                              const std::vector<SourceFn>& layer_sources,
                              const BoundaryDriveSet& drives, const std::vector<double>& u_prev,
                              double t_now, double h_t, const StepControls& ctl) {
  StepResult r;
  auto coeffs = freeze_coefficients(mesh, layer_models, u_prev, layer_sources, t_now);
  r.u = solve_step(mesh, domain, coeffs, u_prev, t_now, h_t, drives, ctl, r.lin_iters);
  r.solves = 1;
  if (!all_finite(r.u)) raise(ErrorKind::NonfiniteState, "state left the finite range");
  return r;
}

StepResult picard_step(const Mesh& mesh, const LayeredDomain& domain,
                       const std::vector<MaterialModel>& layer_models,
                       const std::vector<SourceFn>& layer_sources, const BoundaryDriveSet& drives,
                       const std::vector<double>& u_prev, double t_now, double h_t,
                       const StepControls& ctl) {
  StepResult r;
  std::vector<double> u_k = u_prev;
  double prev_delta = std::numeric_limits<double>::quiet_NaN();
  int rising = 0;

  for (int k = 1; k <= ctl.max_picard; ++k) {
    auto coeffs = freeze_coefficients(mesh, layer_models, u_k, layer_sources, t_now);
    std::vector<double> u_next =
        solve_step(mesh, domain, coeffs, u_prev, t_now, h_t, drives, ctl, r.lin_iters);
    ++r.solves;

    double delta = max_abs_diff(u_next, u_k);
    if (!std::isnan(prev_delta) && prev_delta > 0) {
      double ratio = delta / prev_delta;
      r.ratios.push_back(ratio);
      rising = ratio >= 1.0 ? rising + 1 : 0;
      if (rising >= 3) {
        std::ostringstream os;
        os << "fixed-point iteration stopped contracting at t = " << t_now << " (h_t = " << h_t
           << ", last ratios";
        size_t n = r.ratios.size();
        for (size_t i = n >= 3 ? n - 3 : 0; i < n; ++i) os << " " << r.ratios[i];
        os << ")";
        raise(ErrorKind::NonContraction, os.str());
      }
    }
    u_k = std::move(u_next);
    r.final_delta = delta;

    if (!all_finite(u_k)) raise(ErrorKind::NonfiniteState, "state left the finite range");

    if (delta <= ctl.eps_fp) {
      r.u = std::move(u_k);
      return r;
    }
    prev_delta = delta;
  }

  std::ostringstream os;
  os << "fixed-point iteration did not reach " << ctl.eps_fp << " within " << ctl.max_picard
     << " iterations at t = " << t_now << " (last change " << r.final_delta << ")";
  raise(ErrorKind::MaxPicardExceeded, os.str());
}

std::vector<double> make_initial_field(const Mesh& mesh, const RunSetup& setup) {
  std::vector<double> u(mesh.num_dofs(), 0.0);
  if (setup.initial_fn) {
    for (int n = 0; n < mesh.num_nodes(); ++n)
      for (int j = 0; j < 2; ++j)
        u[mesh.dof(n, j)] = setup.initial_fn(j, mesh.nodes[n].x, mesh.nodes[n].y);
    return u;
  }
  if (setup.initial.size() != setup.domain.layers.size())
    raise(ErrorKind::ValidationError, "initial state count does not match layer count");
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const auto& owners = mesh.node_layers[n];
    Vec2 acc{0, 0};
    for (int L : owners) {
      acc[0] += setup.initial[L][0];
      acc[1] += setup.initial[L][1];
    }
    u[mesh.dof(n, 0)] = acc[0] / owners.size();
    u[mesh.dof(n, 1)] = acc[1] / owners.size();
  }
  return u;
}

RunResult run(const RunSetup& setup) {
  if (setup.materials.size() != setup.domain.layers.size())
    raise(ErrorKind::ValidationError, "material count does not match layer count");
  if (!(setup.h_t > 0) || !(setup.t_end > 0))
    raise(ErrorKind::ValidationError, "time step and end time must be positive");

  RunResult res;
  res.mesh = triangulate(setup.domain, setup.h_target);
  const Mesh& mesh = res.mesh;
  res.u = make_initial_field(mesh, setup);
  if (!all_finite(res.u)) raise(ErrorKind::NonfiniteState, "initial state is not finite");

  const bool all_linear = std::all_of(setup.materials.begin(), setup.materials.end(),
                                      [](const MaterialModel& m) { return m.is_linear(); });
  std::vector<LinearParams> lin_params;
  BoundaryDriveSet drives = setup.drives;
  if (all_linear) {
    for (const auto& m : setup.materials) lin_params.push_back(*m.linear());
    if (drives.layer_nu.empty())
      for (const auto& p : lin_params) drives.layer_nu.push_back(p.nu);
  }

  // flag visible clashes between the initial state and the t = 0 drive
  for (const auto& [side, drive] : drives.by_side) {
    Vec2 s0 = drive.sigma.value(0.0);
    for (size_t L = 0; L < setup.initial.size(); ++L) {
      for (int j = 0; j < 2; ++j) {
        double init = setup.initial[L][j];
        double scale = std::max({1.0, std::abs(init), std::abs(s0[j])});
        if (drive.alpha[j] > 0 && std::abs(init - s0[j]) > 1e-6 * scale) {
          std::ostringstream os;
          os << "initial state of layer " << L << " component " << j + 1 << " (" << init
             << ") differs from " << to_string(side) << " drive at t = 0 (" << s0[j] << ")";
          res.warnings.push_back(os.str());
        }
      }
    }
    if (setup.initial_fn) break; // verification runs set their own data
  }

  // probes snap to the nearest node
  for (const Point& p : setup.probes) {
    int best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (int n = 0; n < mesh.num_nodes(); ++n) {
      double d = (mesh.nodes[n].x - p.x) * (mesh.nodes[n].x - p.x) +
                 (mesh.nodes[n].y - p.y) * (mesh.nodes[n].y - p.y);
      if (d < best_d) {
        best_d = d;
        best = n;
      }
    }
    res.probe_nodes.push_back(best);
  }
  res.probe_series.resize(res.probe_nodes.size());

  auto record_probes = [&](double t) {
    for (size_t p = 0; p < res.probe_nodes.size(); ++p) {
      int n = res.probe_nodes[p];
      res.probe_series[p].push_back({t, res.u[mesh.dof(n, 0)], res.u[mesh.dof(n, 1)]});
    }
  };
  auto maybe_snapshot = [&](double t) {
    for (double ts : setup.snapshot_times)
      if (std::abs(ts - t) <= 1e-9 * std::max(1.0, std::abs(ts)))
        res.snapshots.emplace_back(t, res.u);
  };

  record_probes(0.0);
  maybe_snapshot(0.0);

  const int n_steps = static_cast<int>(std::llround(setup.t_end / setup.h_t));
  if (std::abs(n_steps * setup.h_t - setup.t_end) > 1e-9 * setup.t_end)
    raise(ErrorKind::ValidationError, "end time must be a whole number of steps");

  for (int n = 1; n <= n_steps; ++n) {
    const double t_now = n * setup.h_t;
    StepResult sr = setup.strategy == StrategyKind::SemiImplicit
                        ? semi_implicit_step(mesh, setup.domain, setup.materials, setup.sources,
                                             drives, res.u, t_now, setup.h_t, setup.controls)
                        : picard_step(mesh, setup.domain, setup.materials, setup.sources, drives,
                                      res.u, t_now, setup.h_t, setup.controls);
    res.u = std::move(sr.u);

    StepReport rep;
    rep.t = t_now;
    rep.solves = sr.solves;
    rep.lin_iters = sr.lin_iters;
    rep.final_delta = sr.final_delta;
    rep.ratios = std::move(sr.ratios);
    if (all_linear) {
      rep.energy = discrete_energy(mesh, res.u, lin_params);
      rep.totals = component_totals(mesh, res.u, lin_params);
    }
    res.steps.push_back(std::move(rep));

    record_probes(t_now);
    maybe_snapshot(t_now);
  }
  return res;
}

} // namespace hms
