// End-to-end acceptance gate. Each criterion prints one [PASS]/[FAIL] line
// with the measured numbers; the exit code is the number of failed criteria.
// Everything runs on the demo data directory given as argv[1].

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hms/assembly.hpp"
#include "hms/config.hpp"
#include "hms/errors.hpp"
#include "hms/io.hpp"
#include "hms/mms.hpp"
#include "hms/pencil.hpp"
#include "hms/stepper.hpp"

using namespace hms;
using cplx = std::complex<double>;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr double kPi = 3.14159265358979323846;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << v;
  return ss.str();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void run_criterion(int n, const std::string& label, const std::function<Verdict()>& fn) {
  Verdict v;
  try {
    v = fn();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("unexpected error: ") + e.what();
  }
  std::cout << (v.pass ? "[PASS]" : "[FAIL]") << " criterion " << n << ": " << label;
  if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
  std::cout << std::endl;
  if (!v.pass) ++g_failures;
}

LinearParams conserving_params() {
  LinearParams lp;
  lp.beta = {{{1.0, 0.1}, {0.1, 1.0}}};
  lp.kappa = {{{2.0, 0.5}, {0.5, 2.0}}};
  return lp;
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <data-dir>\n";
    return 2;
  }
  const std::string data = argv[1];
  set_log_level(LogLevel::Warn);

  // 1: second-order spatial convergence across a conductivity jump
  run_criterion(1, "spatial convergence order on the two-layer transmission case", [&] {
    const auto t0 = clock_type::now();
    const MmsCase mc = mms_case("two-layer-spatial");
    const ConvergenceTable table =
        mms_verify(mc, {1.0 / 8, 1.0 / 16, 1.0 / 32}, {mc.t_end / 32});
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = !table.spatial_orders.empty() && secs < 60.0;
    std::string orders;
    for (double o : table.spatial_orders) {
      if (!(o >= 1.7 && o <= 2.3)) v.pass = false;
      orders += (orders.empty() ? "" : " ") + fmt(o, 4);
    }
    v.detail = "orders " + orders + ", " + fmt(secs, 2) + " s";
    return v;
  });

  // 2: first-order temporal convergence of the backward difference
  run_criterion(2, "temporal convergence order of the backward difference", [&] {
    const auto t0 = clock_type::now();
    const MmsCase mc = mms_case("smooth-temporal");
    const ConvergenceTable table =
        mms_verify(mc, {1.0 / 32}, {mc.t_end / 8, mc.t_end / 16, mc.t_end / 32});
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = !table.temporal_orders.empty() && secs < 60.0;
    std::string orders;
    for (double o : table.temporal_orders) {
      if (!(o >= 0.8 && o <= 1.2)) v.pass = false;
      orders += (orders.empty() ? "" : " ") + fmt(o, 4);
    }
    v.detail = "orders " + orders + ", " + fmt(secs, 2) + " s";
    return v;
  });

  // 3 and 4 share one undriven linear two-layer run
  RunResult undriven;
  Vec2 base_totals{0, 0};
  double base_energy = 0.0;
  bool undriven_ok = false;
  {
    const LinearParams lp = conserving_params();
    RunSetup s;
    s.domain = build_domain({{0, 0, 1, 1, "a"}, {1, 0, 2, 1, "b"}});
    s.h_target = 0.25;
    s.materials = {MaterialModel{"a", lp}, MaterialModel{"b", lp}};
    s.initial = {{1, 1}, {1, 1}};
    s.initial_fn = [](int c, double x, double y) {
      return c == 0 ? 2.0 + std::sin(1.3 * x) * std::cos(0.7 * y)
                    : 1.0 + 0.25 * x * y + 0.1 * std::cos(x);
    };
    s.h_t = 0.01;
    s.t_end = 1.0; // 100 steps
    s.strategy = StrategyKind::SemiImplicit;
    try {
      undriven = run(s);
      const std::vector<double> u0 = make_initial_field(undriven.mesh, s);
      const std::vector<LinearParams> per_layer = {lp, lp};
      base_totals = component_totals(undriven.mesh, u0, per_layer);
      base_energy = discrete_energy(undriven.mesh, u0, per_layer);
      undriven_ok = true;
    } catch (const std::exception&) {
      undriven_ok = false;
    }
  }

  run_criterion(3, "undriven linear run conserves both weighted totals", [&] {
    Verdict v;
    if (!undriven_ok || undriven.steps.size() != 100) {
      v.detail = "run did not complete";
      return v;
    }
    double drift = 0.0;
    for (const StepReport& st : undriven.steps) {
      if (!st.totals) {
        v.detail = "missing totals on a step";
        return v;
      }
      for (int j = 0; j < 2; ++j)
        drift = std::max(drift, std::abs((*st.totals)[j] - base_totals[j]) /
                                    std::max(1.0, std::abs(base_totals[j])));
    }
    v.pass = drift <= 1e-8;
    v.detail = "max relative drift " + fmt(drift, 3) + " over 100 steps";
    return v;
  });

  run_criterion(4, "discrete energy decays monotonically on the undriven run", [&] {
    Verdict v;
    if (!undriven_ok || undriven.steps.size() != 100) {
      v.detail = "run did not complete";
      return v;
    }
    const LinearCheck lc = check_linear_conditions(conserving_params());
    if (!lc.all_pass()) {
      v.detail = "coefficient conditions do not hold";
      return v;
    }
    double prev = base_energy;
    double worst_rise = 0.0;
    for (const StepReport& st : undriven.steps) {
      if (!st.energy) {
        v.detail = "missing energy on a step";
        return v;
      }
      worst_rise = std::max(worst_rise, (*st.energy - prev) / std::max(1.0, std::abs(prev)));
      prev = *st.energy;
    }
    v.pass = worst_rise <= 1e-8;
    v.detail = "worst relative rise " + fmt(worst_rise, 3) + " over 100 steps";
    return v;
  });

  // 5: equal-angle corner roots match the closed-form family
  run_criterion(5, "equal-angle corner roots match the closed-form family", [&] {
    const auto t0 = clock_type::now();
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> diag(1.0, 3.0), off(0.05, 0.4);
    auto rand_mat = [&] {
      Mat2 m;
      m[0][0] = diag(rng);
      m[1][1] = diag(rng);
      m[0][1] = off(rng);
      m[1][0] = off(rng);
      return m;
    };
    Verdict v;
    v.pass = true;
    double worst = 0.0;
    int searched = 0;
    for (double wa : {kPi / 6.0, kPi / 4.0, kPi / 2.0}) {
      for (int rep = 0; rep < 5; ++rep) {
        PencilProblem p{rand_mat(), rand_mat(), wa, 2.0 * wa};
        const std::vector<PencilRoot> roots = roots_in_strip(p, Strip{-3.0, 0.0, 12.0});
        const std::vector<cplx> fam = equal_angle_root_family(wa, -3.0, 0.0);
        ++searched;
        if (roots.size() != fam.size()) {
          v.pass = false;
          continue;
        }
        for (size_t k = 0; k < roots.size(); ++k) {
          const double err = std::abs(roots[k].lambda - fam[k]);
          worst = std::max(worst, err);
          if (err > 1e-9) v.pass = false;
        }
        const RegularityVerdict verdict = regularity_verdict(p);
        if (!verdict.regular || !verdict.theorem_backed) v.pass = false;
      }
    }
    const double secs = seconds_since(t0);
    if (secs >= 30.0) v.pass = false;
    v.detail = std::to_string(searched) + " searches, worst root error " + fmt(worst, 3) +
               ", " + fmt(secs, 2) + " s";
    return v;
  });

  // 6: re-entrant corner carries exactly one strip root at -2i/3
  run_criterion(6, "re-entrant corner exposes the single strip root", [&] {
    const Mat2 eps = {{{2.0, 0.3}, {0.3, 1.5}}};
    const PencilProblem p = exterior_corner_problem(eps, 1.5 * kPi);
    const std::vector<PencilRoot> roots = roots_in_strip(p);
    Verdict v;
    if (roots.size() != 1) {
      v.detail = "expected 1 strip root, found " + std::to_string(roots.size());
      return v;
    }
    const double err = std::abs(roots[0].lambda - cplx(0.0, -2.0 / 3.0));
    const RegularityVerdict verdict = regularity_verdict(p);
    v.pass = err <= 1e-9 && !verdict.regular;
    v.detail = "root error " + fmt(err, 3) + ", regular=" + (verdict.regular ? "yes" : "no");
    return v;
  });

  // 7: fixed-point contraction on the demo wall, and its collapse under
  // coarsened steps
  run_criterion(7, "fixed-point contraction holds at the demo step and breaks when coarsened",
                [&] {
                  const RunConfig cfg = load_config(data + "/wall.ini");
                  const RunSetup s = make_setup(cfg);
                  const RunResult r = run(s);
                  Verdict v;
                  double worst_ratio = 0.0, worst_delta = 0.0;
                  bool contracting = !r.steps.empty();
                  for (const StepReport& st : r.steps) {
                    if (st.ratios.empty()) contracting = false;
                    for (double q : st.ratios) worst_ratio = std::max(worst_ratio, q);
                    worst_delta = std::max(worst_delta, st.final_delta);
                  }
                  if (worst_ratio >= 1.0 || worst_delta >= 1e-8) contracting = false;

                  int tripped_at = -1;
                  double ht = s.h_t;
                  for (int level = 1; level <= 8 && tripped_at < 0; ++level) {
                    ht *= 64.0;
                    RunSetup e = s;
                    e.h_t = ht;
                    e.t_end = ht; // a single coarse step
                    try {
                      run(e);
                    } catch (const Error& err) {
                      if (err.kind() != ErrorKind::NonContraction) throw;
                      tripped_at = level;
                    }
                  }
                  v.pass = contracting && tripped_at > 0;
                  v.detail = "worst ratio " + fmt(worst_ratio, 3) + ", worst delta " +
                             fmt(worst_delta, 3) + ", breakdown at h_t=" + fmt(ht, 6) + " s";
                  return v;
                });

  // 8: interface flux jump shrinks by >= 1.5 per mesh halving
  run_criterion(8, "interface flux jump shrinks under mesh refinement", [&] {
    LinearParams left = conserving_params();
    left.kappa = {{{1.0, 0.25}, {0.25, 1.0}}};
    const LinearParams right = conserving_params();

    std::vector<double> jumps;
    for (int k = 0; k < 4; ++k) {
      RunSetup s;
      s.domain = build_domain({{0, 0, 1, 1, "L"}, {1, 0, 2, 1, "R"}});
      s.h_target = 0.25 / (1 << k);
      s.materials = {MaterialModel{"L", left}, MaterialModel{"R", right}};
      s.initial = {{0.0, 0.0}, {0.0, 0.0}};
      s.drives.by_side[Side::West] = {{4.0, 4.0}, ClimateSeries({0.0}, {0.0}, {0.0})};
      s.drives.by_side[Side::East] = {{4.0, 4.0}, ClimateSeries({0.0}, {1.0}, {1.0})};
      s.drives.by_side[Side::South] = {{3.0, 3.0}, ClimateSeries({0.0}, {0.5}, {-0.5})};
      s.h_t = 1e6; // a handful of huge steps lands on the stationary state
      s.t_end = 5e6;
      s.strategy = StrategyKind::SemiImplicit;
      s.controls.lin_tol = 1e-12;
      const RunResult r = run(s);
      const auto coeffs = freeze_coefficients(r.mesh, s.materials, r.u, {}, s.t_end);
      double total = 0.0;
      for (const Vec2& w : interface_flux_jump(r.mesh, s.domain, coeffs, r.u))
        total += w[0] * w[0] + w[1] * w[1];
      jumps.push_back(std::sqrt(total));
    }
    Verdict v;
    v.pass = true;
    std::string ratios;
    for (size_t k = 0; k + 1 < jumps.size(); ++k) {
      const double ratio = jumps[k] / jumps[k + 1];
      if (!(ratio >= 1.5)) v.pass = false;
      ratios += (ratios.empty() ? "" : " ") + fmt(ratio, 3);
    }
    v.detail = "halving ratios " + ratios;
    return v;
  });

  // 9: structure sweep passes the clean tables, flags scaled cross-conduction
  run_criterion(9, "structure sweep passes clean tables and flags scaled cross-conduction", [&] {
    const RunConfig cfg = load_config(data + "/wall.ini");
    const std::vector<MaterialModel> models = build_materials(cfg);
    const MaterialModel& brick = models.front();

    const StructureReport rep =
        check_structure_conditions(brick, {273.15, 313.15}, {0.05, 0.95}, 11);
    const bool clean_ok = rep.core_pass() && rep.samples == 121;

    // same grid, cross conductivities scaled x50: ellipticity must break
    double worst = 0.0;
    bool first = true;
    for (int i = 0; i < 11; ++i) {
      for (int j = 0; j < 11; ++j) {
        StateSample st;
        st.theta = 273.15 + (313.15 - 273.15) * i / 10.0;
        st.m = 0.05 + (0.95 - 0.05) * j / 10.0;
        const CoefficientSet c = brick.eval(st);
        const double margin = c.a[0][0] * c.a[1][1] - (50.0 * c.a[0][1]) * (50.0 * c.a[1][0]);
        if (first || margin < worst) worst = margin;
        first = false;
      }
    }
    const bool corrupted_fails = !(worst > 0.0);
    Verdict v;
    v.pass = clean_ok && corrupted_fails;
    v.detail = "clean ellipticity margin " + fmt(rep.ellipticity.worst_margin, 3) +
               ", corrupted margin " + fmt(worst, 3);
    return v;
  });

  // 10: storage derivative matrix matches finite differences of the storages
  run_criterion(10, "storage derivatives match finite differences of the storage terms", [&] {
    const MaterialModel brick = build_materials(load_config(data + "/wall.ini")).front();
    const MaterialModel mortar = build_materials(load_config(data + "/mortar.ini")).front();

    Verdict v;
    v.pass = true;
    double worst_rel = 0.0;
    int states = 0;
    unsigned seed = 7771;
    for (const MaterialModel* model : {&brick, &mortar}) {
      std::mt19937 rng(seed++);
      std::uniform_real_distribution<double> th(275.0, 311.0), mm(0.08, 0.92);
      for (int n = 0; n < 100; ++n) {
        StateSample s{th(rng), mm(rng)};
        const CoefficientSet c = model->eval(s);
        ++states;
        for (int i = 0; i < 2; ++i) {
          const double d = i == 0 ? 1e-3 : 1e-5;
          StateSample hi = s, lo = s;
          (i == 0 ? hi.theta : hi.m) += d;
          (i == 0 ? lo.theta : lo.m) -= d;
          const CoefficientSet chi = model->eval(hi);
          const CoefficientSet clo = model->eval(lo);
          for (int j = 0; j < 2; ++j) {
            const double fd = (chi.B[j] - clo.B[j]) / (2.0 * d);
            const double scale = std::max(std::abs(c.b[i][j]), std::abs(fd));
            const double err = std::abs(c.b[i][j] - fd);
            if (err > std::max(1e-8, 1e-5 * scale)) v.pass = false;
            if (scale > 0) worst_rel = std::max(worst_rel, err / std::max(1.0, scale));
          }
        }
      }
    }
    v.detail = std::to_string(states) + " states, worst relative gap " + fmt(worst_rel, 3);
    return v;
  });

  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) +
                                                              " criteria failed")
            << std::endl;
  return g_failures;
}
