#include "hms/mms.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace hms {

namespace {

// Shared coefficient blocks for the verification models. kappa_b = 2 kappa_a
// keeps the interface flux ratio identical for both components, so one shape
// function with a matched derivative jump satisfies both transmission
// conditions at once.
const Mat2 kKappaA{{{1.0, 0.25}, {0.25, 1.0}}};
const Mat2 kKappaB{{{2.0, 0.5}, {0.5, 2.0}}};
const Mat2 kBeta{{{1.0, 0.1}, {0.1, 1.0}}};

MaterialModel linear_material(const std::string& name, const Mat2& beta, const Mat2& kappa) {
  LinearParams p;
  p.beta = beta;
  p.kappa = kappa;
  return MaterialModel{name, p};
}

// sum_i kappa[j][i] c_i, the conormal weight of component j for shape c
Vec2 kappa_dot(const Mat2& k, const Vec2& c) {
  return {k[0][0] * c[0] + k[0][1] * c[1], k[1][0] * c[0] + k[1][1] * c[1]};
}

MmsCase make_constant_case() {
  MmsCase mc;
  mc.name = "constant";
  mc.layers = {{0, 0, 1, 1, "lin"}};
  mc.materials = {linear_material("lin", kBeta, kKappaA)};
  const double th0 = 293.15, m0 = 0.4;
  mc.alpha[Side::South] = {5.0, 5.0};
  mc.sigma[Side::South] = [=](double) { return Vec2{th0, m0}; };
  mc.exact = [=](int comp, double, double, double) { return comp == 0 ? th0 : m0; };
  mc.t_end = 1.0;
  return mc;
}

MmsCase make_linear_x_case() {
  MmsCase mc;
  mc.name = "linear-x";
  mc.layers = {{0, 0, 1, 1, "lin"}};
  mc.materials = {linear_material("lin", kBeta, kKappaA)};
  const Vec2 c{280.0, 0.3};
  const Vec2 d{10.0, 0.2};
  const Vec2 alpha{5.0, 5.0};
  const Vec2 w = kappa_dot(kKappaA, d); // conormal flux weights
  mc.alpha[Side::West] = alpha;
  mc.alpha[Side::East] = alpha;
  // x-linear field: sigma = trace + conormal flux / alpha on both driven sides
  mc.sigma[Side::West] = [=](double) {
    return Vec2{c[0] - w[0] / alpha[0], c[1] - w[1] / alpha[1]};
  };
  mc.sigma[Side::East] = [=](double) {
    return Vec2{c[0] + d[0] + w[0] / alpha[0], c[1] + d[1] + w[1] / alpha[1]};
  };
  mc.exact = [=](int comp, double x, double, double) { return c[comp] + d[comp] * x; };
  mc.t_end = 0.5;
  return mc;
}

// Stationary two-layer profile u^i = c_i w(y) with a conductivity jump at
// y = 1/2: w = sin(ay) below, continued above with half the slope so the
// conormal fluxes of both components match across the interface.
MmsCase make_two_layer_spatial_case() {
  MmsCase mc;
  mc.name = "two-layer-spatial";
  mc.layers = {{0, 0, 1, 0.5, "lin-a"}, {0, 0.5, 1, 1, "lin-b"}};
  mc.materials = {linear_material("lin-a", kBeta, kKappaA),
                  linear_material("lin-b", kBeta, kKappaB)};

  const double a = 2.0;
  const Vec2 c{1.0, 0.7};
  const Vec2 alpha{5.0, 5.0};
  const Vec2 s = kappa_dot(kKappaA, c);
  const double wa_mid = std::sin(a * 0.5);

  auto w = [=](double y) {
    return y <= 0.5 ? std::sin(a * y) : wa_mid + 0.5 * (std::sin(a * y) - wa_mid);
  };
  auto wp = [=](double y) { return y <= 0.5 ? a * std::cos(a * y) : 0.5 * a * std::cos(a * y); };

  // -div(kappa grad u) with kappa_b = 2 kappa_a and w_b'' = w_a''/2 gives the
  // same smooth source everywhere
  mc.sources = {[=](double, double y, double) -> Vec2 {
                  return {s[0] * a * a * std::sin(a * y), s[1] * a * a * std::sin(a * y)};
                },
                [=](double, double y, double) -> Vec2 {
                  return {s[0] * a * a * std::sin(a * y), s[1] * a * a * std::sin(a * y)};
                }};

  mc.alpha[Side::South] = alpha;
  mc.alpha[Side::North] = alpha;
  mc.sigma[Side::South] = [=](double) {
    // trace 0, outward normal (0,-1): conormal flux -kappa_a c w'(0)
    return Vec2{-s[0] * wp(0.0) / alpha[0], -s[1] * wp(0.0) / alpha[1]};
  };
  mc.sigma[Side::North] = [=](double) {
    const Vec2 sb = kappa_dot(kKappaB, c);
    return Vec2{c[0] * w(1.0) + sb[0] * wp(1.0) / alpha[0],
                c[1] * w(1.0) + sb[1] * wp(1.0) / alpha[1]};
  };
  // east/west undriven: the field has no x dependence, so the natural
  // zero-flux condition holds exactly
  mc.exact = [=](int comp, double, double y, double) { return c[comp] * w(y); };
  mc.t_end = 1.0;
  return mc;
}

// Single layer, u^i = c_i (2 + sin(by)) exp(-2t): smooth in time with the
// spatial part mild enough that the first-order stepping error dominates.
MmsCase make_smooth_temporal_case() {
  MmsCase mc;
  mc.name = "smooth-temporal";
  mc.layers = {{0, 0, 1, 1, "lin"}};
  mc.materials = {linear_material("lin", kBeta, kKappaA)};

  const double b = 1.5, rate = -2.0;
  const Vec2 c{1.0, 0.7};
  const Vec2 alpha{5.0, 5.0};
  const Vec2 sk = kappa_dot(kKappaA, c);
  const Vec2 sb = {kBeta[0][0] * c[0] + kBeta[0][1] * c[1],
                   kBeta[1][0] * c[0] + kBeta[1][1] * c[1]};

  auto shape = [=](double y) { return 2.0 + std::sin(b * y); };

  mc.sources = {[=](double, double y, double t) -> Vec2 {
    const double g = std::exp(rate * t);
    // beta du/dt - div(kappa grad u), with -u_yy = b^2 sin(by)
    return {sb[0] * shape(y) * rate * g + sk[0] * b * b * std::sin(b * y) * g,
            sb[1] * shape(y) * rate * g + sk[1] * b * b * std::sin(b * y) * g};
  }};

  mc.alpha[Side::South] = alpha;
  mc.alpha[Side::North] = alpha;
  mc.sigma[Side::South] = [=](double t) {
    const double g = std::exp(rate * t);
    return Vec2{(2 * c[0] - sk[0] * b / alpha[0]) * g, (2 * c[1] - sk[1] * b / alpha[1]) * g};
  };
  mc.sigma[Side::North] = [=](double t) {
    const double g = std::exp(rate * t);
    const double tr = shape(1.0), fl = b * std::cos(b);
    return Vec2{(c[0] * tr + sk[0] * fl / alpha[0]) * g, (c[1] * tr + sk[1] * fl / alpha[1]) * g};
  };
  mc.exact = [=](int comp, double, double y, double t) {
    return c[comp] * shape(y) * std::exp(rate * t);
  };
  mc.t_end = 1.0;
  return mc;
}

} // namespace

MmsCase mms_case(const std::string& name) {
  if (name == "constant") return make_constant_case();
  if (name == "linear-x") return make_linear_x_case();
  if (name == "two-layer-spatial") return make_two_layer_spatial_case();
  if (name == "smooth-temporal") return make_smooth_temporal_case();
  raise(ErrorKind::ValidationError, "unknown verification case: " + name);
}

std::vector<std::string> mms_case_names() {
  return {"constant", "linear-x", "two-layer-spatial", "smooth-temporal"};
}

RunSetup mms_setup(const MmsCase& mc, double h, double h_t) {
  RunSetup rs;
  rs.domain = build_domain(mc.layers);
  rs.h_target = h;
  rs.materials = mc.materials;
  rs.sources = mc.sources;
  rs.h_t = h_t;
  rs.t_end = mc.t_end;
  rs.strategy = StrategyKind::SemiImplicit; // linear cases: one solve per step
  rs.initial_fn = [ex = mc.exact](int comp, double x, double y) { return ex(comp, x, y, 0.0); };

  const int n_steps = static_cast<int>(std::llround(mc.t_end / h_t));
  for (const auto& [side, al] : mc.alpha) {
    const auto& sig = mc.sigma.at(side);
    std::vector<double> ts, s1, s2;
    for (int k = 0; k <= n_steps; ++k) {
      const double t = k * h_t;
      const Vec2 v = sig(t);
      ts.push_back(t);
      s1.push_back(v[0]);
      s2.push_back(v[1]);
    }
    rs.drives.by_side[side] = BoundaryDrive{al, ClimateSeries(ts, s1, s2)};
  }
  return rs;
}

double mms_error(const Mesh& mesh, const std::vector<double>& u, const MmsCase& mc, double t) {
  double acc = 0.0;
  for (int tri = 0; tri < mesh.num_tris(); ++tri) {
    const double w = mesh.tri_area(tri) / 3.0;
    for (int p = 0; p < 3; ++p) {
      const int n = mesh.tris[tri][p];
      for (int j = 0; j < 2; ++j) {
        const double e = u[mesh.dof(n, j)] - mc.exact(j, mesh.nodes[n].x, mesh.nodes[n].y, t);
        acc += w * e * e;
      }
    }
  }
  return std::sqrt(acc);
}

ConvergenceTable mms_verify(const MmsCase& mc, const std::vector<double>& h_list,
                            const std::vector<double>& ht_list, int threads) {
  ConvergenceTable table;
  std::vector<std::pair<double, double>> grid;
  for (double h : h_list)
    for (double ht : ht_list) grid.emplace_back(h, ht);

  auto one = [&mc](double h, double ht) {
    RunSetup rs = mms_setup(mc, h, ht);
    RunResult rr = run(rs);
    return mms_error(rr.mesh, rr.u, mc, mc.t_end);
  };

  std::vector<double> errs(grid.size());
  if (threads > 1) {
    std::vector<std::future<double>> futs;
    for (auto [h, ht] : grid)
      futs.push_back(std::async(std::launch::async, one, h, ht));
    // cap concurrency by harvesting in order; runs are independent
    for (size_t k = 0; k < grid.size(); ++k) errs[k] = futs[k].get();
  } else {
    for (size_t k = 0; k < grid.size(); ++k) errs[k] = one(grid[k].first, grid[k].second);
  }

  for (size_t k = 0; k < grid.size(); ++k)
    table.rows.push_back({grid[k].first, grid[k].second, errs[k]});

  const double h_min = *std::min_element(h_list.begin(), h_list.end());
  const double ht_min = *std::min_element(ht_list.begin(), ht_list.end());

  auto order = [](double e_coarse, double e_fine, double r_coarse, double r_fine) {
    return std::log(e_coarse / e_fine) / std::log(r_coarse / r_fine);
  };

  std::vector<std::pair<double, double>> sp; // (h, err) at finest h_t
  for (const auto& row : table.rows)
    if (row.h_t == ht_min) sp.emplace_back(row.h, row.error);
  std::sort(sp.begin(), sp.end(), std::greater<>());
  for (size_t k = 0; k + 1 < sp.size(); ++k)
    table.spatial_orders.push_back(order(sp[k].second, sp[k + 1].second, sp[k].first, sp[k + 1].first));

  std::vector<std::pair<double, double>> tp; // (h_t, err) at finest h
  for (const auto& row : table.rows)
    if (row.h == h_min) tp.emplace_back(row.h_t, row.error);
  std::sort(tp.begin(), tp.end(), std::greater<>());
  for (size_t k = 0; k + 1 < tp.size(); ++k)
    table.temporal_orders.push_back(order(tp[k].second, tp[k + 1].second, tp[k].first, tp[k + 1].first));

  return table;
}

} // namespace hms
