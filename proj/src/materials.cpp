#include "hms/materials.hpp"

#include <cmath>
#include <sstream>

namespace hms {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) raise(ErrorKind::ValidationError, what);
}

} // namespace

void KiesslParams::validate() const {
  require(rho0 > 0 && c0 > 0 && rho_w > 0 && c_w > 0 && L_v > 0, "kiessl: scalars must be positive");
  require(e > 0, "kiessl: porosity must be positive");
  require(f.size() && g.size() && rho_ps.size(), "kiessl: curves missing");
  require(std::abs(f.value(0.0)) <= 1e-12, "kiessl: water content curve must vanish at 0");
  require(std::abs(g.value(0.0)) <= 1e-12, "kiessl: humidity curve must vanish at 0");
  require(std::abs(g.deriv(0.0) - 1.0) <= 1e-6,
          "kiessl: humidity curve must have unit slope at 0");
}

void KunzelParams::validate() const {
  require(rho0 > 0 && c0 > 0 && rho_w > 0 && c_w > 0 && L_v > 0, "kunzel: scalars must be positive");
  require(mu > 0, "kunzel: diffusion resistance factor must be positive");
  require(h.size() && p_s.size() && delta.size(), "kunzel: curves missing");
  require(std::abs(h.value(0.0)) <= 1e-12, "kunzel: storage curve must vanish at 0");
}

CoefficientSet eval_kiessl(const KiesslParams& p, const StateSample& s) {
  const double th = s.theta, m = s.m;
  const double f = p.f.value(m), fp = p.f.deriv(m);
  const double g = p.g.value(m), gp = p.g.deriv(m);
  const double rp = p.rho_ps.value(th), rpp = p.rho_ps.deriv(th);
  const double lam = p.lambda.value(f, th);
  const double Dw = p.D_w.value(f, th);
  const double Dphi = p.D_phi.value(f, th);
  const double Dth = p.D_theta.value(f, th);

  // air-filled pore volume (e - f) holds vapour at density g * rho_ps
  const double vap = (p.e - f) * g;
  const double dvap = -fp * g + (p.e - f) * gp;
  // combined moisture diffusivity along the potential gradient
  const double q = Dw * fp + Dphi * gp;

  CoefficientSet c;
  c.B = {p.rho0 * p.c0 * th + p.rho_w * p.c_w * g * th + p.L_v * vap * rp,
         p.rho_w * f + vap * rp};
  c.b[0][0] = p.rho0 * p.c0 + p.rho_w * p.c_w * g + p.L_v * vap * rpp;
  c.b[1][0] = p.rho_w * p.c_w * gp * th + p.L_v * dvap * rp;
  c.b[0][1] = vap * rpp;
  c.b[1][1] = p.rho_w * fp + dvap * rp;
  c.a[0][0] = lam;
  c.a[0][1] = p.L_v * q;
  c.a[1][0] = Dth;
  c.a[1][1] = q;
  return c;
}

CoefficientSet eval_kunzel(const KunzelParams& p, const StateSample& s) {
  const double th = s.theta, phi = s.m;
  const double h = p.h.value(phi), hp = p.h.deriv(phi);
  const double ps = p.p_s.value(th), psp = p.p_s.deriv(th);
  const double dpm = p.delta.value(th) / p.mu; // vapour permeability of the material
  const double lam = p.lambda.value(h, th);
  const double Dph = p.D_phi_hat.value(phi, th);

  CoefficientSet c;
  c.B = {p.rho0 * p.c0 * th + p.rho_w * p.c_w * h * th, p.rho_w * h};
  c.b[0][0] = p.rho0 * p.c0 + p.rho_w * p.c_w * h;
  c.b[1][0] = p.rho_w * p.c_w * th * hp;
  c.b[0][1] = 0.0;
  c.b[1][1] = p.rho_w * hp;
  // vapour flux delta/mu * grad(phi p_s) split into its phi and theta parts,
  // with the latent multiple feeding the heat balance
  c.a[0][0] = lam + p.L_v * dpm * phi * psp;
  c.a[0][1] = p.L_v * dpm * ps;
  c.a[1][0] = dpm * phi * psp;
  c.a[1][1] = Dph + dpm * ps;
  return c;
}

CoefficientSet eval_linear(const LinearParams& p, const StateSample& s) {
  CoefficientSet c;
  const Vec2 z{s.theta, s.m};
  for (int j = 0; j < 2; ++j) {
    c.B[j] = p.beta[j][0] * z[0] + p.beta[j][1] * z[1];
    for (int i = 0; i < 2; ++i) {
      c.b[i][j] = p.beta[j][i];
      c.a[j][i] = p.kappa[j][i];
    }
  }
  c.fsrc = p.fsrc;
  return c;
}

CoefficientSet MaterialModel::eval(const StateSample& s) const {
  return std::visit([&](const auto& p) { return [&] {
    using T = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<T, LinearParams>) return eval_linear(p, s);
    else if constexpr (std::is_same_v<T, KiesslParams>) return eval_kiessl(p, s);
    else return eval_kunzel(p, s);
  }(); }, params);
}

const char* MaterialModel::kind() const {
  if (std::holds_alternative<LinearParams>(params)) return "linear";
  if (std::holds_alternative<KiesslParams>(params)) return "kiessl";
  return "kunzel";
}

StructureReport check_structure_conditions(const MaterialModel& model,
                                           std::pair<double, double> theta_range,
                                           std::pair<double, double> m_range, int n_per_axis) {
  if (n_per_axis < 2) raise(ErrorKind::ValidationError, "structure sweep needs n >= 2");

  StructureReport rep;
  rep.storage_monotone.id = "storage-monotone";
  rep.conductivity_positive.id = "conductivity-positive";
  rep.parabolicity.id = "parabolicity";
  rep.ellipticity.id = "ellipticity";

  bool first = true;
  auto update = [&](StructureReport::Item& item, double margin, const StateSample& s) {
    if (first || margin < item.worst_margin) {
      item.worst_margin = margin;
      item.worst_state = s;
    }
    if (!(margin > 0)) item.pass = false; // strict inequality: equality fails
  };

  for (int i = 0; i < n_per_axis; ++i) {
    for (int j = 0; j < n_per_axis; ++j) {
      StateSample s;
      s.theta = theta_range.first +
                (theta_range.second - theta_range.first) * i / (n_per_axis - 1);
      s.m = m_range.first + (m_range.second - m_range.first) * j / (n_per_axis - 1);
      const CoefficientSet c = model.eval(s);

      update(rep.storage_monotone, std::min(c.b[0][0], c.b[1][1]), s);
      update(rep.conductivity_positive,
             std::min(std::min(c.a[0][0], c.a[0][1]), std::min(c.a[1][0], c.a[1][1])), s);
      const double cross = 0.5 * (c.b[0][1] * c.a[1][0] + c.b[1][0] * c.a[0][1]);
      update(rep.parabolicity,
             c.b[0][0] * c.b[1][1] * c.a[0][1] * c.a[1][0] - cross * cross, s);
      update(rep.ellipticity, c.a[0][0] * c.a[1][1] - c.a[0][1] * c.a[1][0], s);
      first = false;
      ++rep.samples;
    }
  }
  return rep;
}

LinearCheck check_linear_conditions(const LinearParams& p) {
  LinearCheck c;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      if (!(p.beta[j][i] > 0) || !(p.kappa[j][i] > 0)) c.positivity = false;
  if (p.nu[0] < 0 || p.nu[1] < 0) c.positivity = false;

  const double cross = 0.5 * (p.beta[0][1] * p.kappa[1][0] + p.beta[1][0] * p.kappa[0][1]);
  c.parabolic_lhs = p.beta[0][0] * p.beta[1][1] * p.kappa[0][1] * p.kappa[1][0];
  c.parabolic_rhs = cross * cross;
  c.parabolic = c.parabolic_lhs > c.parabolic_rhs;

  c.elliptic_lhs = p.kappa[0][0] * p.kappa[1][1];
  c.elliptic_rhs = p.kappa[0][1] * p.kappa[1][0];
  c.elliptic = c.elliptic_lhs > c.elliptic_rhs;
  return c;
}

} // namespace hms
