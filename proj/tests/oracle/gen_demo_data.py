#!/usr/bin/env python3
"""Generate the demo material tables, climate series and configs under data/,
and print golden interpolation/coefficient values for the C++ unit tests.

The printed values are frozen into tests/test_curves.cpp and
tests/test_materials.cpp. Rerunning the script regenerates identical files
(everything is closed-form, no randomness).
"""

import math
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

ROOT = Path(__file__).resolve().parents[2]
DATA = ROOT / "data"


def g17(v):
    return np.format_float_scientific(v, precision=16) if False else repr(float(v))


def write_curve(name, x, y):
    lines = ["x,value"]
    for xi, yi in zip(x, y):
        lines.append(f"{g17(xi)},{g17(yi)}")
    (DATA / name).write_text("\n".join(lines) + "\n")


def write_surface(name, maxis, taxis, fn):
    head = "m\\theta," + ",".join(g17(t) for t in taxis)
    lines = [head]
    for m in maxis:
        lines.append(g17(m) + "," + ",".join(g17(fn(m, t)) for t in taxis))
    (DATA / name).write_text("\n".join(lines) + "\n")


def write_climate(name, t, s1, s2):
    lines = ["t,theta,moisture"]
    for row in zip(t, s1, s2):
        lines.append(",".join(g17(v) for v in row))
    (DATA / name).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------- Kunzel data

T0 = 273.15


def magnus_ps(th):
    tc = th - T0
    return 610.94 * math.exp(17.625 * tc / (tc + 243.04))


def air_delta(th):
    return 2.0e-7 * th**0.81 / 101325.0


THETA_KNOTS = np.array([123.15, 173.15, 223.15, 248.15, 263.15, 273.15, 278.15,
                        283.15, 288.15, 293.15, 298.15, 303.15, 308.15, 313.15,
                        323.15, 348.15, 373.15, 423.15, 473.15])


def kunzel_storage(w_f, b):
    """Kunzel-style storage h(phi) = w_f (b-1) phi / (b - phi) on [0,1],
    continued linearly outside with the edge slopes."""
    def raw(phi):
        return w_f * (b - 1.0) * phi / (b - phi)

    def slope0():
        return w_f * (b - 1.0) / b

    def slope1():
        return w_f * (b - 1.0) * b / (b - 1.0) ** 2

    def h(phi):
        if phi < 0.0:
            return slope0() * phi
        if phi > 1.0:
            return raw(1.0) + slope1() * (phi - 1.0)
        return raw(phi)

    lo = np.array([-3.0, -2.0, -1.0, -0.5, -0.2])
    mid = np.linspace(0.0, 1.0, 21)
    hi = np.array([1.2, 1.6, 2.0, 2.75, 3.5])
    knots = np.concatenate([lo, mid, hi])
    return knots, np.array([h(p) for p in knots]), h


def clipped_exp_dphi(scale, rate, tgrow):
    """Liquid conduction surface: exponential in phi on [-0.5, 1], linear
    growth above 1 so demo tables stay finite at padded states."""
    def fn(phi, th):
        base = math.exp(rate * min(max(phi, -0.5), 1.0))
        if phi > 1.0:
            base *= 1.0 + 3.0 * (phi - 1.0)
        return scale * base * (1.0 + tgrow * (th - 283.15))
    return fn


PHI_KNOTS = np.concatenate([np.array([-3.0, -2.0, -1.0, -0.5]),
                            np.linspace(-0.25, 1.25, 25),
                            np.array([1.5, 2.0, 2.5, 3.0, 3.5])])

BRICK = dict(rho0=1650.0, c0=840.0, rho_w=1000.0, c_w=4180.0, L_v=2.445e6,
             mu=10.0, w_f=0.37, b=1.3,
             lam=lambda w, th: 0.6 * (1.0 + 1.5 * w) * (1.0 + 2.0e-4 * (th - T0)),
             dphi=clipped_exp_dphi(1.0e-9, 12.0, 0.003),
             w_axis=np.linspace(-0.30, 4.50, 25))

PLASTER = dict(rho0=1200.0, c0=850.0, rho_w=1000.0, c_w=4180.0, L_v=2.445e6,
               mu=8.0, w_f=0.30, b=1.8,
               lam=lambda w, th: 0.8 * (1.0 + 1.2 * w) * (1.0 + 2.0e-4 * (th - T0)),
               dphi=clipped_exp_dphi(2.0e-9, 10.0, 0.002),
               w_axis=np.linspace(-0.60, 1.40, 21))


def emit_kunzel(tag, mat):
    knots, vals, _ = kunzel_storage(mat["w_f"], mat["b"])
    write_curve(f"{tag}_h.csv", knots, vals)
    write_surface(f"{tag}_lambda.csv", mat["w_axis"], THETA_KNOTS, mat["lam"])
    write_surface(f"{tag}_dphi.csv", PHI_KNOTS, THETA_KNOTS, mat["dphi"])


# --------------------------------------------------------------- Kiessl data

MORTAR = dict(rho0=1800.0, c0=900.0, rho_w=1000.0, c_w=4180.0, e=0.30,
              L_v=2.445e6)


def mortar_f(Phi):
    cap, k = 0.18, 2.0
    s0 = cap * k / (math.exp(k) - 1.0)
    s1 = cap * k * math.exp(k) / (math.exp(k) - 1.0)
    if Phi < 0.0:
        return s0 * Phi
    if Phi > 1.0:
        return cap + s1 * (Phi - 1.0)
    return cap * (math.exp(k * Phi) - 1.0) / (math.exp(k) - 1.0)


F_KNOTS = np.concatenate([np.array([-3.0, -2.0, -1.0, -0.4]),
                          np.linspace(-0.2, 1.2, 15),
                          np.array([1.6, 2.2, 2.9, 3.5])])

# exact collinear triple around 0 keeps the interpolated slope at exactly 1
G_KNOTS = np.array([-3.0, -1.5, -0.5, -0.1, 0.0, 0.1, 0.3, 0.6, 0.8,
                    1.0, 1.5, 2.0, 3.0, 3.5])
G_VALS = np.array([-3.0, -1.5, -0.5, -0.1, 0.0, 0.1, 0.294, 0.55, 0.71,
                   0.85, 0.97, 0.99, 1.005, 1.01])

MORTAR_W_AXIS = np.linspace(-0.20, 1.30, 16)


def mortar_lambda(w, th):
    return 1.4 * math.exp(0.8 * w) * (1.0 + 3.0e-4 * (th - T0))


def mortar_dw(w, th):
    return 2.0e-8 * math.exp(2.0 * w) * (1.0 + 2.0e-3 * (th - 283.15))


def mortar_dphi(w, th):
    return 1.5e-9 * math.exp(1.5 * w) * (1.0 + 2.0e-3 * (th - 283.15))


def mortar_dtheta(w, th):
    return 1.0e-11 * math.exp(w) * (1.0 + 1.0e-3 * (th - 283.15))


def rho_ps(th):
    return magnus_ps(th) / (461.5 * th)


# ------------------------------------------------------------------ configs

WALL_INI = """# two-layer demo wall: brick with a thin interior plaster skin
[domain]
layer.0.rect = 0 0 0.30 0.25
layer.0.material = brick
layer.1.rect = 0.30 0 0.32 0.25
layer.1.material = plaster

[material.brick]
model = kunzel
rho0 = 1650
c0 = 840
rho_w = 1000
c_w = 4180
L_v = 2.445e6
mu = 10
curve.h = brick_h.csv
curve.p_s = magnus_ps.csv
curve.delta = air_delta.csv
surface.lambda = brick_lambda.csv
surface.D_phi_hat = brick_dphi.csv

[material.plaster]
model = kunzel
rho0 = 1200
c0 = 850
rho_w = 1000
c_w = 4180
L_v = 2.445e6
mu = 8
curve.h = plaster_h.csv
curve.p_s = magnus_ps.csv
curve.delta = air_delta.csv
surface.lambda = plaster_lambda.csv
surface.D_phi_hat = plaster_dphi.csv

[boundary.west]
alpha = 17 2e-8
climate = climate_outdoor.csv

[boundary.east]
alpha = 8 1e-8
climate = climate_indoor.csv

[initial]
layer.0 = 293.15 0.6
layer.1 = 293.15 0.6

[time]
h_t = 60
t_end = 600

[mesh]
h_target = 0.04

[solver]
strategy = picard
eps_fp = 1e-8
max_picard = 25

[output]
dir = out
probe = 0.16 0.125
probe = 0.31 0.125

[check]
theta = 273.15 313.15
m = 0.05 0.95
samples = 11
"""

MORTAR_INI = """# single-layer moisture-potential demo slab
[domain]
layer.0.rect = 0 0 0.20 0.20
layer.0.material = mortar

[material.mortar]
model = kiessl
rho0 = 1800
c0 = 900
rho_w = 1000
c_w = 4180
e = 0.30
L_v = 2.445e6
curve.f = mortar_f.csv
curve.g = mortar_g.csv
curve.rho_ps = rho_ps.csv
surface.lambda = mortar_lambda.csv
surface.D_w = mortar_dw.csv
surface.D_phi = mortar_dphi.csv
surface.D_theta = mortar_dtheta.csv

[boundary.west]
alpha = 12 1.5e-8
climate = climate_outdoor.csv

[boundary.east]
alpha = 6 8e-9
climate = climate_indoor.csv

[initial]
layer.0 = 288.15 0.5

[time]
h_t = 120
t_end = 1200

[mesh]
h_target = 0.05

[solver]
strategy = picard

[output]
dir = out

[check]
theta = 273.15 313.15
m = 0.05 0.95
samples = 11
"""

LINEAR_INI = """# constant-coefficient two-layer strip used by the verification tooling
[domain]
layer.0.rect = 0 0 0.5 1
layer.0.material = left
layer.1.rect = 0.5 0 1 1
layer.1.material = right

[material.left]
model = linear
beta = 1 0.1 0.1 1
kappa = 1 0.25 0.25 1

[material.right]
model = linear
beta = 1 0.1 0.1 1
kappa = 2 0.5 0.5 2

[boundary.west]
alpha = 2 2
climate = climate_unit.csv

[boundary.east]
alpha = 3 3
climate = climate_unit.csv

[initial]
layer.0 = 1 0.5
layer.1 = 1 0.5

[time]
h_t = 0.05
t_end = 0.5

[mesh]
h_target = 0.125

[solver]
strategy = picard

[output]
dir = out
"""


# ------------------------------------------------------------ golden values

def pchip(x, y):
    return PchipInterpolator(np.asarray(x), np.asarray(y), extrapolate=False)


def bilinear(maxis, taxis, fn):
    grid = np.array([[fn(m, t) for t in taxis] for m in maxis])

    def value(m, t):
        i = np.searchsorted(maxis, m) - 1
        i = min(max(i, 0), len(maxis) - 2)
        j = np.searchsorted(taxis, t) - 1
        j = min(max(j, 0), len(taxis) - 2)
        sm = (m - maxis[i]) / (maxis[i + 1] - maxis[i])
        st = (t - taxis[j]) / (taxis[j + 1] - taxis[j])
        return ((1 - sm) * (1 - st) * grid[i][j] + sm * (1 - st) * grid[i + 1][j]
                + (1 - sm) * st * grid[i][j + 1] + sm * st * grid[i + 1][j + 1])

    return value


def kunzel_coeffs(mat, h_pch, ps_pch, delta_pch, lam_bi, dphi_bi, th, phi):
    h = float(h_pch(phi))
    hp = float(h_pch.derivative()(phi))
    ps = float(ps_pch(th))
    psp = float(ps_pch.derivative()(th))
    dpm = float(delta_pch(th)) / mat["mu"]
    lam = lam_bi(h, th)
    Dph = dphi_bi(phi, th)
    rho0c0 = mat["rho0"] * mat["c0"]
    B = [rho0c0 * th + mat["rho_w"] * mat["c_w"] * h * th, mat["rho_w"] * h]
    b = [[rho0c0 + mat["rho_w"] * mat["c_w"] * h, 0.0],
         [mat["rho_w"] * mat["c_w"] * th * hp, mat["rho_w"] * hp]]
    a = [[lam + mat["L_v"] * dpm * phi * psp, mat["L_v"] * dpm * ps],
         [dpm * phi * psp, Dph + dpm * ps]]
    return B, b, a


def kiessl_coeffs(mat, f_pch, g_pch, rp_pch, lam_bi, dw_bi, dphi_bi, dth_bi, th, m):
    f = float(f_pch(m))
    fp = float(f_pch.derivative()(m))
    g = float(g_pch(m))
    gp = float(g_pch.derivative()(m))
    rp = float(rp_pch(th))
    rpp = float(rp_pch.derivative()(th))
    lam = lam_bi(f, th)
    Dw = dw_bi(f, th)
    Dphi = dphi_bi(f, th)
    Dth = dth_bi(f, th)
    vap = (mat["e"] - f) * g
    dvap = -fp * g + (mat["e"] - f) * gp
    q = Dw * fp + Dphi * gp
    rc = mat["rho0"] * mat["c0"]
    B = [rc * th + mat["rho_w"] * mat["c_w"] * g * th + mat["L_v"] * vap * rp,
         mat["rho_w"] * f + vap * rp]
    b = [[rc + mat["rho_w"] * mat["c_w"] * g + mat["L_v"] * vap * rpp, vap * rpp],
         [mat["rho_w"] * mat["c_w"] * gp * th + mat["L_v"] * dvap * rp,
          mat["rho_w"] * fp + dvap * rp]]
    a = [[lam, mat["L_v"] * q], [Dth, q]]
    return B, b, a


def dump_set(label, B, b, a):
    print(f"  {label}:")
    print(f"    B  = {g17(B[0])}, {g17(B[1])}")
    print(f"    b  = [[{g17(b[0][0])}, {g17(b[0][1])}], [{g17(b[1][0])}, {g17(b[1][1])}]]")
    print(f"    a  = [[{g17(a[0][0])}, {g17(a[0][1])}], [{g17(a[1][0])}, {g17(a[1][1])}]]")


def main():
    DATA.mkdir(exist_ok=True)

    # Kunzel tables
    write_curve("magnus_ps.csv", THETA_KNOTS, [magnus_ps(t) for t in THETA_KNOTS])
    write_curve("air_delta.csv", THETA_KNOTS, [air_delta(t) for t in THETA_KNOTS])
    emit_kunzel("brick", BRICK)
    emit_kunzel("plaster", PLASTER)

    # Kiessl tables
    write_curve("mortar_f.csv", F_KNOTS, [mortar_f(p) for p in F_KNOTS])
    write_curve("mortar_g.csv", G_KNOTS, G_VALS)
    write_curve("rho_ps.csv", THETA_KNOTS, [rho_ps(t) for t in THETA_KNOTS])
    write_surface("mortar_lambda.csv", MORTAR_W_AXIS, THETA_KNOTS, mortar_lambda)
    write_surface("mortar_dw.csv", MORTAR_W_AXIS, THETA_KNOTS, mortar_dw)
    write_surface("mortar_dphi.csv", MORTAR_W_AXIS, THETA_KNOTS, mortar_dphi)
    write_surface("mortar_dtheta.csv", MORTAR_W_AXIS, THETA_KNOTS, mortar_dtheta)

    # climate: one week, 6h cadence
    t = np.arange(0.0, 604801.0, 21600.0)
    out_th = 268.15 + 3.0 * np.sin(2 * np.pi * t / 86400.0)
    out_m = 0.80 + 0.05 * np.cos(2 * np.pi * t / 86400.0)
    in_th = 294.15 + 0.5 * np.sin(2 * np.pi * t / 86400.0 + 1.0)
    in_m = 0.50 + 0.02 * np.sin(2 * np.pi * t / 43200.0)
    write_climate("climate_outdoor.csv", t, out_th, out_m)
    write_climate("climate_indoor.csv", t, in_th, in_m)
    write_climate("climate_unit.csv", [0.0, 1.0], [1.0, 1.0], [0.5, 0.5])

    (DATA / "wall.ini").write_text(WALL_INI)
    (DATA / "mortar.ini").write_text(MORTAR_INI)
    (DATA / "linear.ini").write_text(LINEAR_INI)

    # golden values ---------------------------------------------------------
    bk, bv, _ = kunzel_storage(BRICK["w_f"], BRICK["b"])
    brick_h = pchip(bk, bv)
    ps_pch = pchip(THETA_KNOTS, [magnus_ps(x) for x in THETA_KNOTS])
    delta_pch = pchip(THETA_KNOTS, [air_delta(x) for x in THETA_KNOTS])
    print("golden brick_h (value, deriv):")
    for q in (0.37, 0.62, 0.978):
        print(f"  phi={q}: {g17(float(brick_h(q)))}, {g17(float(brick_h.derivative()(q)))}")
    print("golden magnus_ps (value, deriv):")
    for q in (276.9, 293.15, 307.3):
        print(f"  th={q}: {g17(float(ps_pch(q)))}, {g17(float(ps_pch.derivative()(q)))}")

    brick_lam = bilinear(BRICK["w_axis"], THETA_KNOTS, BRICK["lam"])
    brick_dphi = bilinear(PHI_KNOTS, THETA_KNOTS, BRICK["dphi"])
    print("golden brick_lambda bilinear:")
    print(f"  (0.123, 291.7): {g17(brick_lam(0.123, 291.7))}")

    print("golden kunzel brick coefficient sets:")
    for th, phi in ((293.15, 0.6), (305.65, 0.83)):
        B, b, a = kunzel_coeffs(BRICK, brick_h, ps_pch, delta_pch, brick_lam,
                                brick_dphi, th, phi)
        dump_set(f"(theta={th}, phi={phi})", B, b, a)

    f_pch = pchip(F_KNOTS, [mortar_f(p) for p in F_KNOTS])
    g_pch = pchip(G_KNOTS, G_VALS)
    rp_pch = pchip(THETA_KNOTS, [rho_ps(x) for x in THETA_KNOTS])
    lam_bi = bilinear(MORTAR_W_AXIS, THETA_KNOTS, mortar_lambda)
    dw_bi = bilinear(MORTAR_W_AXIS, THETA_KNOTS, mortar_dw)
    dphi_bi = bilinear(MORTAR_W_AXIS, THETA_KNOTS, mortar_dphi)
    dth_bi = bilinear(MORTAR_W_AXIS, THETA_KNOTS, mortar_dtheta)
    print("golden mortar_g slope at 0 (must be exactly 1):", g17(float(g_pch.derivative()(0.0))))
    print("golden kiessl mortar coefficient sets:")
    for th, m in ((288.15, 0.4), (301.4, 0.77)):
        B, b, a = kiessl_coeffs(MORTAR, f_pch, g_pch, rp_pch, lam_bi, dw_bi,
                                dphi_bi, dth_bi, th, m)
        dump_set(f"(theta={th}, m={m})", B, b, a)

    # quick structure sanity over the check window
    worst = None
    for th in np.linspace(273.15, 313.15, 11):
        for phi in np.linspace(0.05, 0.95, 11):
            B, b, a = kunzel_coeffs(BRICK, brick_h, ps_pch, delta_pch,
                                    brick_lam, brick_dphi, th, phi)
            margin = a[0][0] * a[1][1] - a[0][1] * a[1][0]
            corrupt = a[0][0] * a[1][1] - 2500.0 * a[0][1] * a[1][0]
            if worst is None or margin < worst[0]:
                worst = (margin, th, phi)
            if corrupt < 0 and worst and len(worst) == 3:
                worst = worst + (th, phi, corrupt)
    print("brick ellipticity worst margin over check grid:", worst)


if __name__ == "__main__":
    main()
