#!/usr/bin/env python3
"""Independent re-evaluation of a certificate report.

Usage: certificate_oracle.py REPORT CONFIG

Every closed-form constant is recomputed from the essential bounds stored in
the report and compared to 1e-12 (relative). The lift norms are recomputed
from the profiles in CONFIG with a composite trapezoid rule and compared to
1e-8. Exit status 0 on agreement.
"""
import math
import sys

PI = math.pi
REL_TOL = 1e-12
NORM_TOL = 1e-8
TRAPEZOID_PANELS = 400000


def read_report(path):
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def read_config(path):
    sections = {}
    current = None
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("["):
                current = line.strip("[]").strip()
                sections.setdefault(current, {})
                continue
            key, _, value = line.partition("=")
            sections[current][key.strip()] = value.strip()
    return sections


def profile(text, span):
    tok = text.split()
    if len(tok) == 1:
        c = float(tok[0])
        return lambda y: c
    if tok[0] == "taper":
        v0, f = float(tok[1]), float(tok[2])
        return lambda y: v0 * (1.0 - f * y / span)
    if tok[0] == "poly":
        coeffs = [float(t) for t in tok[1:]]
        return lambda y: sum(c * y**k for k, c in enumerate(coeffs))
    raise ValueError("oracle does not handle profile '%s'" % text)


def trapezoid(f, a, b, n=TRAPEZOID_PANELS):
    h = (b - a) / n
    s = 0.5 * (f(a) + f(b))
    for i in range(1, n):
        s += f(a + i * h)
    return s * h


def cumulative_trapezoid(f, a, b, n=TRAPEZOID_PANELS):
    h = (b - a) / n
    ys = [a + i * h for i in range(n + 1)]
    vals = [f(y) for y in ys]
    acc = [0.0]
    for i in range(n):
        acc.append(acc[-1] + 0.5 * h * (vals[i] + vals[i + 1]))
    return ys, acc


failures = []


def check(name, got, want, tol=REL_TOL):
    scale = max(abs(want), 1e-300)
    err = abs(got - want) / scale if want != 0 else abs(got)
    ok = err <= tol
    print("%-18s report=% .17g oracle=% .17g rel=%.2e %s" % (name, got, want, err, "ok" if ok else "MISMATCH"))
    if not ok:
        failures.append(name)


def main():
    if len(sys.argv) != 3:
        print(__doc__)
        return 2
    rep = read_report(sys.argv[1])
    cfg = read_config(sys.argv[2])
    g = lambda k: float(rep[k])

    l = g("bounds.span_m")
    rho_s, rho_i = g("bounds.rho.sup"), g("bounds.rho.inf")
    Iw_s, Iw_i = g("bounds.Iw.sup"), g("bounds.Iw.inf")
    EI_i, GJ_i = g("bounds.EI.inf"), g("bounds.GJ.inf")
    etaw_s, etap_s = g("bounds.eta_w.sup"), g("bounds.eta_phi.sup")
    etaEI_i, etaGJ_i = g("bounds.eta_w_EI.inf"), g("bounds.eta_phi_GJ.inf")
    aw, bw, gw = g("bounds.abs_alpha_w.sup"), g("bounds.abs_beta_w.sup"), g("bounds.abs_gamma_w.sup")
    ap, bp, gp = g("bounds.abs_alpha_phi.sup"), g("bounds.abs_beta_phi.sup"), g("bounds.abs_gamma_phi.sup")
    e1, e2 = g("eps1"), g("eps2")
    r = [None] + [g("r%d" % i) for i in range(1, 9)]  # 1-based like the formulas

    Km = max(math.sqrt(rho_s), 16 * l**4 * math.sqrt(rho_s) / (PI**4 * EI_i),
             math.sqrt(Iw_s), 4 * l**2 * math.sqrt(Iw_s) / (PI**2 * GJ_i))
    check("Km", g("Km"), Km)
    eps1_star = 4 * PI**4 * etaEI_i / (64 * l**4 * rho_s + PI**4 * etaw_s * etaEI_i)
    eps2_star = 4 * PI**2 * etaGJ_i / (16 * l**2 * Iw_s + PI**2 * etap_s * etaGJ_i)
    check("eps1_star", g("eps1_star"), eps1_star)
    check("eps2_star", g("eps2_star"), eps2_star)

    lam1 = e1 * (1 - math.sqrt(etaw_s) / (2 * r[1])
                 - 8 * l**4 * rho_s / (PI**4 * EI_i) * (aw / r[4] + bw / r[5] + gw / (math.sqrt(rho_s) * r[3])))
    lam2 = (gw + (math.sqrt(rho_s * rho_i) * aw + e2 * Iw_s * gp) / (2 * math.sqrt(rho_i) * r[6])
            + e1 * math.sqrt(rho_s) * gw * r[3] / 2
            + (math.sqrt(rho_s) * bw / math.sqrt(Iw_i) + math.sqrt(Iw_s) * gp / math.sqrt(rho_i)) / (2 * r[7]))
    lam3 = 1 - e1 * (16 * l**4 * rho_s / (PI**4 * etaEI_i) + math.sqrt(etaw_s) * r[1] / 2)
    lam4 = (e2 * (1 - math.sqrt(etap_s) / (2 * r[2]))
            - 4 * l**2 / (PI**2 * GJ_i) * ((math.sqrt(rho_s * rho_i) * aw + e2 * Iw_s * gp) * r[6] / (2 * math.sqrt(rho_i))
                                           + math.sqrt(Iw_s) * (ap + e2 * bp) / (2 * r[8])
                                           + e1 * rho_s * aw * r[4] / 2 + e2 * Iw_s * ap))
    lam5 = (bp + (math.sqrt(rho_s) * bw / math.sqrt(Iw_i) + math.sqrt(Iw_s) * gp / math.sqrt(rho_i)) * r[7] / 2
            + math.sqrt(Iw_s) * (ap + e2 * bp) * r[8] / 2 + e1 * rho_s * bw * r[5] / (2 * Iw_i))
    lam6 = 1 - e2 * (4 * l**2 * Iw_s / (PI**2 * etaGJ_i) + math.sqrt(etap_s) * r[2] / 2)
    lams = [lam1, lam2, lam3, lam4, lam5, lam6]
    for i, v in enumerate(lams):
        # lambda2/lambda5 vanish identically without aerodynamics; compare absolutely then
        check("lambda%d" % (i + 1), g("lambda%d" % (i + 1)), v, REL_TOL if v != 0 else 0.0)
    c2 = PI**4 * etaEI_i * lam3 / (16 * l**4 * rho_s) - lam2
    c5 = PI**2 * etaGJ_i * lam6 / (4 * l**2 * Iw_s) - lam5
    check("c2", g("c2"), c2)
    check("c5", g("c5"), c5)
    mu = 2 * min(lam1, c2, lam4, c5)
    check("mu_m", g("mu_m"), mu)
    eps_m = max(e1, e2)
    Lam = mu / (1 + eps_m * Km)
    check("Lambda", g("Lambda"), Lam)
    KE = math.sqrt((1 + Km * eps_m) / (1 - Km * eps_m))
    check("K_E", g("K_E"), KE)

    feasible = (lam1 > 1e-12 and lam2 >= 0 and lam3 > 1e-12 and lam4 > 1e-12 and lam5 >= 0 and lam6 > 1e-12
                and c2 > 1e-12 and c5 > 1e-12 and 0 < e1 < min(eps1_star, 1 / Km) and 0 < e2 < min(eps2_star, 1 / Km)
                and Lam > 1e-12)
    reported = rep["feasible"] == "true"
    print("%-18s report=%s oracle=%s %s" % ("feasible", reported, feasible, "ok" if reported == feasible else "MISMATCH"))
    if reported != feasible:
        failures.append("feasible")

    # lift norms from the configured profiles
    m = cfg["model"]
    span = float(m["span_m"])
    EI = profile(m["EI_N_m2"], span)
    GJ = profile(m["GJ_N_m2_per_rad"], span)
    rho = profile(m["rho_kg_per_m"], span)
    Iw = profile(m["Iw_kg_m"], span)
    alpha_w = profile(m["alpha_w_N_per_m2"], span)
    alpha_phi = profile(m["alpha_phi_N_per_rad"], span)
    k1, k2 = g("k1"), g("k2")
    iEI = trapezoid(lambda y: (span - y) ** 2 / EI(y), 0.0, span)
    iGJ = trapezoid(lambda y: 1.0 / GJ(y), 0.0, span)
    b1 = 1 + k1 * e1 * iEI
    b2 = 1 + k2 * e2 * iGJ
    norm_B = max(math.sqrt(iEI) / b1, math.sqrt(iGJ) / b2)
    check("norm_B", g("norm_B"), norm_B, NORM_TOL)
    ys, H = cumulative_trapezoid(lambda y: 1.0 / GJ(y), 0.0, span)
    h = span / TRAPEZOID_PANELS
    vals = [(rho(y) * alpha_w(y) ** 2 + Iw(y) * alpha_phi(y) ** 2) * Hy * Hy for y, Hy in zip(ys, H)]
    norm_AdB = math.sqrt(h * (sum(vals) - 0.5 * (vals[0] + vals[-1]))) / b2
    check("norm_AdB", g("norm_AdB"), norm_AdB, NORM_TOL)

    if "ultimate.state" in rep:
        supU, supUd = g("sup_U"), g("sup_Udot")
        state = (g("norm_B") + 2 * KE / Lam * g("norm_AdB")) * supU + 2 * KE / Lam * g("norm_B") * supUd
        check("ultimate.state", g("ultimate.state"), state)
        check("ultimate.f_inf", g("ultimate.f_inf"), 4 * l**1.5 / (PI**1.5 * math.sqrt(EI_i)) * state)
        check("ultimate.fprime", g("ultimate.fprime_inf"), 2 * math.sqrt(l) / (math.sqrt(PI) * math.sqrt(EI_i)) * state)
        check("ultimate.h_inf", g("ultimate.h_inf"), 2 * math.sqrt(l) / (math.sqrt(PI) * math.sqrt(GJ_i)) * state)
        kind = cfg.get("disturbance", {}).get("kind", "zero")
        if kind == "persistent":
            a1 = float(cfg["disturbance"].get("a1", 3))
            a2 = float(cfg["disturbance"].get("a2", 1))
            check("sup_U", supU, math.hypot(a1, a2))

    if failures:
        print("FAIL: " + ", ".join(failures))
        return 1
    print("PASS")
    return 0


if __name__ == "__main__":
    sys.exit(main())
