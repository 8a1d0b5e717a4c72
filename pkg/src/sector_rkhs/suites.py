"""Verification suites. Each function returns a DiagnosticsReport whose
checks compare an implementation route with an independent one."""

from __future__ import annotations

import math

import numpy as np

from . import bergman_rkhs as br
from .heat_kernel import AlphaParam, kernel_pde_order
from .inversion import roundtrip_error
from .mesh import SectorMesh, default_mesh
from .pde_oracle import refinement_study
from .quadrature import exp_sinh
from .report import DiagnosticsReport
from .specfun import beta, bessel_k, bessel_k_rep, erfc_alpha, gamma, reg_upper_gamma
from .transform import BoundarySignal, laplace_check, laplace_limit_check

ALPHAS_SPECFUN = (0.5, 1.0, 1.5, 2.0)
LAMBDAS = (0.0, 0.5, 1.0, 2.0, 5.0)
BESSEL_NU = (0.0, 0.35, 0.5, 1.0, 1.5)
BESSEL_X = (0.1, 0.3, 1.0, 3.0, 10.0)


def _erfc_by_quadrature(alpha: float, lam: float) -> float:
    f = lambda r: r ** (alpha - 1.0) * np.exp(-r * r)
    res = exp_sinh(f, lam, scale=1.0 / (1.0 + 2.0 * lam), rtol=1e-14, atol=1e-300)
    return 2.0 / math.gamma(0.5 * alpha) * float(res.value)


def specfun_suite() -> DiagnosticsReport:
    rep = DiagnosticsReport("specfun", {"alpha": list(ALPHAS_SPECFUN), "lambda": list(LAMBDAS), "nu": list(BESSEL_NU), "x": list(BESSEL_X)})
    tab = rep.table("erfc_alpha", ["alpha", "lambda", "value", "quadrature", "relative_error"])
    worst = 0.0
    for a in ALPHAS_SPECFUN:
        for lam in LAMBDAS:
            v = erfc_alpha(a, lam)
            q = _erfc_by_quadrature(a, lam)
            rel = abs(v - q) / abs(q)
            worst = max(worst, rel)
            tab.add(a, lam, v, q, rel)
    rep.check("erfc_alpha vs defining integral", worst, tolerance=1e-10, mode="max")
    tab = rep.table("bessel_k", ["nu", "x", "library", "representation", "relative_error"])
    worst = 0.0
    for nu in BESSEL_NU:
        for x in BESSEL_X:
            a, b = bessel_k(nu, x), bessel_k_rep(nu, x)
            rel = abs(a - b) / abs(a)
            worst = max(worst, rel)
            tab.add(nu, x, a, b, rel)
    rep.check("bessel_k vs cosine representation", worst, tolerance=1e-8, mode="max")
    rep.check("gamma(2.5)", gamma(2.5), target=1.5 * 0.5 * math.sqrt(math.pi), tolerance=1e-12, mode="rel")
    rep.check("beta(1.5, 1.5)", beta(1.5, 1.5), target=math.pi / 8.0, tolerance=1e-12, mode="rel")
    rep.check("Q(0.5, 1)", reg_upper_gamma(0.5, 1.0), target=math.erfc(1.0), tolerance=1e-10, mode="rel")
    return rep.finish()


def kernel_suite(alphas=ALPHAS_SPECFUN, grid=(0.2, 0.5, 1.0, 2.5, 5.0), min_order: float = 1.9) -> DiagnosticsReport:
    rep = DiagnosticsReport("kernel", {"alpha": list(alphas), "grid": list(grid)})
    tab = rep.table("pde_residual", ["alpha", "x", "t", "finest_residual", "order"])
    worst = math.inf
    for a in alphas:
        for x in grid:
            for t in grid:
                res, order = kernel_pde_order(a, x, t)
                worst = min(worst, order)
                tab.add(a, x, t, res[-1], order)
    rep.check("minimum residual order", worst, tolerance=min_order, mode="min")
    return rep.finish()


def laplace_suite(alphas=(1.0, 1.5, 2.0), xs=(0.5, 1.0, 2.0), ss=(0.5, 1.0, 2.0)) -> DiagnosticsReport:
    rep = DiagnosticsReport("transform", {"alpha": list(alphas), "x": list(xs), "s": list(ss)})
    tab = rep.table("laplace", ["alpha", "x", "s", "relative_error"])
    worst = 0.0
    for a in alphas:
        for x in xs:
            for s in ss:
                r = laplace_check(a, x, s)
                e = r["transform vs V"].value
                worst = max(worst, e)
                tab.add(a, x, s, e)
                if a == 1.0:
                    rep.checks.append(r["V vs exp(-sqrt(s) x)"])
    rep.check("Laplace transform of K vs V", worst, tolerance=1e-6, mode="max")
    for a in alphas:
        for s in ss:
            rep.merge(laplace_limit_check(a, s), prefix=f"alpha={a} s={s}: ")
    return rep.finish()


def _kernel_points(alpha, r):
    hm = AlphaParam.of(alpha).half_angle
    z = r * np.exp(0.3j * hm)
    w = 1.3 * math.sqrt(r) * np.exp(-0.4j * hm)
    return complex(z), complex(w)


def rkhs_closed_form_suite(alphas=(0.5, 1.0, 2.0), ts=(0.5, 1.0, 2.0), rs=(0.5, 1.0, 2.0)) -> DiagnosticsReport:
    rep = DiagnosticsReport("rkhs", {"alpha": list(alphas), "t": list(ts), "|z|": list(rs)})
    tab = rep.table("closed_vs_integral", ["alpha", "t", "r", "closed_re", "closed_im", "relative_error"])
    worst = 0.0
    for a in alphas:
        for t in ts:
            for r in rs:
                z, w = _kernel_points(a, r)
                c = br.rkhs_kernel(a, t, z, w)
                q = br.rkhs_kernel_integral(a, t, z, w)
                rel = abs(c - q) / abs(q)
                worst = max(worst, rel)
                tab.add(a, t, r, c.real, c.imag, rel)
    rep.check("closed form vs tau-integral", worst, tolerance=1e-8, mode="max")
    spot = br.rkhs_kernel(2.0, 1.0, 1.0, 1.0)
    rep.check("K_2(1,1;1)", spot.real, target=math.exp(-2.0) / 4.0, tolerance=1e-12, mode="rel")
    rep.check("K_2(1,1;1) by integral", br.rkhs_kernel_integral(2.0, 1.0, 1.0, 1.0).real, target=math.exp(-2.0) / 4.0,
              tolerance=1e-8, mode="rel")
    return rep.finish()


def isometry_suite(alphas=(1.0, 1.5, 2.0), t: float = 1.0, degrees=(0, 1, 2), mesh: SectorMesh | None = None,
                   tol: float = 1e-3) -> DiagnosticsReport:
    """|L g|^2 over the sector against (1/t^alpha) int |g|^2 tau^alpha for g = tau^k."""
    rep = DiagnosticsReport("isometry-check", {"alpha": list(alphas), "t": t, "g": [f"tau^{k}" for k in degrees]})
    tab = rep.table("isometry", ["alpha", "g", "sector_integral", "boundary_norm", "relative_error", "nodes"])
    for a in alphas:
        m = default_mesh(a) if mesh is None else SectorMesh(a, mesh.r_min, mesh.R, mesh.delta, mesh.order, mesh.dl, mesh.ratio)
        for k in degrees:
            sig = BoundarySignal.monomial(k, t)
            F = br.GSpaceElement.from_transform(a, t, sig)
            v = br.gspace_inner(a, t, F, F, m).real
            # (1/t^a) int_0^t tau^{2k} tau^a dtau
            ref = t ** (2 * k + 1) / (2 * k + a + 1)
            rel = abs(v - ref) / ref
            tab.add(a, sig.label, v, ref, rel, m.size)
            rep.check(f"alpha={a} g={sig.label}", v, target=ref, tolerance=tol, mode="rel")
    if 2.0 in alphas and 0 in degrees and t == 1.0:
        rep.note("analytic anchor: g = 1, alpha = 2, t = 1 gives 1/3")
    return rep.finish()


def reproducing_suite(alphas=(1.0, 1.5, 2.0), t: float = 1.0, seed: int = 20241014, n_points: int = 5,
                      mesh: SectorMesh | None = None, tol: float = 1e-3) -> DiagnosticsReport:
    """<F, K(., w)> against F(w) at seeded interior w for three elements F."""
    rng = np.random.default_rng(seed)
    rep = DiagnosticsReport("reproduce-check", {"alpha": list(alphas), "t": t, "seed": seed, "n_points": n_points})
    tab = rep.table("reproduce", ["alpha", "F", "w_re", "w_im", "relative_error"])
    for a in alphas:
        ap = AlphaParam.of(a)
        m = default_mesh(a) if mesh is None else SectorMesh(a, mesh.r_min, mesh.R, mesh.delta, mesh.order, mesh.dl, mesh.ratio)
        ws = rng.uniform(0.3, 2.0, n_points) * np.exp(1j * rng.uniform(-0.6, 0.6, n_points) * ap.half_angle)
        elements = [
            br.GSpaceElement.from_transform(a, t, BoundarySignal.monomial(0, t)),
            br.GSpaceElement.from_transform(a, t, BoundarySignal.polynomial([0.3, 1.0, -0.5], t)),
            br.GSpaceElement.from_kernel_section(a, t, 0.8 + 0.2j),
        ]
        for F in elements:
            worst = 0.0
            for w in ws:
                K = br.GSpaceElement.from_kernel_section(a, t, w)
                v = br.gspace_inner(a, t, F, K, m)
                fw = F(w)
                rel = abs(v - fw) / abs(fw)
                worst = max(worst, rel)
                tab.add(a, F.label, w.real, w.imag, rel)
            rep.check(f"alpha={a} F={F.label}", worst, tolerance=tol, mode="max")
    return rep.finish()


def norm_audit_suite(alphas=(0.5, 1.0, 1.5, 2.0), t: float = 1.0, tol: float = 1e-3) -> DiagnosticsReport:
    """Measure-form norm against the factorized Bergman-space norm; the ratio is recorded."""
    rep = DiagnosticsReport("norm-audit", {"alpha": list(alphas), "t": t})
    tab = rep.table("ratio", ["alpha", "F", "measure_norm", "factorized_norm", "ratio"])
    for a in alphas:
        m = default_mesh(a)
        els = [
            br.GSpaceElement.from_transform(a, t, BoundarySignal.monomial(0, t)),
            br.GSpaceElement.from_transform(a, t, BoundarySignal.monomial(1, t)),
            br.GSpaceElement.from_kernel_section(a, t, 1.0 + 0.0j),
            br.GSpaceElement.from_kernel_section(a, t, 0.5 * np.exp(0.4j * AlphaParam.of(a).half_angle)),
            br.GSpaceElement.from_factor(a, t, lambda z, a=a: br.bergman_kernel(br.WeightedKernelSpec.sector(a, a - 1.0), z, 1.0 + 0.0j)),
        ]
        for F in els:
            n1 = br.gspace_norm(a, t, F, m)
            n2 = br.gspace_norm_factorized(a, t, F, m)
            tab.add(a, F.label, n1, n2, n2 / n1)
            rep.check(f"alpha={a} {F.label}", abs(n2 - n1) / n1, tolerance=tol, mode="max")
    return rep.finish()


def inverse_suite(alphas=(1.0, 2.0), degrees=(0, 1), t: float = 1.0, Ns=(4, 8, 16, 32), target: float = 1e-2,
                  shape: str = "graded") -> DiagnosticsReport:
    rep = DiagnosticsReport("inverse", {"alpha": list(alphas), "g": [f"tau^{k}" for k in degrees], "t": t, "N": list(Ns), "shape": shape})
    for a in alphas:
        for k in degrees:
            r = roundtrip_error(a, t, BoundarySignal.monomial(k, t), Ns, shape=shape, target=target)
            rep.merge(r, prefix=f"alpha={a} g=tau^{k}: ")
    return rep.finish()


def pde_suite(alphas=(1.0, 1.5, 2.0), degrees=(0, 1), T: float = 1.0, levels=(400, 800), tol: float = 1e-2) -> DiagnosticsReport:
    from scipy.special import erfc

    rep = DiagnosticsReport("pde-compare", {"alpha": list(alphas), "g": [f"tau^{k}" for k in degrees], "T": T, "levels": list(levels)})
    for a in alphas:
        for k in degrees:
            r = refinement_study(a, T, BoundarySignal.monomial(k, T), levels=levels, tol=tol)
            rep.merge(r, prefix=f"alpha={a} g=tau^{k}: ")
    anchor = refinement_study(1.0, T, BoundarySignal.constant(1.0, T), levels=levels[:1], tol=1e-3,
                              exact=lambda x: erfc(x / (2.0 * math.sqrt(T))))
    rep.merge(anchor, prefix="alpha=1 g=1 vs erfc: ")
    return rep.finish()


def decay_suite(alphas=(1.0, 2.0), js=(0, 1)) -> DiagnosticsReport:
    rep = DiagnosticsReport("decay", {"alpha": list(alphas), "j": list(js), "w0": "1+0j"})
    for a in alphas:
        f, df = br.kernel_section(a)
        for j in js:
            rep.merge(br.decay_profile(a, f, j, df=df if j == 1 else None), prefix=f"alpha={a} j={j}: ")
    return rep.finish()


def smoothing_suite(t_seq=None) -> DiagnosticsReport:
    ts = np.geomspace(1.0, 1e-2, 7) if t_seq is None else np.asarray(t_seq)
    rep = DiagnosticsReport("smoothing", {"t": ts.tolist()})
    cases = [
        (1.0, BoundarySignal.constant(1.0, 1.0), 0, 1.0),
        (2.0, BoundarySignal.monomial(1, 1.0), 1, 1.0),
    ]
    for a, g, j, xi in cases:
        rep.merge(br.smoothing_rate(a, g, j, xi, ts), prefix=f"alpha={a} g={g.label} j={j}: ")
    return rep.finish()


def half_plane_suite(seed: int = 7, n: int = 20, tol: float = 1e-12) -> DiagnosticsReport:
    """alpha = 2 sector objects against their half-plane forms at seeded points."""
    rng = np.random.default_rng(seed)
    rep = DiagnosticsReport("alpha2-reduction", {"seed": seed, "n": n})
    z = rng.uniform(0.1, 3.0, n) * np.exp(1j * rng.uniform(-1.4, 1.4, n))
    w = rng.uniform(0.1, 3.0, n) * np.exp(1j * rng.uniform(-1.4, 1.4, n))
    rel = lambda a, b: float(np.max(np.abs(a - b) / np.abs(b)))
    for nu in (0.0, 0.5, 1.0, 2.5):
        a = br.bergman_kernel(br.WeightedKernelSpec.sector(2.0, nu), z, w)
        b = br.bergman_kernel(br.WeightedKernelSpec.half_plane(nu), z, w)
        rep.check(f"Bergman kernel nu={nu}", rel(a, b), tolerance=tol, mode="max")
    for t in (0.5, 1.0, 2.0):
        rep.check(f"RKHS kernel t={t}", rel(br.rkhs_kernel(2.0, t, z, w), br.half_plane_rkhs_kernel(t, z, w)), tolerance=tol, mode="max")
        rep.check(f"measure t={t}", rel(br.measure_density(2.0, t, z), br.half_plane_measure_density(t, z)), tolerance=tol, mode="max")
    return rep.finish()


SUITES = {
    "specfun": [specfun_suite],
    "kernel": [kernel_suite],
    "transform": [laplace_suite],
    "rkhs": [rkhs_closed_form_suite, half_plane_suite, decay_suite, smoothing_suite, reproducing_suite, isometry_suite],
    "inverse": [inverse_suite],
    "pde": [pde_suite],
}


def run_suite(name: str) -> list[DiagnosticsReport]:
    if name == "all":
        return [f() for k in SUITES for f in SUITES[k]]
    if name not in SUITES:
        raise KeyError(name)
    return [f() for f in SUITES[name]]
