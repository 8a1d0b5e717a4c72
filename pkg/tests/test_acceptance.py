"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line (also collected into the
terminal summary). Run directly with ``python tests/test_acceptance.py`` to get
only those lines.
"""

import math
import time

import numpy as np
import pytest
from scipy import special

from sector_rkhs import bergman_rkhs as br
from sector_rkhs import suites
from sector_rkhs.specfun import bessel_k, bessel_k_rep, erfc_alpha
from sector_rkhs.transform import laplace_V

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from another directory
    ACCEPTANCE_LINES = []


def _record(number, title, ok, detail, elapsed):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail}; {elapsed:.1f}s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def _worst(rep, pred=lambda r: True):
    vals = [r.value for r in rep.checks if pred(r) and isinstance(r.value, float)]
    return max(vals) if vals else float("nan")


def _fail_names(rep):
    return ", ".join(r.name for r in rep.failures()) or "none"


def test_criterion_01_special_functions():
    t0 = time.perf_counter()
    rep = suites.specfun_suite()
    # second oracle for erfc_alpha: the library regularized incomplete gamma Q(alpha/2, lambda^2)
    lib = max(abs(erfc_alpha(a, lam) - special.gammaincc(0.5 * a, lam * lam)) / special.gammaincc(0.5 * a, lam * lam)
              for a in suites.ALPHAS_SPECFUN for lam in suites.LAMBDAS)
    e_q = rep["erfc_alpha vs defining integral"].value
    e_k = rep["bessel_k vs cosine representation"].value
    ok = e_q <= 1e-10 and e_k <= 1e-8 and lib <= 1e-10
    assert _record(1, "erfc_alpha <= 1e-10, bessel_k <= 1e-8",
                   ok, f"erfc vs integral {e_q:.2e}, erfc vs gammaincc {lib:.2e}, K vs representation {e_k:.2e}",
                   time.perf_counter() - t0)


def test_criterion_02_kernel_pde_order():
    t0 = time.perf_counter()
    rep = suites.kernel_suite()
    order = min(r.value for r in rep.checks)
    assert _record(2, "kernel PDE residual order >= 1.9", rep.passed and order >= 1.9,
                   f"min order {order:.3f} over alpha in (0.5,1,1.5,2), (x,t) in [0.2,5]^2", time.perf_counter() - t0)


def test_criterion_03_laplace_identity():
    t0 = time.perf_counter()
    rep = suites.laplace_suite()
    grid = rep["Laplace transform of K vs V"].value
    lim = _worst(rep, lambda r: "limit V(0+" in r.name)
    # independent closed form at alpha = 1: exp(-sqrt(s) x)
    heat = max(abs(laplace_V(1.0, x, s) - math.exp(-math.sqrt(s) * x)) / math.exp(-math.sqrt(s) * x)
               for x in (0.5, 1.0, 2.0) for s in (0.5, 1.0, 2.0))
    ok = rep.passed and grid <= 1e-6 and lim <= 1e-3 and heat <= 1e-12
    assert _record(3, "Laplace identity <= 1e-6, V(0+,s) = 1 within 1e-3", ok,
                   f"grid {grid:.2e}, limit {lim:.2e}, alpha=1 heat form {heat:.2e}", time.perf_counter() - t0)


def test_criterion_04_rkhs_closed_form():
    t0 = time.perf_counter()
    rep = suites.rkhs_closed_form_suite()
    spot = br.rkhs_kernel(2.0, 1.0, 1.0 + 0j, 1.0 + 0j)
    spot_q = br.rkhs_kernel_integral(2.0, 1.0, 1.0 + 0j, 1.0 + 0j)
    grid = rep["closed form vs tau-integral"].value
    n = len(rep.tables["closed_vs_integral"].rows)
    ok = (rep.passed and n >= 27 and abs(spot - math.exp(-2) / 4) <= 1e-8 * math.exp(-2) / 4
          and abs(spot_q - spot) <= 1e-8 * abs(spot))
    assert _record(4, "RKHS closed form vs tau-integral <= 1e-8", ok,
                   f"{n} points, worst {grid:.2e}, K_2(1,1;1) = {complex(spot).real:.7f} (e^-2/4 = {math.exp(-2) / 4:.7f})",
                   time.perf_counter() - t0)


@pytest.mark.slow
def test_criterion_05_isometry():
    t0 = time.perf_counter()
    rep = suites.isometry_suite()
    rows = rep.tables["isometry"].rows
    worst = max(r[4] for r in rows)
    anchor = [r for r in rows if r[0] == 2.0 and r[1] == "tau^0"][0]
    ok = rep.passed and abs(anchor[2] - 1 / 3) <= 1e-3 / 3 and len(rows) == 9
    assert _record(5, "isometry within 1e-3 relative", ok,
                   f"worst {worst:.2e} over 9 cases, anchor alpha=2 g=1: {anchor[2]:.6f} vs 1/3", time.perf_counter() - t0)


@pytest.mark.slow
def test_criterion_06_reproducing():
    t0 = time.perf_counter()
    rep = suites.reproducing_suite()
    worst = _worst(rep)
    assert _record(6, "reproducing property <= 1e-3 at 5 interior w, 3 elements", rep.passed,
                   f"worst {worst:.2e} (alpha in 1, 1.5, 2; seed {rep.parameters['seed']}); failures: {_fail_names(rep)}",
                   time.perf_counter() - t0)


@pytest.mark.slow
def test_criterion_07_inverse_roundtrip():
    t0 = time.perf_counter()
    rep = suites.inverse_suite()
    finals = [r.value for r in rep.checks if "error at N=32" in r.name]
    tables = {k: [round(e, 5) for e in v.column("error")] for k, v in rep.tables.items()}
    detail = "; ".join(f"{k.split(':')[0]} {v}" for k, v in tables.items())
    assert _record(7, "inverse error strictly decreasing over N = 4..32, <= 1e-2 at 32",
                   rep.passed and len(finals) == 4, f"worst final {max(finals):.2e}; {detail}", time.perf_counter() - t0)


@pytest.mark.slow
def test_criterion_08_pde_oracle():
    t0 = time.perf_counter()
    rep = suites.pde_suite()
    fin = _worst(rep, lambda r: "finest" in r.name and "erfc" not in r.name)
    anchor = rep["alpha=1 g=1 vs erfc: linf_rel at finest grid"].value
    assert _record(8, "FD vs analytic L-inf rel <= 1e-2, decreasing under doubling, erfc anchor <= 1e-3", rep.passed,
                   f"worst {fin:.2e} at M = 800, erfc anchor {anchor:.2e}; failures: {_fail_names(rep)}",
                   time.perf_counter() - t0)


def test_criterion_09_decay():
    t0 = time.perf_counter()
    rep = suites.decay_suite()
    ratio = _worst(rep, lambda r: "peak" in r.name)
    assert _record(9, "decay profile tails decreasing toward 0, j in (0,1), alpha in (1,2)", rep.passed,
                   f"largest end/peak ratio {ratio:.2e}; failures: {_fail_names(rep)}", time.perf_counter() - t0)


def test_criterion_10_smoothing():
    t0 = time.perf_counter()
    rep = suites.smoothing_suite()
    drops = [r.value for r in rep.checks if r.mode == "min"]
    assert _record(10, "smoothing quantity drops >= 10x over two decades of t", rep.passed,
                   f"drops {', '.join(f'{d:.3g}x' for d in drops)}", time.perf_counter() - t0)


def test_criterion_11_alpha2_reduction():
    t0 = time.perf_counter()
    rep = suites.half_plane_suite()
    worst = _worst(rep)
    assert _record(11, "alpha = 2 sector objects equal half-plane forms <= 1e-12", rep.passed,
                   f"worst {worst:.2e} over Bergman (4 nu), RKHS and measure (3 t)", time.perf_counter() - t0)


if __name__ == "__main__":
    import sys

    ok = True
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                ok = False
    sys.exit(0 if ok else 1)
