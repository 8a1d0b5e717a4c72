"""Command-line front end.

Exit codes: 0 success, 2 malformed input, 3 domain violation, 4 tolerance
not met or failed check, 5 non-decreasing inverse error table.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import bergman_rkhs as br
from . import heat_kernel as hk
from . import specfun as sf
from . import suites
from .errors import DomainError, QuadratureError, StabilityError
from .heat_kernel import AlphaParam
from .inversion import default_tau_grid, invert, roundtrip_error
from .io_csv import InputError, atomic_write, read_signal_csv, write_csv
from .mesh import SectorMesh, default_mesh
from .pde_oracle import FDGrid, analytic_field, compare, solve_fd
from .report import DiagnosticsReport
from .transform import BoundarySignal, forward_L, forward_T, laplace_check

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_TOL, EXIT_CONVERGENCE = 0, 2, 3, 4, 5


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Exit(EXIT_INPUT, message)


# argument helpers ------------------------------------------------------------


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise _Exit(EXIT_INPUT, f"bad number list {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise _Exit(EXIT_INPUT, f"bad integer list {text!r}") from exc


def parse_points(text: str) -> np.ndarray:
    """``lin:a:b:n``, ``geom:a:b:n`` or a comma list of numbers (complex as 1+0.5j)."""
    try:
        if text.startswith(("lin:", "geom:")):
            kind, a, b, n = text.split(":")
            fn = np.linspace if kind == "lin" else np.geomspace
            return fn(float(a), float(b), int(n)).astype(complex)
        return np.array([complex(v.replace(" ", "")) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        raise _Exit(EXIT_INPUT, f"bad point specification {text!r}") from exc


def parse_mesh(text: str | None, alpha: float) -> SectorMesh:
    if text is None:
        return default_mesh(alpha)
    parts = text.split(",")
    if len(parts) != 4:
        raise _Exit(EXIT_INPUT, "--mesh takes r_min,R,delta,order")
    try:
        r_min, R, delta = (float(v) for v in parts[:3])
        order = int(parts[3])
    except ValueError as exc:
        raise _Exit(EXIT_INPUT, f"bad mesh {text!r}") from exc
    base = default_mesh(alpha)
    return SectorMesh(alpha, r_min, R, delta, order=order, dl=base.dl, ratio=base.ratio)


def _signal_from_args(args, t: float) -> BoundarySignal:
    if getattr(args, "from_g", None):
        tau, g = read_signal_csv(args.from_g)
        return BoundarySignal.from_samples(tau, g, t=t, label=Path(args.from_g).name)
    name = getattr(args, "g", None) or "1"
    builtin = {"0": [0.0], "1": [1.0], "tau": [0.0, 1.0], "tau2": [0.0, 0.0, 1.0]}
    if name not in builtin:
        raise _Exit(EXIT_INPUT, f"unknown built-in signal {name!r}; choose from {sorted(builtin)}")
    return BoundarySignal.polynomial(builtin[name], t, label=name)


def _require_sector_alpha(alpha: float):
    AlphaParam.of(alpha).require_sector()


def _out(args) -> Path:
    return Path(args.out)


def _emit(args, rep: DiagnosticsReport, stem: str) -> Path:
    path = _out(args) / f"{stem}.json"
    atomic_write(path, rep.to_json())
    print(rep.summary())
    return path


def _finish(rep: DiagnosticsReport) -> int:
    if not rep.passed:
        for r in rep.failures():
            print(f"failed check: {r.name} value={r.value!r} tolerance={r.tolerance!r}", file=sys.stderr)
        return EXIT_TOL
    return EXIT_OK


# commands -------------------------------------------------------------------


def cmd_specfun_eval(args) -> int:
    vals = _floats(args.args)
    fns = {
        "gamma": (sf.gamma, 1),
        "log_gamma": (sf.log_gamma, 1),
        "beta": (sf.beta, 2),
        "reg_upper_gamma": (sf.reg_upper_gamma, 2),
        "erfc_alpha": (sf.erfc_alpha, 2),
        "bessel_k": (sf.bessel_k, 2),
        "bessel_k_rep": (sf.bessel_k_rep, 2),
    }
    if args.func not in fns:
        raise _Exit(EXIT_INPUT, f"unknown function {args.func!r}")
    fn, arity = fns[args.func]
    if len(vals) != arity:
        raise _Exit(EXIT_INPUT, f"{args.func} takes {arity} argument(s)")
    value = float(fn(*vals))
    rep = DiagnosticsReport("specfun-eval", {"func": args.func, "args": vals})
    rep.check("finite value", math.isfinite(value), mode="true")
    if args.format == "csv":
        write_csv(_out(args) / "specfun-eval.csv", ["func", "value"], [[args.func, value]])
    print(repr(value))
    _emit(args, rep, "specfun-eval")
    return _finish(rep)


def cmd_kernel_eval(args) -> int:
    z = parse_points(args.z)
    a, t = args.alpha, args.t
    kind = args.kind
    if kind == "K":
        real = np.all(z.imag == 0)
        vals = hk.kernel_K(a, z.real if real else z, t)
    elif kind == "W":
        vals = hk.profile_W(a, z.real, t)
    elif kind in ("bergman", "rkhs", "rkhs-integral"):
        _require_sector_alpha(a)
        if args.w is None:
            raise _Exit(EXIT_INPUT, f"--w is required for {kind}")
        w = parse_points(args.w)
        if w.size == 1:
            w = np.full(z.shape, w[0])
        if w.shape != z.shape:
            raise _Exit(EXIT_INPUT, "--z and --w lists differ in length")
        if kind == "bergman":
            spec = br.WeightedKernelSpec.half_plane(args.nu) if args.domain == "half-plane" else br.WeightedKernelSpec.sector(a, args.nu)
            vals = br.bergman_kernel(spec, z, w)
        elif kind == "rkhs":
            vals = br.rkhs_kernel(a, t, z, w)
        else:
            vals = np.array([br.rkhs_kernel_integral(a, t, zi, wi) for zi, wi in zip(z, w)])
    else:
        raise _Exit(EXIT_INPUT, f"unknown kernel {kind!r}")
    vals = np.atleast_1d(np.asarray(vals, dtype=complex))
    rows = [[zi.real, zi.imag, v.real, v.imag] for zi, v in zip(z, vals)]
    write_csv(_out(args) / "kernel-eval.csv", ["z_re", "z_im", "value_re", "value_im"], rows)
    rep = DiagnosticsReport("kernel-eval", {"kind": kind, "alpha": a, "t": t, "n": int(z.size)})
    rep.check("finite values", bool(np.all(np.isfinite(vals))), mode="true")
    _emit(args, rep, "kernel-eval")
    return _finish(rep)


def cmd_forward(args) -> int:
    if not args.from_g:
        raise _Exit(EXIT_INPUT, "forward needs --from-g <csv>")
    a, t = args.alpha, args.t
    sig = _signal_from_args(args, t)
    if sig.samples[0][-1] < t * (1 - 1e-12):
        raise _Exit(EXIT_DOMAIN, "samples of g must cover (0, t)")
    pts = parse_points(args.points)
    if np.any(pts.imag != 0):
        _require_sector_alpha(a)
    tol = args.tol if args.tol is not None else 1e-8
    rows, errs = [], []
    rep = DiagnosticsReport("forward", {"alpha": a, "t": t, "quantity": args.quantity, "rtol": tol, "n_points": int(pts.size),
                                        "interpolation_error": sig.interpolation_error()})
    tab = rep.table("quadrature", ["z_re", "z_im", "error_estimate"])
    fn = forward_T if args.quantity == "T" else forward_L
    scale = t ** a if args.quantity == "u" else 1.0
    failed = False
    for p in pts:
        arg = float(p.real) if p.imag == 0 else complex(p)
        try:
            res = fn(a, t, sig, arg, rtol=tol, full_output=True)
            val, err = complex(res.value) * scale, float(res.error) * scale
        except QuadratureError as exc:
            failed = True
            val = complex(exc.estimate if exc.estimate is not None else np.nan) * scale
            err = float(exc.error if exc.error is not None else np.inf) * scale
        rows.append([p.real, p.imag, val.real, val.imag])
        tab.add(p.real, p.imag, err)
        errs.append(err / max(abs(val), 1e-300))
    write_csv(_out(args) / "forward.csv", ["x_or_z_re", "z_im", "u_re", "u_im"], rows)
    rep.check("quadrature converged", not failed, mode="true")
    rep.check("max relative error estimate", float(max(errs)), tolerance=max(tol * 10, 1e-12), mode="max")
    _emit(args, rep, "forward")
    return _finish(rep)


_BUILTIN_F = ("kernel-section", "L1", "Ltau")


def cmd_inverse(args) -> int:
    a, t = args.alpha, args.t
    _require_sector_alpha(a)
    Ns = _ints(args.N) if args.N else [4, 8, 16, 32]
    if args.tau:
        tau = np.asarray(_floats(args.tau))
    else:
        tau = default_tau_grid(t)
    if np.any(tau <= 0) or np.any(tau >= t):
        raise _Exit(EXIT_DOMAIN, "tau grid must lie strictly inside (0, t)")
    if args.from_g or args.builtin_F in (None, "L1", "Ltau"):
        if args.builtin_F == "Ltau":
            sig = BoundarySignal.monomial(1, t)
        elif args.from_g:
            sig = _signal_from_args(args, t)
        else:
            sig = BoundarySignal.constant(1.0, t)
        rep = roundtrip_error(a, t, sig, Ns, tau_grid=tau, shape=args.shape, target=args.tol)
        taus, recon = rep.reconstruction
        cols = ["tau", "g_re", "g_im"] + [c for n in Ns for c in (f"N{n}_re", f"N{n}_im")]
        exact = np.asarray(sig(taus), dtype=complex)
        rows = [[tv, e.real, e.imag] + [v for n in Ns for v in (recon[n][i].real, recon[n][i].imag)] for i, (tv, e) in enumerate(zip(taus, exact))]
        write_csv(_out(args) / "inverse.csv", cols, rows)
        _emit(args, rep, "inverse")
        errs = rep.tables["roundtrip"].column("error")
        if len(errs) > 1 and not all(b < a_ for a_, b in zip(errs[:-1], errs[1:])):
            return EXIT_CONVERGENCE
        return _finish(rep)
    if args.builtin_F not in _BUILTIN_F:
        raise _Exit(EXIT_INPUT, f"unknown built-in F {args.builtin_F!r}; choose from {list(_BUILTIN_F)}")
    w = complex(args.w) if args.w else 1.0 + 0.0j
    F = br.GSpaceElement.from_kernel_section(a, t, w)
    want = np.array([np.conj(hk.kernel_K(a, w, t - tv)) for tv in tau])
    rep = DiagnosticsReport("inverse", {"alpha": a, "t": t, "F": F.label, "N": Ns, "shape": args.shape})
    tab = rep.table("roundtrip", ["N", "error"])
    vals = {}
    errs = []
    for n in Ns:
        v = np.atleast_1d(invert(a, t, F, tau, N=n, shape=args.shape))
        vals[n] = v
        err = float(np.sqrt(np.trapezoid(np.abs(v - want) ** 2 * (tau / t) ** a, tau)))
        errs.append(err)
        tab.add(n, err)
    if args.tol is not None:
        rep.check(f"error at N={Ns[-1]}", errs[-1], tolerance=args.tol, mode="max")
    rep.check("error strictly decreasing in N", bool(all(b < a_ for a_, b in zip(errs[:-1], errs[1:]))), mode="true")
    cols = ["tau", "expected_re", "expected_im"] + [c for n in Ns for c in (f"N{n}_re", f"N{n}_im")]
    rows = [[tv, e.real, e.imag] + [x for n in Ns for x in (vals[n][i].real, vals[n][i].imag)] for i, (tv, e) in enumerate(zip(tau, want))]
    write_csv(_out(args) / "inverse.csv", cols, rows)
    _emit(args, rep, "inverse")
    if len(errs) > 1 and not all(b < a_ for a_, b in zip(errs[:-1], errs[1:])):
        return EXIT_CONVERGENCE
    return _finish(rep)


def cmd_isometry(args) -> int:
    a, t = args.alpha, args.t
    _require_sector_alpha(a)
    sig = _signal_from_args(args, t)
    m = parse_mesh(args.mesh, a)
    tol = args.tol if args.tol is not None else 1e-3
    F = br.GSpaceElement.from_transform(a, t, sig)
    v, big = br.gspace_inner(a, t, F, F, m, tail_tol=tol, full_output=True)
    ref = sig.weighted_norm_sq(a, t)
    rep = DiagnosticsReport("isometry-check", {"alpha": a, "t": t, "g": sig.label, "mesh": m.describe()})
    rep.check("sector integral vs boundary norm", v.real, target=ref, tolerance=tol, mode="rel")
    rep.check("enlarged-mesh change", abs(big - v) / max(abs(big), 1e-300), tolerance=tol, mode="max")
    _emit(args, rep, "isometry-check")
    return _finish(rep)


def cmd_reproduce(args) -> int:
    a, t = args.alpha, args.t
    _require_sector_alpha(a)
    m = parse_mesh(args.mesh, a)
    tol = args.tol if args.tol is not None else 1e-3
    rep = suites.reproducing_suite((a,), t, seed=args.seed, mesh=m, tol=tol)
    _emit(args, rep, "reproduce-check")
    return _finish(rep)


def cmd_laplace(args) -> int:
    tol = args.tol if args.tol is not None else 1e-6
    rep = DiagnosticsReport("laplace-check", {"alpha": args.alpha, "x": _floats(args.x), "s": _floats(args.s)})
    for x in _floats(args.x):
        for s in _floats(args.s):
            rep.merge(laplace_check(args.alpha, x, s, tol=tol), prefix=f"x={x} s={s}: ")
    _emit(args, rep, "laplace-check")
    return _finish(rep)


def cmd_pde_compare(args) -> int:
    a, T = args.alpha, args.t
    sig = _signal_from_args(args, T)
    if sig.is_complex:
        raise _Exit(EXIT_INPUT, "pde-compare needs real boundary data")
    M = args.M
    grid = FDGrid.build(a, T, M, args.steps or M, args.eps)
    fd = solve_fd(a, T, sig, grid)
    an = analytic_field(a, T, sig, grid.x)
    rep = compare(an, fd, layer=args.layer)
    tol = args.tol if args.tol is not None else 1e-2
    rep.parameters.update({"alpha": a, "g": sig.label, "M": M, "n_t": grid.n_t, "eps": args.eps, "x_max": float(grid.x[-1])})
    rep.check("linf_rel within tolerance", rep["linf_rel"].value, tolerance=tol, mode="max")
    rows = [[xi, T, ui, va] for xi, ui, va in zip(grid.x, fd.u[-1], an.u[-1])]
    write_csv(_out(args) / "pde-compare.csv", ["x", "t", "u", "u_analytic"], rows)
    _emit(args, rep, "pde-compare")
    return _finish(rep)


def cmd_verify(args) -> int:
    name = args.suite
    if name != "all" and name not in suites.SUITES:
        raise _Exit(EXIT_INPUT, f"unknown suite {name!r}; choose from {sorted(suites.SUITES) + ['all']}")
    reports = suites.run_suite(name)
    ok = True
    for rep in reports:
        _emit(args, rep, f"verify-{rep.command}")
        ok = ok and rep.passed
        for r in rep.failures():
            print(f"failed check: {rep.command}: {r.name} value={r.value!r}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_TOL


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sector-rkhs", description="Degenerate parabolic transform, sector RKHS kernels and inversion.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, alpha=1.0, t=1.0):
        sp.add_argument("--alpha", type=float, default=alpha)
        sp.add_argument("--t", type=float, default=t)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--seed", type=int, default=20241014)
        sp.add_argument("--out", default=".")
        sp.add_argument("--format", choices=("csv", "json"), default="json")

    sp = sub.add_parser("specfun-eval", help="evaluate a special function")
    common(sp)
    sp.add_argument("--func", required=True)
    sp.add_argument("--args", required=True, help="comma-separated arguments")
    sp.set_defaults(fn=cmd_specfun_eval)

    sp = sub.add_parser("kernel-eval", help="evaluate K, W, Bergman or RKHS kernels")
    common(sp)
    sp.add_argument("--kind", choices=("K", "W", "bergman", "rkhs", "rkhs-integral"), default="K")
    sp.add_argument("--z", required=True)
    sp.add_argument("--w", default=None)
    sp.add_argument("--nu", type=float, default=0.0)
    sp.add_argument("--domain", choices=("sector", "half-plane"), default="sector")
    sp.set_defaults(fn=cmd_kernel_eval)

    sp = sub.add_parser("forward", help="transform sampled boundary data")
    common(sp)
    sp.add_argument("--from-g", dest="from_g", default=None)
    sp.add_argument("--points", required=True, help="list, lin:a:b:n or geom:a:b:n")
    sp.add_argument("--quantity", choices=("u", "L", "T"), default="u",
                    help="u = t^alpha L g (default), L = L_t g, T = int K(x, t - tau) g(tau) dtau")
    sp.set_defaults(fn=cmd_forward)

    sp = sub.add_parser("inverse", help="reconstruct boundary data over exhaustions")
    common(sp)
    sp.add_argument("--from-g", dest="from_g", default=None)
    sp.add_argument("--builtin-F", dest="builtin_F", default=None)
    sp.add_argument("--w", default=None, help="kernel-section point for --builtin-F kernel-section")
    sp.add_argument("--N", default=None)
    sp.add_argument("--tau", default=None, help="comma-separated tau grid (default: built in)")
    sp.add_argument("--shape", choices=("graded", "literal"), default="graded")
    sp.set_defaults(fn=cmd_inverse)

    for name, fn in (("isometry-check", cmd_isometry), ("reproduce-check", cmd_reproduce)):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--mesh", default=None, help="r_min,R,delta,order")
        sp.add_argument("--from-g", dest="from_g", default=None)
        sp.add_argument("--g", default="1", help="built-in signal: 0, 1, tau, tau2")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("laplace-check")
    common(sp)
    sp.add_argument("--x", default="0.5,1,2")
    sp.add_argument("--s", default="0.5,1,2")
    sp.set_defaults(fn=cmd_laplace)

    sp = sub.add_parser("pde-compare")
    common(sp)
    sp.add_argument("--from-g", dest="from_g", default=None)
    sp.add_argument("--g", default="1")
    sp.add_argument("--M", type=int, default=400)
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--eps", type=float, default=1e-6)
    sp.add_argument("--layer", type=float, default=1e-2)
    sp.set_defaults(fn=cmd_pde_compare)

    sp = sub.add_parser("verify", help="run verification suites")
    common(sp)
    sp.add_argument("--suite", required=True)
    sp.add_argument("--N", default=None)
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if not (math.isfinite(args.alpha) and args.alpha > 0):
            raise DomainError("alpha must be positive")
        if not (math.isfinite(args.t) and args.t > 0):
            raise DomainError("t must be positive")
        return args.fn(args)
    except _Exit as exc:
        if str(exc):
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (QuadratureError, StabilityError) as exc:
        print(f"tolerance not met: {exc}", file=sys.stderr)
        return EXIT_TOL
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
