"""Command-line front end.

    nullx <classify|trajectory|verify|helix> [--g2 R] [--g3 R] [--m R] [--eps {+1,-1}]
          [--branch {auto,wp,wp3}] [--method {closed,rk4}] [--s0 R] [--s1 R] [--n INT]
          [--step R] [--helix-k R] [--tol R] [--out PATH] [--format {csv,json}]

Exit codes: 0 success, 1 verification failure, 2 flag error, 3 domain error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .closed_form import (
    FrameCase,
    InversionError,
    classify_extremal,
    extremal_frame,
    helix_frame,
    phi,
    structure_residual,
)
from .dynamics import expected_det_U, lax_residual, momentum_U
from .oracle import (
    BlowUpError,
    DriftError,
    IntegratorConfig,
    compare_frames,
    integrate_frame,
    integrate_reduced_el,
    make_sample,
    momentum_drift,
    null_residual,
)
from .params import ModelParams
from .potentials import (
    Branch,
    CaseTag,
    DomainError,
    Potential,
    classify,
    constant_potential,
    eval_potential,
    h_from_k,
    make_potential,
)
from .sl2c import det2, frob
from .weierstrass import Invariants, cubic_roots, half_periods, is_degenerate, sigma, wp, zeta

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_FLAGS = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

COLUMNS = ("s", "k", "h", "h1", "h2", "x0", "x1", "x2", "x3", "det_drift")
FD_STEP = 1e-4


class FlagError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    g2: float
    g3: float
    m: float
    eps: int
    branch: Branch
    method: str
    s0: float | None
    s1: float | None
    n: int
    step: float
    helix_k: float | None
    tol: float
    out: str
    fmt: str
    flip_phi: bool = False

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.m, self.eps)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _finite_real(text: str) -> float:
    x = float(text)
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a finite real, got {text!r}")
    return x


def _eps(text: str) -> int:
    if text not in ("+1", "-1"):
        raise argparse.ArgumentTypeError("eps must be the literal +1 or -1")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nullx", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=["classify", "trajectory", "verify", "helix"])
    ap.add_argument("--g2", type=_finite_real, default=0.0)
    ap.add_argument("--g3", type=_finite_real, default=0.0)
    ap.add_argument("--m", type=_finite_real, default=0.0)
    ap.add_argument("--eps", type=_eps, default=1, help="spin sign, +1 or -1")
    ap.add_argument("--branch", choices=[b.value for b in Branch], default="auto")
    ap.add_argument("--method", choices=["closed", "rk4"], default="closed")
    ap.add_argument("--s0", type=_finite_real)
    ap.add_argument("--s1", type=_finite_real)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--step", type=_finite_real, default=1e-3, help="RK4 step")
    ap.add_argument("--helix-k", type=_finite_real, dest="helix_k", help="constant curvature k0")
    ap.add_argument("--tol", type=_finite_real, default=1e-6)
    ap.add_argument("--out", default="-", help="output path, '-' for stdout")
    ap.add_argument("--format", choices=["csv", "json"], default="csv", dest="fmt")
    # negative control for verify: flips the sign of phi (or of eps for helices)
    ap.add_argument("--debug-flip-phi", action="store_true", dest="flip_phi", help=argparse.SUPPRESS)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.n < 2:
        raise FlagError("--n must be at least 2")
    if ns.step <= 0:
        raise FlagError("--step must be positive")
    if ns.tol <= 0:
        raise FlagError("--tol must be positive")
    if ns.s0 is not None and ns.s1 is not None and not ns.s0 < ns.s1:
        raise FlagError("need --s0 < --s1")
    helix_k = ns.helix_k
    if ns.command == "helix" and helix_k is None:
        helix_k = 0.0
    return RunConfig(
        ns.g2, ns.g3, ns.m, ns.eps, Branch(ns.branch), ns.method, ns.s0, ns.s1, ns.n,
        ns.step, helix_k, ns.tol, ns.out, ns.fmt, ns.flip_phi,
    )


def build_potential(cfg: RunConfig) -> Potential:
    if cfg.helix_k is not None:
        return constant_potential(h_from_k(cfg.helix_k, cfg.params))
    try:
        return make_potential(Invariants(cfg.g2, cfg.g3), cfg.branch)
    except ValueError as exc:
        raise FlagError(str(exc)) from exc


def interval(cfg: RunConfig, p: Potential) -> tuple[float, float]:
    lo, hi = p.default_interval()
    s0 = lo if cfg.s0 is None else cfg.s0
    s1 = hi if cfg.s1 is None else cfg.s1
    if not s0 < s1:
        raise FlagError(f"empty interval [{s0}, {s1}]")
    return s0, s1


def _check_domain(p: Potential, grid) -> None:
    for s in grid:
        if not p.contains(s):
            raise DomainError(f"s = {_fmt(s)} is outside the domain {p.domain} of {p.tag.value}")


# ---------------------------------------------------------------- classify


def _cplx(z: complex) -> str:
    z = complex(z.real + 0.0, z.imag + 0.0)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def cmd_classify(cfg: RunConfig, stream) -> int:
    inv = Invariants(cfg.g2, cfg.g3)
    if cfg.branch is Branch.AUTO and not is_degenerate(inv) and inv.discriminant < 0:
        branches = [Branch.WP3, Branch.WP]
    else:
        branches = [cfg.branch]
    try:
        cases = [classify(inv, b) for b in branches]
    except ValueError as exc:
        raise FlagError(str(exc)) from exc
    hp = half_periods(inv)
    print(f"g2 = {cfg.g2:.12g}, g3 = {cfg.g3:.12g}", file=stream)
    print(f"discriminant = {inv.discriminant + 0.0:.12g}", file=stream)
    w1 = "+inf" if math.isinf(hp.omega1) else f"{hp.omega1:.12g}"
    w3 = "+i*inf" if math.isinf(hp.omega3.imag) else _cplx(hp.omega3)
    print(f"omega1 = {w1}, omega3 = {w3}", file=stream)
    print("cubic roots = " + ", ".join(_cplx(r) for r in cubic_roots(inv)), file=stream)
    for case in cases:
        line = f"case = {case.tag.value}, domain = ({case.domain[0]:.12g}, {case.domain[1]:.12g})"
        if case.a is not None:
            line += f", a = {case.a:.12g}"
        print(line, file=stream)
    return EXIT_OK


# ---------------------------------------------------------------- trajectory


def _rows(samples) -> list[tuple[float, ...]]:
    return [
        (x.s, x.k, x.jet.h, x.jet.h1, x.jet.h2, *x.point, x.det_drift)
        for x in samples
    ]


def sample_trajectory(cfg: RunConfig, p: Potential):
    params = cfg.params
    s0, s1 = interval(cfg, p)
    grid = np.linspace(s0, s1, cfg.n)
    _check_domain(p, grid)
    if cfg.method == "closed":
        samples = [make_sample(p, params, s, extremal_frame(p, s, params)[1]) for s in grid]
    else:
        icfg = IntegratorConfig(min(cfg.step, s1 - s0), s0, s1)
        samples = integrate_frame(p, params, icfg, grid=grid)
    return samples


def write_samples(cfg: RunConfig, p: Potential, samples, stream) -> None:
    rows = _rows(samples)
    if cfg.fmt == "csv":
        stream.write(",".join(COLUMNS) + "\n")
        for r in rows:
            stream.write(",".join(_fmt(v) for v in r) + "\n")
        return
    cf = classify_extremal(p, cfg.params)
    meta = {
        "g2": p.inv.g2 if cfg.helix_k is not None else cfg.g2,
        "g3": p.inv.g3 if cfg.helix_k is not None else cfg.g3,
        "m": cfg.m,
        "eps": cfg.eps,
        "case": cf.tag.value,
        "potential": p.tag.value,
        "method": cfg.method,
        "nu_re": cf.nu.real,
        "nu_im": cf.nu.imag,
        "max_momentum_drift": momentum_drift(samples, cfg.params),
        "helix_k": cfg.helix_k,
    }
    doc = {
        "metadata": {k: (float(_fmt(v)) if isinstance(v, float) else v) for k, v in meta.items()},
        "columns": list(COLUMNS),
        "samples": [{c: float(_fmt(v)) for c, v in zip(COLUMNS, r)} for r in rows],
    }
    json.dump(doc, stream, indent=1)
    stream.write("\n")


def _emit(cfg: RunConfig, writer) -> int:
    if cfg.out == "-":
        writer(sys.stdout)
        return EXIT_OK
    try:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            writer(fh)
    except OSError as exc:
        print(f"nullx: cannot write {cfg.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_trajectory(cfg: RunConfig) -> int:
    p = build_potential(cfg)
    samples = sample_trajectory(cfg, p)
    return _emit(cfg, lambda fh: write_samples(cfg, p, samples, fh))


# ---------------------------------------------------------------- verify


def _weierstrass_checks(inv: Invariants, grid) -> dict[str, float]:
    ode = fd_zeta = fd_sigma = 0.0
    h = FD_STEP
    for s in grid:
        z = complex(s, 0.37)
        P, dP = wp(z, inv)
        ode = max(ode, abs(dP * dP - inv.cubic(P)) / (1 + abs(P) ** 3))
        dz = (zeta(z + h, inv) - zeta(z - h, inv)) / (2 * h)
        fd_zeta = max(fd_zeta, abs(dz + P) / (1 + abs(P)))
        ds = (sigma(z + h, inv) - sigma(z - h, inv)) / (2 * h) / sigma(z, inv)
        fd_sigma = max(fd_sigma, abs(ds - zeta(z, inv)) / (1 + abs(zeta(z, inv))))
    return {
        "weierstrass ode (relative)": ode,
        "zeta' + wp (fd, relative)": fd_zeta,
        "sigma'/sigma - zeta (fd, relative)": fd_sigma,
    }


def fd_third_derivative(p: Potential, s: float, h: float = 1e-3) -> float:
    """Third derivative of the potential as a five-point second difference of ``h'``."""
    d = [eval_potential(p, s + i * h).h1 for i in (-2, -1, 0, 1, 2)]
    return (-d[0] + 16 * d[1] - 30 * d[2] + 16 * d[3] - d[4]) / (12 * h * h)


def _potential_checks(p: Potential, params: ModelParams, grid) -> dict[str, float]:
    g2, g3 = p.inv.g2, p.inv.g3
    eps, m = params.eps, params.m
    first = el = keq = det_u = lax = 0.0
    h = 1e-3
    for s in grid:
        j = eval_potential(p, s)
        first = max(first, abs(j.h1**2 - (4 * j.h**3 - g2 * j.h - g3)) / (1 + abs(j.h) ** 3))
        h3 = fd_third_derivative(p, s, h)
        scale = 1 + abs(12 * j.h * j.h1)
        el = max(el, abs(h3 - 12 * j.h * j.h1) / scale)
        k, k1, k3 = 2 * eps * j.h + m / 3, 2 * eps * j.h1, 2 * eps * h3
        keq = max(keq, abs(k3 - 6 * eps * k * k1 + 2 * eps * m * k1) / (2 * scale))
        U = momentum_U(j, params)
        det_u = max(det_u, abs(det2(U) - expected_det_U(p.inv, params)) / (1 + abs(j.h) ** 4))
        lax = max(lax, lax_residual(p, s, params))
    return {
        "first integral (relative)": first,
        "h''' - 12 h h' (fd)": el,
        "k''' - 6 eps k k' + 2 eps m k' (fd)": keq,
        "det U - P(e) (relative)": det_u,
        "lax residual": lax,
    }


def _closed_checks(cfg: RunConfig, p: Potential, grid) -> dict[str, float]:
    params = cfg.params
    sign = -1.0 if cfg.flip_phi else 1.0
    cf = classify_extremal(p, params)
    out: dict[str, float] = {}
    if cf.tag is FrameCase.HELIX:
        k0 = 2 * params.eps * p.case.a + params.m / 3
        used = ModelParams(params.m, -params.eps) if cfg.flip_phi else params
        mc = 0.0
        for s in grid:
            M = helix_frame(k0, s, used)
            dM = (helix_frame(k0, s + FD_STEP, used) - helix_frame(k0, s - FD_STEP, used)) / (
                2 * FD_STEP
            )
            H = np.array([[0, params.eps], [k0 + 1j, 0]], dtype=complex)
            mc = max(mc, float(np.linalg.norm(np.linalg.solve(M, dM) - H)))
        group = 0.0
        for s in grid:
            t = 0.5 * s
            group = max(
                group,
                frob(helix_frame(k0, s + t, used) - helix_frame(k0, s, used) @ helix_frame(k0, t, used)),
            )
        out["frame structure residual"] = mc
        out["one-parameter subgroup law"] = group
        return out
    out["frame structure residual"] = max(
        structure_residual(p, s, params, _phi_sign=sign) for s in grid
    )
    numerator = cf.nu if cf.tag is FrameCase.CASE_I else 1.0
    dphi = 0.0
    for s in grid:
        d = sign * (phi(p, s + FD_STEP, params) - phi(p, s - FD_STEP, params)) / (2 * FD_STEP)
        target = numerator / (eval_potential(p, s).h - params.e)
        dphi = max(dphi, abs(d - target) / (1 + abs(target)))
    out["phi' - integrand (fd)"] = dphi
    return out


def _rk4_checks(cfg: RunConfig, p: Potential, s0: float, s1: float) -> dict[str, float]:
    params = cfg.params
    icfg = IntegratorConfig(min(cfg.step, s1 - s0), s0, s1)
    samples = integrate_frame(p, params, icfg)
    sign = -1.0 if cfg.flip_phi else 1.0
    cf = classify_extremal(p, params)
    if cf.tag is FrameCase.HELIX and cfg.flip_phi:
        k0 = 2 * params.eps * p.case.a + params.m / 3
        used = ModelParams(params.m, -params.eps)
        closed = [helix_frame(k0, x.s, used) for x in samples]
    else:
        closed = [extremal_frame(p, x.s, params, _phi_sign=sign)[1] for x in samples]
    return {
        "rk4 vs closed form (aligned)": compare_frames(samples, closed).max_deviation,
        "rk4 momentum-map drift": momentum_drift(samples, params),
        "rk4 determinant drift": max(x.det_drift for x in samples),
        "rk4 null condition": null_residual(samples),
    }


def _el_check(p: Potential, s0: float, s1: float, step: float) -> dict[str, float]:
    jet0 = eval_potential(p, s0)
    icfg = IntegratorConfig(min(step, s1 - s0), s0, s1)
    jets = integrate_reduced_el(jet0, icfg)
    err = max(
        abs(j.h - eval_potential(p, s).h) / (1 + abs(j.h))
        for j, s in zip(jets, icfg.grid())
    )
    return {"reduced EL rk4 vs potential (relative)": err}


def run_checks(cfg: RunConfig) -> dict[str, float]:
    p = build_potential(cfg)
    s0, s1 = interval(cfg, p)
    _check_domain(p, [s0 - 3e-3, s1 + 3e-3])
    grid = np.linspace(s0, s1, min(cfg.n, 41))
    checks: dict[str, float] = {}
    if p.tag is not CaseTag.CONSTANT:
        checks.update(_weierstrass_checks(p.inv, grid))
    checks.update(_potential_checks(p, cfg.params, grid))
    checks.update(_el_check(p, s0, s1, cfg.step))
    checks.update(_closed_checks(cfg, p, grid))
    checks.update(_rk4_checks(cfg, p, s0, s1))
    return checks


def cmd_verify(cfg: RunConfig, stream) -> int:
    checks = run_checks(cfg)
    ok = True
    for name, value in checks.items():
        passed = value <= cfg.tol
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {value:.3e} (tol {cfg.tol:.1e})", file=stream)
    print("verify: all checks passed" if ok else "verify: FAILED", file=stream)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------- entry


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_FLAGS
    try:
        cfg = config_from_args(ns)
        if ns.command == "classify":
            return cmd_classify(cfg, sys.stdout)
        if ns.command == "verify":
            return cmd_verify(cfg, sys.stdout)
        return cmd_trajectory(cfg)
    except FlagError as exc:
        print(f"nullx: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except DomainError as exc:
        print(f"nullx: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (DriftError, BlowUpError, InversionError) as exc:
        print(f"nullx: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
