"""Parameter-sweep harness and command-line interface.

Subcommands: ``point`` (one CSV row), ``grid`` (two axes, row-major CSV),
``line`` (one axis), ``verify`` (invariant suite, aligned text report).
All quantities are dimensionless ratios against the switching width T
(t_a = 0 is fixed by convention, the time-delay axis moves detector B).
H T = 0 selects flat spacetime, H T > 0 the exponentially expanding one.

CSV output is deterministic: identical specs produce byte-identical files
regardless of --threads.  Failed points are recorded in the status column
and the run continues (exit code 1 if anything failed).  There is no
resume support; rerun a failed sweep.
"""

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .cosmology import CosmologyModel, conformal_time, de_sitter, minkowski
from .detectors import DetectorPair, DetectorParams, SizePolicy
from .harvest import (PREFACTOR, HarvestError, HarvestResult, evaluate)
from .quadrature import QuadratureConfig

CSV_HEADER = ("d_over_T,delta_t_over_T,delta_eta_over_T,HT,OmegaT,sigma_over_T,"
              "policy,L_aa,L_bb,re_M,im_M,re_Mplus,im_Mplus,re_Mminus,im_Mminus,"
              "N,N_plus,N_minus,phi,status")

AXIS_NAMES = ("d_over_T", "delta_t_over_T", "HT")

# every flag defaults to the baseline scenario OmegaT=6, HT=0.1,
# sigma/T=0.1, d/T=2, detectors switched simultaneously
DEFAULTS = {
    "omega_t": 6.0,
    "hubble_t": 0.1,
    "sigma_t": 0.1,
    "d_t": 2.0,
    "tb_t": 0.0,
    "policy": "comoving",
    "rel_tol": 1e-9,
    "trunc_width": 6.0,
    "threads": 1,
    "output": None,
}

_POLICIES = {"comoving": SizePolicy.COMOVING, "proper": SizePolicy.PROPER_FIXED}


@dataclass
class SweepSpec:
    mode: str
    fixed: dict                      # omega_t, hubble_t, sigma_t, d_t, tb_t
    policy: str = "comoving"
    axes: list = field(default_factory=list)   # [(name, lo, hi, steps)]
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    output: Optional[str] = None
    threads: int = 1


def _model_for(hubble_t: float) -> CosmologyModel:
    return minkowski() if hubble_t == 0.0 else de_sitter(hubble_t)


def _pair_for(params: dict, policy: str) -> DetectorPair:
    pol = _POLICIES[policy]
    det_a = DetectorParams(gap=params["omega_t"], t_center=0.0, width=1.0,
                           sigma=params["sigma_t"], position=(0.0, 0.0, 0.0),
                           policy=pol)
    det_b = DetectorParams(gap=params["omega_t"], t_center=params["tb_t"], width=1.0,
                           sigma=params["sigma_t"],
                           position=(params["d_t"], 0.0, 0.0), policy=pol)
    return DetectorPair(det_a, det_b)


def _fmt(x: float) -> str:
    return "%.12e" % x


def _row(params: dict, policy: str, result: Optional[HarvestResult],
         status: str, lc: Optional[int] = None) -> str:
    model = _model_for(params["hubble_t"])
    delta_eta = conformal_time(model, params["tb_t"])
    nan = math.nan
    res = result or HarvestResult(nan, nan, nan, nan, nan, nan, nan, nan, nan)
    cells = [
        _fmt(params["d_t"]), _fmt(params["tb_t"]), _fmt(delta_eta),
        _fmt(params["hubble_t"]), _fmt(params["omega_t"]), _fmt(params["sigma_t"]),
        policy,
        _fmt(res.L_aa), _fmt(res.L_bb),
        _fmt(np.real(res.M)), _fmt(np.imag(res.M)),
        _fmt(np.real(res.M_plus)), _fmt(np.imag(res.M_plus)),
        _fmt(np.real(res.M_minus)), _fmt(np.imag(res.M_minus)),
        _fmt(res.N), _fmt(res.N_plus), _fmt(res.N_minus), _fmt(res.phi),
        status,
    ]
    if lc is not None:
        cells.append(str(lc))
    return ",".join(cells)


def _eval_point(params: dict, spec: SweepSpec, with_lc: bool) -> tuple:
    """Returns (row string, ok flag)."""
    lc = None
    if with_lc:
        model = _model_for(params["hubble_t"])
        delta_eta = conformal_time(model, params["tb_t"])
        lc = int(np.sign(delta_eta * delta_eta - params["d_t"] ** 2))
    try:
        result = evaluate(_pair_for(params, spec.policy),
                          _model_for(params["hubble_t"]), spec.quadrature)
        return _row(params, spec.policy, result, "ok", lc), True
    except HarvestError as exc:
        status = "failed:" + "+".join(sorted(exc.failures))
        return _row(params, spec.policy, None, status, lc), False


def _axis_values(axis) -> np.ndarray:
    name, lo, hi, steps = axis
    return np.linspace(lo, hi, steps)


def _emit(spec: SweepSpec, text: str):
    if spec.output:
        with open(spec.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sweep(spec: SweepSpec, points: list, with_lc: bool) -> int:
    """Evaluate points (in order), write CSV; returns count of failures."""
    if spec.threads > 1:
        with ThreadPoolExecutor(max_workers=spec.threads) as pool:
            rows = list(pool.map(lambda p: _eval_point(p, spec, with_lc), points))
    else:
        rows = [_eval_point(p, spec, with_lc) for p in points]
    header = CSV_HEADER + (",lc" if with_lc else "")
    text = "\n".join([header] + [r for r, _ in rows]) + "\n"
    _emit(spec, text)
    return sum(1 for _, ok in rows if not ok)


def run_point(spec: SweepSpec) -> HarvestResult:
    """Evaluate the single fixed point and print header + one CSV row."""
    params = dict(spec.fixed)
    result = evaluate(_pair_for(params, spec.policy),
                      _model_for(params["hubble_t"]), spec.quadrature)
    text = CSV_HEADER + "\n" + _row(params, spec.policy, result, "ok") + "\n"
    _emit(spec, text)
    return result


def run_grid(spec: SweepSpec) -> int:
    """Two-axis sweep, row-major over axis order, with a light-cone column."""
    ax0, ax1 = spec.axes
    points = []
    for v0 in _axis_values(ax0):
        for v1 in _axis_values(ax1):
            p = dict(spec.fixed)
            p[_AXIS_TO_PARAM[ax0[0]]] = float(v0)
            p[_AXIS_TO_PARAM[ax1[0]]] = float(v1)
            points.append(p)
    return _sweep(spec, points, with_lc=True)


def run_line(spec: SweepSpec) -> int:
    """One-axis sweep."""
    (axis,) = spec.axes
    points = []
    for v in _axis_values(axis):
        p = dict(spec.fixed)
        p[_AXIS_TO_PARAM[axis[0]]] = float(v)
        points.append(p)
    return _sweep(spec, points, with_lc=False)


_AXIS_TO_PARAM = {"d_over_T": "d_t", "delta_t_over_T": "tb_t", "HT": "hubble_t"}


# ---------------------------------------------------------------------------
# verification suite

def _check_kernel_oracle(spec):
    rng = np.random.default_rng(20240517)
    worst = 0.0
    for _ in range(50):
        de = rng.uniform(-5.0, 5.0)
        d = rng.uniform(0.1, 5.0)
        sig = rng.uniform(0.05, 2.0)
        closed = kernels.kernel_cross(kernels.KernelInputs(de, d, sig))
        oracle = kernels.momentum_integral_reference(de, d, sig)
        worst = max(worst, abs(closed - oracle) / abs(oracle))
    return worst, 1e-8


def _check_self_limit(spec):
    rng = np.random.default_rng(915)
    worst = 0.0
    for _ in range(20):
        de = rng.uniform(-5.0, 5.0)
        sig = rng.uniform(0.05, 2.0)
        cross = kernels.kernel_cross_raw(de, 1e-8 * sig, sig)
        self_ = kernels.kernel_self(de, sig)
        worst = max(worst, abs(cross - self_) / abs(self_))
    return worst, 1e-5


def _check_decomposition(spec):
    params = dict(spec.fixed)
    res = evaluate(_pair_for(params, spec.policy),
                   _model_for(params["hubble_t"]), spec.quadrature)
    resid = abs(res.M_plus + res.M_minus - res.M)
    cfg = spec.quadrature
    tol = 2.0 * max(cfg.abs_tol * PREFACTOR, cfg.rel_tol * abs(res.M))
    return resid, tol


def _check_appendix_shift(spec):
    h, xi = 0.1, 2.0
    model = de_sitter(h)
    scale = math.exp(-h * xi)
    base_params = {"omega_t": 4.0, "sigma_t": 0.1, "d_t": 2.0, "tb_t": 1.0}

    def build(ta, tb, sigma, d):
        det_a = DetectorParams(gap=4.0, t_center=ta, width=1.0, sigma=sigma,
                               position=(0.0, 0.0, 0.0), policy=SizePolicy.COMOVING)
        det_b = DetectorParams(gap=4.0, t_center=tb, width=1.0, sigma=sigma,
                               position=(d, 0.0, 0.0), policy=SizePolicy.COMOVING)
        return DetectorPair(det_a, det_b)

    base = evaluate(build(0.0, 1.0, 0.1, 2.0), model, spec.quadrature)
    shifted = evaluate(build(xi, 1.0 + xi, 0.1 * scale, 2.0 * scale),
                       model, spec.quadrature)
    resid = max(
        abs(shifted.L_aa - base.L_aa) / base.L_aa,
        abs(shifted.L_bb - base.L_bb) / base.L_bb,
        abs(abs(shifted.M) - abs(base.M)) / abs(base.M),
    )
    dphi = (np.angle(shifted.M) - np.angle(base.M) - 2.0 * 4.0 * xi) % (2.0 * np.pi)
    resid = max(resid, min(dphi, 2.0 * np.pi - dphi))
    return resid, 1e-6


def _check_minkowski_phase(spec):
    params = {"omega_t": 4.0, "hubble_t": 0.0, "sigma_t": 0.1,
              "d_t": 2.0, "tb_t": 0.0}
    res = evaluate(_pair_for(params, "comoving"), minkowski(), spec.quadrature)
    return abs(abs(res.phi) - math.pi / 2.0), 1e-3


def _check_lambda_scaling(spec):
    params = dict(spec.fixed)
    model = _model_for(params["hubble_t"])
    base = evaluate(_pair_for(params, spec.policy), model, spec.quadrature)
    pair2 = _pair_for(params, spec.policy)
    pair2 = DetectorPair(pair2.a, pair2.b, coupling=2.0)
    scaled = evaluate(pair2, model, spec.quadrature)
    resid = max(
        abs(scaled.L_aa - 4.0 * base.L_aa),
        abs(scaled.L_bb - 4.0 * base.L_bb),
        abs(scaled.M - 4.0 * base.M),
        abs(scaled.M_plus - 4.0 * base.M_plus),
        abs(scaled.M_minus - 4.0 * base.M_minus),
        abs(scaled.N - 4.0 * base.N),
        abs(scaled.N_plus - 4.0 * base.N_plus),
        abs(scaled.N_minus - 4.0 * base.N_minus),
    )
    return resid, 0.0


_CHECKS = [
    ("kernel_oracle", _check_kernel_oracle),
    ("self_limit", _check_self_limit),
    ("decomposition", _check_decomposition),
    ("appendix_shift", _check_appendix_shift),
    ("minkowski_phase", _check_minkowski_phase),
    ("lambda_scaling", _check_lambda_scaling),
]


def run_verify(spec: SweepSpec) -> int:
    """Run the invariant suite; prints an aligned table, returns exit code."""
    lines = [f"{'check':<18} {'residual':>14} {'threshold':>14}  result"]
    all_ok = True
    for name, fn in _CHECKS:
        resid, threshold = fn(spec)
        ok = resid <= threshold
        all_ok = all_ok and ok
        lines.append(f"{name:<18} {resid:>14.4e} {threshold:>14.4e}  "
                     f"{'pass' if ok else 'FAIL'}")
    text = "\n".join(lines) + "\n"
    _emit(spec, text)
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# argument handling

def _add_common(sp):
    sp.add_argument("--omega-t", dest="omega_t", type=float, default=None,
                    help="energy gap Omega*T (default 6)")
    sp.add_argument("--hubble-t", dest="hubble_t", type=float, default=None,
                    help="expansion rate H*T; 0 selects flat spacetime (default 0.1)")
    sp.add_argument("--sigma-t", dest="sigma_t", type=float, default=None,
                    help="base smearing width sigma/T (default 0.1)")
    sp.add_argument("--d-t", dest="d_t", type=float, default=None,
                    help="comoving separation d/T (default 2)")
    sp.add_argument("--tb-t", dest="tb_t", type=float, default=None,
                    help="switching center of detector B, t_b/T (default 0)")
    sp.add_argument("--policy", choices=sorted(_POLICIES), default=None,
                    help="detector sizing policy (default comoving)")
    sp.add_argument("--rel-tol", dest="rel_tol", type=float, default=None,
                    help="quadrature relative tolerance (default 1e-9)")
    sp.add_argument("--trunc-width", dest="trunc_width", type=float, default=None,
                    help="integration window half-width in units of T (default 6)")
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads for sweep points (default 1)")
    sp.add_argument("--output", default=None, metavar="PATH",
                    help="output file (default stdout)")
    sp.add_argument("--config", default=None, metavar="PATH",
                    help="JSON file of defaults; explicit flags override it")


def _parse_range(text: str, parser) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        parser.error(f"--range must be MIN:MAX:STEPS, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError:
        parser.error(f"--range must be MIN:MAX:STEPS, got {text!r}")
    if steps < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
        parser.error(f"--range needs finite bounds and STEPS >= 1, got {text!r}")
    return lo, hi, steps


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cosmoharvest",
        description="Detector-pair entanglement in expanding spacetimes: "
                    "negativity and its communication/harvesting split.")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode, help_text in (
            ("point", "evaluate one parameter point, print one CSV row"),
            ("grid", "sweep two axes, write row-major CSV with light-cone column"),
            ("line", "sweep one axis, write CSV"),
            ("verify", "run the invariant suite, print a pass/fail table")):
        sp = sub.add_parser(mode, help=help_text)
        _add_common(sp)
        if mode in ("grid", "line"):
            sp.add_argument("--axis", action="append", dest="axes",
                            choices=AXIS_NAMES, default=None,
                            help="sweep axis (repeat for grid)")
            sp.add_argument("--range", action="append", dest="ranges",
                            default=None, metavar="MIN:MAX:STEPS",
                            help="range for the matching --axis")
    return parser


def _build_spec(args, parser) -> SweepSpec:
    settings = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {args.config!r}: {exc}")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            parser.error(f"unknown config keys: {sorted(unknown)}")
        settings.update(loaded)
    explicit = {k: v for k, v in vars(args).items()
                if k in DEFAULTS and v is not None}
    settings.update(explicit)

    if not settings["sigma_t"] > 0.0:
        parser.error("sigma/T must be > 0")
    if settings["d_t"] < 0.0:
        parser.error("d/T must be >= 0")
    if settings["hubble_t"] < 0.0:
        parser.error("H*T must be >= 0 (contracting spacetimes unsupported)")
    if settings["threads"] < 1:
        parser.error("--threads must be >= 1")

    try:
        cfg = QuadratureConfig(rel_tol=settings["rel_tol"],
                               trunc_width=settings["trunc_width"])
    except ValueError as exc:
        parser.error(str(exc))

    axes = []
    if args.mode in ("grid", "line"):
        names = args.axes or []
        ranges = args.ranges or []
        want = 2 if args.mode == "grid" else 1
        if len(names) != want or len(ranges) != want:
            parser.error(f"{args.mode} needs exactly {want} --axis/--range pair(s)")
        if len(set(names)) != len(names):
            parser.error("axes must be distinct")
        for name, rng in zip(names, ranges):
            if _AXIS_TO_PARAM[name] in explicit:
                parser.error(f"{name} is a sweep axis; do not also fix it")
            axes.append((name, *_parse_range(rng, parser)))

    fixed = {k: settings[k] for k in ("omega_t", "hubble_t", "sigma_t", "d_t", "tb_t")}
    return SweepSpec(mode=args.mode, fixed=fixed, policy=settings["policy"],
                     axes=axes, quadrature=cfg, output=settings["output"],
                     threads=settings["threads"])


def _normalize_argv(argv):
    """Join '--range X' into '--range=X' so negative bounds survive argparse."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--range":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--range={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_normalize_argv(argv))
    spec = _build_spec(args, parser)
    try:
        if spec.mode == "point":
            run_point(spec)
            return 0
        if spec.mode == "grid":
            return 1 if run_grid(spec) else 0
        if spec.mode == "line":
            return 1 if run_line(spec) else 0
        return run_verify(spec)
    except HarvestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
