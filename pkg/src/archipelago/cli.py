"""Command-line front end.

Subcommands::

    archipelago exact QUERY --alpha A --beta B [...]
    archipelago simulate {ring,island,jump,coupled} --seed S [...]
    archipelago compare TARGET [...]
    archipelago sweep --task TASK --out FILE --seed S [...]
    archipelago rerun FILE.manifest.json

Output is CSV on stdout (``--json`` for a JSON list of rows). ``--out`` writes
the table to a file with a ``<out>.manifest.json`` sidecar recording the
command line; ``rerun`` replays it. Exit codes: 0 success, 1 tolerance
breach, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .analytics import (
    BirthDeathSpec,
    absorption_prob_minus,
    absorption_prob_plus,
    eroder_bound,
    expected_hit_minus,
    expected_hit_plus,
    gambler_win_prob,
    gamma,
    phase_classify,
    ring_expected_absorption,
)
from .core import (
    MINUS,
    PLUS,
    ArchipelagoMeasure,
    DomainError,
    Params,
    RingConfig,
    UsageError,
    WindowConfig,
    compare,
)
from .dynamics import OrderViolation, coupled_step
from .montecarlo import (
    AbsorptionProbTask,
    MeanAbsorptionTask,
    RingScalingTask,
    SweepGrid,
    estimate_absorption_prob,
    estimate_front_speed,
    estimate_mean_absorption,
    sweep,
)
from .oracle import (
    build_birth_death_chain,
    build_ring_chain,
    default_truncation,
    ring_state_index,
    solve_absorption,
)
from .rng import StepRng

__all__ = ["main", "RunManifest", "EXACT_HEADER", "ESTIMATE_HEADER", "COMPARE_HEADER", "SWEEP_HEADER"]

EXACT_HEADER = ("query", "alpha", "beta", "side", "i", "n", "N", "value", "boundary")
EROSION_HEADER = ("query", "alpha", "beta", "side", "giant", "lower", "upper")
ESTIMATE_HEADER = ("point", "std_error", "replicates", "censored", "horizon", "seed", "flag", "ci_low", "ci_high")
COUPLED_HEADER = ("metric", "value")
COMPARE_HEADER = ("alpha", "beta", "n", "i", "theory", "oracle", "mc", "abs_err", "rel_err")
SWEEP_HEADER = (
    "alpha", "beta", "n", "point", "std_error", "replicates", "censored",
    "censored_fraction", "horizon", "seed", "flag", "ci_low", "ci_high", "error",
)

COMPARE_TOL = 1e-9
DEFAULT_PAIRS = ((0.2, 0.3), (0.5, 0.5), (0.8, 0.8), (0.3, 0.5), (0.7, 0.2))
EXIT_OK, EXIT_BREACH, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunManifest:
    command: list
    params: dict
    seed: int | None
    version: str
    timestamp: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))


# formatting -----------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _render(header, rows, as_json: bool) -> str:
    if as_json:
        return json.dumps([{k: _jsonable(r.get(k)) for k in header} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(r.get(k)) for k in header])
    return buf.getvalue()


def _emit(args, header, rows, argv) -> None:
    text = _render(header, rows, getattr(args, "json", False))
    out = getattr(args, "out", None)
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    manifest = RunManifest(
        command=list(argv),
        params={k: _jsonable(v) for k, v in sorted(vars(args).items()) if k != "func"},
        seed=getattr(args, "seed", None),
        version=__version__,
        timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(),
    )
    with open(f"{out}.manifest.json", "w", encoding="utf-8", newline="") as fh:
        fh.write(manifest.to_json())


# argument helpers -------------------------------------------------------------


def _int_list(text: str) -> list:
    """``"1,2,5"`` or ``"1-6"`` or a mix of both."""
    out = []
    try:
        for part in text.split(","):
            if "-" in part.strip()[1:]:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None
    return out


def _prob_list(text: str) -> list:
    try:
        return [Fraction(s.strip()) for s in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of decimals: {text!r}") from None


def _params(args) -> Params:
    return Params(args.alpha, args.beta)


def _component(text: str):
    """``WEIGHT:SIDE:LENGTH`` or ``WEIGHT:BACKGROUND_CHAR:CELLS`` e.g. ``0.5:-:+-+``."""
    try:
        w, side, shape = text.split(":")
        if side in ("plus", "minus"):
            bg = MINUS if side == "plus" else PLUS
            return float(w), WindowConfig.island(int(shape), bg)
        bg = {"-": MINUS, "+": PLUS}[side]
        cells = [1 if c == "+" else 0 for c in shape]
        return float(w), WindowConfig(bg, 0, cells)
    except (ValueError, KeyError):
        raise argparse.ArgumentTypeError(
            f"component must be WEIGHT:plus|minus:LENGTH or WEIGHT:-|+:CELLS, got {text!r}"
        ) from None


# exact ------------------------------------------------------------------------

EXACT_QUERIES = ("gamma", "h", "hhat", "exp-hit-x", "exp-hit-y", "gambler", "ring-time", "phase", "eroder-bound")


def _exact_rows(args):
    p = _params(args)
    base = {"query": args.query, "alpha": p.alpha_exact, "beta": p.beta_exact, "boundary": p.on_boundary}
    q = args.query
    if q == "gamma":
        return EXACT_HEADER, [{**base, "value": gamma(p)}]
    if q == "phase":
        v = phase_classify(p, args.side)
        return EXACT_HEADER, [{**base, "side": args.side, "value": str(v)}]
    if q == "eroder-bound":
        if not args.component:
            raise UsageError("eroder-bound needs at least one --component")
        mu = ArchipelagoMeasure(args.component)
        lo, hi = eroder_bound(mu, p)
        side = "/".join(sorted(mu.sides))
        return EROSION_HEADER, [{**base, "side": side, "giant": mu.giant, "lower": lo, "upper": hi}]
    if q == "ring-time":
        if args.n is None:
            raise UsageError("ring-time needs --n")
        return EXACT_HEADER, [
            {**base, "n": args.n, "i": i, "value": ring_expected_absorption(p, i, args.n)} for i in args.i
        ]
    if q == "gambler":
        if args.N is None:
            raise UsageError("gambler needs --N")
        return EXACT_HEADER, [{**base, "N": args.N, "i": i, "value": gambler_win_prob(p, i, args.N)} for i in args.i]
    fn = {
        "h": absorption_prob_plus,
        "hhat": absorption_prob_minus,
        "exp-hit-x": expected_hit_plus,
        "exp-hit-y": expected_hit_minus,
    }[q]
    return EXACT_HEADER, [{**base, "i": i, "value": fn(p, i)} for i in args.i]


def cmd_exact(args, argv) -> int:
    header, rows = _exact_rows(args)
    if args.table or args.json or args.out:
        _emit(args, header, rows, argv)
    elif header is EROSION_HEADER:
        for r in rows:
            print(f"{_fmt(r['lower'])},{_fmt(r['upper'])}")
    else:
        for r in rows:
            print(_fmt(r["value"]))
    return EXIT_OK


# simulate ---------------------------------------------------------------------


def _estimate_row(est) -> dict:
    lo, hi = est.ci
    return {
        "point": est.point,
        "std_error": est.std_error,
        "replicates": est.replicates,
        "censored": est.censored,
        "horizon": est.horizon,
        "seed": est.seed,
        "flag": est.flag,
        "ci_low": lo,
        "ci_high": hi,
    }


def _random_ordered_pair(rng: np.random.Generator, args):
    if args.island_len is None:
        x = rng.integers(0, 2, args.n).astype(np.uint8)
        y = x | rng.integers(0, 2, args.n).astype(np.uint8)
        return RingConfig(x), RingConfig(y)
    L = args.island_len
    x = rng.integers(0, 2, L).astype(np.uint8)
    x[0] = x[-1] = 1
    y = x | rng.integers(0, 2, L).astype(np.uint8)
    return WindowConfig(MINUS, 0, x), WindowConfig(MINUS, 0, y)


def _coupled(args, p: Params) -> list:
    rng = np.random.default_rng(args.seed)
    x, y = _random_ordered_pair(rng, args)
    step_rng = StepRng(args.seed)
    violations = 0
    for t in range(args.steps):
        try:
            x, y = coupled_step(x, y, p, step_rng, t)
        except OrderViolation:
            violations += 1
            break
    assert compare(x, y).precedes_or_equal or violations
    return [{"metric": "steps", "value": args.steps}, {"metric": "violations", "value": violations}]


def cmd_simulate(args, argv) -> int:
    p = _params(args)
    kind = args.kind
    if kind == "coupled":
        rows = _coupled(args, p)
        _emit(args, COUPLED_HEADER, rows, argv)
        return EXIT_BREACH if rows[1]["value"] else EXIT_OK
    if kind == "jump":
        est = estimate_front_speed(args.jump_kind, p, args.steps, args.replicates, args.seed)
    else:
        if kind == "ring":
            if args.n is None or args.n < 2:
                raise UsageError("ring simulation needs --n >= 2")
            length = args.len if args.len is not None else args.n // 2
            if not 0 <= length <= args.n:
                raise UsageError("block length must lie in [0, n]")
            cfg = RingConfig.block(args.n, length)
        else:
            if args.len is None or args.len < 1:
                raise UsageError("island simulation needs --len >= 1")
            cfg = WindowConfig.island(args.len, MINUS if args.side == "plus" else PLUS)
        estimator = estimate_absorption_prob if args.what == "prob" else estimate_mean_absorption
        est = estimator(cfg, p, args.replicates, args.horizon, args.seed)
    _emit(args, ESTIMATE_HEADER, [_estimate_row(est)], argv)
    return EXIT_OK


# compare ----------------------------------------------------------------------


def _walk_spec(p: Params, side: str, top: int | None = None) -> BirthDeathSpec:
    return BirthDeathSpec.plus_walk(p, top) if side == "plus" else BirthDeathSpec.minus_walk(p, top)


def _oracle_hit_time(p: Params, side: str, imax: int) -> np.ndarray:
    spec = _walk_spec(p, side)
    chain = build_birth_death_chain(spec, default_truncation(spec, imax))
    return solve_absorption(chain).expected_times


def _oracle_absorption(p: Params, side: str, imax: int) -> np.ndarray:
    spec = _walk_spec(p, side)
    if spec.up <= spec.down:
        # Recurrent walk: a reflecting truncation is absorbed at 0 surely.
        chain = build_birth_death_chain(spec, imax + 10)
    else:
        r = spec.down / spec.up
        top = imax + 10 + (math.ceil(math.log(1e-17) / math.log(r)) if r > 0 else 0)
        if top > 4000:
            raise DomainError("walk too close to critical for a dense absorption oracle")
        chain = build_birth_death_chain(_walk_spec(p, side, top), top)
    return solve_absorption(chain, target=[0]).hit_probabilities


def _mc_value(args, target: str, p: Params, n, i, cell: int):
    if args.replicates is None:
        return None
    if target == "ring-time":
        est = estimate_mean_absorption(RingConfig.block(n, i), p, args.replicates, args.horizon, args.seed, cell)
    elif target in ("exp-hit-x", "exp-hit-y"):
        bg = MINUS if target == "exp-hit-x" else PLUS
        est = estimate_mean_absorption(WindowConfig.island(i, bg), p, args.replicates, args.horizon, args.seed, cell)
    elif target in ("h", "hhat"):
        bg = MINUS if target == "h" else PLUS
        est = estimate_absorption_prob(WindowConfig.island(i, bg), p, args.replicates, args.horizon, args.seed, cell)
    else:
        return None
    return est.point


def _errors(theory: float, oracle: float):
    if theory == oracle:
        return 0.0, 0.0
    err = abs(theory - oracle)
    return err, err / abs(oracle) if oracle != 0 and math.isfinite(oracle) else err


def _compare_pairs(args):
    if (args.alpha is None) != (args.beta is None):
        raise UsageError("give both --alpha and --beta, or neither")
    if args.alpha is not None:
        return [Params(args.alpha, args.beta)]
    pairs = [Params(a, b) for a, b in DEFAULT_PAIRS]
    side = {"exp-hit-x": "plus", "exp-hit-y": "minus"}.get(args.target)
    return [p for p in pairs if side is None or phase_classify(p, side).finite]


def cmd_compare(args, argv) -> int:
    if args.replicates is not None and args.seed is None:
        raise UsageError("Monte Carlo columns need --seed")
    rows = []
    cell = 0
    for p in _compare_pairs(args):
        base = {"alpha": p.alpha_exact, "beta": p.beta_exact}
        cases = []  # (n, i, theory, oracle)
        t = args.target
        if t == "ring-time":
            for n in range(2, args.n_max + 1):
                times = solve_absorption(build_ring_chain(n, p)).expected_times
                for i in range(1, n):
                    oracle = times[ring_state_index(RingConfig.block(n, i))]
                    cases.append((n, i, ring_expected_absorption(p, i, n), oracle))
        elif t == "gambler":
            chain = build_birth_death_chain(BirthDeathSpec.gambler(p, args.N), args.N)
            hit = solve_absorption(chain, target=[args.N]).hit_probabilities
            cases = [(args.N, i, gambler_win_prob(p, i, args.N), hit[i]) for i in range(1, args.N)]
        elif t in ("exp-hit-x", "exp-hit-y"):
            side = "plus" if t == "exp-hit-x" else "minus"
            fn = expected_hit_plus if side == "plus" else expected_hit_minus
            times = _oracle_hit_time(p, side, args.i_max)
            cases = [(None, i, fn(p, i), times[i]) for i in range(1, args.i_max + 1)]
        else:
            side = "plus" if t == "h" else "minus"
            fn = absorption_prob_plus if side == "plus" else absorption_prob_minus
            hit = _oracle_absorption(p, side, args.i_max)
            cases = [(None, i, fn(p, i), hit[i]) for i in range(1, args.i_max + 1)]
        for n, i, theory, oracle in cases:
            abs_err, rel_err = _errors(float(theory), float(oracle))
            mc = _mc_value(args, t, p, n, i, cell)
            cell += 1
            rows.append({**base, "n": n, "i": i, "theory": theory, "oracle": oracle, "mc": mc,
                         "abs_err": abs_err, "rel_err": rel_err})
    _emit(args, COMPARE_HEADER, rows, argv)
    breach = [r for r in rows if not r["rel_err"] <= COMPARE_TOL]
    if breach:
        print(f"{len(breach)} row(s) exceed relative error {COMPARE_TOL:g}", file=sys.stderr)
        return EXIT_BREACH
    return EXIT_OK


# sweep ------------------------------------------------------------------------


def _sweep_task(args):
    if args.task == "mean-absorption":
        return MeanAbsorptionTask(args.len, args.side, args.replicates, args.horizon)
    if args.task == "absorption-prob":
        return AbsorptionProbTask(args.len, args.side, args.replicates, args.horizon)
    return RingScalingTask(tuple(args.ns), args.replicates, args.horizon)


def sweep_rows(rows) -> list:
    out = []
    for r in rows:
        d = {"alpha": r.alpha, "beta": r.beta, "n": r.n, "error": r.error}
        if r.estimate is not None:
            d.update(_estimate_row(r.estimate))
            d["censored_fraction"] = r.estimate.censored_fraction
        out.append(d)
    return out


def cmd_sweep(args, argv) -> int:
    if args.points is not None:
        grid = SweepGrid.uniform(args.points)
    elif args.alphas and args.betas:
        grid = SweepGrid(args.alphas, args.betas)
    else:
        raise UsageError("sweep needs --points or both --alphas and --betas")
    rows = sweep(grid, _sweep_task(args), args.seed)
    _emit(args, SWEEP_HEADER, sweep_rows(rows), argv)
    return EXIT_OK


def cmd_rerun(args, argv) -> int:
    with open(args.manifest, encoding="utf-8") as fh:
        m = RunManifest.from_json(fh.read())
    if m.command and m.command[0] == "rerun":
        raise UsageError("refusing to rerun a rerun")
    return main(m.command)


# parser -----------------------------------------------------------------------


def _add_params(p, required=True):
    p.add_argument("--alpha", required=required, help="probability of (⊖,⊕) -> ⊕, decimal in [0, 1]")
    p.add_argument("--beta", required=required, help="probability of (⊕,⊖) -> ⊕, decimal in [0, 1]")


def _add_output(p):
    p.add_argument("--json", action="store_true", help="emit a JSON list of rows instead of CSV")
    p.add_argument("--out", help="write to this file plus a .manifest.json sidecar")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="archipelago", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("exact", help="closed-form quantities")
    ex.add_argument("query", choices=EXACT_QUERIES)
    _add_params(ex)
    ex.add_argument("--side", choices=("plus", "minus"), default="plus")
    ex.add_argument("--i", type=_int_list, default=[1], help="index list, e.g. 1,2,3 or 1-6")
    ex.add_argument("--n", type=int, help="ring size")
    ex.add_argument("--N", type=int, help="gambler's target")
    ex.add_argument("--component", type=_component, action="append", help="measure component for eroder-bound")
    ex.add_argument("--table", action="store_true", help="CSV with header instead of bare values")
    _add_output(ex)
    ex.set_defaults(func=cmd_exact)

    sim = sub.add_parser("simulate", help="Monte Carlo estimates")
    sim.add_argument("kind", choices=("ring", "island", "jump", "coupled"))
    _add_params(sim)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--replicates", type=int, default=1000)
    sim.add_argument("--horizon", type=int, default=10**6)
    sim.add_argument("--n", type=int, default=None, help="ring size")
    sim.add_argument("--len", type=int, default=None, help="island or block length")
    sim.add_argument("--side", choices=("plus", "minus"), default="plus", help="island kind")
    sim.add_argument("--what", choices=("time", "prob"), default="time", help="mean time or absorption fraction")
    sim.add_argument("--kind", dest="jump_kind", choices=("minus-plus", "plus-minus"), default="minus-plus")
    sim.add_argument("--steps", type=int, default=10**4, help="steps for jump and coupled runs")
    sim.add_argument("--island-len", type=int, default=None, help="coupled: use windows of this length")
    _add_output(sim)
    sim.set_defaults(func=cmd_simulate)

    cmp_ = sub.add_parser("compare", help="closed forms vs exact chains")
    cmp_.add_argument("target", choices=("ring-time", "exp-hit-x", "exp-hit-y", "gambler", "h", "hhat"))
    _add_params(cmp_, required=False)
    cmp_.add_argument("--n-max", type=int, default=10)
    cmp_.add_argument("--i-max", type=int, default=10)
    cmp_.add_argument("--N", type=int, default=6)
    cmp_.add_argument("--replicates", type=int, default=None, help="also fill the mc column")
    cmp_.add_argument("--horizon", type=int, default=10**4)
    cmp_.add_argument("--seed", type=int, default=None)
    _add_output(cmp_)
    cmp_.set_defaults(func=cmd_compare)

    sw = sub.add_parser("sweep", help="Monte Carlo over an (alpha, beta) grid")
    sw.add_argument("--task", choices=("mean-absorption", "absorption-prob", "ring-scaling"), required=True)
    sw.add_argument("--points", type=int, help="uniform grid with this many points per axis on [0, 1]")
    sw.add_argument("--alphas", type=_prob_list)
    sw.add_argument("--betas", type=_prob_list)
    sw.add_argument("--len", type=int, default=2)
    sw.add_argument("--side", choices=("plus", "minus"), default="plus")
    sw.add_argument("--ns", type=_int_list, default=[8, 16, 32, 64])
    sw.add_argument("--replicates", type=int, default=1000)
    sw.add_argument("--horizon", type=int, default=10**5)
    sw.add_argument("--seed", type=int, required=True)
    sw.add_argument("--out", required=True)
    sw.add_argument("--json", action="store_true")
    sw.set_defaults(func=cmd_sweep)

    rr = sub.add_parser("rerun", help="replay the command recorded in a manifest")
    rr.add_argument("manifest")
    rr.set_defaults(func=cmd_rerun)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except ValueError as exc:  # DomainError and UsageError included
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
