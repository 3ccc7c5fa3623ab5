"""Command-line interface: ``olg compute|sweep|verify|breakpoints|limits|plot``.

Exit codes are shared by every command: 0 success, 1 a verification check
failed, 2 file I/O error, 3 parse or validation error, 4 enumeration cap
exceeded.  Rationals are written as ``p/q`` strings in every CSV and JSON
output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from olg import analysis, oracle, plot
from olg.feasible import (
    EnumerationCapError,
    effective_discount,
    feasible_set,
    lifetime_payoff,
    max_welfare,
    vertex_generators,
)
from olg.geometry import Polytope, hull_equal
from olg.rng import SplitMix64, derive_seed
from olg.stage_game import (
    GameFormatError,
    StageGame,
    format_rational,
    load_game,
    one_shot_hull,
    parse_rational,
    payoff_cube,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_IO = 2
EXIT_INVALID = 3
EXIT_CAP = 4

COMMANDS = ("compute", "sweep", "verify", "breakpoints", "limits", "plot")


class _Parser(argparse.ArgumentParser):
    # usage errors are validation errors, not I/O errors (argparse uses 2)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    game_path: Path
    delta: Fraction | None = None
    T: int = 1
    deltas: list[Fraction] = field(default_factory=list)
    lam: list[Fraction] = field(default_factory=list)
    output_path: Path | None = None
    format: str = "csv"
    seed: int = 0
    trials: int = 0
    end: str = "one"
    golden: Path | None = None
    projection: str = "isometric"


def rational_list(text: str) -> list[Fraction]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of rationals")
    return [parse_rational(p) for p in parts]


def fr(x: Fraction) -> str:
    return format_rational(Fraction(x))


def point_json(p) -> list[str]:
    return [fr(x) for x in p]


def write_output(text: str, path: Path | None) -> None:
    """Write to ``path`` atomically, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


# -- compute -------------------------------------------------------------------


def compute_rows(g: StageGame, Delta: Fraction) -> list[tuple]:
    gens = vertex_generators(g, Delta)
    return [(v, gens[v]) for v in sorted(gens)]


def cmd_compute(cfg: RunConfig, g: StageGame) -> str:
    spec = effective_discount(cfg.delta, cfg.T)
    rows = compute_rows(g, spec.Delta)
    if cfg.format == "json":
        doc = {
            "game": g.name,
            "delta": fr(spec.delta),
            "T": spec.T,
            "Delta": fr(spec.Delta),
            "vertices": [
                {"point": point_json(v), "sequence": [g.label(a) for a in s]} for v, s in rows
            ],
        }
        return dump_json(doc)
    if cfg.format != "csv":
        raise ValueError(f"compute writes csv or json, not {cfg.format}")
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow([f"v{i + 1}" for i in range(g.n)] + [f"a{k + 1}" for k in range(g.n)])
    for v, s in rows:
        out.writerow(point_json(v) + [g.label(a) for a in s])
    return buf.getvalue()


def read_vertices(path: Path, n: int) -> Polytope:
    """Parse a compute listing (CSV or JSON) back into a polytope."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        pts = [[parse_rational(x) for x in item["point"]] for item in doc["vertices"]]
    else:
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ValueError(f"{path}: empty vertex listing")
        pts = [[parse_rational(x) for x in row[:n]] for row in rows[1:] if row]
    if not pts:
        raise ValueError(f"{path}: no vertices")
    if any(len(p) != n for p in pts):
        raise ValueError(f"{path}: vertices must have {n} coordinates")
    return Polytope.from_points(pts)


# -- sweep ---------------------------------------------------------------------


def cmd_sweep(cfg: RunConfig, g: StageGame) -> str:
    if len(cfg.deltas) < 2:
        raise ValueError("sweep needs at least two deltas")
    report = analysis.monotonicity_sweep(g, cfg.deltas)
    doc = {
        "game": g.name,
        "deltas": [fr(d) for d in report.deltas],
        "pairs": [
            {
                "Delta": fr(v.Delta),
                "Delta_prime": fr(v.Delta_prime),
                "contains": v.contains,
                "strict": v.strict,
                "witness": None if v.witness is None else point_json(v.witness),
            }
            for v in report.verdicts
        ],
        "all_contained": report.all_contained,
        "all_strict": report.all_strict,
    }
    return dump_json(doc)


# -- verify --------------------------------------------------------------------


def _run_check(name: str, fn: Callable[[], dict]) -> dict:
    try:
        result = fn()
    except EnumerationCapError as exc:
        return {"name": name, "status": "cap_exceeded", "detail": str(exc)}
    result.setdefault("status", "pass" if result.pop("ok") else "fail")
    return {"name": name, **result}


def _check_theorem1(g, spec) -> dict:
    return {"ok": oracle.theorem1_equivalence(g, spec)}


def _check_optimality(g, Delta) -> tuple[dict, dict]:
    rep = analysis.optimality_checks(g, [Delta])
    lemma1 = {"ok": not rep.lemma1_failures, "optimizers_checked": rep.checked, "failures": len(rep.lemma1_failures)}
    deriv = {"ok": not rep.lemma2_failures, "optimizers_checked": rep.checked, "failures": len(rep.lemma2_failures)}
    if Delta == 1:
        deriv["detail"] = "derivative sign is only defined for Delta < 1"
    return lemma1, deriv


def _check_pm_identity(g, Delta, seed) -> dict:
    # at Delta = 1 the identity is checked at 1/2 instead
    D = Delta if Delta < 1 else Fraction(1, 2)
    vectors = []
    for lam in analysis.direction_family(g.n):
        for useq in max_welfare(g, D, lam).optimizer_payoff_sequences:
            vectors.append(analysis.age_weights(useq, lam))
    rng = SplitMix64(derive_seed(seed, 1))
    for _ in range(20):
        vectors.append(tuple(rng.rational(-10, 10, 7) for _ in range(g.n)))
    bad = 0
    for w in vectors:
        _, rec = analysis.pm_decomposition(w, D)
        if rec != analysis.derivative_numerator(w, D):
            bad += 1
    return {"ok": bad == 0, "vectors": len(vectors), "failures": bad}


def _check_prd(g, spec, seed, trials) -> dict:
    rng_seed = derive_seed(seed, 2)
    seq = oracle.random_lifetime_sequence(g, spec.T, rng_seed)
    lot = oracle.prd_lottery(seq, spec)
    exact = oracle.prd_expected_payoff(g, lot, spec)
    target = lifetime_payoff(g, seq, spec)
    sim = oracle.prd_simulate(g, lot, spec, derive_seed(seed, 3), trials)
    within = all(abs(float(m - e)) <= 4 * s if s > 0 else m == e for m, e, s in zip(sim.mean, exact, sim.stderr))
    return {
        "ok": exact == target and within,
        "sequence": [g.label(a) for a in seq],
        "expected": point_json(exact),
        "lifetime": point_json(target),
        "empirical_mean": point_json(sim.mean),
        "standard_error": list(sim.stderr),
        "trials": trials,
    }


def _check_golden(g, Delta, path) -> dict:
    golden = read_vertices(path, g.n)
    ok = hull_equal(golden, feasible_set(g, Delta))
    return {"ok": ok, "golden": str(path)}


def cmd_verify(cfg: RunConfig, g: StageGame) -> str:
    spec = effective_discount(cfg.delta, cfg.T)
    Delta = spec.Delta
    checks = [_run_check("theorem1_equivalence", lambda: _check_theorem1(g, spec))]
    try:
        lemma1, deriv = _check_optimality(g, Delta)
        checks.append({"name": "lemma1_inequalities", "status": "pass" if lemma1.pop("ok") else "fail", **lemma1})
        checks.append({"name": "derivative_sign", "status": "pass" if deriv.pop("ok") else "fail", **deriv})
    except EnumerationCapError as exc:
        for name in ("lemma1_inequalities", "derivative_sign"):
            checks.append({"name": name, "status": "cap_exceeded", "detail": str(exc)})
    checks.append(_run_check("pm_identity", lambda: _check_pm_identity(g, Delta, cfg.seed)))
    if cfg.trials > 0:
        checks.append(_run_check("prd_construction", lambda: _check_prd(g, spec, cfg.seed, cfg.trials)))
    if cfg.golden is not None:
        checks.append(_run_check("golden_vertices", lambda: _check_golden(g, Delta, cfg.golden)))
    statuses = [c["status"] for c in checks]
    doc = {
        "game": g.name,
        "delta": fr(spec.delta),
        "T": spec.T,
        "Delta": fr(Delta),
        "seed": cfg.seed,
        "checks": checks,
        "passed": all(s == "pass" for s in statuses),
    }
    return dump_json(doc)


def verify_exit_code(doc: dict) -> int:
    statuses = [c["status"] for c in doc["checks"]]
    if "fail" in statuses:
        return EXIT_CHECK_FAILED
    if "cap_exceeded" in statuses:
        return EXIT_CAP
    return EXIT_OK


# -- breakpoints and limits ----------------------------------------------------


def _root_json(root) -> dict:
    if root.exact:
        return {"exact": True, "value": fr(root.lo)}
    return {"exact": False, "lo": fr(root.lo), "hi": fr(root.hi), "approx": float(root.value)}


def _group_json(g: StageGame, grp) -> dict:
    return {
        "age_weights": point_json(grp.weights),
        "payoff_sequences": [[point_json(u) for u in useq] for useq in grp.payoff_sequences],
        "sequences": [[g.label(a) for a in s] for s in grp.sequences],
    }


def cmd_breakpoints(cfg: RunConfig, g: StageGame) -> str:
    if not cfg.lam:
        raise ValueError("breakpoints needs --lambda")
    rep = analysis.breakpoints(g, cfg.lam)
    doc = {
        "game": g.name,
        "lambda": point_json(rep.direction),
        "method": rep.method,
        "resolution": fr(rep.resolution),
        "pieces": [
            {"lo": fr(p.lo), "hi": fr(p.hi), "optimal": _group_json(g, p.group)} for p in rep.pieces
        ],
        "breakpoints": [
            {
                "Delta": _root_json(b.root),
                "left": _group_json(g, b.left),
                "right": _group_json(g, b.right),
                "tied": [_group_json(g, t) for t in b.tied],
            }
            for b in rep.breakpoints
        ],
    }
    return dump_json(doc)


def cmd_limits(cfg: RunConfig, g: StageGame) -> str:
    limit = analysis.limit_set(g, cfg.end)
    reference = one_shot_hull(g) if cfg.end == "one" else payoff_cube(g)
    doc = {
        "game": g.name,
        "end": cfg.end,
        "vertices": [point_json(v) for v in limit.vertices],
        "equals": "V" if cfg.end == "one" else "F*",
        "matches": hull_equal(limit, reference),
    }
    if cfg.lam:
        sols = analysis.limit_solution(g, cfg.lam, cfg.end)
        doc["lambda"] = point_json(cfg.lam)
        doc["optimal_sequences"] = [[g.label(a) for a in s] for s in sols]
    return dump_json(doc)


def cmd_plot(cfg: RunConfig, g: StageGame) -> str:
    if not cfg.deltas:
        raise ValueError("plot needs --deltas")
    return plot.render(g, cfg.deltas, cfg.projection)


HANDLERS = {
    "compute": cmd_compute,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "breakpoints": cmd_breakpoints,
    "limits": cmd_limits,
    "plot": cmd_plot,
}


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="olg", description="Feasible payoff sets of OLG repeated games.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, out_help="output file (default: stdout)"):
        p.add_argument("--game", required=True, type=Path, help="stage game JSON file")
        p.add_argument("--out", type=Path, default=None, help=out_help)

    p = sub.add_parser("compute", help="vertices of the feasible set with generating sequences")
    common(p)
    p.add_argument("--delta", required=True, help="per-period discount factor p/q")
    p.add_argument("--T", type=int, default=1, help="overlap length in periods")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sweep", help="inclusion of feasible sets along ascending effective discounts")
    common(p)
    p.add_argument("--deltas", required=True, help="comma-separated effective discounts, ascending")

    p = sub.add_parser("verify", help="run the verification suite")
    common(p)
    p.add_argument("--delta", required=True)
    p.add_argument("--T", type=int, default=1)
    p.add_argument("--trials", type=int, default=0, help="Monte Carlo trials for the lottery check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--golden", type=Path, default=None, help="vertex listing to compare against")

    p = sub.add_parser("breakpoints", help="effective discounts where the optimal sequence changes")
    common(p)
    p.add_argument("--lambda", dest="lam", required=True, help="comma-separated welfare weights")

    p = sub.add_parser("limits", help="limit sets as the effective discount tends to 0 or 1")
    common(p)
    p.add_argument("--end", choices=("zero", "one"), required=True)
    p.add_argument("--lambda", dest="lam", default=None, help="also list limiting optimal sequences")

    p = sub.add_parser("plot", help="SVG picture of feasible sets")
    common(p)
    p.add_argument("--deltas", required=True, help="comma-separated effective discounts; 0 draws the limit cube")
    p.add_argument("--projection", choices=plot.PROJECTIONS, default="isometric", help="projection for 3 players")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, game_path=ns.game, output_path=ns.out)
    if getattr(ns, "delta", None) is not None:
        cfg.delta = parse_rational(ns.delta)
    if getattr(ns, "T", None) is not None:
        cfg.T = ns.T
    if getattr(ns, "deltas", None):
        cfg.deltas = rational_list(ns.deltas)
    if getattr(ns, "lam", None):
        cfg.lam = rational_list(ns.lam)
    cfg.format = "svg" if ns.command == "plot" else getattr(ns, "format", "json" if ns.command != "compute" else "csv")
    cfg.seed = getattr(ns, "seed", 0)
    cfg.trials = getattr(ns, "trials", 0)
    cfg.end = getattr(ns, "end", "one")
    cfg.golden = getattr(ns, "golden", None)
    cfg.projection = getattr(ns, "projection", "isometric")
    if cfg.trials < 0:
        raise ValueError("--trials must be nonnegative")
    return cfg


def run(cfg: RunConfig) -> int:
    g = load_game(cfg.game_path)
    text = HANDLERS[cfg.command](cfg, g)
    write_output(text, cfg.output_path)
    if cfg.command == "verify":
        return verify_exit_code(json.loads(text))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except EnumerationCapError as exc:
        print(f"olg: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"olg: {exc}", file=sys.stderr)
        return EXIT_IO
    except (GameFormatError, ValueError, ZeroDivisionError, json.JSONDecodeError, KeyError) as exc:
        print(f"olg: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
