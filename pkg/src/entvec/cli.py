"""Command-line interface: state construction, measurement, and self-checks.

Exit codes: 0 success, 1 self-check found a violation, 2 invalid input or
configuration, 3 unsupported request, 4 numerical failure. Given identical
arguments (including seeds) every command prints byte-identical output.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import BadDimension, DomainError, EntvecError, NoConvergence
from .measures import (
    MEASURE_CLASSES,
    concurrence_mixed,
    concurrence_pure,
    default_classes,
    measure_all,
)
from .operators import EXPECTED_GHZ3_PATTERNS, all_pairs, expansion_weights, flip_operator
from .states import (
    DensityMatrix,
    PureState,
    apply_local_unitaries,
    load_state,
    make_ghz,
    make_product,
    make_w,
    permute_qubits,
    random_local_unitary,
    random_mixed,
    random_pure,
    save_state,
    to_density,
    validate,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_UNSUPPORTED = 3
EXIT_NUMERICAL = 4

ROUTE_TOL = 1e-8
CLOSED_FORM_TOL = 1e-10
PERMUTATION_TOL = 1e-10
EXPANSION_TOL = 1e-12
WEIGHT_TOL = 1e-10


@dataclass(frozen=True)
class RunConfig:
    """Validated per-invocation settings shared by the command handlers."""

    fmt: str = "table"
    seed: int = 0
    samples: int = 1
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fmt not in ("table", "json"):
            raise DomainError(f"format must be 'table' or 'json', got {self.fmt!r}")
        if self.samples < 1:
            raise DomainError(f"samples must be >= 1, got {self.samples}")
        for name, value in self.tolerances.items():
            if not value > 0.0:
                raise DomainError(f"tolerance {name} must be > 0, got {value!r}")


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex number from {text!r}") from exc


def _parse_coeff_list(text: str, expected: int) -> list[complex]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != expected:
        raise DomainError(f"expected {expected} comma-separated values, got {len(parts)}")
    return [_parse_complex(p) for p in parts]


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _render_table(rows: list[list[str]], headers: list[str]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for k, cell in enumerate(row):
            widths[k] = max(widths[k], len(cell))
    lines = ["  ".join(h.ljust(widths[k]) for k, h in enumerate(headers)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[k]) for k, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _normalized_vector(values: list[complex]) -> np.ndarray:
    v = np.array(values, dtype=complex)
    norm = float(np.sqrt(np.sum(np.abs(v) ** 2)))
    if norm < 1e-10:
        raise DomainError("cannot normalize a zero coefficient vector")
    return v / norm


def cmd_make_state(args) -> int:
    RunConfig(fmt=args.format, seed=args.seed or 0, samples=1)
    kind = args.kind
    if kind == "ghz":
        if args.alpha is None or args.beta is None:
            raise DomainError("ghz needs --alpha and --beta")
        coeffs = [args.alpha, args.beta]
        if args.normalize:
            coeffs = list(_normalized_vector(coeffs))
        state: PureState | DensityMatrix = make_ghz(args.n, coeffs[0], coeffs[1])
    elif kind in ("w", "antiw"):
        if args.coeffs is None:
            raise DomainError(f"{kind} needs --coeffs a,b,c")
        coeffs = _parse_coeff_list(args.coeffs, 3)
        if args.normalize:
            coeffs = list(_normalized_vector(coeffs))
        state = make_w(coeffs, anti=kind == "antiw")
    elif kind == "bell":
        which = args.which
        if not 1 <= which <= 4:
            raise DomainError(f"--which must be in 1..4, got {which}")
        amps = np.zeros(4, dtype=complex)
        m = (which - 1) // 2
        sign = 1.0 if which % 2 == 1 else -1.0
        amps[[0, 3] if m == 0 else [1, 2]] = np.array([1.0, sign]) / np.sqrt(2.0)
        state = PureState(2, amps)
    elif kind == "product":
        if args.factors is None:
            raise DomainError("product needs --factors 'a,b;c,d;...'")
        groups = [g for g in args.factors.split(";") if g.strip()]
        factors = [_parse_coeff_list(g, 2) for g in groups]
        if args.normalize:
            factors = [list(_normalized_vector(f)) for f in factors]
        state = make_product(factors)
    elif kind == "random-pure":
        state = random_pure(args.n, args.seed or 0)
    elif kind == "random-mixed":
        rank = args.rank if args.rank is not None else 2**args.n
        state = random_mixed(args.n, rank, args.seed or 0)
    else:  # pragma: no cover - argparse choices guard this
        raise DomainError(f"unknown kind {kind!r}")

    save_state(state, args.out)
    report = validate(state)
    payload = {
        "kind": kind,
        "n_qubits": state.n_qubits,
        "state_kind": "pure" if isinstance(state, PureState) else "mixed",
        "out": args.out,
        "hermiticity_defect": report.hermiticity_defect,
        "trace_defect": report.trace_defect,
        "min_eigenvalue": report.min_eigenvalue,
        "passed": report.passed,
    }
    if args.format == "json":
        _emit(_render_json(payload), None)
    else:
        rows = [[k, v if isinstance(v, str) else _fmt(v) if isinstance(v, float) else str(v)]
                for k, v in payload.items()]
        _emit(_render_table(rows, ["field", "value"]), None)
    return EXIT_OK


def cmd_measure(args) -> int:
    RunConfig(fmt=args.format, samples=1)
    state = load_state(args.state)
    if args.classes is None:
        classes = default_classes(state)
    else:
        classes = [c.strip() for c in args.classes.split(",") if c.strip()]
        for c in classes:
            if c not in MEASURE_CLASSES:
                raise DomainError(f"unknown class {c!r}; expected subset of {MEASURE_CLASSES}")
        if "whole" in classes and not (isinstance(state, PureState) and state.n_qubits == 3):
            sys.stderr.write("whole measure needs a 3-qubit pure state\n")
            return EXIT_UNSUPPORTED
    report = measure_all(state, classes, verify_routes=args.verify_routes)
    if args.format == "json":
        payload = {"source": args.state, **report.to_dict()}
        _emit(_render_json(payload), args.out)
        return EXIT_OK
    rows = []
    for result in report.results:
        for (i, j) in result.concurrence.components:
            rows.append(
                [
                    result.class_tag,
                    f"({i},{j})",
                    _fmt(result.concurrence.components[(i, j)]),
                    _fmt(result.entanglement.components[(i, j)]),
                ]
            )
        rows.append([result.class_tag, "total", "", _fmt(result.entanglement.total)])
    header = (
        f"source={args.state}  kind={report.kind}  n_qubits={report.n_qubits}\n"
    )
    diag_lines = []
    for result in report.results:
        diag = {"route": result.route, **result.diagnostics}
        parts = ", ".join(
            f"{k}={_fmt(v) if isinstance(v, float) else v}" for k, v in diag.items()
        )
        diag_lines.append(f"{result.class_tag}: {parts}")
    text = (
        header
        + _render_table(rows, ["class", "pair", "concurrence", "entanglement"])
        + "\n".join(diag_lines)
        + "\n"
    )
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify_expansion(args) -> int:
    cfg = RunConfig(
        fmt=args.format,
        samples=1,
        tolerances={"expansion": args.tolerance, "weight": args.weight_tolerance},
    )
    n = args.n
    exp_tol = cfg.tolerances["expansion"]
    w_tol = cfg.tolerances["weight"]
    checks = []
    all_ok = True
    for cls in ("ghz", "w"):
        for pair in all_pairs(n):
            wb = expansion_weights(n, pair, cls)
            p = flip_operator(n, pair, cls)
            recon = np.zeros((2**n, 2**n), dtype=complex)
            for w, v in zip(wb.weights, wb.vectors):
                recon += w * np.outer(v.amplitudes, v.amplitudes.conj())
            residual = float(np.max(np.abs(recon - p.matrix())))
            weight_defect = float(np.max(np.abs(np.abs(wb.weights) - 1.0)))
            pair_law = all(
                wb.weights[2 * k] == -wb.weights[2 * k + 1] for k in range(2 ** (n - 1))
            )
            entry = {
                "class": cls,
                "pair": list(pair),
                "operator": str(p),
                "max_residual": residual,
                "max_weight_defect": weight_defect,
                "pair_rule_holds": pair_law,
                "weights": "".join("+" if w > 0 else "-" for w in wb.weights),
            }
            ok = residual <= exp_tol and weight_defect <= w_tol and pair_law
            if cls == "ghz" and n == 3:
                odd = tuple(float(wb.weights[2 * k]) for k in range(4))
                entry["odd_weights"] = list(odd)
                entry["pattern_matches"] = odd == EXPECTED_GHZ3_PATTERNS[pair]
                entry["odd_weight_sum"] = float(sum(odd))
                ok = ok and entry["pattern_matches"] and entry["odd_weight_sum"] == 0.0
            entry["ok"] = ok
            all_ok = all_ok and ok
            checks.append(entry)
    payload = {
        "n_qubits": n,
        "tolerance": exp_tol,
        "weight_tolerance": w_tol,
        "checks": checks,
        "passed": all_ok,
    }
    if args.format == "json":
        _emit(_render_json(payload), None)
    else:
        rows = [
            [
                c["class"],
                f"({c['pair'][0]},{c['pair'][1]})",
                c["operator"],
                f"{c['max_residual']:.3e}",
                f"{c['max_weight_defect']:.3e}",
                c["weights"],
                "ok" if c["ok"] else "FAIL",
            ]
            for c in checks
        ]
        text = _render_table(
            rows, ["class", "pair", "operator", "residual", "weight defect", "weights", "status"]
        )
        text += f"passed={all_ok}\n"
        _emit(text, None)
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def cmd_crosscheck(args) -> int:
    cfg = RunConfig(
        fmt=args.format,
        seed=args.seed,
        samples=args.samples,
        tolerances={"route": args.tolerance},
    )
    n = args.n
    rng = np.random.default_rng(cfg.seed)
    route_tol = cfg.tolerances["route"]
    max_route = 0.0
    max_closed = 0.0
    max_perm = 0.0
    perms = list(itertools.permutations(range(1, n + 1)))
    for _ in range(cfg.samples):
        z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
        psi = PureState(n, z, normalize=True)
        rho = to_density(psi)
        pure_values = {}
        for cls in ("ghz", "w"):
            for pair in all_pairs(n):
                cp = concurrence_pure(psi, pair, cls)
                pure_values[(cls, pair)] = cp
                max_route = max(max_route, abs(concurrence_mixed(rho, pair, cls) - cp))
        if n == 2:
            a, b, c, d = psi.amplitudes
            max_closed = max(
                max_closed, abs(pure_values[("ghz", (1, 2))] - 2.0 * abs(a * d - b * c))
            )
        for perm in perms:
            shuffled = permute_qubits(psi, perm)
            for cls in ("ghz", "w"):
                for (i, j) in all_pairs(n):
                    mapped = tuple(sorted((perm[i - 1], perm[j - 1])))
                    delta = abs(
                        concurrence_pure(shuffled, mapped, cls) - pure_values[(cls, (i, j))]
                    )
                    max_perm = max(max_perm, delta)
    max_route, max_closed, max_perm = float(max_route), float(max_closed), float(max_perm)
    route_ok = max_route <= route_tol
    closed_ok = max_closed <= CLOSED_FORM_TOL
    perm_ok = max_perm <= PERMUTATION_TOL
    passed = route_ok and closed_ok and perm_ok
    payload = {
        "n_qubits": n,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "max_route_delta": max_route,
        "route_tolerance": route_tol,
        "route_ok": route_ok,
        "max_permutation_delta": max_perm,
        "permutation_tolerance": PERMUTATION_TOL,
        "permutation_ok": perm_ok,
        "passed": passed,
    }
    if n == 2:
        payload["max_closed_form_delta"] = max_closed
        payload["closed_form_tolerance"] = CLOSED_FORM_TOL
        payload["closed_form_ok"] = closed_ok
    if args.format == "json":
        _emit(_render_json(payload), None)
    else:
        rows = [[k, _fmt(v) if isinstance(v, float) else str(v)] for k, v in payload.items()]
        _emit(_render_table(rows, ["field", "value"]), None)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_probe_lu(args) -> int:
    cfg = RunConfig(fmt=args.format, seed=args.seed, samples=args.samples)
    state = load_state(args.state)
    n = state.n_qubits
    rng = np.random.default_rng(cfg.seed)
    classes = default_classes(state)
    base = measure_all(state, classes)
    samples: dict[str, dict] = {
        r.class_tag: {"components": {pair: [] for pair in all_pairs(n)}, "totals": []}
        for r in base.results
    }
    for _ in range(cfg.samples):
        us = [random_local_unitary(rng) for _ in range(n)]
        rotated = apply_local_unitaries(state, us)
        report = measure_all(rotated, classes)
        for result in report.results:
            bucket = samples[result.class_tag]
            for pair, value in result.concurrence.components.items():
                bucket["components"][pair].append(value)
            bucket["totals"].append(result.entanglement.total)
    payload = {
        "note": "non-asserting probe: statistics only, no tolerance is enforced",
        "source": args.state,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "classes": [],
    }
    for result in base.results:
        bucket = samples[result.class_tag]
        entry = {
            "class": result.class_tag,
            "baseline_total": result.entanglement.total,
            "total_min": float(np.min(bucket["totals"])),
            "total_max": float(np.max(bucket["totals"])),
            "total_mean": float(np.mean(bucket["totals"])),
            "pairs": [],
        }
        for pair, values in bucket["components"].items():
            arr = np.array(values)
            entry["pairs"].append(
                {
                    "i": pair[0],
                    "j": pair[1],
                    "baseline": result.concurrence.components[pair],
                    "min": float(arr.min()),
                    "max": float(arr.max()),
                    "mean": float(arr.mean()),
                }
            )
        payload["classes"].append(entry)
    if args.format == "json":
        _emit(_render_json(payload), None)
        return EXIT_OK
    lines = [
        "non-asserting probe: statistics only, no tolerance is enforced",
        f"source={args.state}  samples={cfg.samples}  seed={cfg.seed}",
    ]
    rows = []
    for entry in payload["classes"]:
        for p in entry["pairs"]:
            rows.append(
                [
                    entry["class"],
                    f"({p['i']},{p['j']})",
                    _fmt(p["baseline"]),
                    _fmt(p["min"]),
                    _fmt(p["max"]),
                    _fmt(p["mean"]),
                ]
            )
        rows.append(
            [
                entry["class"],
                "total",
                _fmt(entry["baseline_total"]),
                _fmt(entry["total_min"]),
                _fmt(entry["total_max"]),
                _fmt(entry["total_mean"]),
            ]
        )
    text = "\n".join(lines) + "\n" + _render_table(
        rows, ["class", "pair", "baseline", "min", "max", "mean"]
    )
    _emit(text, None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entvec",
        description="Pairwise concurrence and entanglement vectors for few-qubit states.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    mk = sub.add_parser("make-state", help="construct a state and write it as JSON")
    mk.add_argument(
        "kind",
        choices=["ghz", "w", "antiw", "bell", "product", "random-pure", "random-mixed"],
    )
    mk.add_argument("--n", type=int, default=3, help="qubit count (default 3)")
    mk.add_argument("--alpha", type=_parse_complex, help="cat-form coefficient of |0...0>")
    mk.add_argument("--beta", type=_parse_complex, help="cat-form coefficient of |1...1>")
    mk.add_argument("--coeffs", help="three comma-separated amplitudes for w/antiw")
    mk.add_argument("--which", type=int, default=1, help="Bell basis index 1..4")
    mk.add_argument("--factors", help="semicolon-separated 'a,b' pairs, one per qubit")
    mk.add_argument("--rank", type=int, help="rank for random-mixed (default full)")
    mk.add_argument("--seed", type=int, default=0, help="RNG seed for random kinds")
    mk.add_argument("--normalize", action="store_true", help="rescale input coefficients")
    mk.add_argument("--out", required=True, help="output state file path")
    mk.add_argument("--format", choices=["table", "json"], default="table")
    mk.set_defaults(func=cmd_make_state)

    ms = sub.add_parser("measure", help="measure concurrence/entanglement vectors")
    ms.add_argument("state", help="state file produced by make-state")
    ms.add_argument("--classes", help="comma-separated subset of ghz,w,whole")
    ms.add_argument(
        "--verify-routes",
        action="store_true",
        help="also run the eigenvalue route on pure inputs and report the delta",
    )
    ms.add_argument("--format", choices=["table", "json"], default="table")
    ms.add_argument("--out", help="write the report here instead of stdout")
    ms.set_defaults(func=cmd_measure)

    ve = sub.add_parser(
        "verify-expansion", help="check flip operators against their weighted-projector form"
    )
    ve.add_argument("--n", type=int, choices=[2, 3, 4], required=True)
    ve.add_argument("--tolerance", type=float, default=EXPANSION_TOL)
    ve.add_argument("--weight-tolerance", type=float, default=WEIGHT_TOL)
    ve.add_argument("--format", choices=["table", "json"], default="table")
    ve.set_defaults(func=cmd_verify_expansion)

    cc = sub.add_parser(
        "crosscheck", help="route equivalence and permutation covariance on random states"
    )
    cc.add_argument("--n", type=int, choices=[2, 3, 4], default=3)
    cc.add_argument("--samples", type=int, default=200)
    cc.add_argument("--seed", type=int, default=0)
    cc.add_argument("--tolerance", type=float, default=ROUTE_TOL)
    cc.add_argument("--format", choices=["table", "json"], default="table")
    cc.set_defaults(func=cmd_crosscheck)

    pl = sub.add_parser(
        "probe-lu", help="statistics under random local unitaries (non-asserting)"
    )
    pl.add_argument("state", help="state file to probe")
    pl.add_argument("--samples", type=int, default=100)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--format", choices=["table", "json"], default="table")
    pl.set_defaults(func=cmd_probe_lu)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoConvergence as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except BadDimension as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except EntvecError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
