"""Command-line front end: states, circuits, measures, sweeps, Wigner grids, checks.

State and circuit documents are JSON; sweeps and Wigner grids are CSV with
17 significant digits.  Mode indices in documents and flags are 0-based.
Exit codes: 0 success, 1 failed check suite, 2 usage error, 3 physicality
violation, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import measures as M
from . import ops, phasespace, states, suites
from .errors import InvalidArgument, InvalidState, NumericError

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_STATE, EXIT_NUMERIC = 0, 1, 2, 3, 4

MEASURES = ("purity", "renyi2", "renyi", "vn", "mutual", "epr", "e2", "j2", "d2", "residual", "ssa", "monogamy")
NATS = {"renyi2", "renyi", "vn", "mutual", "e2", "j2", "d2", "residual", "ssa", "monogamy"}

SWEEP_FAMILIES = {
    "tmss": {"r": 0.0},
    "thermal": {"nbar": 0.0},
    "squeezed": {"s": 0.0, "theta": 0.0},
    "standard": {"a": 1.0, "b": 1.0, "cp": 0.0, "cm": 0.0},
    "threemode": {"a1": 1.0, "a2": 1.0, "a3": 1.0},
}


# ---------------------------------------------------------------- I/O helpers


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidArgument(f"cannot read {path}: {exc}") from exc


def _read_json(path: str):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{path} is not valid JSON: {exc}") from exc


def _load_state(path: str) -> states.GaussianState:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise InvalidArgument("state document must be a JSON object")
    return states.GaussianState.from_dict(doc)


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    elif not args.quiet:
        sys.stdout.write(text)


def _dump(doc: dict) -> str:
    """One top-level key per line with compact values, so matrices stay readable."""
    body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in doc.items())
    return "{\n" + body + "\n}"


def _physicality_report(state: states.GaussianState) -> dict:
    nu = states.spectrum(state)
    return {
        "physical": states.is_physical(state),
        "symplectic_spectrum": nu.tolist(),
        "purity": states.purity(state),
        "pure": bool(np.all(np.abs(nu - 1.0) <= 1e-8)),
    }


# ---------------------------------------------------------------- state


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def run_state(args) -> int:
    conv = M.squeezing_from_db if args.db else float
    if args.vacuum is not None:
        st = states.vacuum(args.vacuum)
    elif args.coherent is not None:
        st = states.coherent(args.coherent)
    elif args.thermal is not None:
        st = states.thermal(args.thermal)
    elif args.tmss is not None:
        st = states.two_mode_squeezed(conv(args.tmss))
    elif args.threemode is not None:
        st = states.three_mode_pure(*args.threemode)
    else:
        alpha, s, theta = args.squeezed
        st = states.squeezed(_complex(alpha), conv(float(s)), float(theta))
    doc = st.to_dict()
    if args.check:
        doc["check"] = _physicality_report(st)
    _emit(args, _dump(doc))
    return EXIT_OK


# ---------------------------------------------------------------- circuit


def _seed_from_doc(doc: dict) -> ops.MeasurementSeed:
    if not isinstance(doc, dict) or "tag" not in doc:
        raise InvalidArgument("measurement seed needs a 'tag'")
    return ops.seed(
        doc["tag"],
        lam=doc.get("lambda"),
        phi=float(doc.get("phi", 0.0)),
        quadrature=doc.get("quadrature", "q"),
        gamma=doc.get("gamma"),
    )


def run_circuit_document(state: states.GaussianState, circuit) -> states.GaussianState:
    """Apply a circuit document (list of steps) to a state, left to right.

    Gate steps are {"gate", "targets", "params"}; a final step
    {"measure": {"modes", "seed"}} returns the conditional state of the
    other modes.
    """
    steps = circuit.get("steps") if isinstance(circuit, dict) else circuit
    if not isinstance(steps, list):
        raise InvalidArgument("circuit must be a list of steps or an object with a 'steps' list")
    for pos, step in enumerate(steps):
        if not isinstance(step, dict):
            raise InvalidArgument(f"step {pos} is not an object")
        if "measure" in step:
            if pos != len(steps) - 1:
                raise InvalidArgument("a measurement must be the last step of a circuit")
            meas = step["measure"]
            modes = meas.get("modes")
            if not isinstance(modes, list):
                raise InvalidArgument(f"step {pos}: measurement needs a 'modes' list")
            return ops.condition(state, modes, _seed_from_doc(meas.get("seed", {})))
        kind = step.get("gate")
        targets = step.get("targets")
        params = step.get("params", {})
        if not isinstance(targets, list) or not isinstance(params, dict):
            raise InvalidArgument(f"step {pos}: gate steps need a 'targets' list and a 'params' object")
        if kind == "displace":
            delta = np.zeros(2 * state.n_modes)
            local = np.asarray(params.get("delta", []), dtype=float)
            idx = states.mode_indices(states._check_modes(targets, state.n_modes))
            if local.shape != idx.shape:
                raise InvalidArgument(f"step {pos}: displace needs 'delta' of length {idx.size}")
            delta[idx] = local
            state = ops.displace(state, delta)
        else:
            state = ops.apply_gate(state, kind, targets, **params)
    return state


def run_circuit(args) -> int:
    state = _load_state(args.state)
    result = run_circuit_document(state, _read_json(args.circuit))
    if not states.is_physical(result):
        raise InvalidState("circuit produced an unphysical state")
    _emit(args, _dump(result.to_dict()))
    return EXIT_OK


# ---------------------------------------------------------------- measure


def _modes(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InvalidArgument(f"mode list must be comma-separated integers, got {text!r}") from exc


def _groups(text: str) -> list[list[int]]:
    return [_modes(part) for part in text.split("|")]


def _require_modes(state: states.GaussianState, n: int, name: str) -> None:
    if state.n_modes != n:
        raise InvalidArgument(f"measure {name!r} needs a {n}-mode state, got {state.n_modes} modes")


def evaluate(
    state: states.GaussianState,
    name: str,
    alpha: float | None = None,
    direction: str = "A|B",
    focus: int = 0,
    modes_a: Sequence[int] | None = None,
    modes_b: Sequence[int] | None = None,
    groups: Sequence[Sequence[int]] | None = None,
) -> dict:
    """Evaluate a named measure and return its report document."""
    optimizer, branch, extra = {}, None, {}
    if name in ("purity", "renyi2", "renyi", "vn") and modes_a:
        state = states.partial_trace(state, modes_a)
        extra["modes"] = list(modes_a)
    if name == "purity":
        value = states.purity(state)
    elif name == "renyi2":
        value = M.renyi2_entropy(state)
    elif name == "renyi":
        if alpha is None:
            raise InvalidArgument("measure 'renyi' needs --alpha")
        value = M.renyi_entropy(state, alpha)
        extra["alpha"] = alpha
    elif name == "vn":
        value = M.von_neumann_entropy(state)
    elif name == "mutual":
        value = M.mutual_information_renyi2(state, modes_a or [0], modes_b)
    elif name == "epr":
        value = M.epr_parameter(state, modes_a or (0, 1))
    elif name == "e2":
        if state.n_modes == 2:
            res = M.entanglement_E2_two_mode(state)
            value, optimizer, branch = res.value, res.optimizer, res.branch
        else:
            value, branch = M.entanglement_E2_pure(state, modes_a or [0]), "pure"
    elif name in ("j2", "d2"):
        _require_modes(state, 2, name)
        fn = M.classical_correlations_J2 if name == "j2" else M.discord_D2
        res = fn(state, direction)
        value, optimizer, branch = res.value, res.optimizer, res.branch
        extra["direction"] = direction
    elif name == "residual":
        _require_modes(state, 3, name)
        if not states.is_physical(state) or abs(np.linalg.det(state.sigma) - 1) > M.PURE_TOL:
            raise InvalidState("residual tripartite entanglement needs a pure three-mode state")
        value = M.residual_tripartite_E2(state, focus)
        extra["focus"] = focus
    elif name == "ssa":
        if groups is None:
            _require_modes(state, 3, name)
            groups = suites.cyclic_groupings(3)
        else:
            groups = [groups]
        vals = [M.check_strong_subadditivity(state, g) for g in groups]
        value = min(vals)
        extra["groupings"] = [[list(p) for p in g] for g in groups]
        extra["values"] = vals
    elif name == "monogamy":
        value = M.check_monogamy(state, focus)
        extra["focus"] = focus
    else:
        raise InvalidArgument(f"unknown measure {name!r}; expected one of {MEASURES}")
    doc = {"measure": name, "value": float(value)}
    if name in NATS:
        doc["value_nats"] = float(value)
        doc["value_bits"] = float(value) / M.LN2
    doc["optimizer"] = {k: float(v) for k, v in optimizer.items()}
    doc["branch"] = branch
    doc.update(extra)
    return doc


def run_measure(args) -> int:
    state = _load_state(args.state)
    name = next(m for m in MEASURES if getattr(args, f"m_{m}"))
    report = evaluate(
        state,
        name,
        alpha=args.alpha,
        direction=args.direction,
        focus=args.focus,
        modes_a=_modes(args.modes_a),
        modes_b=_modes(args.modes_b),
        groups=_groups(args.groups) if args.groups else None,
    )
    _emit(args, _dump(report))
    return EXIT_OK


# ---------------------------------------------------------------- sweep


def _family_state(family: str, p: dict) -> states.GaussianState:
    if family == "tmss":
        return states.two_mode_squeezed(p["r"])
    if family == "thermal":
        return states.thermal(p["nbar"])
    if family == "squeezed":
        return states.squeezed(0.0, p["s"], p["theta"])
    if family == "standard":
        st = states.TwoModeStandardForm(p["a"], p["b"], p["cp"], p["cm"]).state()
        if not states.is_physical(st):
            raise InvalidState(f"standard form {p} is not physical")
        return st
    return states.three_mode_pure(p["a1"], p["a2"], p["a3"])


def _parse_measure_spec(spec: str) -> dict:
    name, _, arg = spec.partition(":")
    if name not in MEASURES or name in ("ssa", "monogamy"):
        raise InvalidArgument(f"measure {name!r} is not available in sweeps")
    out = {"name": name}
    if name == "renyi":
        if not arg:
            raise InvalidArgument("sweep measure 'renyi' needs an order, e.g. renyi:2")
        out["alpha"] = float(arg)
    elif name in ("j2", "d2") and arg:
        out["direction"] = arg
    elif name == "residual" and arg:
        out["focus"] = int(arg)
    elif arg:
        raise InvalidArgument(f"measure {name!r} takes no argument")
    return out


def _axis(name: str, start: float, stop: float, steps: int) -> tuple[str, np.ndarray]:
    if steps < 2:
        raise InvalidArgument(f"sweep needs at least 2 steps, got {steps}")
    if not start < stop:
        raise InvalidArgument(f"sweep start {start} must be below stop {stop}")
    return name, np.linspace(start, stop, steps)


def run_sweep(args) -> int:
    base = dict(SWEEP_FAMILIES[args.family])
    for item in args.set or []:
        key, _, val = item.partition("=")
        if key not in base:
            raise InvalidArgument(f"family {args.family!r} has no parameter {key!r}; known: {sorted(base)}")
        base[key] = float(val)
    axes = [_axis(args.param, args.start, args.stop, args.steps)]
    if args.param2:
        axes.append(_axis(args.param2, args.start2, args.stop2, args.steps2))
    for name, _ in axes:
        if name not in base:
            raise InvalidArgument(f"family {args.family!r} has no parameter {name!r}; known: {sorted(base)}")
    specs = [_parse_measure_spec(m) for m in args.measure]
    lines = [",".join([name for name, _ in axes] + args.measure)]
    grids = np.meshgrid(*[vals for _, vals in axes], indexing="ij")
    for point in zip(*[g.ravel() for g in grids]):
        params = dict(base)
        params.update({name: float(v) for (name, _), v in zip(axes, point)})
        try:
            st = _family_state(args.family, params)
            row = [evaluate(st, **{"name": s["name"], **{k: v for k, v in s.items() if k != "name"}})["value"] for s in specs]
        except (InvalidArgument, InvalidState, NumericError) as exc:
            if not args.skip_invalid:
                raise type(exc)(f"sweep step {params}: {exc}") from exc
            row = [float("nan")] * len(specs)
        # adding 0.0 turns negative zero into zero
        lines.append(",".join(f"{v + 0.0:.17g}" for v in list(point) + row))
    _emit(args, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------- wigner


def run_wigner(args) -> int:
    state = _load_state(args.state)
    grid = phasespace.Grid2D.around(state, args.mode, args.points, args.width)
    if args.q_range or args.p_range:
        grid = phasespace.Grid2D(
            args.mode,
            tuple(args.q_range) if args.q_range else grid.q_range,
            tuple(args.p_range) if args.p_range else grid.p_range,
            (args.points, args.points),
        )
    _emit(args, phasespace.grid_csv(state, grid))
    return EXIT_OK


# ---------------------------------------------------------------- check


def run_check(args) -> int:
    result = suites.run_suite(args.suite, args.draws, args.seed)
    lines = [f"seed: {args.seed}", result.summary()]
    if result.detail:
        lines.append(f"detail: {json.dumps(result.detail, sort_keys=True)}")
    if not result.passed:
        lines.append("counterexample:")
        lines.append(_dump(result.counterexample.to_dict()))
    _emit(args, "\n".join(lines))
    return EXIT_OK if result.passed else EXIT_CHECK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    out = argparse.ArgumentParser(add_help=False)
    group = out.add_mutually_exclusive_group()
    group.add_argument("--out", help="write output to this path instead of stdout")
    group.add_argument("--quiet", action="store_true", help="suppress the report on stdout")

    parser = argparse.ArgumentParser(prog="gaussiancv", description="Gaussian continuous-variable state toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", parents=[out], help="emit a state document")
    ctor = p.add_mutually_exclusive_group(required=True)
    ctor.add_argument("--vacuum", type=int, metavar="N")
    ctor.add_argument("--coherent", type=_complex, nargs="+", metavar="ALPHA")
    ctor.add_argument("--thermal", type=float, nargs="+", metavar="NBAR")
    ctor.add_argument("--tmss", type=float, metavar="R")
    ctor.add_argument("--threemode", type=float, nargs=3, metavar=("A1", "A2", "A3"))
    ctor.add_argument("--squeezed", nargs=3, metavar=("ALPHA", "S", "THETA"))
    p.add_argument("--db", action="store_true", help="read squeezing arguments in decibels")
    p.add_argument("--check", action="store_true", help="add a physicality report")
    p.set_defaults(func=run_state)

    p = sub.add_parser("circuit", parents=[out], help="apply a circuit document to a state")
    p.add_argument("state", help="state JSON file, '-' for stdin")
    p.add_argument("circuit", help="circuit JSON file")
    p.set_defaults(func=run_circuit)

    p = sub.add_parser("measure", parents=[out], help="evaluate a measure on a state")
    p.add_argument("state", help="state JSON file, '-' for stdin")
    which = p.add_mutually_exclusive_group(required=True)
    for m in MEASURES:
        which.add_argument(f"--{m}", dest=f"m_{m}", action="store_true")
    p.add_argument("--alpha", type=float, help="Renyi order for --renyi")
    p.add_argument("--direction", default="A|B", choices=["A|B", "B|A"], help="measured side for --j2/--d2")
    p.add_argument("--focus", type=int, default=0, help="focus mode for --residual/--monogamy")
    p.add_argument("--modes-a", help="comma-separated modes of party A (entropies: reduced state)")
    p.add_argument("--modes-b", help="comma-separated modes of party B")
    p.add_argument("--groups", help="SSA grouping as 'A|B|C', e.g. '0|1,2|3'")
    p.set_defaults(func=run_measure)

    p = sub.add_parser("sweep", parents=[out], help="CSV of measures along a parameter sweep")
    p.add_argument("--family", required=True, choices=sorted(SWEEP_FAMILIES))
    p.add_argument("--param", required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--param2", help="optional second axis for a grid sweep")
    p.add_argument("--start2", type=float)
    p.add_argument("--stop2", type=float)
    p.add_argument("--steps2", type=int)
    p.add_argument("--set", action="append", metavar="NAME=VALUE", help="fixed family parameter")
    p.add_argument("--measure", action="append", required=True, help="e.g. epr, renyi:2, j2:B|A, residual:1")
    p.add_argument("--skip-invalid", action="store_true", help="write nan for points outside the valid region")
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("wigner", parents=[out], help="CSV of the Wigner function on one mode's plane")
    p.add_argument("state", help="state JSON file, '-' for stdin")
    p.add_argument("--mode", type=int, default=0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--width", type=float, default=6.0, help="half-width in standard deviations")
    p.add_argument("--q-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--p-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.set_defaults(func=run_wigner)

    p = sub.add_parser("check", parents=[out], help="run a randomized property suite")
    p.add_argument("suite", choices=sorted(suites.SUITES))
    p.add_argument("--draws", type=int)
    p.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    p.set_defaults(func=run_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.param2 and None in (args.start2, args.stop2, args.steps2):
        parser.error("--param2 needs --start2, --stop2 and --steps2")
    try:
        return args.func(args)
    except InvalidState as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATE
    except InvalidArgument as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
