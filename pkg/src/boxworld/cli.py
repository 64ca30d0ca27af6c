"""Command line front end.

    boxworld spec -s system.json
    boxworld vertices -s system.json -o csv
    boxworld group -s system.json --search
    boxworld verify theorem1 -s system.json
    boxworld verify theorem2 -s system.json
    boxworld chsh -i state.json
    boxworld check -s system.json -i table_or_state.json

Exit codes: 0 success (including an expected exception to the theorem1 check on
hybrid systems), 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys as _sys
from dataclasses import dataclass, field
from pathlib import Path

from boxworld import bell
from boxworld.exact import format_rational
from boxworld.polytope import DEFAULT_BOUND_DIM, DimensionGuardError, brute_force_vertices, enumerate_vertices
from boxworld.search import (
    DEFAULT_BOUND_EFFECTS,
    SearchBoundError,
    search_reversible_group,
    verify_theorem1,
    verify_theorem2,
)
from boxworld.serialization import (
    SpecError,
    dumps,
    load_system_spec,
    map_to_json,
    state_from_json,
    state_to_json,
    table_from_json,
    vrep_to_csv,
)
from boxworld.states import (
    TableError,
    is_nonsignalling,
    is_pure_product,
    is_state,
    state_from_table,
)
from boxworld.theory import SystemSpec, enumerate_extremal_effects, gram_table, label_str
from boxworld.transforms import effect_action, generate_group, trivial_generators, trivial_group_order

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

TWO_GBITS = SystemSpec.of([2, 2], [2, 2])


@dataclass
class RunConfig:
    command: str
    system: Path | None = None
    input: Path | None = None
    output_format: str = "json"
    bound_dim: int = DEFAULT_BOUND_DIM
    bound_effects: int = DEFAULT_BOUND_EFFECTS
    oracle: bool = False
    quiet: bool = False
    theorem: str | None = None
    group_mode: str = "search"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.bound_dim < 1 or self.bound_effects < 1:
            raise ValueError("bounds must be positive")


class UsageError(Exception):
    pass


def _system(cfg: RunConfig) -> SystemSpec:
    if cfg.system is None:
        raise UsageError("this command needs -s/--system")
    return load_system_spec(cfg.system)


def _fmt(q) -> str:
    return format_rational(q)


# -- commands ----------------------------------------------------------------


def cmd_spec(cfg: RunConfig) -> tuple[int, dict]:
    sys = _system(cfg)
    return EXIT_OK, {
        "command": "spec",
        "status": "ok",
        "system": sys.to_json(),
        "N": sys.N,
        "local_dims": list(sys.local_dims),
        "dim": sys.dim,
        "extremal_effects": sys.n_effects,
        "homogeneous": sys.is_homogeneous,
        "basis": [
            "⊗".join("1" if l is None else f"X{l[0]}({l[1]})" for l in lab)
            for lab in sys.basis_labels()
        ],
        "gram": [
            [[_fmt(x) for x in row] for row in gram_table(site)]
            for site in sys.sites
        ],
    }


def _vrep_report(V) -> dict:
    return {
        "count": len(V),
        "pure_product": V.n_pure_product,
        "non_local": len(V) - V.n_pure_product,
        "vertices": [
            {"index": i, "class": "pure-product" if p else "non-local", "values": state_to_json(v)["values"]}
            for i, (v, p) in enumerate(zip(V.vertices, V.pure_product))
        ],
    }


def cmd_vertices(cfg: RunConfig) -> tuple[int, dict | str]:
    sys = _system(cfg)
    V = enumerate_vertices(sys, bound_dim=cfg.bound_dim)
    status = "ok"
    report = {"command": "vertices", "system": sys.to_json(), **_vrep_report(V)}
    if cfg.oracle:
        B = brute_force_vertices(sys, bound_dim=cfg.bound_dim)
        agree = B.vertex_set() == V.vertex_set()
        report["oracle"] = {"status": "PASS" if agree else "FAIL", "count": len(B)}
        status = "ok" if agree else "FAIL"
    report["status"] = status
    code = EXIT_OK if status == "ok" else EXIT_FAIL
    if cfg.output_format == "csv":
        return code, vrep_to_csv(V)
    return code, report


def cmd_group(cfg: RunConfig) -> tuple[int, dict]:
    sys = _system(cfg)
    if cfg.group_mode == "generate":
        G = generate_group(sys, trivial_generators(sys))
    else:
        G = search_reversible_group(sys, bound_effects=cfg.bound_effects)
    labels = enumerate_extremal_effects(sys)
    index = {A: i for i, A in enumerate(labels)}
    elements = []
    for T in G:
        action = effect_action(sys, T)
        elements.append({
            "effect_images": [index[action[A]] for A in labels],
            **map_to_json(T),
        })
    report = {
        "command": "group",
        "status": "ok",
        "system": sys.to_json(),
        "provenance": G.provenance,
        "order": len(G),
        "predicted_trivial_order": trivial_group_order(sys),
        "effect_labels": [label_str(A) for A in labels],
        "stats": G.stats,
        "elements": elements,
    }
    code = EXIT_OK
    if cfg.oracle and cfg.group_mode == "search":
        if sys.n_effects <= 8:
            other = search_reversible_group(sys, bound_effects=cfg.bound_effects, prune=False)
            ok = other.same_elements(G)
            report["oracle"] = {"status": "PASS" if ok else "FAIL", "unpruned_order": len(other)}
        else:
            ok = True
            report["oracle"] = {"status": "skipped", "reason": "more than 8 extremal effects"}
        if not ok:
            report["status"] = "FAIL"
            code = EXIT_FAIL
    return code, report


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    sys = _system(cfg)
    if cfg.theorem == "theorem1":
        report = verify_theorem1(sys, bound_effects=cfg.bound_effects, oracle=cfg.oracle)
    elif cfg.theorem == "theorem2":
        if cfg.group_mode == "generate":
            G = generate_group(sys, trivial_generators(sys))
        else:
            G = search_reversible_group(sys, bound_effects=cfg.bound_effects)
        V = enumerate_vertices(sys, bound_dim=cfg.bound_dim)
        report = verify_theorem2(sys, G, V)
        if cfg.oracle:
            B = brute_force_vertices(sys, bound_dim=cfg.bound_dim)
            agree = B.vertex_set() == V.vertex_set()
            report["oracle"] = {"status": "PASS" if agree else "FAIL", "count": len(B)}
            if not agree:
                report["status"] = "FAIL"
    else:
        raise UsageError(f"unknown theorem {cfg.theorem!r}; use theorem1 or theorem2")
    report = {"command": "verify", **report}
    if report.get("oracle", {}).get("status") == "FAIL":
        report["status"] = "FAIL"
    return (EXIT_FAIL if report["status"] == "FAIL" else EXIT_OK), report


def cmd_chsh(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.system is not None and _system(cfg) != TWO_GBITS:
        raise UsageError("chsh needs a two-gbit system")
    if cfg.input is None:
        raise UsageError("chsh needs -i/--input with a state file")
    s = state_from_json(Path(cfg.input).read_text())
    chk = is_state(TWO_GBITS, s)
    if not chk:
        return EXIT_FAIL, {"command": "chsh", "status": "FAIL", "reason": f"not a valid state: {_witness(chk.witness)}"}
    return EXIT_OK, {
        "command": "chsh",
        "status": "ok",
        "chsh": _fmt(bell.chsh_value(s)),
        "correlators": {
            f"{a}{b}": _fmt(bell.correlator(s, i, j))
            for i, a in enumerate("XZ")
            for j, b in enumerate("XZ")
        },
    }


def _witness(w):
    if w is None:
        return None
    if isinstance(w, tuple) and len(w) == 2 and isinstance(w[0], tuple) and w[0] and isinstance(w[0][0], tuple):
        return {"effect": label_str(w[0]), "value": _fmt(w[1])}
    if isinstance(w, tuple) and len(w) == 2 and isinstance(w[0], str):
        return {"reason": w[0], "value": str(w[1])}
    if isinstance(w, tuple):
        return [list(x) if isinstance(x, tuple) else x for x in w]
    return str(w)


def cmd_check(cfg: RunConfig) -> tuple[int, dict]:
    sys = _system(cfg)
    if cfg.input is None:
        raise UsageError("check needs -i/--input with a table or state file")
    data = json.loads(Path(cfg.input).read_text())
    report: dict = {"command": "check", "system": sys.to_json()}
    if isinstance(data, list):
        T = table_from_json(data)
        report["kind"] = "table"
        try:
            ns = is_nonsignalling(sys, T)
        except TableError as exc:
            raise SpecError(str(exc)) from None
        report["nonsignalling"] = ns.ok
        report["witness"] = None if ns.ok else {
            "site": ns.witness[0],
            "other_settings": list(ns.witness[1]),
            "other_outcomes": list(ns.witness[2]),
        }
        if ns.ok:
            try:
                s = state_from_table(sys, T)
            except TableError as exc:
                report.update(valid=False, reason=str(exc))
            else:
                report.update(valid=True, state=state_to_json(s), pure_product=is_pure_product(sys, s))
        else:
            report["valid"] = False
    else:
        s = state_from_json(data)
        report["kind"] = "state"
        chk = is_state(sys, s)
        report["valid"] = chk.ok
        report["witness"] = _witness(chk.witness)
        if chk.ok:
            report["pure_product"] = is_pure_product(sys, s)
    report["status"] = "ok" if report["valid"] else "FAIL"
    return (EXIT_OK if report["valid"] else EXIT_FAIL), report


COMMANDS = {
    "spec": cmd_spec,
    "vertices": cmd_vertices,
    "group": cmd_group,
    "verify": cmd_verify,
    "chsh": cmd_chsh,
    "check": cmd_check,
}


# -- output ------------------------------------------------------------------


def _text(report: dict) -> str:
    lines = []
    for k in sorted(report):
        v = report[k]
        if isinstance(v, (list, dict)):
            v = json.dumps(v, sort_keys=True, ensure_ascii=False)
            if len(v) > 120:
                v = v[:117] + "..."
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def render(report, fmt: str) -> str:
    if isinstance(report, str):
        return report
    if fmt == "text":
        return _text(report)
    if fmt == "csv":
        # only vertex lists have a tabular form; everything else falls back to JSON
        return dumps(report)
    return dumps(report)


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns (exit code, rendered report)."""
    try:
        code, report = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        code, report = EXIT_USAGE, {"command": cfg.command, "status": "error", "error": "usage", "message": str(exc)}
    except SpecError as exc:
        code, report = EXIT_USAGE, {"command": cfg.command, "status": "error", **exc.to_json()}
    except (DimensionGuardError, SearchBoundError) as exc:
        code, report = EXIT_USAGE, {"command": cfg.command, "status": "error", "error": "bound", "message": str(exc)}
    except (OSError, ValueError) as exc:
        code, report = EXIT_USAGE, {"command": cfg.command, "status": "error", "error": type(exc).__name__, "message": str(exc)}
    return code, render(report, cfg.output_format)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-s", "--system", type=Path, help="system spec JSON")
    common.add_argument("-i", "--input", type=Path, help="state, table or map file")
    common.add_argument("-o", "--output-format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--bound-dim", type=int, default=DEFAULT_BOUND_DIM, help="max affine dimension for vertex enumeration")
    common.add_argument("--bound-effects", type=int, default=DEFAULT_BOUND_EFFECTS, help="max extremal effects for group search")
    common.add_argument("--oracle", action="store_true", help="cross-check against brute-force oracles")
    common.add_argument("--quiet", action="store_true", help="no report on stdout; exit code only")

    p = argparse.ArgumentParser(prog="boxworld", description="Exact boxworld state spaces and reversible dynamics.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("spec", parents=[common], help="dimensions, effect counts and Gram tables")
    sub.add_parser("vertices", parents=[common], help="vertices of the state polytope")
    g = sub.add_parser("group", parents=[common], help="reversible group, generated or searched")
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--generate", dest="group_mode", action="store_const", const="generate")
    mode.add_argument("--search", dest="group_mode", action="store_const", const="search")
    v = sub.add_parser("verify", parents=[common], help="verify theorem1 or theorem2")
    v.add_argument("theorem", choices=["theorem1", "theorem2"])
    v.add_argument("--group", dest="group_mode", choices=["search", "generate"], default="search",
                   help="group used by theorem2")
    sub.add_parser("chsh", parents=[common], help="CHSH value of a two-gbit state")
    sub.add_parser("check", parents=[common], help="validate a probability table or state")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(
            command=ns.command,
            system=ns.system,
            input=ns.input,
            output_format=ns.output_format,
            bound_dim=ns.bound_dim,
            bound_effects=ns.bound_effects,
            oracle=ns.oracle,
            quiet=ns.quiet,
            theorem=getattr(ns, "theorem", None),
            group_mode=getattr(ns, "group_mode", None) or "search",
        )
    except ValueError as exc:
        print(dumps({"command": ns.command, "status": "error", "error": "usage", "message": str(exc)}), end="")
        return EXIT_USAGE
    code, out = run(cfg)
    if not cfg.quiet:
        _sys.stdout.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
