"""Command-line interface: window-relative reports for every computation.

All subcommands emit a single JSON report with a versioned "schema"
field; every asserted invariant carries the window it was computed in.
Reports are deterministic for a fixed configuration and seed (timing is
deliberately excluded from the output). Exit codes: 0 success, 2 input
error, 3 window exhaustion, 4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Any, Optional

from . import __version__
from .catcore import classifying_space_h1, full_subcategory, nerve
from .errors import InputError, InternalCheckError, WindowError
from .gammacat import BasedSet, b_gamma, gamma_circle, gamma_of_monoid, hk_category
from .gl1 import GradedUnitGroup, gl1_report
from .jmonoid import (
    TabulatedMonoid,
    degree_homomorphism,
    free_monoid,
    grouplike_check,
    pi0_hocolim,
    terminal_monoid,
    units_submonoid,
)
from .permcat import (
    JObject,
    degree,
    j_compose_payload,
    j_homset,
    j_homset_size,
    permutative_ops,
    truncate,
)
from .topo import abelianize, components, homology, pi1_presentation

__all__ = ["RunConfig", "run", "main", "REPORT_SCHEMA"]

REPORT_SCHEMA = "jgamma/report/v1"


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved invocation: subcommand plus validated options."""

    subcommand: str
    options: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output: Optional[str] = None

    def __post_init__(self):
        for key in ("bound", "max", "s", "dim", "degree", "levels"):
            v = self.options.get(key)
            if v is not None and v < 0:
                raise InputError(f"--{key} must be nonnegative, got {v}")
        for key in ("bound", "max"):
            v = self.options.get(key)
            if v is not None and v == 0:
                raise InputError(f"--{key} must be positive")
        deg = self.options.get("degree")
        dim = self.options.get("dim")
        if deg is not None and dim is not None and dim < deg + 1:
            raise InputError(
                f"homology in degree {deg} needs simplices up to dimension "
                f"{deg + 1}; --dim {dim} is too small"
            )


# ---------------------------------------------------------------------------
# shared helpers


def _parse_obj(cat: str, text: str):
    if cat == "j":
        parts = text.split(",")
        if len(parts) != 2:
            raise InputError(f"J objects are m1,m2 pairs; got {text!r}")
        try:
            return JObject(int(parts[0]), int(parts[1]))
        except ValueError as exc:
            raise InputError(f"bad object {text!r}: {exc}") from exc
    try:
        return int(text)
    except ValueError as exc:
        raise InputError(f"bad object {text!r}: {exc}") from exc


def _obj_json(o):
    return [o.m1, o.m2] if isinstance(o, JObject) else o


def _cat_name(cat: str) -> str:
    return {"i": "I", "j": "J", "sigma": "Sigma"}[cat]


def _component_objects(cat, C, selector: str) -> list[int]:
    """Object indices of the component named by 'deg=K' or 'obj=K'."""
    kind, _, value = selector.partition("=")
    if not value:
        raise InputError("component selector must look like deg=0 or obj=2")
    if kind == "deg":
        if cat != "j":
            raise InputError("deg= components only make sense for the category J")
        d = int(value)
        out = [i for i, o in enumerate(C.objects) if degree(o) == d]
        if not out:
            raise WindowError(f"no object of degree {d} in this window")
        return out
    if kind == "obj":
        o = _parse_obj(cat, value)
        if o not in C.objects:
            raise WindowError(f"object {value} not in this window")
        seed = C.objects.index(o)
        comp = {seed}
        adj: dict[int, set[int]] = {}
        for i in range(C.n_morphisms):
            adj.setdefault(C.dom(i), set()).add(C.cod(i))
            adj.setdefault(C.cod(i), set()).add(C.dom(i))
        frontier = [seed]
        while frontier:
            nxt = []
            for x in frontier:
                for y in adj.get(x, ()):
                    if y not in comp:
                        comp.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(comp)
    raise InputError(f"unknown component selector kind {kind!r}")


def _monoid_from_options(opts: dict[str, Any]) -> TabulatedMonoid:
    bound = opts["bound"]
    sources = [k for k in ("generator", "terminal", "monoid") if opts.get(k)]
    if len(sources) != 1:
        raise InputError(
            "exactly one of --generator, --terminal, --monoid must be given"
        )
    if opts.get("generator"):
        gen = _parse_obj("j", opts["generator"])
        return free_monoid(gen, bound)
    if opts.get("terminal"):
        return terminal_monoid("J", bound)
    with open(opts["monoid"], "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {opts['monoid']}: {exc}") from exc
    cat = str(doc.get("category", "J")).lower()
    if cat not in ("i", "j", "sigma"):
        raise InputError(f"unknown category {doc.get('category')!r} in monoid file")
    ops = permutative_ops(_cat_name(cat), int(doc.get("bound", bound)))
    return TabulatedMonoid.from_json(text, ops)


def _monoid_window(opts: dict[str, Any], A: TabulatedMonoid) -> dict:
    win = {"category": A.ops.category, "bound": A.ops.bound}
    if opts.get("generator"):
        win["generator"] = opts["generator"]
    if opts.get("terminal"):
        win["monoid"] = "terminal"
    if opts.get("monoid"):
        win["monoid_file"] = os.path.basename(opts["monoid"])
    return win


def _emit(report: dict, config: RunConfig) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if config.output:
        directory = os.path.dirname(os.path.abspath(config.output))
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".jgamma-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, config.output)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        sys.stdout.write(text)


def _base_report(config: RunConfig) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "command": config.subcommand,
        "config": {**config.options, "seed": config.seed},
        "warnings": [],
    }


# ---------------------------------------------------------------------------
# subcommand implementations


def _run_jcat(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    cat = opts["cat"]
    if opts["action"] == "homs":
        src = _parse_obj(cat, opts["src"])
        dst = _parse_obj(cat, opts["dst"])
        if cat == "j":
            homs = [list(map(list, f.payload())) for f in j_homset(src, dst)]
            count_formula = j_homset_size(src, dst)
        else:
            from .combinat import all_bijections, all_injections

            if cat == "sigma":
                homs = [
                    list(f.values)
                    for f in (all_bijections(src) if src == dst else [])
                ]
                count_formula = math.factorial(src) if src == dst else 0
            else:
                homs = [list(f.values) for f in all_injections(src, dst)]
                count_formula = len(homs)
        report["window"] = {
            "category": _cat_name(cat),
            "src": _obj_json(src),
            "dst": _obj_json(dst),
        }
        report["count"] = len(homs)
        report["count_formula"] = count_formula
        if len(homs) != count_formula:
            raise InternalCheckError("hom-set count disagrees with the formula")
        report["morphisms"] = homs
        return report
    # action == "compose"
    if cat != "j":
        raise InputError("jcat compose currently handles the category J")
    src = _parse_obj(cat, opts["src"])
    mid = _parse_obj(cat, opts["mid"])
    dst = _parse_obj(cat, opts["dst"])
    def parse_payload(text: str) -> tuple:
        try:
            parts = json.loads(text)
            if len(parts) != 3:
                raise ValueError("payload must have three parts")
            return tuple(tuple(int(v) for v in part) for part in parts)
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise InputError(
                f"morphism payloads must be JSON triples of integer lists: {exc}"
            ) from exc

    fp = parse_payload(opts["first"])
    gp = parse_payload(opts["second"])
    if fp not in {f.payload() for f in j_homset(src, mid)}:
        raise InputError("--first is not a morphism src -> mid")
    if gp not in {f.payload() for f in j_homset(mid, dst)}:
        raise InputError("--second is not a morphism mid -> dst")
    comp = j_compose_payload(
        (src.m1, src.m2), (mid.m1, mid.m2), (dst.m1, dst.m2), gp, fp
    )
    report["window"] = {
        "category": "J",
        "src": _obj_json(src),
        "mid": _obj_json(mid),
        "dst": _obj_json(dst),
    }
    report["composite"] = list(map(list, comp))
    return report


def _run_nerve(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    C = truncate(_cat_name(opts["cat"]), opts["max"])
    X = nerve(C, opts["dim"])
    report["window"] = {"category": _cat_name(opts["cat"]), "max": opts["max"]}
    report["objects"] = C.n_objects
    report["morphisms"] = C.n_morphisms
    report["cells"] = {str(m): X.n_cells(m) for m in range(opts["dim"] + 1)}
    report["components"] = len(components(X))
    return report


def _run_homology(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    C = truncate(_cat_name(opts["cat"]), opts["max"])
    comp = _component_objects(opts["cat"], C, opts["component"])
    report["window"] = {
        "category": _cat_name(opts["cat"]),
        "max": opts["max"],
        "component": opts["component"],
        "component_objects": len(comp),
    }
    deg = opts["degree"]
    if deg == 1:
        inv = classifying_space_h1(C, component_of=comp[0])
    else:
        sub = full_subcategory(C, comp)
        dim = opts.get("dim") or deg + 1
        inv = homology(nerve(sub, dim), deg)
    report["degree"] = deg
    report["homology"] = str(inv)
    report["rank"] = inv.rank
    report["torsion"] = list(inv.torsion)
    return report


def _run_pi1(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    C = truncate(_cat_name(opts["cat"]), opts["max"])
    comp = _component_objects(opts["cat"], C, opts["component"])
    sub = full_subcategory(C, comp)
    X = nerve(sub, 2)
    pres = pi1_presentation(X)
    ab = abelianize(pres)
    report["window"] = {
        "category": _cat_name(opts["cat"]),
        "max": opts["max"],
        "component": opts["component"],
        "component_objects": len(comp),
    }
    report["presentation"] = {
        "generators": pres.n_generators,
        "relators": [list(r) for r in pres.relators],
    }
    report["abelianization"] = str(ab)
    return report


def _run_bgamma(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    S = BasedSet(opts["s"])
    window = hk_category(
        _cat_name(opts["cat"]), S, opts["bound"], sigma_mode=opts["sigma_mode"]
    )
    X = b_gamma(_cat_name(opts["cat"]), S, opts["bound"], opts["dim"], window=window)
    report["window"] = {
        "category": _cat_name(opts["cat"]),
        "s": opts["s"],
        "bound": opts["bound"],
        "sigma_mode": opts["sigma_mode"],
    }
    report["objects"] = len(window.objects)
    report["morphisms"] = window.cat.n_morphisms
    report["cells"] = {str(m): X.n_cells(m) for m in range(opts["dim"] + 1)}
    report["components"] = len(components(X))
    return report


def _run_gamma(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    A = _monoid_from_options(opts)
    report["window"] = _monoid_window(opts, A)
    if opts.get("circle_levels"):
        circle_bound = opts.get("circle_bound") or opts["bound"]
        diag, bar = gamma_circle(A, circle_bound, opts["circle_levels"], opts["dim"])
        report["window"]["circle_levels"] = opts["circle_levels"]
        report["window"]["circle_bound"] = circle_bound
        report["diagonal_cells"] = {
            str(m): diag.n_cells(m) for m in range(opts["dim"] + 1)
        }
        report["bar_cells"] = {str(m): bar.n_cells(m) for m in range(opts["dim"] + 1)}
        if opts["dim"] >= 2:
            report["diagonal_h1"] = str(homology(diag, 1))
            report["bar_h1"] = str(homology(bar, 1))
        return report
    S = BasedSet(opts["s"])
    X = gamma_of_monoid(A, S, opts["bound"], opts["dim"], sigma_mode=opts["sigma_mode"])
    report["window"]["s"] = opts["s"]
    report["window"]["sigma_mode"] = opts["sigma_mode"]
    report["cells"] = {str(m): X.n_cells(m) for m in range(opts["dim"] + 1)}
    report["components"] = len(components(X))
    return report


def _run_freemonoid(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    gen = _parse_obj("j", opts["generator"])
    A = free_monoid(gen, opts["bound"])
    report["window"] = {
        "category": "J",
        "bound": opts["bound"],
        "generator": opts["generator"],
    }
    report["objects"] = A.cat.n_objects
    report["value_counts"] = {
        f"{o.m1},{o.m2}": len(v) for o, v in zip(A.cat.objects, A.values)
    }
    report["validation"] = [str(e) for e in A.validate()]
    if report["validation"]:
        raise InternalCheckError("free monoid tabulation failed validation")
    return report


def _run_pi0(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    A = _monoid_from_options(opts)
    table = pi0_hocolim(A)
    report["window"] = _monoid_window(opts, A)
    report["classes"] = table.n_classes
    report["unit_class"] = table.unit_class
    report["products_defined"] = len(table.table)
    report["warnings"] = list(table.warnings)
    report["presentation"] = {
        "generators": list(table.monoid.generators),
        "relations": [
            [list(a), list(b)] for a, b in table.monoid.relations
        ],
    }
    if isinstance(A.cat.objects[0], JObject):
        degs = degree_homomorphism(A)
        report["degrees"] = {str(i): d for i, d in sorted(degs.items())}
    return report


def _run_units(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    A = _monoid_from_options(opts)
    sub, unit_report = units_submonoid(A, max_len=opts.get("max_len"))
    report["window"] = _monoid_window(opts, A)
    report["units"] = {str(k): v for k, v in sorted(unit_report.items())}
    report["unit_value_counts"] = [len(v) for v in sub.values]
    return report


def _run_grouplike(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    A = _monoid_from_options(opts)
    flag, cert = grouplike_check(A, max_len=opts.get("max_len"))
    report["window"] = _monoid_window(opts, A)
    report["grouplike"] = flag
    report["certificate"] = {
        k: (v if not isinstance(v, dict) else {str(i): w for i, w in sorted(v.items())})
        for k, v in sorted(cert.items())
    }
    return report


def _format_gl1_table(doc: dict) -> str:
    lines = [
        "graded unit group report",
        "  generators:      "
        + ", ".join(
            f"{g['name']} (deg {g['degree']}, "
            + ("infinite order" if g["order"] == 0 else f"order {g['order']}")
            + ")"
            for g in doc["generators"]
        ),
        f"  unit group:      {doc['unit_group']}",
        f"  periodicity n:   {doc['periodicity']}",
        f"  five-term:       {doc['five_term']['sequence']}",
        f"  pi0(delooping):  {doc['pi0_delooping']}",
        f"  pi1(delooping):  {doc['pi1_delooping']}",
        f"  k-invariant:     {'nonzero' if doc['k_invariant']['k_invariant_nonzero'] else 'not detected'}",
        f"  Hopf image:      {doc['hopf_image']['pretty']}",
    ]
    if "operation" in doc["k_invariant"]:
        lines.append(f"  operation:       {doc['k_invariant']['operation']}")
    return "\n".join(lines) + "\n"


def _run_gl1(config: RunConfig) -> dict:
    opts = config.options
    report = _base_report(config)
    with open(opts["ring"], "r", encoding="utf-8") as fh:
        G = GradedUnitGroup.from_json(fh.read())
    doc = gl1_report(G)
    report["window"] = {"ring_file": os.path.basename(opts["ring"])}
    report.update({k: v for k, v in doc.items() if k != "schema"})
    if opts.get("table"):
        sys.stderr.write(_format_gl1_table(doc))
    return report


_DISPATCH = {
    "jcat": _run_jcat,
    "nerve": _run_nerve,
    "homology": _run_homology,
    "pi1": _run_pi1,
    "bgamma": _run_bgamma,
    "gamma": _run_gamma,
    "freemonoid": _run_freemonoid,
    "pi0": _run_pi0,
    "units": _run_units,
    "grouplike": _run_grouplike,
    "gl1": _run_gl1,
}


def run(config: RunConfig) -> dict:
    """Dispatch a validated configuration and return the report dict."""
    if config.subcommand not in _DISPATCH:
        raise InputError(f"unknown subcommand {config.subcommand!r}")
    return _DISPATCH[config.subcommand](config)


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jgamma",
        description="Desk-scale computations with permutative indexing "
        "categories, Gamma-spaces, tabulated monoids, and graded units.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--output", default=None, help="write the JSON report here")
        p.add_argument(
            "--seed", type=int, default=0, help="seed for sampled checks (default 0)"
        )

    p = sub.add_parser("jcat", help="hom-sets and composition in I, J, Sigma")
    p.add_argument("--action", choices=["homs", "compose"], default="homs")
    p.add_argument("--cat", choices=["i", "j", "sigma"], default="j")
    p.add_argument("--src", required=True, help="source object (J: m1,m2)")
    p.add_argument("--dst", required=True, help="target object")
    p.add_argument("--mid", help="middle object for --action compose")
    p.add_argument("--first", help="JSON payload of the first morphism (src->mid)")
    p.add_argument("--second", help="JSON payload of the second morphism (mid->dst)")
    common(p)

    p = sub.add_parser("nerve", help="cell counts of the nerve of a truncation")
    p.add_argument("--cat", choices=["i", "j", "sigma"], default="j")
    p.add_argument("--max", type=int, required=True, help="truncation bound")
    p.add_argument("--dim", type=int, default=2, help="nerve dimension cap (default 2)")
    common(p)

    p = sub.add_parser("homology", help="integral homology of a component nerve")
    p.add_argument("--cat", choices=["i", "j", "sigma"], default="j")
    p.add_argument("--max", type=int, required=True, help="truncation bound")
    p.add_argument(
        "--component", default="deg=0", help="component selector: deg=K or obj=K"
    )
    p.add_argument("--degree", type=int, default=1, help="homology degree (default 1)")
    p.add_argument(
        "--dim", type=int, default=None, help="nerve cap (default degree+1)"
    )
    common(p)

    p = sub.add_parser("pi1", help="edge-path fundamental group of a component nerve")
    p.add_argument("--cat", choices=["i", "j", "sigma"], default="j")
    p.add_argument("--max", type=int, required=True, help="truncation bound")
    p.add_argument(
        "--component", default="deg=0", help="component selector: deg=K or obj=K"
    )
    common(p)

    p = sub.add_parser("bgamma", help="the Gamma-space of a permutative truncation")
    p.add_argument("--cat", choices=["i", "j", "sigma"], default="sigma")
    p.add_argument("--s", type=int, required=True, help="based-set size k for k+")
    p.add_argument("--bound", type=int, required=True, help="window bound")
    p.add_argument("--dim", type=int, default=1, help="nerve cap (default 1)")
    p.add_argument(
        "--sigma-mode",
        dest="sigma_mode",
        choices=["all", "canonical"],
        default="all",
        help="coherence enumeration mode (default all)",
    )
    common(p)

    p = sub.add_parser("gamma", help="the Gamma-space of a tabulated monoid")
    p.add_argument("--generator", help="free monoid generator m1,m2")
    p.add_argument("--terminal", action="store_true", help="use the terminal monoid")
    p.add_argument("--monoid", help="path to a tabulated-monoid JSON file")
    p.add_argument("--bound", type=int, required=True, help="window bound")
    p.add_argument("--s", type=int, default=1, help="based-set size k for k+ (default 1)")
    p.add_argument("--dim", type=int, default=1, help="nerve cap (default 1)")
    p.add_argument(
        "--sigma-mode",
        dest="sigma_mode",
        choices=["all", "canonical"],
        default="canonical",
        help="coherence enumeration mode (default canonical)",
    )
    p.add_argument(
        "--circle-levels",
        dest="circle_levels",
        type=int,
        default=None,
        help="evaluate on the simplicial circle through this level instead",
    )
    p.add_argument(
        "--circle-bound",
        dest="circle_bound",
        type=int,
        default=None,
        help="uniform per-level singleton bound for the circle windows "
        "(default --bound; smaller values are much faster)",
    )
    common(p)

    p = sub.add_parser("freemonoid", help="tabulate a free commutative J-space monoid")
    p.add_argument("--generator", required=True, help="generator m1,m2")
    p.add_argument("--bound", type=int, required=True, help="window bound")
    common(p)

    for name, help_text in [
        ("pi0", "pi0 of the homotopy colimit, with multiplication"),
        ("units", "the unit components of a tabulated monoid"),
        ("grouplike", "grouplike test with certificate"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--generator", help="free monoid generator m1,m2")
        p.add_argument("--terminal", action="store_true", help="use the terminal monoid")
        p.add_argument("--monoid", help="path to a tabulated-monoid JSON file")
        p.add_argument("--bound", type=int, required=True, help="window bound")
        if name in ("units", "grouplike"):
            p.add_argument(
                "--max-len",
                dest="max_len",
                type=int,
                default=None,
                help="saturation bound for inverse search",
            )
        common(p)

    p = sub.add_parser("gl1", help="graded unit-group invariants from a ring file")
    p.add_argument("--ring", required=True, help="path to a graded-unit-group JSON file")
    p.add_argument(
        "--table", action="store_true", help="also print a human-readable table"
    )
    common(p)
    return parser


def config_from_argv(argv: Optional[list[str]] = None) -> RunConfig:
    args = vars(_build_parser().parse_args(argv))
    subcommand = args.pop("subcommand")
    seed = args.pop("seed", 0)
    output = args.pop("output", None)
    options = {k: v for k, v in args.items()}
    return RunConfig(subcommand=subcommand, options=options, seed=seed, output=output)


def main(argv: Optional[list[str]] = None) -> int:
    try:
        config = config_from_argv(argv)
        report = run(config)
        _emit(report, config)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except WindowError as exc:
        print(f"window exhausted: {exc}", file=sys.stderr)
        return 3
    except InternalCheckError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
