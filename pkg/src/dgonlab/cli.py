"""Command-line entry point: thin wrappers around the core pipelines,
printing deterministic JSON. `serve` starts the HTTP service."""

from __future__ import annotations

import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path as FsPath

import click

from .algebra import ginzburg
from .errors import DgonlabError
from .homology import DEFAULT_LENGTH, cohomology_dim
from .mutation import mutate_qsp, mutated_differential, surface_mutate
from .qsp import algebra_to_json, build_qsp, qsp_to_json
from .reduce import reduce_to_fixpoint, verify_commute
from .surface import (
    flip,
    flip_orbit,
    parse_surface,
    surface_to_json,
    validate,
)


def _emit(data, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out:
        FsPath(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _load_surface(path: str):
    return parse_surface(FsPath(path).read_text(encoding="utf-8"))


def _domain_errors(fn):
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DgonlabError as exc:
            click.echo(json.dumps({"error": exc.to_json()}, indent=2, sort_keys=True))
            sys.exit(1)

    wrapped.__name__ = fn.__name__
    return wrapped


@click.group()
def main():
    """Workbench for d-angulated surfaces and their quivers with
    superpotential.  --mode defaults: strict where a worked example pins
    the exact values, sign-relaxed for corpus-wide commutativity sweeps."""


@main.command("validate")
@click.argument("surface_file")
@click.option("--out", default=None, help="Write JSON report to a file.")
@_domain_errors
def cmd_validate(surface_file, out):
    """Topology report of a surface file."""
    report = validate(_load_surface(surface_file))
    _emit(report.to_json(), out)


@main.command("qsp")
@click.argument("surface_file")
@click.option("--out", default=None)
@_domain_errors
def cmd_qsp(surface_file, out):
    """Quiver with superpotential of the d-angulation."""
    quiver, w = build_qsp(_load_surface(surface_file))
    _emit(qsp_to_json(quiver, w), out)


@main.command("ginzburg")
@click.argument("surface_file")
@click.option("--out", default=None)
@_domain_errors
def cmd_ginzburg(surface_file, out):
    """Ginzburg dg algebra of the d-angulation."""
    quiver, w = build_qsp(_load_surface(surface_file))
    _emit(algebra_to_json(ginzburg(quiver, w)), out)


@main.command("flip")
@click.argument("surface_file")
@click.option("--arc", required=True)
@click.option("--times", default=1, show_default=True)
@click.option("--out", default=None)
@_domain_errors
def cmd_flip(surface_file, arc, times, out):
    """Flip an arc (repeatedly following the created arc with --times)."""
    surface = _load_surface(surface_file)
    current, cur_arc = surface, arc
    for _ in range(times):
        before = {s.label for f in current.faces for s in f if s.kind == "arc"}
        current = flip(current, cur_arc)
        after = {s.label for f in current.faces for s in f if s.kind == "arc"}
        (cur_arc,) = after - before
    _emit(surface_to_json(current), out)


@main.command("orbit")
@click.argument("surface_file")
@click.option("--arc", required=True)
@click.option("--times", default=12, show_default=True, help="Step cutoff.")
@click.option("--out", default=None)
@_domain_errors
def cmd_orbit(surface_file, arc, times, out):
    """Smallest flip period of an arc, or no-return within the cutoff."""
    _emit(flip_orbit(_load_surface(surface_file), arc, times), out)


@main.command("mutate")
@click.argument("surface_file")
@click.option("--arc", required=True)
@click.option(
    "--mode",
    type=click.Choice(["oppermann", "surface"]),
    default="surface",
    show_default=True,
)
@click.option("--out", default=None)
@_domain_errors
def cmd_mutate(surface_file, arc, mode, out):
    """Mutation of the QsP at an arc's vertex."""
    quiver, w = build_qsp(_load_surface(surface_file))
    if mode == "oppermann":
        qm, wm = mutate_qsp(quiver, w, arc)
        _emit(qsp_to_json(qm, wm), out)
    else:
        qp, wp, pairs = surface_mutate(quiver, w, arc)
        data = qsp_to_json(qp, wp)
        data["superfluous_pairs"] = [list(p) for p in pairs]
        _emit(data, out)


@main.command("reduce")
@click.argument("surface_file")
@click.option("--arc", required=True, help="Vertex to mutate before reducing.")
@click.option("--out", default=None)
@_domain_errors
def cmd_reduce(surface_file, arc, out):
    """Reduce the Ginzburg algebra of the mutated QsP to its fixpoint."""
    quiver, w = build_qsp(_load_surface(surface_file))
    gamma = mutated_differential(quiver, w, arc)
    reduced, trace = reduce_to_fixpoint(gamma)
    _emit(
        {
            "algebra": algebra_to_json(reduced),
            "trace": trace.to_json(),
        },
        out,
    )


@main.command("verify-commute")
@click.argument("surface_file")
@click.option("--arc", default=None, help="Single arc to verify.")
@click.option("--all-arcs", is_flag=True, help="Verify every arc.")
@click.option(
    "--mode",
    type=click.Choice(["strict", "sign-relaxed", "support"]),
    default="sign-relaxed",
    show_default=True,
)
@click.option("--all-signs", is_flag=True, help="Stress alternative sign choices.")
@click.option("--jobs", default=1, show_default=True)
@click.option("--out", default=None)
@_domain_errors
def cmd_verify_commute(surface_file, arc, all_arcs, mode, all_signs, jobs, out):
    """Check flip/mutation commutativity up to quasi-isomorphism."""
    surface = _load_surface(surface_file)
    if not all_arcs and arc is None:
        raise click.UsageError("need --arc or --all-arcs")
    arcs = surface.arc_labels() if all_arcs else [arc]

    def one(a: str) -> dict:
        return verify_commute(surface, a, mode)

    if jobs > 1 and len(arcs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(one, arcs))
    else:
        reports = [one(a) for a in arcs]
    result: dict = {
        "mode": mode,
        "reports": reports,
        "pass": all(r["pass"] for r in reports),
    }
    if all_signs:
        result["all_signs"] = _stress_signs(surface, arcs, mode)
    _emit(result, out)
    if not result["pass"]:
        sys.exit(1)


def _stress_signs(surface, arcs, mode) -> list[dict]:
    from .algebra import Potential
    from .qsp import (
        all_sign_assignments,
        build_prequiver,
        enumerate_potential_cycles,
        glue_prequiver,
        potential_from_signs,
    )
    from .mutation import mutated_differential as mdiff, surface_mutate as smut
    from .reduce import iso_check as ichk, reduce_to_fixpoint as rfix

    pre = build_prequiver(surface)
    quiver = glue_prequiver(pre)
    cycles = enumerate_potential_cycles(pre)
    rows = []
    for idx, assignment in enumerate(all_sign_assignments(quiver, pre, cycles)):
        w = potential_from_signs(quiver, cycles, assignment)
        ok = True
        for a in arcs:
            gamma1, _ = rfix(mdiff(quiver, w, a))
            qp, wp, _ = smut(quiver, w, a)
            if ichk(gamma1, ginzburg(qp, wp), mode) is None:
                ok = False
                break
        rows.append({"assignment": idx, "pass": ok})
    return rows


@main.command("homology")
@click.argument("surface_file")
@click.option("--degree", default=0, show_default=True)
@click.option("--length", default=DEFAULT_LENGTH, show_default=True)
@click.option("--out", default=None)
@_domain_errors
def cmd_homology(surface_file, degree, length, out):
    """Truncated cohomology dimension of the Ginzburg algebra."""
    quiver, w = build_qsp(_load_surface(surface_file))
    _emit(cohomology_dim(ginzburg(quiver, w), degree, length), out)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8787, show_default=True)
@click.option("--state-dir", default=None, help="Snapshot sessions as surface files.")
@click.option("--frontend", default=None, help="Directory with the explorer bundle.")
def cmd_serve(host, port, state_dir, frontend):
    """Run the HTTP service (and optionally serve the explorer UI)."""
    import uvicorn

    from .server import create_app

    uvicorn.run(
        create_app(state_dir=state_dir, frontend=frontend), host=host, port=port
    )


if __name__ == "__main__":
    main()
