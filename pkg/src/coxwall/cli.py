"""Command-line front end.

Every subcommand reads JSON inputs, writes JSON (or DOT) to a file or
stdout, and exits 0 when the requested property holds, 1 when it was
computed and found to fail (or a resource bound was hit), 2 on bad
input.  Outputs are byte-deterministic for a fixed invocation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .automorphisms import (
    StarFixingWitness,
    build_wall_fixing_automorphism,
    star_fixing_automorphisms,
)
from .ball import enumerate_ball
from .classification import (
    DiagramAutomorphism,
    classify,
    is_hyperbolic,
    is_rigid,
    nerve,
)
from .complexes import LinkGraph, bourdon_system, cell_census, system_from_graph
from .coxeter_core import CoxeterMatrix, CoxeterSystem, new_system
from .errors import CoxwallError, ParseError, ResourceLimit
from .even_polytopes import coxeter_cell, even_polyhedra_table
from .walls import check_axiom_M, geodesic_report

DOT_VERTEX_LIMIT = 10_000


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation: the subcommand plus its inputs and bounds."""

    subcommand: str
    system_path: str | None = None
    graph_path: str | None = None
    out_path: str | None = None
    radius: int | None = None
    max_vertices: int | None = None
    fmt: str = "json"
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.radius is not None and self.radius < 0:
            raise ParseError("radius must be nonnegative, got %d" % self.radius)
        if self.max_vertices is not None and self.max_vertices <= 0:
            raise ParseError("--max-vertices must be positive")


# ---------------------------------------------------------------------------
# input plumbing


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError("%s is not valid JSON: %s" % (path, exc)) from exc


def load_system(path: str) -> CoxeterSystem:
    """A system file holds the matrix schema plus an optional name list:
    {"rank": n, "labels": [[...]], "names": [...]}."""
    data = _read_json(path)
    matrix = CoxeterMatrix.from_json_dict(data)
    names = data.get("names") if isinstance(data, dict) else None
    if names is not None:
        if not isinstance(names, list) or len(names) != matrix.rank:
            raise ParseError("'names' must list one name per generator")
    try:
        return new_system(matrix, names)
    except CoxwallError as exc:
        raise ParseError(str(exc)) from exc


def system_json_dict(system: CoxeterSystem) -> dict:
    out = system.matrix.to_json_dict()
    out["names"] = list(system.generator_names)
    return out


def load_graph(path: str) -> LinkGraph:
    data = _read_json(path)
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise ParseError("graph files need 'vertices' and 'edges' keys")
    try:
        return LinkGraph.from_json_dict(data)
    except (ValueError, TypeError) as exc:
        raise ParseError("bad graph file %s: %s" % (path, exc)) from exc


def _parse_word(system: CoxeterSystem, text: str):
    if "," in text:
        return [part for part in text.split(",") if part]
    return text


def _emit(config: RunConfig, payload) -> None:
    if isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if config.out_path:
        with open(config.out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_ball(config: RunConfig) -> int:
    system = load_system(config.system_path)
    ball = enumerate_ball(system, config.radius, max_vertices=config.max_vertices)
    if config.fmt == "dot":
        if ball.size > DOT_VERTEX_LIMIT:
            raise ResourceLimit(
                "DOT export is limited to %d vertices, ball has %d"
                % (DOT_VERTEX_LIMIT, ball.size)
            )
        _emit(config, ball.export_dot())
    else:
        _emit(config, ball.export_json_dict())
    return 0


def _cmd_geodesic(config: RunConfig) -> int:
    system = load_system(config.system_path)
    report = geodesic_report(system, _parse_word(system, config.params["word"]))
    _emit(config, report)
    return 0 if report["geodesic"] else 1


def _cmd_walls_check(config: RunConfig) -> int:
    system = load_system(config.system_path)
    ball = enumerate_ball(system, config.radius, max_vertices=config.max_vertices)
    report = check_axiom_M(ball, max_vertices=config.max_vertices)
    _emit(config, report)
    return 0 if not report["violations"] else 1


def _cmd_nerve(config: RunConfig) -> int:
    system = load_system(config.system_path)
    nv = nerve(system)
    diagram = classify(system)
    _emit(
        config,
        {
            "vertices": list(nv.vertex_names),
            "faces": [list(f) for f in nv.faces_as_names()],
            "dimension": nv.dimension,
            "diagram": {
                "tag": diagram.tag,
                "components": [
                    {"type": c.name, "members": list(c.members)}
                    for c in diagram.components
                ],
            },
        },
    )
    return 0


def _cmd_hyperbolic(config: RunConfig) -> int:
    system = load_system(config.system_path)
    report = is_hyperbolic(system)
    _emit(config, report.as_dict())
    return 0 if report.hyperbolic else 1


def _cmd_rigid(config: RunConfig) -> int:
    system = load_system(config.system_path)
    report = is_rigid(system)
    witness = None
    if report.witness is not None:
        name, f = report.witness
        witness = {"s": name, "f": f.as_dict()}
    _emit(config, {"rigid": report.rigid, "witness": witness})
    return 0 if report.rigid else 1


def _cmd_cell(config: RunConfig) -> int:
    system = load_system(config.system_path)
    cell = coxeter_cell(system)
    payload = cell.export_json_dict()
    payload["face_counts"] = {str(d): n for d, n in cell.face_counts().items()}
    _emit(config, payload)
    return 0


def _cmd_table(config: RunConfig) -> int:
    rows = even_polyhedra_table(config.params["rank"])
    _emit(config, [row.as_dict() for row in rows])
    return 0


def _cmd_building(config: RunConfig) -> int:
    try:
        system = bourdon_system(config.params["p"], config.params["q"])
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if config.radius is None:
        _emit(config, system_json_dict(system))
    else:
        census = cell_census(system, config.radius, max_vertices=config.max_vertices)
        _emit(config, census.as_dict())
    return 0


def _cmd_census(config: RunConfig) -> int:
    if config.system_path:
        system = load_system(config.system_path)
    else:
        graph = load_graph(config.graph_path)
        system = system_from_graph(graph, config.params["k"])
    census = cell_census(system, config.radius, max_vertices=config.max_vertices)
    _emit(config, census.as_dict())
    return 0


def _load_witness(system: CoxeterSystem, s, path: str) -> StarFixingWitness:
    data = _read_json(path)
    if isinstance(data, dict):
        try:
            perm = tuple(
                system.index(data[nm]) for nm in system.generator_names
            )
        except KeyError as exc:
            raise ParseError("permutation file misses generator %s" % exc) from exc
    elif isinstance(data, list):
        if len(data) != system.rank:
            raise ParseError("permutation list must name every generator once")
        perm = tuple(system.index(nm) for nm in data)
    else:
        raise ParseError("permutation file must hold an object or a list")
    if sorted(perm) != list(range(system.rank)):
        raise ParseError("permutation file does not describe a bijection")
    rows = system.matrix.rows
    for i in range(system.rank):
        for j in range(system.rank):
            if rows[perm[i]][perm[j]] != rows[i][j]:
                raise ParseError("permutation does not preserve the labels")
    return StarFixingWitness(system, s, DiagramAutomorphism(system, perm))


def _cmd_autom(config: RunConfig) -> int:
    system = load_system(config.system_path)
    s = config.params["s"]
    try:
        s = int(s)
    except ValueError:
        pass
    si = system.index(s)
    if config.params.get("f"):
        witness = _load_witness(system, si, config.params["f"])
    else:
        candidates = [w for w in star_fixing_automorphisms(system) if w.s == si]
        if not candidates:
            _emit(config, {"s": system.name(si), "witnesses": []})
            return 1
        witness = candidates[0]
    phi = build_wall_fixing_automorphism(
        witness, config.radius, max_vertices=config.max_vertices
    )
    _emit(config, phi.as_dict())
    return 0 if all(phi.checks.values()) else 1


_COMMANDS = {
    "ball": _cmd_ball,
    "geodesic": _cmd_geodesic,
    "walls-check": _cmd_walls_check,
    "nerve": _cmd_nerve,
    "hyperbolic": _cmd_hyperbolic,
    "rigid": _cmd_rigid,
    "cell": _cmd_cell,
    "table": _cmd_table,
    "building": _cmd_building,
    "census": _cmd_census,
    "autom": _cmd_autom,
    "export-dot": None,  # alias for ball --format dot, filled below
}


def _cmd_export_dot(config: RunConfig) -> int:
    return _cmd_ball(
        RunConfig(
            subcommand="ball",
            system_path=config.system_path,
            out_path=config.out_path,
            radius=config.radius,
            max_vertices=config.max_vertices,
            fmt="dot",
            seed=config.seed,
        )
    )


_COMMANDS["export-dot"] = _cmd_export_dot


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxwall",
        description="Exact wall calculus and rigidity tools for Coxeter systems.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, radius=False, radius_required=False, system=True, out=True):
        if system:
            p.add_argument("--system", required=True, help="system JSON file")
        if radius:
            p.add_argument(
                "--radius", type=int, required=radius_required, default=None
            )
        if out:
            p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--max-vertices", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("ball", help="enumerate a Cayley ball")
    common(p, radius=True, radius_required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = sub.add_parser("geodesic", help="check a word for wall re-crossings")
    common(p)
    p.add_argument("--word", required=True, help="letters, comma-separated if multi-char")

    p = sub.add_parser("walls-check", help="verify wall counts on all ball pairs")
    common(p, radius=True, radius_required=True)

    p = sub.add_parser("nerve", help="nerve and diagram classification")
    common(p)

    p = sub.add_parser("hyperbolic", help="no-flats test by diagram scan")
    common(p)

    p = sub.add_parser("rigid", help="half-space rigidity test")
    common(p)

    p = sub.add_parser("cell", help="face poset of the cell of a finite system")
    common(p)

    p = sub.add_parser("table", help="the rank-2/3 even-polyhedron table")
    p.add_argument("--rank", type=int, required=True, choices=[2, 3])
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("building", help="right-angled building system W(p, K_{q,q})")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--max-vertices", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("census", help="cell census of a Davis ball")
    p.add_argument("--system", default=None, help="system JSON file")
    p.add_argument("--graph", default=None, help="link graph JSON file")
    p.add_argument("--k", type=int, default=None, help="even polygon size for --graph")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--max-vertices", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("autom", help="wall-fixing partial automorphism")
    common(p, radius=True, radius_required=True)
    p.add_argument("--s", required=True, help="generator name or index")
    p.add_argument("--f", default=None, help="permutation JSON file (else first witness)")
    p.add_argument(
        "--verify",
        action="store_true",
        help="verify the glued map (always on; flag kept for scripts)",
    )

    p = sub.add_parser("export-dot", help="Cayley ball as a DOT graph")
    common(p, radius=True, radius_required=True)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {}
    for key in ("word", "rank", "p", "q", "k", "s", "f", "verify"):
        if hasattr(args, key):
            params[key] = getattr(args, key)
    if args.subcommand == "census":
        if bool(getattr(args, "system", None)) == bool(getattr(args, "graph", None)):
            raise ParseError("census needs exactly one of --system or --graph")
        if getattr(args, "graph", None) and params.get("k") is None:
            raise ParseError("census --graph needs --k")
    return RunConfig(
        subcommand=args.subcommand,
        system_path=getattr(args, "system", None),
        graph_path=getattr(args, "graph", None),
        out_path=getattr(args, "out", None),
        radius=getattr(args, "radius", None),
        max_vertices=getattr(args, "max_vertices", None),
        fmt=getattr(args, "format", "json"),
        seed=getattr(args, "seed", 0),
        params=params,
    )


def run(config: RunConfig) -> int:
    """Dispatch a parsed invocation; returns the process exit code."""
    return _COMMANDS[config.subcommand](config)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return run(config)
    except ResourceLimit as exc:
        print("resource limit: %s" % exc, file=sys.stderr)
        return 1
    except ParseError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2
    except CoxwallError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
