"""Command-line front door.

Exit codes: 0 success, 1 domain error (error JSON on stderr), 2 usage error.
"""
import argparse
import os
import sys

from . import io
from .errors import CubikError, InvalidInput
from .median import dualize_roundtrip, to_dot, validate_median
from .npc import build_amalgam, develop_ball, fold, local_separation_check, slow_develop, validate_npc
from .pocset import cubing, orientation_string, validate_pocset, width
from .quarter import check_reduction, quarterspace_report, quotient_pocset, reduce_fixpoint, reduce_once
from .wallspace import orbit_of_cut, refine_halfspace, refinement_report, theta_refined, wallspace_to_cubing


class UsageError(Exception):
    pass


def _load(path):
    if not os.path.isfile(path):
        raise UsageError(f"no such file: {path}")
    return io.read_json(path)


def _graph(path):
    data = _load(path)
    kind = io.detect_kind(data)
    if kind == "pocset":
        g, _ = cubing(io.load_pocset(data))
        return g
    if kind != "graph":
        raise InvalidInput(f"{path} holds a {kind}, expected a graph")
    return io.load_graph(data)


def _complex(path):
    data = _load(path)
    if io.detect_kind(data) != "square_complex":
        raise InvalidInput(f"{path} does not hold a square complex")
    return io.load_square_complex(data)


def _mask(items):
    return sum(1 << int(x) for x in items)


def cmd_validate(args):
    data = _load(args.input)
    kind = io.detect_kind(data)
    if kind == "pocset":
        report = validate_pocset(io.load_pocset(data, validate=False))
    elif kind == "graph":
        from .median import Graph, MedianGraph

        if data.get("wall_labels") is None:
            report = validate_median(Graph(data["n_vertices"], data["edges"]))
        else:
            report = validate_median(MedianGraph(data["n_vertices"], data["edges"], data["wall_labels"]))
    elif kind == "square_complex":
        report = validate_npc(io.load_square_complex(data))
    else:
        wallspace_to_cubing(io.load_wallspace(data), cap=args.cap)
        from .diagnostics import Diagnostics

        report = Diagnostics()
    out = {"kind": kind}
    out.update(report.to_json())
    return out, (0 if report.ok else 1)


def cmd_cube(args):
    data = _load(args.input)
    if io.detect_kind(data) == "wallspace":
        g, vmap = wallspace_to_cubing(io.load_wallspace(data), cap=args.cap)
        extra = {"point_map": vmap}
        p = None
    else:
        p = io.load_pocset(data)
        g, wall_map = cubing(p, cap=args.cap)
        extra = {"wall_map": wall_map, "width": width(p)}
    if args.dot:
        return to_dot(g), 0
    out = g.to_json()
    out.update(extra)
    out["dim"] = g.dim
    n = g.n_walls
    out["ultrafilters"] = ["".join("+" if mu >> i & 1 else "-" for i in range(n)) for mu in g.ultrafilters]
    if p is not None:
        assert out["ultrafilters"] == [orientation_string(p, mu) for mu in g.ultrafilters]
    return out, 0


def cmd_dualize(args):
    g = _graph(args.input)
    return dualize_roundtrip(g, cap=args.cap), 0


def cmd_depth(args):
    g = _graph(args.input)
    return quarterspace_report(g), 0


def cmd_reduce(args):
    g = _graph(args.input)
    preserve = io.parse_halfspace(args.preserve) if args.preserve else None
    if args.fixpoint:
        result = reduce_fixpoint(g)
    else:
        result = reduce_once(g, preserve=preserve)
        stats = check_reduction(result)
        result.trace = [{"step": 1, "n_vertices_before": g.n_vertices, "n_vertices_after": result.Y.n_vertices,
                         "hausdorff": stats["hausdorff"], "drift": stats["drift"]}]
    if args.dot:
        return to_dot(result.Y), 0
    out = result.Y.to_json()
    out.update({
        "phi": result.phi,
        "theta": result.theta,
        "steps": result.trace,
        "n_vertices_X": g.n_vertices,
    })
    if result.quotient is not None:
        out["classes"] = result.quotient.to_json()["classes"]
    return out, 0


def cmd_refine(args):
    g = _graph(args.input)
    h0 = io.parse_halfspace(args.halfspace)
    if args.cuts:
        cuts = [_mask(c) for c in _load(args.cuts)]
    else:
        if not args.c0:
            raise UsageError("--aut-gens needs --c0")
        c0 = _mask(x for x in args.c0.split(",") if x.strip())
        cuts = orbit_of_cut(g, _load(args.aut_gens), h0, c0)
    P = refine_halfspace(g, h0, cuts)
    out = P.to_json()
    out["classes"] = P.partition.to_json()["classes"]
    out["theta"] = ["".join("+" if t >> i & 1 else "-" for i in range(P.n_walls))
                    for t in (theta_refined(P, x) for x in range(g.n_vertices))]
    out["checks"] = refinement_report(P, cap=args.cap)
    return out, 0


def _ball(args):
    sq = _complex(args.input)
    if not 0 <= args.base < sq.n_vertices:
        raise UsageError(f"base vertex {args.base} out of range")
    if args.radius < 0:
        raise UsageError("radius must be non-negative")
    return develop_ball(sq, args.base, args.radius)


def cmd_develop(args):
    ball = _ball(args)
    out = ball.to_json()
    out["n_vertices"] = ball.n_vertices
    out["inner_median"] = None
    if args.radius >= 2:
        g, keep = ball.inner()
        out["inner_median"] = True
        out["inner_n_vertices"] = g.n_vertices
        out["inner_n_walls"] = g.n_walls
    if args.oracle:
        nv, ne = slow_develop(ball.complex, args.base, args.radius)
        out["oracle"] = {"n_vertices": nv, "n_edges": ne}
    return out, 0


def cmd_separation(args):
    ball = _ball(args)
    return local_separation_check(ball, args.edge), 0


def cmd_export_dot(args):
    return to_dot(_graph(args.input)), 0


def cmd_amalgam(args):
    sq = build_amalgam(args.m, args.n, args.w1, args.w2)
    if not args.fold:
        return sq.to_json(), 0
    res = fold(sq, sq.handles["e1"], sq.handles["e2"])
    return res.to_json(), 0


def build_parser():
    parser = argparse.ArgumentParser(prog="cubik", description="Finite CAT(0) cube complex toolkit")
    parser.add_argument("--cap", type=int, default=None, help="ultrafilter enumeration cap")
    parser.add_argument("-o", "--output", help="write the result here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a pocset, graph, wallspace or square complex")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cube", help="cubing of a pocset or wallspace")
    p.add_argument("input")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_cube)

    p = sub.add_parser("dualize", help="certify graph = cubing of its halfspace pocset")
    p.add_argument("input")
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("depth", help="depth of every quarterspace")
    p.add_argument("input")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("reduce", help="collapse depth-0 quarterspaces")
    p.add_argument("input")
    p.add_argument("--fixpoint", action="store_true")
    p.add_argument("--preserve", metavar="WALL±")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("refine", help="refine one halfspace by cuts")
    p.add_argument("input")
    p.add_argument("--halfspace", required=True, metavar="WALL±")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--cuts", metavar="FILE")
    group.add_argument("--aut-gens", metavar="FILE")
    p.add_argument("--c0", metavar="LIST")
    p.set_defaults(func=cmd_refine)

    for name, func, hint in (("develop", cmd_develop, "develop a universal-cover ball"),
                             ("separation", cmd_separation, "local separation at the root lift")):
        p = sub.add_parser(name, help=hint)
        p.add_argument("input")
        p.add_argument("--base", type=int, required=True)
        p.add_argument("--radius", type=int, required=True)
        if name == "develop":
            p.add_argument("--oracle", action="store_true", help="cross-check counts with the slow developer")
        else:
            p.add_argument("--edge", type=int, required=True, help="directed base edge leaving the base vertex")
        p.set_defaults(func=func)

    p = sub.add_parser("export-dot", help="DOT rendering of a graph")
    p.add_argument("input")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("amalgam", help="build the two-rose annulus complex")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w1", required=True)
    p.add_argument("--w2", required=True)
    p.add_argument("--fold", action="store_true", help="fold the default edge pair")
    p.set_defaults(func=cmd_amalgam)
    return parser


def run(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    saved_cap = os.environ.get("CUBIK_CAP")
    if args.cap is not None:
        # commands without a cap argument read it from the environment
        os.environ["CUBIK_CAP"] = str(args.cap)
    try:
        result, code = args.func(args)
    except UsageError as exc:
        stderr.write(f"cubik: error: {exc}\n")
        return 2
    except CubikError as exc:
        stderr.write(io.dumps(exc.to_json()))
        return 1
    finally:
        if saved_cap is None:
            os.environ.pop("CUBIK_CAP", None)
        else:
            os.environ["CUBIK_CAP"] = saved_cap
    text = result if isinstance(result, str) else io.dumps(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
