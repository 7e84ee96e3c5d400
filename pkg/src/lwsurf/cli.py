"""Command-line pipeline: generate -> build -> analyze / project / export.

Every stage reads and writes files, so stages compose through the shell.  Exit
status is 0 on success, 1 when an invariant or theorem check fails (or a module
rejects its input) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import euclidean as eu
from . import io
from . import lattice as lt
from . import weingarten as wg
from .analysis import FACE_CSV_HEADER, analyze
from .projection import PROJECTIONS, default_projection, project

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _domain(args) -> lt.LatticeDomain:
    if args.domain is not None:
        return lt.LatticeDomain(*args.domain)
    return lt.LatticeDomain.square(args.half_width)


def _emit(rows, out=None):
    out = out or sys.stdout
    for row in rows:
        out.write("\t".join(str(x) for x in row) + "\n")


# --------------------------------------------------------------------------- commands


def cmd_generate(args) -> int:
    domain = _domain(args)
    if args.kind == "linear":
        fn = lt.gen_linear(args.c, domain)
    else:
        c2 = args.c2
        c1 = lt.catenoid_c1(c2) if args.catenoid else args.c1
        if c1 is None:
            raise ValueError("gen exp needs --c1 or --catenoid")
        fn = lt.gen_exp(c1, c2, domain)
    if args.mobius:
        fn = lt.mobius(fn, *args.mobius)
    report = lt.validate(fn)
    lt.save(fn, args.output)
    _emit([["output", args.output], ["faces", report.residual.size],
           ["max_residual", f"{report.max_residual:.3e}"], ["valid", report.passed]])
    return EXIT_OK if report.passed else EXIT_FAIL


def _summary(result) -> int:
    _emit([["invariant", "value", "tol", "status"]] + [inv.row() for inv in result.invariants])
    rep = result.report
    _emit([["fps_vertices", len(rep.fps_vertices())], ["vertex_kind", result.vertex_kind],
           ["singular_faces", len(rep.singular_face_labels())]])
    for chk in rep.theorem_checks:
        _emit([["theorem", chk.theorem, chk.status, f"checked={chk.checked}", f"witnesses={len(chk.witnesses)}"]])
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_build(args) -> int:
    if args.kind == "parallel":
        mesh, fn = io.load_mesh(args.mesh)
        if (args.rho is None) == (args.theta is None):
            raise ValueError("build parallel needs exactly one of --rho and --theta")
        if args.rho is not None:
            if mesh.ambient not in ("R3", "R21"):
                raise ValueError("--rho offsets apply to R3/R21 meshes; use --theta in H3/S21")
            out = eu.parallel_euclidean(mesh, args.rho)
        else:
            if mesh.ambient not in ("H3", "S21"):
                raise ValueError("--theta offsets apply to H3/S21 meshes; use --rho in R3/R21")
            f_mesh = mesh if mesh.ambient == "H3" else mesh.swapped("H3")
            n_mesh = f_mesh.swapped("S21")
            ft, nt = wg.parallel_hyperbolic(f_mesh, n_mesh, args.theta)
            out = ft if mesh.ambient == "H3" else nt
    else:
        fn = lt.load(args.g)
        if args.kind == "minimal":
            out = eu.build_minimal(fn)
        elif args.kind == "maximal":
            out = eu.build_maximal(fn)
        else:
            t = wg.PRESETS[args.preset] if args.preset else args.t
            if t is None or args.lam is None:
                raise ValueError("build weingarten needs --t (or --preset) and --lambda")
            surface = args.surface or ("n" if args.preset in ("cmc1-S21", "hmc1-S21") else "f")
            params = wg.WeingartenParams(t, args.lam, allow_complex=args.allow_complex)
            f_mesh, n_mesh = wg.build_pair(fn, params)
            out = f_mesh if surface == "f" else n_mesh
    io.save_mesh(args.output, out, fn)
    _emit([["output", args.output], ["ambient", out.ambient]])
    return _summary(analyze(out, fn))


def cmd_analyze(args) -> int:
    mesh, fn = io.load_mesh(args.mesh)
    result = analyze(mesh, fn, check_theorems=args.check_theorems, seed=args.seed)
    if args.report:
        io.save_json(args.report, result.to_dict())
    if args.csv:
        io.write_csv(args.csv, FACE_CSV_HEADER, result.face_rows())
    if args.figure:
        from .plotting import plot_mesh

        kind = args.projection or default_projection(mesh.ambient)
        pm = project(mesh, kind)
        plot_mesh(pm.positions, mesh.domain, args.figure, result.report.fps_vertices(),
                  result.report.singular_face_labels(), title=f"{mesh.meta.get('kind', '')} ({kind})",
                  unit_sphere=kind == "poincare-ball")
    return _summary(result)


def cmd_project(args) -> int:
    mesh, fn = io.load_mesh(args.mesh)
    pm = project(mesh, args.kind)
    io.save_mesh(args.output, pm)
    finite = np.asarray(pm.meta["finite"])
    rows = [["output", args.output], ["projection", pm.meta["projection"]],
            ["vertices_at_infinity", int((~finite).sum())]]
    if pm.meta["projection"] == "poincare-ball":
        r = np.linalg.norm(pm.positions, axis=-1)
        rows += [["inside_unit_ball", int((r < 1).sum())], ["outside_unit_ball", int((r > 1).sum())]]
    _emit(rows)
    if args.figure:
        from .plotting import plot_mesh

        plot_mesh(pm.positions, mesh.domain, args.figure, unit_sphere=pm.meta["projection"] == "poincare-ball")
    return EXIT_OK


def cmd_export(args) -> int:
    mesh, fn = io.load_mesh(args.mesh)
    result = analyze(mesh, fn)
    kind = args.projection or default_projection(mesh.ambient)
    pts = project(mesh, kind).positions
    fps = result.report.fps_vertices()
    faces = result.report.singular_face_labels()
    if args.format == "obj":
        io.write_obj(args.output, pts, mesh.domain, fps, faces,
                     header=f"lwsurf export: {mesh.meta.get('kind', '')} in {mesh.ambient}, projection {kind}")
    elif args.format == "ply":
        io.write_ply(args.output, pts, mesh.domain, fps)
    elif args.format == "csv":
        io.write_csv(args.output, io.VERTEX_CSV_HEADER, io.vertex_rows(pts, mesh.domain, fps))
    else:
        io.save_json(args.output, result.to_dict())
    if args.figure:
        from .plotting import plot_mesh

        plot_mesh(pts, mesh.domain, args.figure, fps, faces, unit_sphere=kind == "poincare-ball")
    _emit([["output", args.output], ["format", args.format], ["fps_vertices", len(fps)],
           ["singular_faces", len(faces)]])
    return EXIT_OK


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lwsurf", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write discrete holomorphic data to JSON")
    g.add_argument("kind", choices=["linear", "exp"])
    g.add_argument("--c", type=parse_complex, default=1.0, help="scale for g = c (m + i n)")
    g.add_argument("--c1", type=float)
    g.add_argument("--c2", type=float, default=2 * np.pi / 5)
    g.add_argument("--catenoid", action="store_true", help="choose c1 so every cross ratio is -1")
    g.add_argument("--half-width", type=int, default=5)
    g.add_argument("--domain", type=int, nargs=4, metavar=("M0", "M1", "N0", "N1"))
    g.add_argument("--mobius", type=parse_complex, nargs=4, metavar=("A", "B", "C", "D"),
                   help="post-compose with (a g + b) / (c g + d)")
    g.add_argument("-o", "--output", default="g.json")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("build", help="build a surface mesh from g data (or a parallel of a mesh)")
    b.add_argument("kind", choices=["minimal", "maximal", "weingarten", "parallel"])
    b.add_argument("--g", help="holomorphic data JSON")
    b.add_argument("--mesh", help="input mesh for 'parallel'")
    b.add_argument("--t", type=float)
    b.add_argument("--lambda", dest="lam", type=float)
    b.add_argument("--preset", choices=sorted(wg.PRESETS))
    b.add_argument("--surface", choices=["f", "n"], help="H3 surface (f) or its S21 Gauss map (n)")
    b.add_argument("--allow-complex", action="store_true", help="accept 1 - lambda alpha < 0")
    b.add_argument("--rho", type=float)
    b.add_argument("--theta", type=float)
    b.add_argument("-o", "--output", default="mesh.json")
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("analyze", help="curvatures, invariants, singularities")
    a.add_argument("--mesh", required=True)
    a.add_argument("--check-theorems", action="store_true")
    a.add_argument("--report", help="write the full JSON report here")
    a.add_argument("--csv", help="write per-face H, K and singular flags here")
    a.add_argument("--figure", help="render the projected mesh (PNG/PDF/SVG by extension)")
    a.add_argument("--projection", choices=PROJECTIONS)
    a.set_defaults(func=cmd_analyze)

    pr = sub.add_parser("project", help="map a mesh to Euclidean 3-space")
    pr.add_argument("--mesh", required=True)
    pr.add_argument("--kind", choices=PROJECTIONS)
    pr.add_argument("--figure")
    pr.add_argument("-o", "--output", default="projected.json")
    pr.set_defaults(func=cmd_project)

    e = sub.add_parser("export", help="write OBJ / PLY / JSON / CSV with singularity annotations")
    e.add_argument("--mesh", required=True)
    e.add_argument("--format", choices=["obj", "ply", "json", "csv"], default="obj")
    e.add_argument("--projection", choices=PROJECTIONS)
    e.add_argument("--figure")
    e.add_argument("-o", "--output", required=True)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "build":
        needs = "mesh" if args.kind == "parallel" else "g"
        if getattr(args, needs) is None:
            parser.error(f"build {args.kind} requires --{needs}")
    try:
        return args.func(args)
    except (ValueError, OSError, ZeroDivisionError) as exc:
        print(f"lwsurf: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
