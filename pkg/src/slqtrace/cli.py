"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .qmatrix import QMatrixError
from .qtorus import PresentationError, vertex_key
from .qtrace import (
    CCW,
    CW,
    SimpleArcSpec,
    StatedCornerArc,
    TraceError,
    compatible_paths,
    path_exponent,
    projection_pr,
    trace_arc,
    trace_corner,
    trace_g,
    trace_g_triangle,
    transport_matrix,
    transport_report,
)
from .structmat import Report, StructureError, balanced, surface_matrices, triangle_matrices, verify_identities
from .surface import SurfaceError, load_surface

INPUT_ERRORS = (SurfaceError, TraceError, StructureError, QMatrixError, PresentationError, ValueError)


class InputError(Exception):
    pass


def _emit(args, payload, text: str) -> None:
    if args.out == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _surface(args):
    S = load_surface(args.surface)
    if S.n is not None and S.n != args.n:
        raise InputError(f"surface file declares n={S.n} but --n {args.n} was given")
    return S


def _orientation(s: str) -> str:
    return {"ccw": CCW, "cw": CW}[s]


def _matrix_block(Q, P, K, H) -> dict:
    return {"Q": Q.to_json(), "P": P.to_json(), "K": K.to_json(), "H": H.to_json()}


def cmd_matrices(args):
    S = _surface(args)
    M = surface_matrices(S, args.n)
    payload = {"reduced": _matrix_block(M.Qbar, M.Pbar, M.Kbar, M.Hbar)}
    text = []
    for name, mat in (("Qbar", M.Qbar), ("Pbar", M.Pbar), ("Kbar", M.Kbar), ("Hbar", M.Hbar)):
        text.append(f"== {name}\n{mat.to_text()}")
    if args.extended:
        payload["extended"] = _matrix_block(M.Q, M.P, M.K, M.H)
        for name, mat in (("Q", M.Q), ("P", M.P), ("K", M.K), ("H", M.H)):
            text.append(f"== {name}\n{mat.to_text()}")
    _emit(args, payload, "\n".join(text))
    return 0


def cmd_verify(args):
    rep = Report()
    if args.suite in ("matrices", "all"):
        S = _surface(args)
        rep.extend(verify_identities(surface_matrices(S, args.n)))
        if len(S.faces) == 1 and not S.gluings:
            rep.extend(verify_identities(triangle_matrices(args.n)))
    if args.suite in ("transport", "all"):
        rep.extend(transport_report(args.n), "transport: ")
    _emit(args, rep.to_json(), rep.to_text())
    return 0 if rep.ok else 1


def _parse_vector(spec: str) -> list:
    try:
        return [int(x) for x in spec.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise InputError(f"vector must be comma-separated integers: {exc}") from None


def cmd_balanced(args):
    S = _surface(args)
    lat = balanced(S, args.n, extended=args.extended)
    labels = list(lat.labels)
    if args.vector is None:
        payload = {"labels": labels, "basis": lat.basis()}
        text = f"# labels: {', '.join(labels)}\n" + "\n".join(" ".join(map(str, r)) for r in lat.basis())
        _emit(args, payload, text)
        return 0
    k = _parse_vector(args.vector)
    if len(k) != len(labels):
        raise InputError(f"vector has {len(k)} entries, expected {len(labels)}")
    viol = lat.violation(k)
    payload = {
        "labels": labels,
        "face_test": viol is None,
        "h_test": lat.h_test(k),
        "row_span": lat.in_row_span(k),
    }
    if viol is not None:
        payload["violation"] = [viol[0], vertex_key(viol[1])]
    text = "\n".join(f"{key}: {payload[key]}" for key in ("face_test", "h_test", "row_span"))
    _emit(args, payload, text)
    return 0


def _corner_arc(args) -> StatedCornerArc:
    return StatedCornerArc(args.corner, _orientation(args.oriented), args.i, args.j)


def cmd_paths(args):
    arc = _corner_arc(args)
    paths = compatible_paths(args.n, arc)
    items = []
    for p in paths:
        k = path_exponent(args.n, p, arc)
        items.append({
            "steps": list(p.steps),
            "triangles": [f"{t[0]}{t[1]},{t[2]},{t[3]}" for t in p.nodes],
            "exponent": {vertex_key(v): e for v, e in k.items() if e},
        })
    text = [f"{len(items)} compatible path(s)"]
    text += [" ".join(it["steps"]) or "(no turns)" for it in items]
    _emit(args, {"count": len(items), "paths": items}, "\n".join(text))
    return 0


def cmd_corner(args):
    e = trace_corner(args.n, _corner_arc(args))
    _emit(args, e.to_json(), e.to_text() or "0")
    return 0


def cmd_transport(args):
    M = transport_matrix(args.n, args.corner, _orientation(args.oriented))
    _emit(args, M.to_json(), M.to_text())
    return 0


def _load_arc(spec: str) -> SimpleArcSpec:
    text = spec
    if not spec.lstrip().startswith("{"):
        try:
            with open(spec, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read arc file {spec!r}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"arc is not valid JSON: {exc}") from None
    return SimpleArcSpec.from_json(data)


def cmd_arc(args):
    S = _surface(args)
    arc = _load_arc(args.arc)
    e = trace_arc(S, args.n, arc, extended=args.extended or args.project)
    if args.project:
        e = projection_pr(S, args.n, e)
    _emit(args, e.to_json(), e.to_text() or "0")
    return 0


def cmd_frame(args):
    if args.surface == "triangle" and args.vertex and args.vertex.count(",") == 2 and ":" not in args.vertex:
        try:
            v = tuple(int(x) for x in args.vertex.split(","))
        except ValueError:
            raise InputError(f"bad vertex {args.vertex!r}") from None
        e = trace_g_triangle(args.n, v)
        _emit(args, e.to_json(), e.to_text())
        return 0
    S = _surface(args)
    if args.vertex is None:
        raise InputError("--vertex is required")
    e = trace_g(S, args.n, args.vertex, reduced=not args.extended)
    _emit(args, e.to_json(), e.to_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="rank (n >= 2)")
    common.add_argument("--out", choices=("json", "text"), default="json")
    surf = argparse.ArgumentParser(add_help=False)
    surf.add_argument("--surface", default="triangle", help="canned name or surface JSON file")
    corner = argparse.ArgumentParser(add_help=False)
    corner.add_argument("--corner", type=int, choices=(1, 2, 3), required=True)
    corner.add_argument("--oriented", choices=("ccw", "cw"), default="ccw")

    p = argparse.ArgumentParser(prog="slqtrace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("matrices", parents=[common, surf], help="structure matrices")
    m.add_argument("--extended", action="store_true")
    m.set_defaults(func=cmd_matrices)

    v = sub.add_parser("verify", parents=[common, surf], help="run identity checks")
    v.add_argument("--suite", choices=("matrices", "transport", "all"), default="matrices")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("balanced", parents=[common, surf], help="balanced-lattice tests")
    b.add_argument("--vector", help="comma-separated exponents in label order")
    b.add_argument("--extended", action="store_true")
    b.set_defaults(func=cmd_balanced)

    for name, func, helptext in (
        ("paths", cmd_paths, "compatible paths of a corner arc"),
        ("corner", cmd_corner, "trace of a stated corner arc"),
    ):
        c = sub.add_parser(name, parents=[common, corner], help=helptext)
        c.add_argument("--i", type=int, required=True)
        c.add_argument("--j", type=int, required=True)
        c.set_defaults(func=func)

    t = sub.add_parser("transport", parents=[common, corner], help="transport matrix")
    t.set_defaults(func=cmd_transport)

    a = sub.add_parser("arc", parents=[common, surf], help="trace of a simple stated arc")
    a.add_argument("--arc", required=True, help="arc JSON file or inline JSON")
    a.add_argument("--extended", action="store_true", help="trace on the extended surface")
    a.add_argument("--project", action="store_true", help="extended trace followed by pr")
    a.set_defaults(func=cmd_arc)

    f = sub.add_parser("frame", parents=[common, surf], help="trace of a frame element g_v")
    f.add_argument("--vertex", help="vertex id, or i,j,k on the triangle")
    f.add_argument("--extended", action="store_true")
    f.set_defaults(func=cmd_frame)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.n < 2:
            parser.error("--n must be at least 2")
    except SystemExit as exc:  # argparse reports usage errors this way
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (InputError, *INPUT_ERRORS) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
