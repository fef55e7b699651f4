"""Command-line front end.  Every run prints one JSON report on stdout.

Exit codes: 0 success or property holds, 2 usage error, 3 property violated,
4 invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import math
import sys
import time
from pathlib import Path

from . import diagrams, generators, metrics, nerve, pieces, walls
from .complex import (
    CellComplex,
    ComplexError,
    Subcomplex,
    check_size,
    complex_from_json,
    complex_to_json,
    validate,
)

OK, USAGE, VIOLATED, INVALID = 0, 2, 3, 4


class UsageError(Exception):
    pass


class InputError(Exception):
    def __init__(self, message: str, code: str = "invalid-input", detail=None):
        super().__init__(message)
        self.code = code
        self.detail = detail


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _clean(obj):
    """JSON-safe copy: infinities become null, tuples and sets become lists."""
    if isinstance(obj, float) and math.isinf(obj):
        return None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_clean(v) for v in obj)
    return obj


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", "unreadable") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}", "bad-json") from exc


def _load_complex(path: str | None) -> CellComplex:
    if path is None:
        raise UsageError("--complex is required for this command")
    cx = complex_from_json(_read_json(path))
    check_size(cx.n_cells)
    problems = validate(cx)
    if problems:
        raise InputError("complex is malformed", "malformed-complex", problems)
    return cx


def _load_sub(cx: CellComplex, path: str) -> Subcomplex:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path} is not a subcomplex id-set", "bad-subcomplex")
    for key, pool in (("vertices", cx.vertex_set), ("edges", cx.edges), ("faces", None)):
        for x in data.get(key, []):
            if key == "faces" and not (x in cx.faces2 or x in cx.edges):
                raise InputError(f"unknown face {x!r} in {path}", "unknown-id")
            if pool is not None and x not in pool:
                raise InputError(f"unknown {key[:-1]} {x!r} in {path}", "unknown-id")
    return Subcomplex.from_json(cx, data)


def _face_arg(cx: CellComplex, fid: str) -> str:
    if fid in cx.faces2 or (fid in cx.edges and not cx.edge_faces[fid]):
        return fid
    if fid in cx.edges:
        raise InputError(f"{fid!r} is a 1-cell on a 2-cell boundary, not a face", "not-a-face")
    raise InputError(f"unknown face {fid!r}", "unknown-id")


def _ids(text: str) -> list[str]:
    """Split a comma list, ignoring commas inside brackets (ids like ``h[0,1]``).

    A JSON array is accepted as well.
    """
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            data = None
        if isinstance(data, list):
            return [str(x) for x in data]
    out, cur, depth = [], [], 0
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [t.strip() for t in out if t.strip()]


# -- commands ---------------------------------------------------------------
# each returns (exit code, result payload, complex used for the digest)


def cmd_validate(a):
    cx = complex_from_json(_read_json(a.complex)) if a.complex else None
    if cx is None:
        raise UsageError("--complex is required for this command")
    problems = validate(cx)
    result = {"valid": not problems, "problems": problems, "counts": _counts(cx)}
    return (VIOLATED if problems else OK), result, cx


def _counts(cx: CellComplex) -> dict:
    return {"vertices": len(cx.vertices), "edges": len(cx.edges), "faces2": len(cx.faces2)}


def cmd_check(a):
    cx = _load_complex(a.complex)
    if a.cn < 1:
        raise UsageError("--cn must be positive")
    if a.strict:
        viol = pieces.check_strict_cn(cx, a.cn)
    else:
        viol = pieces.check_cn(cx, a.cn)
    result = {"n": a.cn, "strict": a.strict, "holds": not viol, "violations": viol}
    return (VIOLATED if viol else OK), result, cx


def cmd_dfdist(a):
    cx = _load_complex(a.complex)
    f1, f2 = _face_arg(cx, getattr(a, "from")), _face_arg(cx, a.to)
    return OK, {"from": f1, "to": f2, "distance": metrics.face_distance(cx, f1, f2)}, cx


def cmd_hull(a):
    cx = _load_complex(a.complex)
    seeds = [_face_arg(cx, f) for f in _ids(a.faces)]
    if not seeds:
        raise UsageError("--faces needs at least one id")
    h = metrics.hull(cx, seeds)
    result = {"seeds": sorted(seeds), "size": len(metrics.sub_faces(cx, h)), "hull": h.to_json()}
    if a.out:
        Path(a.out).write_text(json.dumps(h.to_json(), sort_keys=True) + "\n", encoding="utf-8")
        result["out"] = a.out
    return OK, result, cx


def cmd_quasiconvex(a):
    cx = _load_complex(a.complex)
    sub = _load_sub(cx, a.sub)
    if a.k < 0:
        raise UsageError("--k must be nonnegative")
    w = metrics.quasiconvexity_witness(cx, sub, a.k, a.endpoints)
    result = {"k": a.k, "endpoints": a.endpoints, "holds": w is None}
    if w is not None:
        result["witness"] = {"from": w[0], "to": w[1], "outside": w[2]}
    return (VIOLATED if w else OK), result, cx


def cmd_coarse_diam(a):
    cx = _load_complex(a.complex)
    s1, s2 = _load_sub(cx, a.sub1), _load_sub(cx, a.sub2)
    if a.r < 0:
        raise UsageError("--r must be nonnegative")
    d = metrics.coarse_intersection_diameter(cx, s1, s2, a.r)
    return OK, {"r": a.r, "diameter": d, "empty": d is None}, cx


def cmd_wall(a):
    cx = _load_complex(a.complex)
    if a.edge not in cx.edges:
        raise InputError(f"unknown edge {a.edge!r}", "unknown-id")
    if a.face not in cx.faces2:
        raise InputError(f"{a.face!r} is not a 2-cell", "unknown-id")
    if a.edge not in cx.face_edges[a.face]:
        raise InputError(f"edge {a.edge!r} is not on {a.face!r}", "bad-arguments")
    try:
        if a.all:
            found = []
            for e2 in walls.opposites(cx, a.face, a.edge):
                found.extend(walls.enumerate_walls(cx, a.edge, e2))
            ws = sorted({frozenset(w.edges): w for w in found}.values(), key=lambda w: sorted(w.edges))
        else:
            ws = [walls.wall_from_face(cx, a.edge, a.face)]
    except walls.WallError as exc:
        raise InputError(str(exc), "no-opposite") from exc
    bad = [w for w in ws if not w.ok]
    result = {"count": len(ws), "walls": [w.to_json() for w in ws]}
    if a.out and not a.all:
        Path(a.out).write_text(json.dumps(ws[0].to_json(), sort_keys=True) + "\n", encoding="utf-8")
        result["out"] = a.out
    return (VIOLATED if bad else OK), result, cx


def cmd_halfspaces(a):
    cx = _load_complex(a.complex)
    try:
        w = walls.Wall.from_json(_read_json(a.wall))
    except walls.WallError as exc:
        raise InputError(str(exc), "bad-wall") from exc
    unknown = sorted(e for e in w.edges if e not in cx.edges)
    if unknown:
        raise InputError(f"unknown edge {unknown[0]!r} in wall", "unknown-id")
    viol = walls.wall_violations(cx, w.edges)
    if viol:
        raise InputError("edge set is not a wall", "not-a-wall", viol)
    try:
        hp = walls.halfspaces(cx, w)
    except walls.WallError as exc:
        comps = walls.complement_components(cx, w)
        return VIOLATED, {"components": len(comps), "error": str(exc)}, cx
    car = hp.carrier
    convex = {
        "carrier": metrics.is_face_convex(cx, car),
        "left": metrics.is_face_convex(cx, hp.left),
        "right": metrics.is_face_convex(cx, hp.right),
    }
    result = {"components": 2, "halfspaces": hp.to_json(), "convex": convex}
    return (OK if all(convex.values()) else VIOLATED), result, cx


def _segment_links(cx: CellComplex, faces: list[str]) -> tuple[str, ...] | None:
    options = [sorted(cx.face_edges[x] & cx.face_edges[y]) for x, y in zip(faces, faces[1:])]
    if any(not o for o in options):
        return None
    for choice in itertools.islice(itertools.product(*options), 10000):
        ok = all(pieces.opposite_in(cx, faces[i + 1], choice[i], choice[i + 1]) for i in range(len(choice) - 1))
        if ok:
            return tuple(choice)
    return None


def cmd_wall_segment(a):
    cx = _load_complex(a.complex)
    faces = _ids(a.faces)
    for f in faces:
        if f not in cx.faces2:
            _face_arg(cx, f)
            raise InputError(f"{f!r} is not a 2-cell", "not-a-2-cell")
    if not faces:
        raise UsageError("--faces needs at least one id")
    links = _segment_links(cx, faces)
    if links is None:
        raise InputError("consecutive faces are not linked by opposite 1-cells", "not-a-segment")
    seg = walls.WallSegment(tuple(faces), links)
    try:
        ok = walls.verify_wall_segment(cx, seg)
    except walls.WallError as exc:
        raise InputError(str(exc), "not-a-segment") from exc
    iv = metrics.interval(cx, faces[0], faces[-1])
    result = {"segment": seg.to_json(), "unique_geodesic": ok, "interval": iv.to_json()}
    return (OK if ok else VIOLATED), result, cx


def cmd_nerve(a):
    cx = _load_complex(a.complex)
    g = nerve.nerve(cx)
    data = nerve.nerve_to_json(g)
    result = {"nodes": g.number_of_nodes(), "edges": g.number_of_edges()}
    if a.out:
        Path(a.out).write_text(json.dumps(data, sort_keys=True) + "\n", encoding="utf-8")
        result["out"] = a.out
    else:
        result["nerve"] = data
    return OK, result, cx


def cmd_systolic_check(a):
    cx = _load_complex(a.complex)
    bad = nerve.local_systolic_report(cx, interior_only=a.interior_only)
    checked = len(nerve.interior_faces(cx)) if a.interior_only else len(cx.face_ids)
    result = {"interior_only": a.interior_only, "checked": checked, "six_large": not bad, "violations": bad}
    return (VIOLATED if bad else OK), result, cx


def cmd_pullback(a):
    cx = _load_complex(a.complex)
    verts = _ids(a.vertices)
    for v in verts:
        _face_arg(cx, v)
    try:
        res = nerve.pullback_flat(cx, verts)
    except nerve.NerveError as exc:
        raise InputError(str(exc), "not-a-triangular-patch") from exc
    return (OK if res.ok else VIOLATED), res.to_json(), cx


def cmd_classify(a):
    ambient = _load_complex(a.ambient)
    try:
        diag = diagrams.DiscDiagram.from_json(_read_json(a.diagram))
        check_size(diag.complex.n_cells, "diagram")
        report = diagrams.classify_diagram(diag, ambient)
    except diagrams.DiagramError as exc:
        detail = None
        try:
            detail = diagrams.reducedness_witness(diag, ambient)
        except Exception:
            pass
        raise InputError(str(exc), "bad-diagram", detail) from exc
    result = report.to_json()
    result["diagram_digest"] = diag.complex.digest()
    return (VIOLATED if report.verdict == diagrams.VIOLATION else OK), result, ambient


def cmd_gen(a):
    fam = a.family
    try:
        if fam == "hex":
            fx = generators.gen_hex(a.radius, a.subdiv)
        elif fam == "band":
            fx = generators.gen_band(a.width, a.length, a.subdiv)
        elif fam == "petal":
            fx = generators.gen_petal(a.n)
        elif fam == "thicksquare":
            fx = generators.gen_thick_square()
        elif fam == "blowup":
            fx = generators.gen_blowup(a.m)
        elif fam == "doublehex":
            fx = generators.gen_double_hex(a.radius)
        else:
            fx = generators.gen_tri(a.radius)
    except ValueError as exc:
        if isinstance(exc, ComplexError):
            raise
        raise UsageError(str(exc)) from exc
    cx = fx.complex
    marked = {k: v.to_json() for k, v in sorted(fx.marked.items())}
    result = {"family": fam, "counts": _counts(cx), "marked_names": sorted(marked)}
    if a.out:
        out = Path(a.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "complex.json").write_text(json.dumps(complex_to_json(cx)) + "\n", encoding="utf-8")
        files = {"complex": str(out / "complex.json")}
        for name, data in marked.items():
            p = out / f"marked_{name}.json"
            p.write_text(json.dumps(data, sort_keys=True) + "\n", encoding="utf-8")
            files[name] = str(p)
        result["files"] = files
    else:
        result["complex"] = complex_to_json(cx)
        result["marked"] = marked
    return OK, result, cx


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--complex", help="complex JSON file")
    common.add_argument("--summary", action="store_true", help="also print a one-line summary on stderr")

    p = _Parser(prog="scw", description="Small-cancellation complexes: checks, face metric, walls, nerve.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "check complex well-formedness")
    sp = add("check", cmd_check, "C(n) or strict C(n)")
    sp.add_argument("--cn", type=int, required=True)
    sp.add_argument("--strict", action="store_true")
    sp = add("dfdist", cmd_dfdist, "face distance")
    sp.add_argument("--from", required=True)
    sp.add_argument("--to", required=True)
    sp = add("hull", cmd_hull, "face-convex hull")
    sp.add_argument("--faces", required=True)
    sp.add_argument("--out")
    sp = add("quasiconvex", cmd_quasiconvex, "k-quasiconvexity test")
    sp.add_argument("--sub", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--endpoints", choices=["meeting", "inside"], default="meeting")
    sp = add("coarse-diam", cmd_coarse_diam, "diameter of N_r(A) and N_r(B) overlap")
    sp.add_argument("--sub1", required=True)
    sp.add_argument("--sub2", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp = add("wall", cmd_wall, "extend an edge of a 2-cell to a wall")
    sp.add_argument("--edge", required=True)
    sp.add_argument("--face", required=True)
    sp.add_argument("--all", action="store_true", help="enumerate every wall through the edge")
    sp.add_argument("--out")
    sp = add("halfspaces", cmd_halfspaces, "carrier and halfspaces of a wall")
    sp.add_argument("--wall", required=True)
    sp = add("wall-segment", cmd_wall_segment, "verify a wall-segment is the unique geodesic")
    sp.add_argument("--faces", required=True)
    sp = add("nerve", cmd_nerve, "nerve graph")
    sp.add_argument("--out")
    sp = add("systolic-check", cmd_systolic_check, "6-largeness of nerve links")
    sp.add_argument("--interior-only", action="store_true")
    sp = add("pullback", cmd_pullback, "pull a triangular nerve patch back to a honeycomb")
    sp.add_argument("--vertices", required=True)
    sp = add("greendlinger", cmd_classify, "classify a reduced disc diagram")
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--ambient", required=True)

    gp = sub.add_parser("gen", help="generate a fixture complex")
    gsub = gp.add_subparsers(dest="family", parser_class=_Parser)
    gsub.required = True

    def gadd(name):
        sp = gsub.add_parser(name, parents=[common])
        sp.set_defaults(fn=cmd_gen)
        sp.add_argument("--out", help="directory for complex.json and marked_*.json")
        return sp

    sp = gadd("hex")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--subdiv", type=int, default=1)
    sp = gadd("band")
    sp.add_argument("--width", type=int, required=True)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--subdiv", type=int, default=1)
    gadd("petal").add_argument("--n", type=int, required=True)
    gadd("thicksquare")
    gadd("blowup").add_argument("--m", type=int, required=True)
    gadd("doublehex").add_argument("--radius", type=int, default=3)
    gadd("tri").add_argument("--radius", type=int, required=True)
    return p


def _params(ns: argparse.Namespace) -> dict:
    skip = {"fn", "summary", "command"}
    return {k: v for k, v in sorted(vars(ns).items()) if k not in skip}


def _summary(report: dict, code: int) -> str:
    res = report.get("result") or {}
    keys = ("verdict", "holds", "distance", "diameter", "valid", "six_large", "unique_geodesic", "ok", "count", "size")
    bits = [f"{k}={json.dumps(res[k])}" for k in keys if isinstance(res, dict) and k in res]
    if report.get("error"):
        bits.append(f"error={report['error']['message']}")
    return f"{report['command']}: exit {code}" + (" " + " ".join(bits) if bits else "")


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    """Parse and execute; returns (exit code, report)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    report: dict = {"command": argv[0] if argv else None, "parameters": {}, "digest": None, "result": None}
    t0 = time.perf_counter()
    try:
        ns = build_parser().parse_args(argv)
        report["command"] = ns.command if ns.command != "gen" else f"gen {ns.family}"
        report["parameters"] = _params(ns)
        code, result, cx = ns.fn(ns)
        report["result"] = _clean(result)
        if cx is not None:
            report["digest"] = cx.digest()
    except UsageError as exc:
        code = USAGE
        report["error"] = {"code": "usage", "message": str(exc)}
    except InputError as exc:
        code = INVALID
        report["error"] = {"code": exc.code, "message": str(exc)}
        if exc.detail is not None:
            report["error"]["detail"] = _clean(exc.detail)
    except ComplexError as exc:
        code = INVALID
        kind = "oversize" if exc.__class__.__name__ == "OversizeError" else "invalid-input"
        if isinstance(exc, metrics.NotAFaceError):
            kind = "not-a-face"
        report["error"] = {"code": kind, "message": str(exc)}
    except RecursionError as exc:
        code = INVALID
        report["error"] = {"code": "too-deep", "message": str(exc)}
    report["exit_code"] = code
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    return code, report


def report_digest(report: dict) -> str:
    """Hash of the report without its timing field."""
    body = {k: v for k, v in report.items() if k != "timing"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def main(argv: list[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    code, report = run(args)
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    if "--summary" in args:
        sys.stderr.write(_summary(report, code) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
