"""``powdiag`` command line.

Exit status: 0 success, 2 invalid input or options, 3 refusal (the input is
valid but the requested construction does not apply), 4 internal failure
or a failed consistency check.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import warnings
from fractions import Fraction

from . import io
from .core import lower_envelope, to_affine, upper_envelope
from .diagram import build_power_diagram, gateau_pairing
from .errors import DegenerateError, DisappearingVertexError, FillError

EXIT_OK, EXIT_INVALID, EXIT_REFUSED, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def _threads() -> int | None:
    raw = os.environ.get("POWDIAG_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"POWDIAG_THREADS must be a positive integer, got {raw!r}")
    return n


def _emit(args, payload: dict, svg: str | None = None) -> None:
    text = io.dumps(payload)
    if getattr(args, "json", None):
        io.write_atomic(args.json, text)
    else:
        sys.stdout.write(text)
    if svg is not None and getattr(args, "svg", None):
        io.write_atomic(args.svg, svg)


def _window(values, what="--viewport"):
    if values is None:
        return None
    x0, y0, x1, y1 = values
    if not (x1 > x0 and y1 > y0):
        raise UsageError(f"{what} needs x0 < x1 and y0 < y1")
    return values


def _require_plane(s, what):
    if s.dim != 2:
        raise UsageError(f"{what} is only available for planar input (dim 2)")


def cmd_tri(args) -> int:
    from .hull import coherent_triangulation, disappearing_vertices, is_general_position

    s = io.load_sites(args.input)
    tri = coherent_triangulation(s)
    out = tri.to_json()
    out["disappearing"] = sorted(disappearing_vertices(s, tri))
    out["general_position"] = is_general_position(s)
    _emit(args, out)
    return EXIT_OK


def cmd_cells(args) -> int:
    from .svg import power_diagram_svg

    s = io.load_sites(args.input)
    vp = _window(args.viewport)
    if args.svg:
        _require_plane(s, "--svg")
        if vp is None:
            raise UsageError("--svg needs --viewport")
    d = build_power_diagram(s)
    svg = power_diagram_svg(d, vp, weights=s.weights) if args.svg else None
    _emit(args, d.to_json(), svg)
    return EXIT_OK


def cmd_korder(args) -> int:
    from .korder import build_korder
    from .svg import power_diagram_svg

    s = io.load_sites(args.input)
    if not 1 <= args.k <= len(s):
        raise UsageError(f"-k must lie in 1..{len(s)}")
    vp = _window(args.viewport)
    if args.svg:
        _require_plane(s, "--svg")
        if vp is None:
            raise UsageError("--svg needs --viewport")
    kd = build_korder(s, args.k)
    svg = None
    if args.svg:
        svg = power_diagram_svg(kd.diagram, vp,
                                names=lambda m: "".join(map(str, sorted(kd.subset_of(m)))))
    _emit(args, kd.to_json(), svg)
    return EXIT_OK


def cmd_morse(args) -> int:
    from .morse import critical_points_bruteforce, morse_poset

    s = io.load_sites(args.input)
    if args.oracle:
        _require_plane(s, "--oracle")
    mp = morse_poset(s)
    out = mp.to_json()
    if args.oracle:
        cps = critical_points_bruteforce(s, resolution=args.grid)
        out["oracle"] = [{"point": list(cp.point), "index": cp.index} for cp in cps]
        want = sorted(mp.active.values())
        out["oracle_agrees"] = sorted(cp.index for cp in cps) == want
    _emit(args, out)
    return EXIT_OK


def cmd_dvf(args) -> int:
    from .dmt import build_dvf, verify_acyclic
    from .svg import dvf_svg

    s = io.load_sites(args.input)
    if args.svg:
        _require_plane(s, "--svg")
    v = build_dvf(s)
    ok, cycle = verify_acyclic(v)
    if not ok:
        raise AssertionError(f"closed V-path {[sorted(c) for c in cycle]}")
    svg = dvf_svg(s.points, v.complex, v.arrows, v.critical) if args.svg else None
    _emit(args, v.to_json(), svg)
    return EXIT_OK


def cmd_medial(args) -> int:
    import numpy as np

    from .svg import medial_svg
    from .tropic import ShapeCurve, dequant_field

    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    if args.samples < 16:
        raise UsageError("--samples must be at least 16")
    if args.h is not None and not args.h > 1:
        raise UsageError("--h must exceed 1")
    if args.shape == "ellipse":
        if args.a <= 0 or args.b <= 0:
            raise UsageError("--a and --b must be positive")
        curve = ShapeCurve.ellipse(args.a, args.b, args.samples)
        ext = (args.a, args.b)
    else:
        if args.r <= 0:
            raise UsageError("--r must be positive")
        curve = ShapeCurve.circle(args.r, args.samples)
        ext = (args.r, args.r)
    window = _window(args.window, "--window") or (-1.5 * ext[0], -1.5 * ext[1],
                                                   1.5 * ext[0], 1.5 * ext[1])
    field = dequant_field(curve, window, args.grid, tau=args.tau, h=args.h)
    out = {
        "shape": args.shape,
        "window": [float(v) for v in window],
        "grid": args.grid,
        "step": field.step,
        "corners": [[float(x), float(y)] for x, y in field.corner_points()],
    }
    if args.h is not None:
        out["h"] = float(args.h)
        out["dequant_max_gap"] = float(np.max(np.abs(field.dequant - field.values)))
    _emit(args, out, medial_svg(curve, field) if args.svg else None)
    return EXIT_OK


def _check_report(s, seed: int, samples: int) -> list[dict]:
    from .dmt import build_dvf, jump_monotonicity, verify_acyclic
    from .hull import coherent_triangulation, disappearing_vertices, is_general_position
    from .morse import morse_poset

    rng = random.Random(seed)
    a = to_affine(s)
    tri = coherent_triangulation(a)
    checks = []

    def record(name, ok, detail=""):
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    lo = [min(p[k] for p in s.points) - 1 for k in range(s.dim)]
    hi = [max(p[k] for p in s.points) + 1 for k in range(s.dim)]
    bad = 0
    for _ in range(samples):
        x = tuple(lo[k] + (hi[k] - lo[k]) * Fraction(rng.randrange(10**6), 10**6)
                  for k in range(s.dim))
        bad += lower_envelope(s, x)[1] != upper_envelope(a, x)[1]
    record("envelope equivalence", bad == 0, f"{samples} points, {bad} mismatches")

    bad = 0
    pairs = 0
    for f in tri.lower_facets:
        for i in f.label:
            pairs += 1
            bad += gateau_pairing(a, f.gradient, a.gradients[i - 1], tri) != 0
    record("duality F = 0", bad == 0, f"{pairs} vertex pairs, {bad} nonzero")

    euler = tri.euler_characteristic()
    record("triangulation Euler characteristic", euler == 1, f"{euler}")

    counts = [c for _, _, c in tri.codim2_intervals()]
    gp = is_general_position(s)
    ok = all(c >= 2 for c in counts) and (not gp or all(c == 2 for c in counts))
    record("codim-2 intervals", ok, f"{len(counts)} intervals")

    gone = disappearing_vertices(s, tri)
    if gone:
        record("Morse checks", True, f"skipped: disappearing vertices {sorted(gone)}")
        return checks
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mp = morse_poset(a, tri)
    record("Morse Euler", mp.euler == 1, f"{mp.euler}")
    v = build_dvf(a, mp)
    inactive = set(tri.cells) - set(mp.active)
    record("Up-set partition", set(v.owner) == inactive and v.critical == set(mp.active),
           f"{len(inactive)} inactive cells in {len(set(v.owner.values()))} Up sets")
    ok, cycle = verify_acyclic(v)
    record("acyclic", ok, "" if ok else f"cycle {[sorted(c) for c in cycle]}")
    record("jump monotonicity", jump_monotonicity(a, v))
    return checks


def cmd_check(args) -> int:
    s = io.load_sites(args.input)
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    checks = _check_report(s, args.seed, args.samples)
    ok = all(c["ok"] for c in checks)
    _emit(args, {"ok": ok, "seed": args.seed, "checks": checks})
    for c in checks:
        if not c["ok"]:
            print(f"check failed: {c['name']} ({c['detail']})", file=sys.stderr)
    return EXIT_OK if ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="powdiag",
                                description="Power diagrams, coherent triangulations "
                                            "and their discrete Morse theory.")
    sub = p.add_subparsers(dest="command", required=True)

    def site_cmd(name, help_, func):
        q = sub.add_parser(name, help=help_)
        q.add_argument("input", help="site set JSON")
        q.add_argument("--json", metavar="PATH", help="write JSON here instead of stdout")
        q.set_defaults(func=func)
        return q

    site_cmd("tri", "coherent triangulation", cmd_tri)
    q = site_cmd("cells", "power diagram cells", cmd_cells)
    q.add_argument("--viewport", nargs=4, type=Fraction, metavar=("X0", "Y0", "X1", "Y1"))
    q.add_argument("--svg", metavar="PATH")
    q = site_cmd("korder", "k-th order power diagram", cmd_korder)
    q.add_argument("-k", type=int, required=True)
    q.add_argument("--viewport", nargs=4, type=Fraction, metavar=("X0", "Y0", "X1", "Y1"))
    q.add_argument("--svg", metavar="PATH")
    q = site_cmd("morse", "Morse poset of the weighted distance", cmd_morse)
    q.add_argument("--oracle", action="store_true", help="compare with a grid oracle (2-D)")
    q.add_argument("--grid", type=int, default=400)
    q = site_cmd("dvf", "discrete vector field", cmd_dvf)
    q.add_argument("--svg", metavar="PATH")
    q = site_cmd("check", "run the cross-module consistency checks", cmd_check)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--samples", type=int, default=200)

    q = sub.add_parser("medial", help="medial axis as the corner locus of a curve envelope")
    q.add_argument("--shape", choices=["ellipse", "circle"], default="ellipse")
    q.add_argument("--a", type=float, default=2.0)
    q.add_argument("--b", type=float, default=1.0)
    q.add_argument("--r", type=float, default=1.0)
    q.add_argument("--grid", type=int, default=400)
    q.add_argument("--samples", type=int, default=1024)
    q.add_argument("--window", nargs=4, type=float, metavar=("X0", "Y0", "X1", "Y1"))
    q.add_argument("--h", type=float, help="also evaluate the dequantized envelope")
    q.add_argument("--tau", type=float, help="fixed tie tolerance on envelope values")
    q.add_argument("--json", metavar="PATH")
    q.add_argument("--svg", metavar="PATH")
    q.set_defaults(func=cmd_medial)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INVALID
    try:
        _threads()
        return args.func(args)
    except (DisappearingVertexError, DegenerateError, FillError) as e:
        print(f"powdiag: refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except (UsageError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"powdiag: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as e:  # noqa: BLE001 - mapped to the internal failure code
        print(f"powdiag: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
