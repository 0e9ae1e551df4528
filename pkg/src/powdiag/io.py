"""JSON site-set format and exact rational serialization.

A site set is ``{"dim": n, "sites": [{"p": [q, ...], "w": q}, ...]}``
where each ``q`` is an integer or a ``"num/den"`` string.
"""

from __future__ import annotations

import json
import math
import os
import re
import tempfile
from fractions import Fraction
from pathlib import Path

from .core import SiteSet


def parse_rational(q) -> Fraction:
    if isinstance(q, bool):
        raise ValueError(f"not a rational: {q!r}")
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q.strip())
    raise ValueError(f"not a rational: {q!r} (use an integer or a 'num/den' string)")


def fraction_to_json(q):
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def sites_from_json(data: dict) -> SiteSet:
    if not isinstance(data, dict) or "dim" not in data or "sites" not in data:
        raise ValueError("site set needs 'dim' and 'sites'")
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ValueError("'dim' must be a positive integer")
    pts, ws = [], []
    for k, site in enumerate(data["sites"], start=1):
        try:
            p = tuple(parse_rational(q) for q in site["p"])
            w = parse_rational(site.get("w", 0))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise ValueError(f"site {k}: {e}") from None
        if len(p) != dim:
            raise ValueError(f"site {k}: expected {dim} coordinates, got {len(p)}")
        pts.append(p)
        ws.append(w)
    return SiteSet(dim, tuple(pts), tuple(ws))


def sites_to_json(s: SiteSet) -> dict:
    return {
        "dim": s.dim,
        "sites": [{"p": [fraction_to_json(x) for x in p], "w": fraction_to_json(w)}
                  for p, w in zip(s.points, s.weights)],
    }


def load_sites(path) -> SiteSet:
    with open(path) as fh:
        return sites_from_json(json.load(fh))


_FLOAT_TAG = "\u0001float:"


def _tag_floats(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialize {obj}")
        text = f"{obj:.17g}"
        if not any(ch in text for ch in ".e"):
            text += ".0"
        return _FLOAT_TAG + text
    if isinstance(obj, dict):
        return {k: _tag_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_tag_floats(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """Deterministic JSON; floats carry 17 significant digits."""
    text = json.dumps(_tag_floats(obj), indent=2, sort_keys=True)
    return re.sub(r'"\\u0001float:([^"]*)"', r"\1", text) + "\n"


def write_atomic(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
