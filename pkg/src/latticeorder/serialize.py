"""Deterministic text serialization for the CLI stage contracts.

All floats are emitted with 17 significant digits so every double round-trips
exactly and golden files are stable across IEEE-754 platforms.
"""

import json
import math

import numpy as np

from .errors import FileFormatError


def f17(x: float) -> str:
    """Format a finite double with 17 significant digits (round-trip exact)."""
    return format(float(x), ".17g")


def _pairs_block(pairs) -> str:
    # pairs: iterable of (a, b) floats -> "[[a, b], [a, b]]"
    inner = ", ".join(f"[{f17(a)}, {f17(b)}]" for a, b in pairs)
    return f"[{inner}]"


def diagram_to_json(diagram) -> str:
    """Diagram JSON: {"threshold": t, "h0": [[0, d], ...], "h0_infinite": k, "h1": [[b, d], ...]}."""
    h0 = _pairs_block((0.0, d) for d in diagram.h0_deaths)
    h1 = _pairs_block((b, d) for b, d in diagram.h1)
    return (
        "{"
        f'"threshold": {f17(diagram.threshold_used)}, '
        f'"h0": {h0}, '
        f'"h0_infinite": {diagram.infinite_h0_count}, '
        f'"h1": {h1}'
        "}\n"
    )


def diagram_from_json(text: str):
    from .persistence import PersistenceDiagram

    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"diagram JSON: {exc}") from None
    try:
        threshold = float(obj["threshold"])
        h0 = obj["h0"]
        infinite = int(obj["h0_infinite"])
        h1 = obj["h1"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"diagram JSON missing or malformed field: {exc}") from None
    for pair in h0:
        if len(pair) != 2 or float(pair[0]) != 0.0:
            raise FileFormatError(f"diagram JSON: bad h0 pair {pair!r}")
    h0_deaths = np.asarray([float(d) for _, d in h0], dtype=np.float64)
    h1_arr = np.asarray([[float(b), float(d)] for b, d in h1], dtype=np.float64).reshape(-1, 2)
    if not (np.all(np.isfinite(h0_deaths)) and np.all(np.isfinite(h1_arr))):
        raise FileFormatError("diagram JSON: non-finite pair coordinate")
    return PersistenceDiagram(
        h0_deaths=h0_deaths,
        h1=h1_arr,
        infinite_h0_count=infinite,
        threshold_used=threshold,
    )


REPORT_COLUMNS = (
    "n",
    "h0_var",
    "h0_bar",
    "h1_sum",
    "h1_bar",
    "percent_square",
    "percent_hexagonal",
    "category",
)


def report_to_json(scores) -> str:
    ps = "null" if scores.percent_square is None else f17(scores.percent_square)
    ph = "null" if scores.percent_hexagonal is None else f17(scores.percent_hexagonal)
    return (
        "{"
        f'"n": {scores.n}, '
        f'"h0_var": {f17(scores.h0_var)}, '
        f'"h0_bar": {f17(scores.h0_bar)}, '
        f'"h1_sum": {f17(scores.h1_sum)}, '
        f'"h1_bar": {f17(scores.h1_bar)}, '
        f'"percent_square": {ps}, '
        f'"percent_hexagonal": {ph}, '
        f'"category": {json.dumps(scores.category)}'
        "}\n"
    )


def report_csv_row(scores) -> str:
    ps = "" if scores.percent_square is None else f17(scores.percent_square)
    ph = "" if scores.percent_hexagonal is None else f17(scores.percent_hexagonal)
    return ",".join(
        [
            str(scores.n),
            f17(scores.h0_var),
            f17(scores.h0_bar),
            f17(scores.h1_sum),
            f17(scores.h1_bar),
            ps,
            ph,
            scores.category,
        ]
    )


def report_to_csv(scores) -> str:
    return ",".join(REPORT_COLUMNS) + "\n" + report_csv_row(scores) + "\n"


def match_to_json(match) -> str:
    """Match report JSON per the imaging interface contract."""

    def pt(p):
        return f"[{f17(p[0])}, {f17(p[1])}]"

    matched = ", ".join(
        "{"
        f'"nominal": {pt(m.nominal)}, "true": {pt(m.true)}, '
        f'"dx": {f17(m.dx)}, "dy": {f17(m.dy)}'
        "}"
        for m in match.matched
    )
    missed = ", ".join(pt(p) for p in match.missed)
    extra = ", ".join(pt(p) for p in match.extra)
    return f'{{"matched": [{matched}], "missed": [{missed}], "extra": [{extra}]}}\n'


def is_finite_number(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)
