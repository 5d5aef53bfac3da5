"""Order scores: how square or hexagonal a normalized lattice cloud is.

h0_bar = 4 * population variance of the finite 0D lifetimes (0 for both
perfect lattice types, the 4 rescales the 1/4 variance ceiling to 1).
h1_bar = total 1D lifetime / 2(sqrt(2)-1)(n-1), the total for a perfect
n x n square lattice in [-1,1]^2, so square -> 1 and hexagonal -> 0. With
h0_bar near zero, 100*h1_bar reads as the percentage of square lattice.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidSpecError
from .persistence import PersistenceDiagram

#: h0_bar gate below which the percent-square reading applies
EPSILON_SQUARE = 0.01
#: margin for "close to zero" / "close to one" in the categorical reading
EPSILON_CATEGORY = 0.1

CATEGORY_SQUARE = "mostly square"
CATEGORY_HEXAGONAL = "mostly hexagonal"
CATEGORY_BETWEEN = "between square and hexagonal"
CATEGORY_NEITHER = "neither square nor hexagonal"


def perfect_square_h1_sum(n: int) -> float:
    """Total loop lifetime of a perfect n x n square lattice in [-1,1]^2:
    (n-1)^2 loops, each alive from 2/(n-1) to 2*sqrt(2)/(n-1)."""
    return 2.0 * (math.sqrt(2.0) - 1.0) * (n - 1)


def h0_variance(diagram: PersistenceDiagram) -> float:
    """Population variance of the finite 0D lifetimes (the essential bar is excluded)."""
    if len(diagram.h0_deaths) < 2:
        raise InsufficientDataError("need at least two finite 0D pairs for a variance")
    return float(np.var(diagram.h0_deaths))


def h0_score(diagram: PersistenceDiagram) -> float:
    return 4.0 * h0_variance(diagram)


def h1_sum(diagram: PersistenceDiagram) -> float:
    return float(np.sum(diagram.h1_lifetimes)) if len(diagram.h1) else 0.0


def h1_score(diagram: PersistenceDiagram, n: int) -> float:
    if int(n) != n or n < 2:
        raise InvalidSpecError(f"normalization side n must be an integer >= 2, got {n!r}")
    return h1_sum(diagram) / perfect_square_h1_sum(int(n))


def infer_grid_side(diagram: PersistenceDiagram) -> int:
    """Default n = round(sqrt(point count)); rejected unless the count is square."""
    pts = diagram.n_points
    side = round(math.sqrt(pts))
    if side * side != pts or side < 2:
        raise InvalidSpecError(
            f"point count {pts} is not an n x n grid; pass the normalization side n explicitly"
        )
    return side


@dataclass(frozen=True)
class OrderScores:
    """The score pair plus the percent-square reading when h0_bar permits it."""

    n: int
    h0_var: float
    h0_bar: float
    h1_sum: float
    h1_bar: float
    percent_square: float | None
    percent_hexagonal: float | None
    category: str
    summary: str


def interpret(
    h0_bar: float,
    h1_bar: float,
    eps_square: float = EPSILON_SQUARE,
    eps_category: float = EPSILON_CATEGORY,
) -> tuple[float | None, float | None, str, str]:
    """Percent-square reading (only valid for h0_bar ~ 0) and the category."""
    if h0_bar < eps_square:
        percent_square = min(max(100.0 * h1_bar, 0.0), 100.0)
        percent_hexagonal = 100.0 - percent_square
        if h1_bar <= eps_category:
            category = CATEGORY_HEXAGONAL
        elif h1_bar >= 1.0 - eps_category:
            category = CATEGORY_SQUARE
        else:
            category = CATEGORY_BETWEEN
        summary = (
            f"{percent_square:.1f}% square / {percent_hexagonal:.1f}% hexagonal ({category})"
        )
        return percent_square, percent_hexagonal, category, summary
    summary = f"{CATEGORY_NEITHER}: h0_bar={h0_bar:.3g} exceeds the gate {eps_square:g}"
    return None, None, CATEGORY_NEITHER, summary


def compute_scores(
    diagram: PersistenceDiagram,
    n: int | None = None,
    eps_square: float = EPSILON_SQUARE,
    eps_category: float = EPSILON_CATEGORY,
) -> OrderScores:
    side = infer_grid_side(diagram) if n is None else int(n)
    var = h0_variance(diagram)
    h0_bar = 4.0 * var
    total = h1_sum(diagram)
    h1_bar = h1_score(diagram, side)
    ps, ph, category, summary = interpret(h0_bar, h1_bar, eps_square, eps_category)
    return OrderScores(
        n=side,
        h0_var=var,
        h0_bar=h0_bar,
        h1_sum=total,
        h1_bar=h1_bar,
        percent_square=ps,
        percent_hexagonal=ph,
        category=category,
        summary=summary,
    )


@dataclass(frozen=True)
class DiagramHistogram:
    """Uniform-bin histogram of one diagram statistic; last bin right-closed."""

    dim: int
    statistic: str
    bin_edges: np.ndarray
    counts: np.ndarray


def histogram(
    diagram: PersistenceDiagram, dim: int, statistic: str = "death", bins: int = 10
) -> DiagramHistogram:
    """Histogram of deaths or lifetimes over [0, max]; empty dims degenerate to one zero bin."""
    if bins < 1:
        raise InvalidSpecError(f"bins must be >= 1, got {bins}")
    if dim not in (0, 1):
        raise InvalidSpecError(f"dim must be 0 or 1, got {dim}")
    if statistic not in ("death", "lifetime"):
        raise InvalidSpecError(f"statistic must be 'death' or 'lifetime', got {statistic!r}")
    if dim == 0:
        data = diagram.h0_deaths  # births are 0, so death == lifetime
    else:
        data = diagram.h1[:, 1] if statistic == "death" else diagram.h1_lifetimes
    if len(data) == 0:
        return DiagramHistogram(
            dim=dim,
            statistic=statistic,
            bin_edges=np.zeros(2, dtype=np.float64),
            counts=np.zeros(1, dtype=np.int64),
        )
    counts, edges = np.histogram(data, bins=bins, range=(0.0, float(data.max())))
    return DiagramHistogram(dim=dim, statistic=statistic, bin_edges=edges, counts=counts)
