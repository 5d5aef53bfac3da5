"""Persistence diagram + histogram SVG, emitted as plain text.

Layout mirrors the usual diagram-with-side-histogram figure: birth/death
scatter with the diagonal on the left (0D and 1D as separate series, essential
bars marked at the top edge), death-value histogram on the right. No plotting
dependency, no timestamps; output is byte-stable for identical diagrams.
"""

from .scores import histogram

_W, _H = 760, 400
_PLOT = (70, 40, 370, 340)  # x0, y0, x1, y1 of the diagram panel
_HIST = (460, 40, 720, 340)
_H0_COLOR = "#4682b4"
_H1_COLOR = "#e07b39"


def _num(x: float) -> str:
    return format(float(x), ".6g")


def render_diagram_svg(diagram, bins: int = 10, title: str = "") -> str:
    x0, y0, x1, y1 = _PLOT
    finite_max = [diagram.threshold_used]
    if len(diagram.h0_deaths):
        finite_max.append(float(diagram.h0_deaths.max()))
    if len(diagram.h1):
        finite_max.append(float(diagram.h1[:, 1].max()))
    vmax = max(finite_max)
    if vmax <= 0:
        vmax = 1.0
    vmax *= 1.05

    def sx(v: float) -> float:
        return x0 + (v / vmax) * (x1 - x0)

    def sy(v: float) -> float:
        return y1 - (v / vmax) * (y1 - y0)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_W // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>'
        )

    # axes and diagonal
    parts.append(
        f'<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{sx(0):.2f}" y1="{sy(0):.2f}" x2="{sx(vmax):.2f}" y2="{sy(vmax):.2f}" '
        'stroke="#999999" stroke-dasharray="4 3" stroke-width="1"/>'
    )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        v = frac * vmax
        parts.append(
            f'<text x="{sx(v):.2f}" y="{y1 + 16}" text-anchor="middle" font-size="10">'
            f"{_num(v)}</text>"
        )
        parts.append(
            f'<text x="{x0 - 6}" y="{sy(v) + 3:.2f}" text-anchor="end" font-size="10">'
            f"{_num(v)}</text>"
        )
    parts.append(
        f'<text x="{(x0 + x1) // 2}" y="{y1 + 32}" text-anchor="middle" font-size="12">birth</text>'
    )
    parts.append(
        f'<text x="18" y="{(y0 + y1) // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {(y0 + y1) // 2})">death</text>'
    )

    for d in diagram.h0_deaths:
        parts.append(
            f'<circle cx="{sx(0.0):.2f}" cy="{sy(float(d)):.2f}" r="3" '
            f'fill="{_H0_COLOR}" fill-opacity="0.7"/>'
        )
    for b, d in diagram.h1:
        parts.append(
            f'<circle cx="{sx(float(b)):.2f}" cy="{sy(float(d)):.2f}" r="3" '
            f'fill="{_H1_COLOR}" fill-opacity="0.7"/>'
        )
    # essential 0D bars: distinct marker pinned to the top edge
    if diagram.infinite_h0_count:
        tx, ty = sx(0.0), y0 - 6
        parts.append(
            f'<path d="M {tx - 5:.2f} {ty + 9:.2f} L {tx + 5:.2f} {ty + 9:.2f} '
            f'L {tx:.2f} {ty:.2f} Z" fill="{_H0_COLOR}"/>'
        )
        parts.append(
            f'<text x="{tx + 9:.2f}" y="{ty + 9:.2f}" font-size="10">'
            f"inf x{diagram.infinite_h0_count}</text>"
        )

    # side histogram of death values, one series per dimension
    hx0, hy0, hx1, hy1 = _HIST
    h0_hist = histogram(diagram, 0, "death", bins)
    h1_hist = histogram(diagram, 1, "death", bins)
    peak = max(1, int(h0_hist.counts.max()), int(h1_hist.counts.max()))
    parts.append(
        f'<line x1="{hx0}" y1="{hy1}" x2="{hx1}" y2="{hy1}" stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{hx0}" y1="{hy0}" x2="{hx0}" y2="{hy1}" stroke="black" stroke-width="1"/>'
    )

    def bars(hist, color, shift):
        out = []
        edges = hist.bin_edges
        span = edges[-1] - edges[0]
        if span <= 0:
            return out
        width = (hx1 - hx0) / len(hist.counts)
        for k, count in enumerate(hist.counts):
            if count == 0:
                continue
            bx = hx0 + k * width + shift
            bh = (int(count) / peak) * (hy1 - hy0)
            out.append(
                f'<rect x="{bx:.2f}" y="{hy1 - bh:.2f}" width="{width / 2:.2f}" '
                f'height="{bh:.2f}" fill="{color}" fill-opacity="0.8"/>'
            )
        return out

    parts += bars(h0_hist, _H0_COLOR, 0.0)
    parts += bars(h1_hist, _H1_COLOR, (hx1 - hx0) / len(h1_hist.counts) / 2)
    parts.append(
        f'<text x="{(hx0 + hx1) // 2}" y="{hy1 + 32}" text-anchor="middle" font-size="12">'
        "death value</text>"
    )
    parts.append(
        f'<text x="{(hx0 + hx1) // 2}" y="{hy1 + 16}" text-anchor="middle" font-size="10">'
        f"peak count {peak}</text>"
    )
    parts.append(
        f'<rect x="{hx0}" y="{hy0 - 24}" width="10" height="10" fill="{_H0_COLOR}"/>'
        f'<text x="{hx0 + 14}" y="{hy0 - 15}" font-size="10">0D</text>'
    )
    parts.append(
        f'<rect x="{hx0 + 60}" y="{hy0 - 24}" width="10" height="10" fill="{_H1_COLOR}"/>'
        f'<text x="{hx0 + 74}" y="{hy0 - 15}" font-size="10">1D</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
