"""Static SVG and CSV reporting for partition results.

Write-only output: a unit-square panel with the curve, labeled partition
points, and the two increment sequences overlaid as step plots.
"""

from .scalar import as_float


def _fmt(x):
    return f"{as_float(x):.6g}"


def _flip(y):
    return 1.0 - as_float(y)


def _polyline(points, stroke, width, dash=None):
    coords = " ".join(f"{as_float(x):.6g},{_flip(y):.6g}" for x, y in points)
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (
        f'<polyline fill="none" stroke="{stroke}" stroke-width="{width}"'
        f'{dash_attr} points="{coords}"/>'
    )


def _staircase(values, stroke):
    n = len(values)
    pts = []
    for i, v in enumerate(values):
        pts.append((i / n, v))
        pts.append(((i + 1) / n, v))
    return _polyline(pts, stroke, 0.004, dash="0.01,0.006")


def render_partition_svg(curve, points, dx, dy):
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-0.08 -0.08 1.16 1.16">',
        '<rect x="0" y="0" width="1" height="1" fill="#fcfcfc" stroke="#999" '
        'stroke-width="0.003"/>',
        _polyline(((0, 0), (1, 1)), "#ddd", 0.003),
    ]
    if curve is not None:
        parts.append(_polyline(curve.vertices, "#1f77b4", 0.008))
    parts.append(_staircase(dx, "#2ca02c"))
    parts.append(_staircase(dy, "#d62728"))
    for i, (x, y) in enumerate(points):
        parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_flip(y):.6g}" r="0.012" '
            'fill="#d62728" stroke="#7a1416" stroke-width="0.003"/>'
        )
        parts.append(
            f'<text x="{as_float(x) + 0.018:.6g}" y="{_flip(y) - 0.012:.6g}" '
            'font-size="0.045" fill="#333">'
            f"A{i}</text>"
        )
    parts.append(
        '<text x="0.02" y="-0.03" font-size="0.04" fill="#2ca02c">dx steps</text>'
    )
    parts.append(
        '<text x="0.25" y="-0.03" font-size="0.04" fill="#d62728">dy steps</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_increments_csv(dx, dy, mode="float"):
    from .fileio import write_number

    lines = ["i,dx,dy"]
    for i, (a, b) in enumerate(zip(dx, dy)):
        lines.append(f"{i},{write_number(a, mode)},{write_number(b, mode)}")
    return "\n".join(lines) + "\n"
