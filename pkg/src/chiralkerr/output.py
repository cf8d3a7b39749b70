"""Result emission: CSV (9 significant digits, fixed column order) and SVG.

CSV output is byte-deterministic for identical inputs. The SVG writer
produces a small self-contained line plot (SVG 1.1, well-formed XML) of the
transmission and fringe columns.
"""

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import ValidationError
from .sweeps import SweepResult, SweepRow

_FORMATS = ("csv", "svg")

_SVG_SERIES = (
    ("T_co", 1, "#1f77b4"),
    ("T_cou", 2, "#d62728"),
    ("p2_intensity", 7, "#2ca02c"),
    ("p4_intensity", 8, "#9467bd"),
)

_WIDTH, _HEIGHT = 800, 500
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 20, 40, 50


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def emit(result: SweepResult, fmt: str, path) -> None:
    """Write ``result`` to ``path`` in the requested format."""
    if fmt not in _FORMATS:
        raise ValidationError(f"format must be one of {_FORMATS}")
    if fmt == "csv":
        Path(path).write_text(render_csv(result))
    else:
        Path(path).write_text(render_svg(result))


def render_csv(result: SweepResult) -> str:
    lines = [",".join(result.columns)]
    for row in result.rows:
        lines.append(",".join(_fmt(v) for v in row.as_tuple()))
    return "\n".join(lines) + "\n"


def read_csv(path) -> SweepResult:
    """Parse a CSV written by :func:`emit` back into a SweepResult."""
    text = Path(path).read_text().strip().splitlines()
    if not text or text[0].split(",") != list(SweepResult.columns):
        raise ValidationError(f"{path} does not carry the expected sweep columns")
    rows = []
    for line in text[1:]:
        values = [float(v) for v in line.split(",")]
        rows.append(SweepRow(*values))
    return SweepResult(axis="axis", rows=tuple(rows))


def _finite(values):
    return [v for v in values if math.isfinite(v)]


def render_svg(result: SweepResult) -> str:
    """Simple multi-series line plot of the transmission/fringe columns."""
    rows = [r.as_tuple() for r in result.rows]
    xs = [r[0] for r in rows]
    x_fin = _finite(xs) or [0.0, 1.0]
    x_lo, x_hi = min(x_fin), max(x_fin)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    y_all = _finite([r[idx] for _, idx, _ in _SVG_SERIES for r in rows]) or [0.0, 1.0]
    y_lo, y_hi = min(y_all + [0.0]), max(y_all + [1.0])
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(x):
        return _MARGIN_L + plot_w * (x - x_lo) / (x_hi - x_lo)

    def sy(y):
        return _MARGIN_T + plot_h * (1.0 - (y - y_lo) / (y_hi - y_lo))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black" stroke-width="1"/>',
        f'<text x="{_WIDTH / 2:.1f}" y="{_HEIGHT - 12}" text-anchor="middle" '
        f'font-size="14">{escape(result.axis)}</text>',
        f'<text x="18" y="{_HEIGHT / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {_HEIGHT / 2:.1f})">intensity</text>',
        f'<text x="{_MARGIN_L}" y="{_HEIGHT - _MARGIN_B + 18}" text-anchor="middle" '
        f'font-size="11">{escape(_fmt(x_lo))}</text>',
        f'<text x="{_WIDTH - _MARGIN_R}" y="{_HEIGHT - _MARGIN_B + 18}" '
        f'text-anchor="middle" font-size="11">{escape(_fmt(x_hi))}</text>',
        f'<text x="{_MARGIN_L - 8}" y="{_MARGIN_T + plot_h + 4}" text-anchor="end" '
        f'font-size="11">{escape(_fmt(y_lo))}</text>',
        f'<text x="{_MARGIN_L - 8}" y="{_MARGIN_T + 4}" text-anchor="end" '
        f'font-size="11">{escape(_fmt(y_hi))}</text>',
    ]
    for pos, (name, idx, color) in enumerate(_SVG_SERIES):
        points = " ".join(
            f"{sx(r[0]):.2f},{sy(r[idx]):.2f}"
            for r in rows
            if math.isfinite(r[0]) and math.isfinite(r[idx])
        )
        if points:
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                         f'points="{points}"/>')
        lx = _MARGIN_L + 10 + 180 * pos
        parts.append(f'<line x1="{lx}" y1="{_MARGIN_T - 14}" x2="{lx + 24}" '
                     f'y2="{_MARGIN_T - 14}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 30}" y="{_MARGIN_T - 10}" font-size="12">'
                     f'{escape(name)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
