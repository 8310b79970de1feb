"""Static ladder-diagram figures: SVG and plain text.

Cells ``(i, j)`` are laid out with row ``i`` downward and column ``j`` to the
right; the frozen diagonal is drawn dashed and labelled with its eigenvalue.
Boxes ``B(m)`` are shaded, selected Schubert facet unions are drawn along the
cell edges they consist of, and each segment ``I_m`` gets a marker at the
outer corner of its box.
"""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

from .gcdiagram import ceil_half, gamma, lambdas, schubert_cycles

__all__ = ["segment_sizes", "segment_label", "default_cycles", "render_svg", "render_text"]

CELL = 40
PAD = 30


def segment_sizes(n: int) -> list[int]:
    """Box sizes of the segments drawn for Fl(n); n = 3 has the single segment of size 2."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    return [2] if n == 3 else list(range(2, n // 2 + 1))


def segment_label(n: int, m: int) -> str:
    return "I" if n == 3 else f"I_{m}"


def default_cycles(n: int) -> list[tuple[str, int]]:
    """Cycles that carry bulk in the restricted form: indices ``>= ceil(n/2)``."""
    k = ceil_half(n)
    return [(kind, i) for kind in ("hor", "ver") for i in range(k, n)]


def _check(n: int, ms, cycles):
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n!r}")
    allowed = set(segment_sizes(n))
    for m in ms:
        if m not in allowed:
            raise ValueError(f"no segment I_{m} for n={n}; sizes are {sorted(allowed)}")
    for kind, i in cycles:
        if kind not in ("hor", "ver") or not 1 <= i <= n - 1:
            raise ValueError(f"no Schubert cycle {kind}{i} for n={n}")


def _xy(i: int, j: int) -> tuple[int, int]:
    return PAD + (j - 1) * CELL, PAD + (i - 1) * CELL


def _edge(kind: str, i: int, j: int) -> tuple[int, int, int, int]:
    x, y = _xy(i, j)
    if kind == "hor":  # between (i, j) and (i+1, j)
        return x, y + CELL, x + CELL, y + CELL
    return x + CELL, y, x + CELL, y + CELL  # between (i, j) and (i, j+1)


def render_svg(n: int, ms: list[int] | None = None,
               cycles: list[tuple[str, int]] | None = None) -> str:
    """Deterministic SVG of Gamma(n) with boxes, facet unions and segment markers."""
    ms = segment_sizes(n) if ms is None else sorted(set(ms))
    cycles = default_cycles(n) if cycles is None else list(cycles)
    _check(n, ms, cycles)
    size = 2 * PAD + n * CELL
    lam = lambdas(n)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 20}" '
        f'viewBox="0 0 {size} {size + 20}" data-n="{n}">',
        f'<title>Ladder diagram of Fl({n})</title>',
        '<g class="boxes">',
    ]
    for m in sorted(ms, reverse=True):
        x, y = _xy(1, 1)
        shade = 0.12 + 0.1 * (max(ms) - m)
        out.append(f'<rect class="box" data-m="{m}" x="{x}" y="{y}" width="{m * CELL}" '
                   f'height="{m * CELL}" fill="#4a78c2" fill-opacity="{shade:.2f}"/>')
    out.append('</g>')
    out.append('<g class="cells" fill="none" stroke="#333" stroke-width="1">')
    for i, j in gamma(n):
        x, y = _xy(i, j)
        out.append(f'<rect class="cell" data-index="{i},{j}" x="{x}" y="{y}" '
                   f'width="{CELL}" height="{CELL}"/>')
    for i in range(1, n + 1):
        x, y = _xy(i, n + 1 - i)
        out.append(f'<rect class="frozen" data-index="{i},{n + 1 - i}" x="{x}" y="{y}" '
                   f'width="{CELL}" height="{CELL}" stroke-dasharray="4 3"/>')
    out.append('</g>')
    out.append('<g class="labels" font-family="monospace" font-size="10" text-anchor="middle">')
    for i, j in gamma(n):
        x, y = _xy(i, j)
        out.append(f'<text x="{x + CELL // 2}" y="{y + CELL // 2 + 4}">{i},{j}</text>')
    for i in range(1, n + 1):
        x, y = _xy(i, n + 1 - i)
        out.append(f'<text class="eigenvalue" x="{x + CELL // 2}" y="{y + CELL // 2 + 4}">{lam[i - 1]}</text>')
    out.append('</g>')
    for kind, idx in cycles:
        cyc = next(c for c in schubert_cycles(n) if c.kind == kind and c.index == idx)
        colour = "#c0392b" if kind == "hor" else "#27ae60"
        label = f"D^hor_{idx},{idx + 1}" if kind == "hor" else f"D^ver_{idx + 1},{idx}"
        out.append(f'<g class="schubert" data-label={quoteattr(label)} stroke="{colour}" '
                   f'stroke-width="3">')
        for fkind, i, j in cyc.facets:
            x1, y1, x2, y2 = _edge(fkind, i, j)
            out.append(f'<line data-facet="{fkind},{i},{j}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        out.append('</g>')
    for m in ms:
        x, y = _xy(m, m)
        cx, cy = x + CELL, y + CELL
        label = segment_label(n, m)
        out.append(f'<g class="segment-marker" data-label="{label}" data-m="{m}">'
                   f'<circle cx="{cx}" cy="{cy}" r="4" fill="#222"/>'
                   f'<text x="{cx + 6}" y="{cy + 12}" font-family="serif" font-size="12">{label}</text>'
                   '</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"


def render_text(n: int, ms: list[int] | None = None) -> str:
    """Plain-text diagram: ``#`` marks the innermost box, ``+`` the larger ones."""
    ms = segment_sizes(n) if ms is None else sorted(set(ms))
    _check(n, ms, [])
    lam = lambdas(n)
    lines = [f"Fl({n}) ladder diagram"]
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 2 - i):
            if i + j == n + 1:
                row.append(f"{lam[i - 1]:>3}")
                continue
            inner = [m for m in ms if i <= m and j <= m]
            mark = "#" if inner and min(inner) == min(ms) else ("+" if inner else ".")
            row.append(f"  {mark}")
        lines.append("".join(row))
    lines.append("segments: " + " ".join(segment_label(n, m) for m in ms))
    return "\n".join(lines) + "\n"
