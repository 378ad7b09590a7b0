"""Deterministic SVG rendering of reachable-set boundaries in the unit disk."""

from xml.sax.saxutils import escape

import numpy as np

from . import theme


def _px(x, y):
    scale = (theme.SIZE - 2 * theme.MARGIN) / (2 * theme.EXTENT)
    cx = theme.SIZE / 2
    return cx + scale * np.asarray(x), cx - scale * np.asarray(y)


def _num(v):
    s = f"{float(v):.{theme.COORD_DIGITS}f}"
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _points(xy):
    px, py = _px(xy[:, 0], xy[:, 1])
    return " ".join(f"{_num(a)},{_num(b)}" for a, b in zip(px, py))


def _style(color, width, dash, opacity=1.0):
    s = f'fill="none" stroke="{color}" stroke-width="{_num(width)}"'
    if dash:
        s += f' stroke-dasharray="{dash}"'
    if opacity < 1:
        s += f' stroke-opacity="{_num(opacity)}"'
    return s


def _segment_style(seg, opacity):
    branch = seg.branch.value if seg.branch is not None else None
    if seg.kind == "front":
        key = "front_zero" if branch == "zero" else "front"
        color = theme.BRANCH_COLOR.get(branch, theme.TEXT)
    elif seg.kind == "spiral":
        key, color = "spiral", theme.BRANCH_COLOR.get(branch, theme.TEXT)
    else:
        key, color = seg.kind, theme.KIND_COLOR.get(seg.kind, theme.TEXT)
    width, dash = theme.STROKE.get(key, (1.0, None))
    return _style(color, width, dash, opacity)


def render(title, boundaries, labels, traces=()):
    """SVG text for a list of ReachableBoundary objects.

    traces: (kind, label, xy-array) curves drawn under the boundaries,
    kind being 'endpoint' or 'critical'.
    """
    s = theme.SIZE
    cx, cy = _px(0.0, 0.0)
    r = (theme.SIZE - 2 * theme.MARGIN) / (2 * theme.EXTENT)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{s}" height="{s}" fill="{theme.BACKGROUND}"/>',
        f'<circle cx="{_num(float(cx))}" cy="{_num(float(cy))}" r="{_num(r)}" fill="{theme.DISK_FILL}" '
        f'stroke="{theme.DISK_STROKE}" stroke-width="1.2"/>',
        f'<line x1="{_num(float(cx - r))}" y1="{_num(float(cy))}" x2="{_num(float(cx + r))}" y2="{_num(float(cy))}" '
        f'stroke="{theme.AXIS_STROKE}" stroke-width="0.8"/>',
        f'<line x1="{_num(float(cx))}" y1="{_num(float(cy - r))}" x2="{_num(float(cx))}" y2="{_num(float(cy + r))}" '
        f'stroke="{theme.AXIS_STROKE}" stroke-width="0.8"/>',
    ]
    if traces:
        out.append('<g id="traces">')
        for kind, label, xy in traces:
            width, dash = theme.TRACE[kind]
            out.append(
                f'<polyline data-trace="{escape(label)}" points="{_points(xy)}" '
                f"{_style(theme.TRACE_COLOR, width, dash)}/>"
            )
        out.append("</g>")
    for i, (rb, label) in enumerate(zip(boundaries, labels)):
        opacity = theme.TIME_OPACITY[min(i, len(theme.TIME_OPACITY) - 1)]
        out.append(f'<g id="boundary-{i}" data-label="{escape(label)}">')
        for seg in rb.segments:
            branch = seg.branch.value if seg.branch is not None else "none"
            out.append(
                f'<polyline data-kind="{seg.kind}" data-branch="{branch}" points="{_points(seg.points)}" '
                f"{_segment_style(seg, opacity)}/>"
            )
        out.append("</g>")
    y = theme.FONT_SIZE + 6
    out.append(
        f'<text x="10" y="{y}" font-family="{theme.FONT}" font-size="{theme.FONT_SIZE}" '
        f'fill="{theme.TEXT}">{escape(title)}</text>'
    )
    for i, label in enumerate(labels):
        y += theme.FONT_SIZE + 4
        out.append(
            f'<text x="10" y="{y}" font-family="{theme.FONT}" font-size="{theme.FONT_SIZE - 2}" '
            f'fill="{theme.TEXT}">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
