"""Static multi-panel SVG rendering of a suffix-swap construction trace."""

from __future__ import annotations

from .injection import ConstructionTrace, InjectionInstance, PathPair
from .lattice import LatticePoint

_CELL = 28
_PAD = 46


def _panel_geometry(instance: InjectionInstance, trace: ConstructionTrace):
    region = instance.region
    ys = []
    for x in range(region.m + 1):
        lo, hi = region.columns[x]
        ys.extend((lo, hi, lo + trace.shift, hi + trace.shift))
    ys.append(instance.b + trace.shift)
    y_min, y_max = min(ys), max(ys)
    width = region.m * _CELL + 2 * _PAD
    height = (y_max - y_min) * _CELL + 2 * _PAD
    return y_min, y_max, width, height


class _Panel:
    def __init__(self, title: str, origin_x: float, y_max: int):
        self.parts: list[str] = [
            f'<g transform="translate({origin_x},0)">',
            f'<text x="{_PAD}" y="20" class="title">{title}</text>',
        ]
        self.y_max = y_max

    def pos(self, p: LatticePoint) -> tuple[float, float]:
        return (_PAD + p.x * _CELL, _PAD + (self.y_max - p.y) * _CELL)

    def dot(self, p: LatticePoint, radius: float, style: str):
        cx, cy = self.pos(p)
        self.parts.append(f'<circle cx="{cx}" cy="{cy}" r="{radius}" class="{style}"/>')

    def label(self, p: LatticePoint, text: str, dx: float = 6, dy: float = -6):
        cx, cy = self.pos(p)
        self.parts.append(
            f'<text x="{cx + dx}" y="{cy + dy}" class="label">{text}</text>'
        )

    def polyline(self, points, style: str):
        coords = " ".join(f"{x},{y}" for x, y in (self.pos(p) for p in points))
        self.parts.append(f'<polyline points="{coords}" class="{style}"/>')

    def close(self) -> str:
        self.parts.append("</g>")
        return "\n".join(self.parts)


def render_trace(
    instance: InjectionInstance,
    pair: PathPair,
    image: PathPair,
    trace: ConstructionTrace,
) -> str:
    """One SVG document with the inputs, every guide stage, and the outputs."""
    y_min, y_max, pw, ph = _panel_geometry(instance, trace)
    region = instance.region

    region_dots = list(region.points())
    endpoint_labels = [
        (instance.point_a, "A"),
        (instance.point_b, "B"),
        (instance.point_c, "C"),
        (instance.point_d, "D"),
        (instance.point_c_prime, "C'"),
        (instance.point_d_prime, "D'"),
    ]

    panels: list[str] = []

    def new_panel(idx: int, title: str) -> _Panel:
        panel = _Panel(title, idx * pw, y_max)
        for p in region_dots:
            panel.dot(p, 2, "grid")
        for p, text in endpoint_labels:
            panel.dot(p, 3.5, "endpoint")
            panel.label(p, text)
        return panel

    p0 = new_panel(0, "inputs")
    p0.polyline(pair.first.vertices, "path-first")
    p0.polyline(pair.second.vertices, "path-second")
    panels.append(p0.close())

    p1 = new_panel(1, "raised floor guide, first trim")
    p1.polyline(pair.first.vertices, "path-first")
    p1.polyline(trace.shifted_floor, "guide-floor")
    if trace.trim_first is not None:
        p1.dot(trace.trim_first, 5, "mark")
        p1.label(trace.trim_first, "trim1", dy=14)
    panels.append(p1.close())

    p2 = new_panel(2, "upper guide, raised second, second trim")
    if trace.raised_second is not None:
        p2.polyline(trace.raised_second.vertices, "path-second")
    p2.polyline(trace.upper_guide, "guide-upper")
    if trace.trim_second is not None:
        p2.dot(trace.trim_second, 5, "mark")
        p2.label(trace.trim_second, "trim2", dy=14)
    panels.append(p2.close())

    p3 = new_panel(3, "component and junction")
    for p in sorted(trace.component):
        p3.dot(p, 3, "component")
    if trace.raised_second is not None:
        p3.polyline(trace.raised_second.vertices, "path-second")
    p3.polyline(pair.first.vertices, "path-first")
    if trace.junction is not None:
        p3.dot(trace.junction, 5.5, "mark")
        p3.label(trace.junction, "J")
        if trace.junction_dropped is not None:
            p3.dot(trace.junction_dropped, 4, "mark-soft")
            p3.label(trace.junction_dropped, "J-shift")
    panels.append(p3.close())

    p4 = new_panel(4, "outputs")
    p4.polyline(image.first.vertices, "path-first")
    p4.polyline(image.second.vertices, "path-second")
    panels.append(p4.close())

    total_w = 5 * pw
    fallback = "yes" if trace.fallback_used else "no"
    body = "\n".join(panels)
    return f"""<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{ph + 24}" viewBox="0 0 {total_w} {ph + 24}">
<style>
  text.title {{ font: bold 13px sans-serif; fill: #333; }}
  text.label {{ font: 11px sans-serif; fill: #555; }}
  text.footer {{ font: 11px sans-serif; fill: #777; }}
  circle.grid {{ fill: #ccc; }}
  circle.endpoint {{ fill: #222; }}
  circle.component {{ fill: #b7d8f5; }}
  circle.mark {{ fill: #d62728; }}
  circle.mark-soft {{ fill: #f2a0a1; }}
  polyline {{ fill: none; stroke-width: 2; }}
  polyline.path-first {{ stroke: #1f77b4; }}
  polyline.path-second {{ stroke: #2ca02c; }}
  polyline.guide-floor {{ stroke: #9467bd; stroke-dasharray: 5 3; }}
  polyline.guide-upper {{ stroke: #ff7f0e; stroke-dasharray: 5 3; }}
</style>
{body}
<text x="{_PAD}" y="{ph + 14}" class="footer">shift={trace.shift} fallback={fallback} repairs={trace.repair_rounds}</text>
</svg>
"""
