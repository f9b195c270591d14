# diagram.py
# DeVore-Triebel diagrams as plain SVG: 1/rho to the right, smoothness r upwards.
from dataclasses import dataclass, field
from typing import Literal, Optional
from xml.sax.saxutils import escape

from exactnum import ZERO, DiagramPoint, ExtRat, Line, ext, line_through
from spaces import adaptivity_line, adaptivity_point, sobolev_line_through

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="%(width)d" height="%(height)d" viewBox="0 0 %(width)d %(height)d">
<rect x="0" y="0" width="%(width)d" height="%(height)d" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</svg>
"""

DASH = "stroke-dasharray:6,4;"


@dataclass(frozen=True)
class DiagramLine:
    line: Line
    style: Literal["solid", "dashed"] = "dashed"
    label: Optional[str] = None


@dataclass(frozen=True)
class LabeledPoint:
    point: DiagramPoint
    label: str
    hollow: bool = False


@dataclass
class DiagramSpec:
    envelope: Optional[object] = None
    points: list[LabeledPoint] = field(default_factory=list)
    lines: list[DiagramLine] = field(default_factory=list)
    adaptivity_rays: list[tuple[ExtRat, int]] = field(default_factory=list)
    viewport: Optional[tuple[ExtRat, ExtRat, ExtRat, ExtRat]] = None
    title: str = ""

    def fit_viewport(self):
        """Smallest box holding every point, envelope breakpoint and ray origin."""
        xs, ys = [ZERO], [ZERO]
        for item in self.points:
            xs.append(item.point.x)
            ys.append(item.point.y)
        if self.envelope is not None:
            for pt in self.envelope.breakpoints:
                xs.append(pt.x)
                ys.append(pt.y)
        for inv_p, _ in self.adaptivity_rays:
            xs.append(inv_p)
        x_hi, y_hi = max(xs), max(ys)
        if x_hi == 0:
            x_hi = ext(1)
        if y_hi == min(ys):
            y_hi = min(ys) + 1
        self.viewport = (min(xs), x_hi, min(ys), y_hi)
        return self.viewport


class SVG:
    def __init__(self, viewport, width, height):
        x0, x1, y0, y1 = (float(v) for v in viewport)
        pad_x, pad_y = (x1 - x0) * 0.1, (y1 - y0) * 0.1
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.left, self.bottom = x0 - pad_x, y0 - pad_y
        self.span_x, self.span_y = (x1 - x0) + 2 * pad_x, (y1 - y0) + 2 * pad_y
        self.width, self.height = width, height
        self.commands = []

    def map(self, x, y):
        px = (float(x) - self.left) / self.span_x * self.width
        py = self.height - (float(y) - self.bottom) / self.span_y * self.height
        return px, py

    def _points(self, points):
        return " ".join("%.3f,%.3f" % self.map(x, y) for x, y in points)

    def polyline(self, points, color="#000000", width=1.5, dashed=False):
        style = "fill:none;stroke:%s;stroke-width:%.2f;%s" % (color, width, DASH if dashed else "")
        self.commands.append('<polyline points="%s" style="%s"/>' % (self._points(points), style))

    def polygon(self, points, fill="#dddddd"):
        self.commands.append('<polygon points="%s" style="fill:%s;stroke:none"/>' % (self._points(points), fill))

    def circle(self, x, y, radius=4.0, hollow=False, color="#000000"):
        px, py = self.map(x, y)
        fill = "#ffffff" if hollow else color
        self.commands.append(
            '<circle cx="%.3f" cy="%.3f" r="%.2f" style="fill:%s;stroke:%s;stroke-width:1"/>' % (px, py, radius, fill, color)
        )

    def text(self, x, y, text, color="#333333", dx=6.0, dy=-6.0):
        px, py = self.map(x, y)
        self.commands.append(
            '<text x="%.3f" y="%.3f" fill="%s" font-size="12" font-family="sans-serif">%s</text>'
            % (px + dx, py + dy, color, escape(text))
        )

    def clip_line(self, line):
        """Endpoints of ``line`` across the viewport width (or height for vertical lines)."""
        if line.is_vertical:
            return [(float(line.c), self.y0), (float(line.c), self.y1)]
        c, a = float(line.c), float(line.a)
        return [(self.x0, c - a * self.x0), (self.x1, c - a * self.x1)]

    def render(self):
        width, height = self.width, self.height
        return PREAMBLE % locals() + "".join(item + "\n" for item in self.commands) + POSTAMBLE


def render_svg(drawing, width=640, height=480):
    viewport = drawing.viewport or drawing.fit_viewport()
    svg = SVG(viewport, width, height)

    envelope = drawing.envelope
    if envelope is not None and envelope.state == "finite":
        boundary = [(float(p.x), float(p.y)) for p in envelope.breakpoints if float(p.x) <= svg.x1]
        boundary.append((svg.x1, float(envelope.value_at(ext(viewport[1])))))
        svg.polygon(boundary + [(svg.x1, svg.y0), (boundary[0][0], svg.y0)])
        # open boundary: members lie strictly below it
        svg.polyline(boundary, color="#555555", dashed=True)

    svg.polyline([(svg.x0, 0.0), (svg.x1, 0.0)], color="#000000", width=1.0)
    svg.polyline([(0.0, svg.y0), (0.0, svg.y1)], color="#000000", width=1.0)
    svg.text(svg.x1, 0.0, "1/ρ", dx=-20.0, dy=16.0)
    svg.text(0.0, svg.y1, "r", dx=-14.0, dy=4.0)

    for item in drawing.lines:
        svg.polyline(svg.clip_line(item.line), color="#1f4e9c", dashed=item.style == "dashed")
        if item.label:
            x, y = svg.clip_line(item.line)[1]
            svg.text(x, y, item.label, color="#1f4e9c", dx=-110.0, dy=-4.0)
    for inv_p, d in drawing.adaptivity_rays:
        line = adaptivity_line(inv_p, d)
        start = (float(inv_p), 0.0)
        end = (svg.x1, float(line.y_at(ext(viewport[1]))))
        svg.polyline([start, end], color="#b22222")
    for item in drawing.points:
        svg.circle(item.point.x, item.point.y, hollow=item.hollow)
        svg.text(item.point.x, item.point.y, item.label)
    if drawing.title:
        svg.commands.append(
            '<text x="10" y="20" fill="#000000" font-size="14" font-family="sans-serif">%s</text>' % escape(drawing.title)
        )
    return svg.render()


def bound_diagram(d, inv_p, s_bar, inv_pz, z, mu=None, alpha=None, envelope=None, title=""):
    """The construction behind the adaptivity bound: chord, Sobolev line, ray and their meeting point."""
    top = DiagramPoint(inv_p, s_bar)
    aux = DiagramPoint(inv_pz, z)
    drawing = DiagramSpec(envelope=envelope, title=title)
    drawing.points.append(LabeledPoint(top, "s̄_p"))
    drawing.points.append(LabeledPoint(aux, "z", hollow=True))
    drawing.lines.append(DiagramLine(sobolev_line_through(top, d), "dashed"))
    if top != aux:
        drawing.lines.append(DiagramLine(line_through(aux, top), "dashed"))
    if mu is not None:
        drawing.points.append(LabeledPoint(DiagramPoint(inv_pz, mu), "μ", hollow=True))
    drawing.adaptivity_rays.append((ext(inv_p), d))
    if alpha is not None and alpha.is_finite:
        drawing.points.append(LabeledPoint(adaptivity_point(alpha, inv_p, d), "ᾱ_p"))
    return drawing
