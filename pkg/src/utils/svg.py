import math
from typing import Iterable, List, Optional, Sequence, Tuple

from ..engine.geometry import arc_center, midpoint_T, tangency_S, vertex_A
from ..models.enums import PieceKind
from ..models.geometry import BoundaryModel
from ..models.results import QuotientSample

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1"
    width="%(width)d" height="%(height)d"
    viewBox="%(min_x)s %(min_y)s %(span_x)s %(span_y)s">
<rect x="%(min_x)s" y="%(min_y)s" width="%(span_x)s" height="%(span_y)s" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"

PIXELS = 800


def fmt(value: float) -> str:
    """Fixed-precision number with negative zero folded to zero"""
    return format(round(value, 9) + 0.0, ".9g")


class SvgDocument:
    """
    Accumulates drawing commands in plot coordinates (y up) and tracks the
    bounding box; y is flipped only when commands are emitted
    """

    def __init__(self, line_width: float = 0.004):
        self.min_x = None
        self.max_x = None
        self.min_y = None
        self.max_y = None
        self.line_width = line_width
        self.commands: List[str] = []

    def require(self, x: float, y: float) -> None:
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x = min(self.min_x, x)
            self.max_x = max(self.max_x, x)
            self.min_y = min(self.min_y, y)
            self.max_y = max(self.max_y, y)

    def path(self, d: str, css_class: str, color: str = "#000000", width: float = 1.0) -> None:
        self.commands.append(
            '<path class="%s" d="%s" style="fill:none;stroke:%s;stroke-width:%s"/>'
            % (css_class, d, color, fmt(width * self.line_width))
        )

    def line(self, points: Sequence[Tuple[float, float]], css_class: str = "line", color: str = "#000000",
             width: float = 1.0) -> None:
        for x, y in points:
            self.require(x, y)
        self.commands.append(
            '<polyline class="%s" points="%s" style="fill:none;stroke:%s;stroke-width:%s"/>' % (
                css_class,
                " ".join("%s,%s" % (fmt(x), fmt(-y)) for x, y in points),
                color,
                fmt(width * self.line_width),
            )
        )

    def circle(self, x: float, y: float, radius: float, css_class: str = "marker", color: str = "#000000") -> None:
        self.require(x - radius, y - radius)
        self.require(x + radius, y + radius)
        self.commands.append(
            '<circle class="%s" cx="%s" cy="%s" r="%s" style="fill:%s"/>'
            % (css_class, fmt(x), fmt(-y), fmt(radius), color)
        )

    def text(self, x: float, y: float, text: str, size: float, color: str = "#666666") -> None:
        self.require(x, y)
        self.require(x + len(text) * size * 0.6, y + size)
        self.commands.append(
            '<text x="%s" y="%s" fill="%s" font-size="%s" font-family="monospace">%s</text>'
            % (fmt(x), fmt(-y), color, fmt(size), text)
        )

    def render(self) -> str:
        if self.min_x is None:
            self.require(0.0, 0.0)
        pad = max(self.max_x - self.min_x, self.max_y - self.min_y, 1e-9) * 0.05
        min_x, max_x = self.min_x - pad, self.max_x + pad
        min_y, max_y = -self.max_y - pad, -self.min_y + pad
        span_x, span_y = max_x - min_x, max_y - min_y
        width = PIXELS
        height = max(1, int(round(PIXELS * span_y / span_x)))
        header = PREAMBLE % {
            "width": width,
            "height": height,
            "min_x": fmt(min_x),
            "min_y": fmt(min_y),
            "span_x": fmt(span_x),
            "span_y": fmt(span_y),
        }
        return header + "".join(command + "\n" for command in self.commands) + POSTAMBLE


def _arc_command(piece) -> str:
    # Boundary runs clockwise in plot coordinates, which the y flip turns into sweep-flag 0
    end = (1.0 + piece.end.x, piece.end.y)
    radius = fmt(piece.radius)
    return "A %s %s 0 0 0 %s %s" % (radius, radius, fmt(end[0]), fmt(-end[1]))


def boundary_figure(model: BoundaryModel, n_range: Optional[Tuple[int, int]] = None) -> SvgDocument:
    """
    Outline of the first-quadrant boundary with the arcs highlighted and the
    points A_n, T_n, S_n, O_n marked for n in n_range
    """
    doc = SvgDocument()
    first = model.pieces[0].start
    commands = ["M %s %s" % (fmt(1.0 + first.x), fmt(-first.y))]
    for piece in model.pieces:
        doc.require(1.0 + piece.start.x, piece.start.y)
        doc.require(1.0 + piece.end.x, piece.end.y)
        if piece.kind == PieceKind.ARC:
            commands.append(_arc_command(piece))
            doc.path(
                "M %s %s %s" % (fmt(1.0 + piece.start.x), fmt(-piece.start.y), _arc_command(piece)),
                css_class="arc",
                color="#d62728",
                width=2.0,
            )
        else:
            commands.append("L %s %s" % (fmt(1.0 + piece.end.x), fmt(-piece.end.y)))
    doc.commands.insert(0, '<path id="boundary" class="boundary" d="%s" style="fill:none;stroke:#000000;'
                           'stroke-width:%s"/>' % (" ".join(commands), fmt(doc.line_width)))
    doc.line([(0.0, 0.0), (1.0, 0.0)], css_class="axis", color="#999999", width=0.5)
    doc.line([(0.0, 0.0), (0.0, model.top)], css_class="axis", color="#999999", width=0.5)

    if n_range is not None:
        seq = model.seq
        size = 0.02
        for n in range(max(n_range[0], seq.n_min + 1), min(n_range[1], model.depth) + 1):
            for label, point, color in (
                ("A", vertex_A(seq, n), "#1f77b4"),
                ("T", midpoint_T(seq, n), "#2ca02c"),
                ("S", tangency_S(seq, n), "#ff7f0e"),
                ("O", arc_center(seq, n), "#9467bd"),
            ):
                doc.circle(point.x, point.y, 0.004, css_class="point-" + label, color=color)
                doc.text(point.x + 0.006, point.y, "%s%d" % (label, n), size=size, color=color)
    return doc


def quotient_figure(samples: Iterable[QuotientSample]) -> SvgDocument:
    """Im D(theta) against log10(theta); t_n and s_n abscissae marked by ticks"""
    samples = [sample for sample in samples if sample.theta > 0.0]
    doc = SvgDocument(line_width=0.01)
    colors = {"dyadic": "#1f77b4", "t": "#2ca02c", "s": "#ff7f0e"}
    xs = [math.log10(sample.theta) for sample in samples]
    if not samples:
        return doc
    lo, hi = min(xs), max(xs)
    doc.line([(lo, 0.0), (hi, 0.0)], css_class="axis", color="#999999")
    doc.line([(lo, 0.0), (lo, 1.0)], css_class="axis", color="#999999")
    for level in (0.0, 0.5, 1.0):
        doc.text(lo - 0.6, level, fmt(level), size=0.05)
    for x, sample in zip(xs, samples):
        color = colors.get(sample.label, "#000000")
        if sample.label in ("t", "s"):
            doc.line([(x, -0.03), (x, 0.0)], css_class="tick-" + sample.label, color=color)
        doc.circle(x, sample.quotient.y, 0.02, css_class="sample-" + sample.label, color=color)
    doc.text(lo, -0.12, "log10(theta)", size=0.05)
    return doc
