"""SVG rendering of phase diagrams.

Each grid cell becomes one ``rect`` whose fill follows the global order
parameter on a blue (-1), gray (0), red (+1) scale; transitions are drawn as
black polylines on top.
"""
import logging

import numpy as np
from lxml import etree
from matplotlib.colors import LinearSegmentedColormap, to_hex

logger = logging.getLogger(__name__)
logger.propagate = True

SVG_NAMESPACE = "http://www.w3.org/2000/svg"
OPINION_COLORS = LinearSegmentedColormap.from_list(
    "opinion", ["#0000ff", "#808080", "#ff0000"]
)
INVALID_COLOR = "#ffffff"

CELL = 8
MARGIN = 60


def opinion_color(m: float) -> str:
    """hex color of an order parameter in [-1, 1]; white for invalid cells"""
    if not np.isfinite(m):
        return INVALID_COLOR
    return to_hex(OPINION_COLORS((np.clip(m, -1, 1) + 1) / 2))


def _format(x: float) -> str:
    return "{:.6g}".format(x)


def render_svg(diagram) -> str:
    """Render a :class:`~OpinionEcosystem.transitions.PhaseDiagram` as an SVG document.

    Row ``j`` of the y axis is drawn from the bottom up, so that y grows
    upwards as on a usual plot.

    :param diagram: solved phase diagram
    :type diagram: PhaseDiagram
    :return: SVG text
    :rtype: str
    """
    spec = diagram.spec
    xs, ys = spec.x.values, spec.y.values
    nx, ny = len(xs), len(ys)
    width, height = nx * CELL + 2 * MARGIN, ny * CELL + 2 * MARGIN

    def to_pixel(x, y):
        # cell centers sit on the grid values
        px = MARGIN + (x - xs[0]) / (xs[-1] - xs[0]) * (nx - 1) * CELL + CELL / 2
        py = MARGIN + (ny - 1) * CELL - (y - ys[0]) / (ys[-1] - ys[0]) * (ny - 1) * CELL + CELL / 2
        return px, py

    root = etree.Element(
        "svg",
        nsmap={None: SVG_NAMESPACE},
        width=str(width),
        height=str(height),
        viewBox="0 0 {} {}".format(width, height),
    )
    cells = etree.SubElement(root, "g", id="cells")
    m_total = diagram.grid["m_total"].to_numpy().reshape(ny, nx)
    for j in range(ny):
        for i in range(nx):
            etree.SubElement(
                cells,
                "rect",
                x=str(MARGIN + i * CELL),
                y=str(MARGIN + (ny - 1 - j) * CELL),
                width=str(CELL),
                height=str(CELL),
                fill=opinion_color(m_total[j, i]),
            )

    transitions = etree.SubElement(root, "g", id="transitions")
    for line in diagram.polylines:
        points = " ".join(
            "{:.3f},{:.3f}".format(*to_pixel(x, y)) for x, y in line
        )
        etree.SubElement(
            transitions,
            "polyline",
            points=points,
            fill="none",
            stroke="black",
        ).set("stroke-width", "1.5")

    axes = etree.SubElement(root, "g", id="axes")
    labels = [
        (width / 2, height - MARGIN / 4, spec.x.label, None),
        (MARGIN / 4, height / 2, spec.y.label, "rotate(-90 {} {})".format(MARGIN / 4, height / 2)),
        (MARGIN, height - MARGIN / 2, _format(xs[0]), None),
        (width - MARGIN, height - MARGIN / 2, _format(xs[-1]), None),
        (MARGIN / 2, height - MARGIN, _format(ys[0]), None),
        (MARGIN / 2, MARGIN, _format(ys[-1]), None),
    ]
    for x, y, text, transform in labels:
        element = etree.SubElement(axes, "text", x=_format(x), y=_format(y))
        element.set("text-anchor", "middle")
        if transform:
            element.set("transform", transform)
        element.text = text

    return etree.tostring(root, pretty_print=True, xml_declaration=True, encoding="UTF-8").decode(
        "utf-8"
    )
