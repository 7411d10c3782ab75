"""
Curve serialization: canonical CSV and a fixed-style SVG line chart.
"""
import logging
import sys
import csv
import io
import math

import xml.etree.ElementTree as ET
from typing import List

from errors import ScaleModelError
from graph_partition import PartitionEstimate
from speedup import SpeedupCurve

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("curve-output")

CURVE_HEADER = ["n", "t_cp", "t_cm", "t_total", "speedup"]
PARTITION_HEADER = ["n", "trials", "seed", "e_dup", "mean_max_edges", "min_max_edges", "max_max_edges"]

WIDTH = 800
HEIGHT = 500
MARGIN_LEFT = 70
MARGIN_RIGHT = 30
MARGIN_TOP = 40
MARGIN_BOTTOM = 60

def _number(value: float) -> str:
    return f"{value:.10g}"

def emit_curve_csv(curve: SpeedupCurve) -> str:
    if not curve.points:
        raise ScaleModelError("cannot emit an empty curve")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CURVE_HEADER)
    for point in sorted(curve.points, key=lambda p: p.n):
        writer.writerow([point.n, _number(point.t_cp), _number(point.t_cm), _number(point.t_total), _number(point.s)])
    return buffer.getvalue()

def parse_curve_csv(text: str) -> List[tuple]:
    """Rows of (n, t_cp, t_cm, t_total, speedup) from emit_curve_csv output."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CURVE_HEADER:
        raise ScaleModelError(f"missing header '{','.join(CURVE_HEADER)}'")
    try:
        return [(int(row[0]), *(float(cell) for cell in row[1:])) for row in rows[1:] if row]
    except (ValueError, IndexError) as e:
        raise ScaleModelError(f"malformed curve row: {e}") from e

def emit_partition_csv(estimates: List[PartitionEstimate]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(PARTITION_HEADER)
    for estimate in estimates:
        writer.writerow([
            estimate.n, estimate.trials, estimate.seed,
            _number(estimate.e_dup), _number(estimate.mean_max_edges),
            _number(estimate.min_max_edges), _number(estimate.max_max_edges),
        ])
    return buffer.getvalue()

def _nice_step(span: float, target_ticks: int) -> float:
    raw = span / target_ticks
    magnitude = 10 ** math.floor(math.log10(raw))
    for factor in (1, 2, 2.5, 5, 10):
        if raw <= factor * magnitude:
            return factor * magnitude
    return 10 * magnitude

def _fmt(value: float) -> str:
    return f"{value:.2f}"

def emit_curve_svg(curve: SpeedupCurve) -> str:
    """
    Standalone SVG of s(n) in an 800x500 viewBox: linear axes, tick labels and
    one polyline. Output depends only on the curve.
    """
    if len(curve.points) < 2:
        raise ScaleModelError(f"an SVG chart needs at least 2 points, got {len(curve.points)}")

    points = sorted(curve.points, key=lambda p: p.n)
    n_min, n_max = points[0].n, points[-1].n
    y_step = _nice_step(max(p.s for p in points), 5)
    y_max = math.ceil(max(p.s for p in points) / y_step) * y_step
    x_step = max(1, int(math.ceil(_nice_step(n_max - n_min, 10))))

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def x_of(n):
        return MARGIN_LEFT + (n - n_min) / (n_max - n_min) * plot_w

    def y_of(s):
        return MARGIN_TOP + plot_h - s / y_max * plot_h

    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "viewBox": f"0 0 {WIDTH} {HEIGHT}",
        "width": str(WIDTH),
        "height": str(HEIGHT),
        "font-family": "sans-serif",
        "font-size": "12",
    })
    ET.SubElement(svg, "rect", {"x": "0", "y": "0", "width": str(WIDTH), "height": str(HEIGHT), "fill": "white"})

    title = ET.SubElement(svg, "text", {"x": str(WIDTH // 2), "y": "24", "text-anchor": "middle", "font-size": "16"})
    title.text = f"{curve.mode} scaling speedup (reference n={curve.reference_n})"

    axes = ET.SubElement(svg, "g", {"stroke": "black", "stroke-width": "1"})
    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    ET.SubElement(axes, "line", {"x1": str(x0), "y1": str(y0), "x2": str(x0 + plot_w), "y2": str(y0)})
    ET.SubElement(axes, "line", {"x1": str(x0), "y1": str(MARGIN_TOP), "x2": str(x0), "y2": str(y0)})

    labels = ET.SubElement(svg, "g", {"fill": "black"})
    first_tick = n_min if n_min % x_step == 0 else n_min + (x_step - n_min % x_step)
    for n in range(first_tick, n_max + 1, x_step):
        x = _fmt(x_of(n))
        ET.SubElement(axes, "line", {"x1": x, "y1": str(y0), "x2": x, "y2": str(y0 + 5)})
        label = ET.SubElement(labels, "text", {"x": x, "y": str(y0 + 20), "text-anchor": "middle"})
        label.text = str(n)

    ticks = int(round(y_max / y_step))
    for i in range(ticks + 1):
        value = i * y_step
        y = _fmt(y_of(value))
        ET.SubElement(axes, "line", {"x1": str(x0 - 5), "y1": y, "x2": str(x0), "y2": y})
        label = ET.SubElement(labels, "text", {"x": str(x0 - 8), "y": y, "text-anchor": "end", "dominant-baseline": "middle"})
        label.text = f"{value:g}"

    x_title = ET.SubElement(labels, "text", {"x": str(x0 + plot_w // 2), "y": str(HEIGHT - 15), "text-anchor": "middle"})
    x_title.text = "workers (n)"
    y_title = ET.SubElement(labels, "text", {
        "x": "18", "y": str(MARGIN_TOP + plot_h // 2), "text-anchor": "middle",
        "transform": f"rotate(-90 18 {MARGIN_TOP + plot_h // 2})",
    })
    y_title.text = "speedup s(n)"

    ET.SubElement(svg, "polyline", {
        "fill": "none",
        "stroke": "#1f77b4",
        "stroke-width": "2",
        "points": " ".join(f"{_fmt(x_of(p.n))},{_fmt(y_of(p.s))}" for p in points),
    })

    body = ET.tostring(svg, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"
