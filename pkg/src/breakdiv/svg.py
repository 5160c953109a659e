"""Cell decomposition of the genus-2 Jacobian as an exact scene and as SVG.

Each spanning tree T contributes the parallelogram swept out by divisors
with one chip on each of the two edges off T.  Coordinates are taken in a
fundamental-cycle basis, so the torus is the unit square; a cell crossing
the square's edges is cut into pieces that are translated back inside.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction
from typing import NamedTuple

from .errors import WrongGenus
from .graph import WeightedGraph, format_rational, spanning_trees, tree_path
from .homology import _CycleBasis
from .metric import MetricDivisor, MetricPoint, canonical_break_divisor_metric, sorted_points

Point2 = tuple[Fraction, Fraction]

PALETTE = (
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
    "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
)


class CellPolygon(NamedTuple):
    tree: tuple[str, ...]
    pieces: list[list[Point2]]
    area: Fraction
    center: Point2
    label: str


class SvgScene(NamedTuple):
    cells: list[CellPolygon]
    base_point: str
    basis_tree: tuple[str, ...]

    @property
    def total_area(self) -> Fraction:
        return sum((c.area for c in self.cells), Fraction(0))


def shoelace(poly: Sequence[Point2]) -> Fraction:
    s = Fraction(0)
    for (x1, y1), (x2, y2) in zip(poly, [*poly[1:], poly[0]]):
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def _clip(poly: list[Point2], axis: int, bound: Fraction, keep_below: bool) -> list[Point2]:
    def inside(p):
        return p[axis] <= bound if keep_below else p[axis] >= bound

    out: list[Point2] = []
    for i, cur in enumerate(poly):
        prev = poly[i - 1]
        if inside(cur):
            if not inside(prev):
                out.append(_cross(prev, cur, axis, bound))
            out.append(cur)
        elif inside(prev):
            out.append(_cross(prev, cur, axis, bound))
    return out


def _cross(a: Point2, b: Point2, axis: int, bound: Fraction) -> Point2:
    t = (bound - a[axis]) / (b[axis] - a[axis])
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def clip_to_unit_square(poly: list[Point2]) -> list[Point2]:
    for axis in (0, 1):
        poly = _clip(poly, axis, Fraction(0), keep_below=False)
        if not poly:
            return []
        poly = _clip(poly, axis, Fraction(1), keep_below=True)
        if not poly:
            return []
    # clipping at a vertex emits the same point twice
    return [p for i, p in enumerate(poly) if p != poly[i - 1]] or poly[:1]


def fold_into_torus(poly: list[Point2]) -> list[list[Point2]]:
    """Pieces of ``poly`` translated into the unit square."""
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    pieces = []
    for i in range(math.floor(min(xs)), math.ceil(max(xs))):
        for j in range(math.floor(min(ys)), math.ceil(max(ys))):
            piece = clip_to_unit_square([(x - i, y - j) for x, y in poly])
            if piece and shoelace(piece) > 0:
                pieces.append(piece)
    return pieces


def _label(g: WeightedGraph, d: MetricDivisor) -> str:
    parts = []
    for p in sorted_points(g, d):
        c = d[p]
        parts.append(p.label() if c == 1 else f"{c}*{p.label()}")
    return " + ".join(parts)


def jacobian_scene(g: WeightedGraph, q: str | None = None, t_base=None) -> SvgScene:
    if g.genus != 2:
        raise WrongGenus(f"cell pictures need genus 2, got {g.genus}")
    q = g.vertices[0] if q is None else q
    trees = spanning_trees(g)
    basis = _CycleBasis(g, trees[0] if t_base is None else t_base)

    def vertex_image(v):
        return basis.coordinates(tree_path(g, basis.tree, q, v))

    cells = []
    for tree in trees:
        off = [e for e in g.edges if e.id not in tree]
        corner = [Fraction(0), Fraction(0)]
        spans = []
        for e in off:
            x = vertex_image(e.tail)
            corner = [corner[0] + x[0], corner[1] + x[1]]
            spans.append(basis.coordinates({e.id: Fraction(1)}))
        shift = (math.floor(corner[0]), math.floor(corner[1]))
        c = (corner[0] - shift[0], corner[1] - shift[1])
        v1, v2 = spans
        quad = [
            c,
            (c[0] + v1[0], c[1] + v1[1]),
            (c[0] + v1[0] + v2[0], c[1] + v1[1] + v2[1]),
            (c[0] + v2[0], c[1] + v2[1]),
        ]
        pieces = fold_into_torus(quad)
        area = sum((shoelace(p) for p in pieces), Fraction(0))
        mid = (c[0] + (v1[0] + v2[0]) / 2, c[1] + (v1[1] + v2[1]) / 2)
        center = (mid[0] - math.floor(mid[0]), mid[1] - math.floor(mid[1]))
        middle = MetricDivisor({MetricPoint.on(g, e.id, e.length / 2): 1 for e in off})
        label = _label(g, canonical_break_divisor_metric(g, middle))
        cells.append(CellPolygon(tree, pieces, area, center, label))
    return SvgScene(cells, q, basis.tree)


def _fmt(x: Fraction) -> str:
    return f"{float(x):.9f}"


def render_svg(scene: SvgScene, size: int = 480, margin: int = 20) -> str:
    def xy(p: Point2) -> str:
        return f"{_fmt(margin + p[0] * size)},{_fmt(margin + (1 - p[1]) * size)}"

    full = size + 2 * margin
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" '
        f'viewBox="0 0 {full} {full}">',
        f'<rect x="{margin}" y="{margin}" width="{size}" height="{size}" '
        'fill="none" stroke="black" stroke-width="2"/>',
    ]
    for k, cell in enumerate(scene.cells):
        colour = PALETTE[k % len(PALETTE)]
        tree = " ".join(cell.tree)
        out.append(f'<g class="cell" data-tree="{tree}" data-area="{format_rational(cell.area)}">')
        for piece in cell.pieces:
            pts = " ".join(xy(p) for p in piece)
            out.append(f'<polygon points="{pts}" fill="{colour}" stroke="black" stroke-width="1"/>')
        cx, cy = xy(cell.center).split(",")
        out.append(
            f'<text x="{cx}" y="{cy}" font-size="11" text-anchor="middle" '
            f'font-family="sans-serif">{cell.label}</text>'
        )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(g: WeightedGraph, q: str | None = None, t_base=None) -> tuple[SvgScene, str]:
    scene = jacobian_scene(g, q, t_base)
    return scene, render_svg(scene)
