import itertools
import random
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from breakdiv.errors import WrongGenus
from breakdiv.fixtures import random_graph
from breakdiv.svg import clip_to_unit_square, emit_svg, fold_into_torus, jacobian_scene, shoelace


def inside(poly, p):
    """Strict point-in-convex-polygon test; None when p is on the boundary."""
    signs = set()
    for a, b in zip(poly, [*poly[1:], poly[0]]):
        cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        if cross == 0:
            return None
        signs.add(cross > 0)
    return len(signs) == 1


def test_shoelace_and_clip():
    square = [(Fraction(0), Fraction(0)), (Fraction(2), Fraction(0)), (Fraction(2), Fraction(2)), (Fraction(0), Fraction(2))]
    assert shoelace(square) == 4
    assert shoelace(clip_to_unit_square(square)) == 1
    pieces = fold_into_torus(square)
    assert len(pieces) == 4 and sum(shoelace(p) for p in pieces) == 4


def test_theta(th):
    scene = jacobian_scene(th)
    assert [c.area for c in scene.cells] == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]
    assert scene.total_area == 1


def test_theta_unit(thu):
    scene = jacobian_scene(thu)
    assert len(scene.cells) == 8
    assert all(c.area == Fraction(1, 8) for c in scene.cells)


def test_wrong_genus(tri):
    with pytest.raises(WrongGenus):
        jacobian_scene(tri)


@pytest.mark.parametrize("which", ["th", "thu"])
def test_cells_tile_the_torus(which, request):
    g = request.getfixturevalue(which)
    scene = jacobian_scene(g)
    n = 23
    for i, j in itertools.product(range(n), repeat=2):
        p = (Fraction(2 * i + 1, 2 * n), Fraction(2 * j + 1, 2 * n))
        hits = [inside(piece, p) for c in scene.cells for piece in c.pieces]
        if None in hits:
            continue
        assert hits.count(True) == 1


def test_labels_are_break_divisors(th):
    labels = [c.label for c in jacobian_scene(th).cells]
    assert labels == ["b@1/2 + c@1", "a@1 + c@1", "a@1 + b@1/2"]


def test_random_genus_two_graphs():
    rng = random.Random(2)
    seen = 0
    while seen < 10:
        g = random_graph(rng, max_vertices=5, max_edges=6)
        if g.genus != 2:
            continue
        seen += 1
        assert jacobian_scene(g).total_area == 1


def test_svg_document(th):
    scene, text = emit_svg(th)
    root = ET.fromstring(text)
    ns = "{http://www.w3.org/2000/svg}"
    groups = root.findall(f"{ns}g")
    assert len(groups) == 3
    assert [g.get("data-area") for g in groups] == ["1/4", "1/2", "1/4"]
    for poly in root.iter(f"{ns}polygon"):
        pts = poly.get("points").split()
        assert len(pts) == len(set(pts)) >= 3
        assert all(len(x.split(",")[0].split(".")[1]) == 9 for x in pts)
