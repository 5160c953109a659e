import random
from fractions import Fraction

import pytest

from breakdiv.errors import EmptyCut, NotASemiModel, PointOffGraph, WrongDegree
from breakdiv.fixtures import random_graph
from breakdiv.graph import refine, spanning_trees
from breakdiv.homology import abel_jacobi, jac_equivalent
from breakdiv.metric import (
    MetricDivisor,
    MetricPoint,
    break_certificate,
    canonical_break_divisor_metric,
    convert_divisor,
    from_root_point,
    is_metric_orientable,
    is_metric_q_orientable,
    is_rigid_interior,
    metric_divisor_from_json,
    metric_divisor_to_json,
    metric_fire_cut,
    metric_make_orientable,
    metric_make_q_orientable,
    model_for,
    restricted_graph,
    to_root_point,
)
from breakdiv.orient import canonical_break_divisor, enumerate_integral_break_divisors


def pt(g, e, t):
    return MetricPoint.on(g, e, Fraction(t))


def md(*pairs):
    out = {}
    for p, c in pairs:
        out[p] = out.get(p, 0) + c
    return MetricDivisor(out)


def V(v):
    return MetricPoint.at(v)


def random_point(rng, g):
    if not g.edges or rng.random() < 0.3:
        return V(rng.choice(g.vertices))
    e = rng.choice(g.edges)
    den = rng.choice([2, 3, 4])
    return MetricPoint.on(g, e.id, Fraction(rng.randint(0, int(e.length * den)), den))


def random_metric_divisor(rng, g, degree, negatives=1):
    d = {}
    for _ in range(degree + negatives):
        p = random_point(rng, g)
        d[p] = d.get(p, 0) + 1
    for _ in range(negatives):
        p = random_point(rng, g)
        d[p] = d.get(p, 0) - 1
    return MetricDivisor(d)


def random_refinement(rng, g):
    spec = []
    for e in g.edges:
        if rng.random() < 0.5:
            offs = sorted({Fraction(rng.randint(1, int(6 * e.length) - 1), 6) for _ in range(rng.randint(1, 2))})
            spec.append((e.id, offs))
    return refine(g, spec)


class TestPoints:
    def test_endpoints_normalize(self, th):
        assert pt(th, "a", 0) == V("u")
        assert pt(th, "a", 2) == V("v")
        assert pt(th, "a", "1/2").offset == Fraction(1, 2)

    def test_off_graph(self, th):
        with pytest.raises(PointOffGraph):
            pt(th, "b", 2)
        with pytest.raises(PointOffGraph):
            metric_divisor_from_json(th, {"points": [{"vertex": "w", "coeff": 1}]})

    def test_json_round_trip(self, th):
        d = md((pt(th, "a", "1/2"), 1), (V("u"), -2), (pt(th, "c", "3/2"), 3))
        raw = metric_divisor_to_json(th, d)
        assert raw["points"][0] == {"vertex": "u", "coeff": -2}
        assert metric_divisor_from_json(th, raw) == d
        assert metric_divisor_from_json(th, {"u": 2}) == md((V("u"), 2))

    def test_root_coordinates(self, th):
        r = refine(th, [("a", ["1/2", "3/2"])])
        p = MetricPoint(edge="a.2", offset=Fraction(1, 4))
        assert to_root_point(r, p) == pt(th, "a", "3/4")
        assert from_root_point(r, pt(th, "a", "3/4")) == p
        assert from_root_point(r, pt(th, "a", "3/2")) == V("a@2")


class TestModels:
    def test_midpoint_model(self, th):
        mb = pt(th, "b", "1/2")
        model, dm, mapping = model_for(th, md((mb, 2)))
        assert len(model.vertices) == 3
        assert sorted(e.length for e in model.edges if e.id.startswith("b")) == [Fraction(1, 2)] * 2
        assert dm == md((mapping[mb], 2))

    def test_vertex_support_unchanged(self, th):
        model, dm, _ = model_for(th, md((V("u"), 1)))
        assert model == th and dm == md((V("u"), 1))

    def test_two_interior_points(self, th):
        d = md((pt(th, "a", "1/2"), 1), (pt(th, "c", "3/2"), 1))
        model, _, _ = model_for(th, d, V("u"))
        assert len(model.vertices) == 4

    def test_restricted_graph(self, th):
        d = md((pt(th, "a", "1/2"), 1), (pt(th, "c", "3/2"), 1))
        view = restricted_graph(th, d)
        assert set(view.g_d.vertices) == {"u", "v"} and view.g_d.edge_ids == ("b",)
        view = restricted_graph(th, md((V("u"), 1)))
        assert view.g_d == th and view.d_g == {"u": 1}
        with pytest.raises(NotASemiModel):
            restricted_graph(th, md((pt(th, "b", "1/2"), 2)))


class TestCutFiring:
    def test_worked_trace(self, th):
        model, dm, mapping = model_for(th, md((V("u"), -1), (pt(th, "b", "1/2"), 2)))
        after, step = metric_fire_cut(model, dm, {"u", "v"})
        assert step == Fraction(1, 2)
        assert after == md((V("v"), 1))

    def test_interval_to_interior_chip(self, th):
        # the shortest interval ends at the chip on a, which lands on u
        d = md((pt(th, "a", "1/2"), 1), (V("v"), -1))
        after, step = metric_fire_cut(th, d, {"u"})
        assert step == Fraction(1, 2)
        assert after[V("u")] == 1 and after[pt(th, "a", "1/2")] == 0

    def test_chipless_far_end(self, th):
        after, step = metric_fire_cut(th, md(), {"u"})
        assert step == 1
        # all three intervals end at v; only b is short enough to reach u
        assert after[V("v")] == -3 and after[V("u")] == 1
        assert after[pt(th, "a", 1)] == 1 and after[pt(th, "c", 1)] == 1

    def test_empty_cut(self, th):
        with pytest.raises(EmptyCut):
            metric_fire_cut(th, md(), {"u", "v"})

    def test_preserves_class(self, th):
        d = md((pt(th, "a", "1/3"), 1), (V("v"), -1), (pt(th, "c", "1/2"), 1))
        after, _ = metric_fire_cut(th, d, {"v"})
        assert jac_equivalent(th, d, after)


class TestOrientable:
    def test_worked_example(self, th):
        d = md((V("u"), -1), (pt(th, "b", "1/2"), 2))
        out, log = metric_make_orientable(th, d)
        assert out == md((V("v"), 1)) and len(log) == 1
        out, _ = metric_make_q_orientable(th, d, "u")
        assert out == md((V("v"), 1))
        assert is_metric_q_orientable(th, out, "u")

    def test_fixed_points(self, th):
        d = md((V("u"), 1))
        assert metric_make_orientable(th, d) == (d, [])
        assert is_metric_orientable(th, d)

    def test_wrong_degree(self, th):
        with pytest.raises(WrongDegree):
            metric_make_orientable(th, md((V("u"), 2)))

    def test_random_inputs_become_orientable(self, th):
        rng = random.Random(41)
        for _ in range(30):
            d = random_metric_divisor(rng, th, 1)
            out, log = metric_make_orientable(th, d)
            model, dm, _ = model_for(th, out)
            assert is_metric_orientable(model, dm)
            assert jac_equivalent(th, d, out)
            for step in log:
                assert abel_jacobi(step.model, step.before) == abel_jacobi(step.model, step.after)

    def test_refinement_invariance_of_q_orientable(self, th):
        d = md((V("u"), -1), (pt(th, "b", "1/2"), 2))
        r = refine(th, [("a", ["1/2"]), ("c", ["1", "3/2"])])
        out_r, _ = metric_make_q_orientable(r, convert_divisor(th, r, d), "u")
        assert convert_divisor(r, th, out_r) == md((V("v"), 1))


class TestCanonical:
    def test_worked_trace(self, th):
        assert canonical_break_divisor_metric(th, md((pt(th, "b", "1/2"), 2))) == md((V("u"), 1), (V("v"), 1))

    def test_rigid_divisor_is_fixed(self, th):
        d = md((pt(th, "a", "1/2"), 1), (pt(th, "c", "3/2"), 1))
        assert canonical_break_divisor_metric(th, d) == d
        assert is_rigid_interior(th, d)

    def test_agrees_with_integral_version(self, thu):
        for cs in [{"x": 2}, {"u": 3, "v": -1}, {"y": 4, "x": -2}, {"v": 2}]:
            ours = canonical_break_divisor_metric(thu, MetricDivisor.from_vertices(cs))
            assert ours == MetricDivisor.from_vertices(canonical_break_divisor(thu, cs))

    def test_wrong_degree(self, th):
        with pytest.raises(WrongDegree):
            canonical_break_divisor_metric(th, md((V("u"), 1)))

    def test_random_graphs(self):
        rng = random.Random(8)
        for _ in range(15):
            g = random_graph(rng, max_vertices=4, max_edges=6, max_length=3)
            d = random_metric_divisor(rng, g, g.genus)
            out = canonical_break_divisor_metric(g, d)
            assert break_certificate(g, out) is not None
            assert jac_equivalent(g, d, out)
            assert canonical_break_divisor_metric(g, out) == out
            q = MetricPoint.at(g.vertices[-1])
            assert canonical_break_divisor_metric(g, d, q) == out
            r = random_refinement(rng, g)
            out_r = canonical_break_divisor_metric(r, convert_divisor(g, r, d))
            assert convert_divisor(r, g, out_r) == out


class TestCertificates:
    def test_examples(self, thu, p3):
        cert = break_certificate(thu, MetricDivisor.from_vertices({"x": 1, "y": 1}))
        assert cert.tree == ("a1", "b", "c1")
        assert dict((p.vertex, e) for p, e in cert.assignment) == {"x": "a2", "y": "c2"}
        assert break_certificate(thu, MetricDivisor.from_vertices({"x": 2})) is None
        cert = break_certificate(p3, MetricDivisor())
        assert cert.tree == ("f1", "f2") and cert.assignment == ()

    def test_integral_break_divisors_have_certificates(self, thu):
        for b in enumerate_integral_break_divisors(thu):
            assert break_certificate(thu, MetricDivisor.from_vertices(b)) is not None

    def test_rigid_interior(self, th, thu):
        assert not is_rigid_interior(thu, MetricDivisor.from_vertices({"u": 1, "v": 1}))
        assert not is_rigid_interior(th, md((pt(th, "a", "1/2"), 2)))
        assert break_certificate(th, md((pt(th, "a", "1/2"), 2))) is None


def test_metric_trees_match_graph(th):
    assert len(spanning_trees(th)) == 3
