"""Combinatorial core: quivers, pairings, stability, HN types, constraints."""

import json
from fractions import Fraction

import pytest

from quiverdt.quiver import (
    Arrow,
    DimVector,
    FRAME_VERTEX,
    Quiver,
    QuiverError,
    SerreConstraint,
    StabilityCondition,
    a2_quiver,
    antisym_form,
    double,
    euler_form,
    frame,
    hn_f_exponent,
    hn_tau_exponent,
    hn_types,
    is_generic,
    jordan_quiver,
    load_constraint,
    load_quiver,
    load_stability,
    loops_nilpotent_constraint,
    multi_loop_quiver,
    nilpotent_module_constraint,
    point_quiver,
    quiver_from_dict,
    quiver_to_dict,
    slope,
    triple,
)


# -- construction and validation --------------------------------------------

def test_duplicate_vertex_rejected():
    with pytest.raises(QuiverError):
        Quiver(("0", "0"), ())


def test_duplicate_arrow_label_rejected():
    with pytest.raises(QuiverError):
        Quiver(("0",), (Arrow("x", "0", "0"), Arrow("x", "0", "0")))


def test_arrow_endpoint_must_exist():
    with pytest.raises(QuiverError):
        Quiver(("0",), (Arrow("x", "0", "1"),))


def test_dim_from_mapping_and_sequence():
    q = a2_quiver()
    assert q.dim({"1": 2, "2": 1}).values == (2, 1)
    assert q.dim([2, 1]).values == (2, 1)
    with pytest.raises(QuiverError):
        q.dim([2])
    with pytest.raises(QuiverError):
        q.dim([-1, 0])


def test_dimvector_total_and_zero():
    q = a2_quiver()
    d = q.dim((2, 1))
    assert d.total() == 3 and not d.is_zero()
    assert q.dim((0, 0)).is_zero()


# -- double / triple / frame -------------------------------------------------

def test_double_adds_starred_reverses():
    dq = double(a2_quiver())
    labels = [a.label for a in dq.arrows]
    assert labels == ["a", "a*"]
    star = dq.arrows[1]
    assert (star.src, star.tgt) == ("2", "1")


def test_double_label_collision_rejected():
    q = Quiver(("0",), (Arrow("x", "0", "0"), Arrow("x*", "0", "0")))
    with pytest.raises(QuiverError):
        double(q)


def test_triple_adds_one_loop_per_vertex():
    tq = triple(a2_quiver())
    labels = [a.label for a in tq.arrows]
    assert labels == ["a", "a*", "w(1)", "w(2)"]
    assert all(a.src == a.tgt for a in tq.arrows[2:])


def test_frame_puts_frame_vertex_first():
    q = a2_quiver()
    fq = frame(q, (1, 2))
    assert fq.vertices[0] == FRAME_VERTEX
    by_label = {a.label: a for a in fq.arrows}
    assert ("b(1,1)" in by_label) and ("b(2,1)" in by_label) and ("b(2,2)" in by_label)
    assert by_label["b(2,1)"].src == FRAME_VERTEX and by_label["b(2,1)"].tgt == "2"
    # framing given as a mapping works too
    fq2 = frame(q, {"1": 1, "2": 2})
    assert [a.label for a in fq2.arrows] == [a.label for a in fq.arrows]


def test_frame_dim_prefixes_framing_coordinate():
    fq = frame(jordan_quiver(), (1,))
    assert fq.dim((1, 2)).values == (1, 2)
    assert fq.vertices == (FRAME_VERTEX, "0")


# -- pairings -----------------------------------------------------------------

def test_euler_form_a2_closed_form():
    q = a2_quiver()
    for d in [(1, 0), (0, 1), (1, 1), (2, 1), (3, 2)]:
        for e in [(1, 0), (0, 1), (1, 1), (1, 2)]:
            dv, ev = q.dim(d), q.dim(e)
            expect = d[0] * e[0] + d[1] * e[1] - d[0] * e[1]
            assert euler_form(q, dv, ev) == expect


def test_euler_form_loops_subtract_squares():
    q = multi_loop_quiver(2)
    d = q.dim((3,))
    assert euler_form(q, d, d) == 9 - 2 * 9


def test_antisym_is_antisymmetric():
    q = a2_quiver()
    d, e = q.dim((2, 1)), q.dim((1, 3))
    assert antisym_form(q, d, e) == -antisym_form(q, e, d)
    assert antisym_form(q, d, e) == euler_form(q, d, e) - euler_form(q, e, d)


# -- stability, slopes, genericity -------------------------------------------

def test_slope_values():
    q = a2_quiver()
    z = StabilityCondition.from_map(q, {"1": -1, "2": 0})
    assert slope(z, q.dim((1, 0))) == Fraction(1)
    assert slope(z, q.dim((0, 1))) == Fraction(0)
    assert slope(z, q.dim((1, 1))) == Fraction(1, 2)
    with pytest.raises(QuiverError):
        slope(z, q.dim((0, 0)))


def test_stability_accepts_rational_strings():
    q = a2_quiver()
    z = StabilityCondition.from_map(q, {"1": "-1/2", "2": "1/3"})
    assert slope(z, q.dim((1, 0))) == Fraction(1, 2)


def test_genericity():
    q = a2_quiver()
    z = StabilityCondition.from_map(q, {"1": -1, "2": 0})
    assert is_generic(q, z, 2)
    tied = StabilityCondition.from_map(q, {"1": -1, "2": -1})
    assert not is_generic(q, tied, 2)
    with pytest.raises(QuiverError):
        is_generic(q, z, 0)


# -- HN types ------------------------------------------------------------------

def test_hn_types_a2_one_one():
    q = a2_quiver()
    z = StabilityCondition.from_map(q, {"1": -1, "2": 0})
    types = hn_types(q, z, q.dim((1, 1)))
    parts = {t.parts for t in types}
    assert parts == {((1, 1),), ((1, 0), (0, 1))}


def test_hn_types_a2_two_one():
    q = a2_quiver()
    z = StabilityCondition.from_map(q, {"1": -1, "2": 0})
    types = hn_types(q, z, q.dim((2, 1)))
    parts = {t.parts for t in types}
    assert parts == {((2, 1),), ((1, 0), (1, 1)), ((2, 0), (0, 1))}


def test_hn_types_have_strictly_descending_slopes():
    q = a2_quiver()
    z = StabilityCondition.from_map(q, {"1": -1, "2": 0})
    for t in hn_types(q, z, q.dim((2, 2))):
        slopes = [slope(z, q.dim(part)) for part in t.parts]
        assert slopes == sorted(slopes, reverse=True)
        assert len(set(slopes)) == len(slopes)
        total = tuple(sum(c) for c in zip(*t.parts))
        assert total == (2, 2)


def test_hn_degenerate_stability_only_singleton():
    q = a2_quiver()
    z0 = StabilityCondition.from_map(q, {"1": 0, "2": 0})
    types = hn_types(q, z0, q.dim((2, 2)))
    assert [t.parts for t in types] == [((2, 2),)]


def test_hn_exponents_pin_conventions():
    q = a2_quiver()
    two_part = next(
        t
        for t in hn_types(q, StabilityCondition.from_map(q, {"1": -1, "2": 0}), q.dim((1, 1)))
        if len(t.parts) == 2
    )
    assert two_part.parts == ((1, 0), (0, 1))
    # tau = -sum_{j<k} euler(alpha^k, alpha^j); euler((0,1),(1,0)) = 0
    assert hn_tau_exponent(q, two_part) == 0
    # f = sum_{j<k} antisym(alpha^j, alpha^k) = -1 here
    assert hn_f_exponent(q, two_part) == -1
    # reversed stability puts (0,1) first; then tau = +1 and f = +1
    zr = StabilityCondition.from_map(q, {"1": 0, "2": -1})
    rev = next(t for t in hn_types(q, zr, q.dim((1, 1))) if len(t.parts) == 2)
    assert rev.parts == ((0, 1), (1, 0))
    assert hn_tau_exponent(q, rev) == 1
    assert hn_f_exponent(q, rev) == 1


# -- Serre constraints ---------------------------------------------------------

def test_constraint_kind_validated():
    with pytest.raises(QuiverError):
        SerreConstraint(((("x",), "weird"),))


def test_constraint_cycle_must_be_closed_and_composable():
    q = a2_quiver()
    c = SerreConstraint(((("a",), "nilpotent"),))  # not a closed path in A2
    with pytest.raises(QuiverError):
        c.validate(q)
    ok = SerreConstraint(((("a", "a*"), "nilpotent"),))
    ok.validate(double(q))


def test_constraint_unknown_label_rejected():
    q = jordan_quiver()
    c = SerreConstraint(((("y",), "nilpotent"),))
    with pytest.raises(QuiverError):
        c.validate(q)


def test_constraint_helpers():
    q = multi_loop_quiver(2)
    sn = loops_nilpotent_constraint(q)
    assert len(sn.clauses) == 2 and not sn.nilpotent_module
    ssn = nilpotent_module_constraint()
    assert ssn.nilpotent_module and not ssn.clauses
    assert not sn.is_trivial() and not ssn.is_trivial()
    assert SerreConstraint().is_trivial()


# -- file formats ---------------------------------------------------------------

def test_quiver_json_roundtrip(tmp_path):
    q = frame(a2_quiver(), (1, 0))
    data = quiver_to_dict(q)
    assert quiver_from_dict(data) == q
    path = tmp_path / "q.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert load_quiver(str(path)) == q


def test_stability_file_roundtrip(tmp_path):
    q = a2_quiver()
    path = tmp_path / "z.json"
    path.write_text(json.dumps({"re": {"1": "-1/2", "2": "0"}}), encoding="utf-8")
    z = load_stability(str(path), q)
    assert slope(z, q.dim((1, 0))) == Fraction(1, 2)


def test_constraint_file_roundtrip(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(
        json.dumps(
            {"clauses": [{"cycle": ["x"], "kind": "nilpotent"}], "nilpotent_module": True}
        ),
        encoding="utf-8",
    )
    s = load_constraint(str(path))
    assert s.clauses == ((("x",), "nilpotent"),)
    assert s.nilpotent_module


def test_point_quiver_has_no_arrows():
    assert point_quiver().arrows == ()
