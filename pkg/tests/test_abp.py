import random

import pytest

from ncips.abp import (
    abp_expand,
    abp_to_dot,
    abp_to_json,
    formula_to_abp,
    level_matrices,
    split_degree_components,
)
from ncips.fields import GF2_FIELD, QQ
from ncips.formula import (
    apply_induced_part,
    expand,
    parse_formula,
    syntactic_homogeneous_degree,
)
from ncips.linalg import scalar_combination
from ncips.poly import NcPoly

from helpers import Z5, all_formulas, leaf_pool, make_expand_memo, random_homogeneous


def test_single_variable():
    f = parse_formula("x1", QQ)
    a, vparts = formula_to_abp(f)
    assert a.degree == 1
    assert [len(lv) for lv in a.levels] == [1, 1]
    assert len(a.edges[0]) == 1
    assert a.edges[0][(0, 0)].coeffs == {1: QQ.one}
    assert abp_expand(a) == expand(f)


def test_two_product_branches():
    f = parse_formula("(+ (* x1 x2) (* x3 x4))", QQ)
    a, vparts = formula_to_abp(f)
    assert [len(lv) for lv in a.levels] == [1, 2, 1]
    first = sorted(form.to_text() for form in a.edges[0].values())
    second = sorted(form.to_text() for form in a.edges[1].values())
    assert first == ["1*x1", "1*x3"]
    assert second == ["1*x2", "1*x4"]
    assert abp_expand(a).terms == {(1, 2): QQ.one, (3, 4): QQ.one}


def test_expand_from_equals_to():
    f = parse_formula("(* x1 x2)", QQ)
    a, _ = formula_to_abp(f)
    assert abp_expand(a, (1, 0), (1, 0)) == NcPoly.one(QQ)
    with pytest.raises(ValueError):
        abp_expand(a, (2, 0), (0, 0))


def test_rejects_inhomogeneous_and_constants():
    with pytest.raises(ValueError):
        formula_to_abp(parse_formula("(+ x1 (* x1 x2))", QQ))
    with pytest.raises(ValueError):
        formula_to_abp(parse_formula("7", QQ))


def _node_polys_from_sink(a):
    """abp_expand for every node at once: polynomials of the sub-programs
    into the sink, computed level by level."""
    field = a.field
    polys = {(len(a.levels) - 1, 0): NcPoly.one(field)}
    for j in range(len(a.levels) - 2, -1, -1):
        for p in range(len(a.levels[j])):
            acc = NcPoly.zero(field)
            for (pp, q), form in a.edges[j].items():
                if pp == p and (j + 1, q) in polys:
                    acc = acc + form.to_poly() * polys[(j + 1, q)]
            polys[(j, p)] = acc
    return polys


def _check_vparts(f, a, vparts):
    polys = _node_polys_from_sink(a)
    assert set(vparts) == set(polys)
    for key, part in vparts.items():
        assert expand(apply_induced_part(f, part)) == polys[key]
    # injectivity of the part map
    assert len(set(vparts.values())) == len(vparts)


def test_vparts_exhaustive_homogeneous_small():
    """Every node of the program of every syntactically homogeneous GF(2)
    formula of size <= 9: the induced part expands to the sub-program
    polynomial into the sink."""
    pool = leaf_pool(GF2_FIELD, 3)
    oracle = make_expand_memo(GF2_FIELD)
    checked = 0
    for f in all_formulas(GF2_FIELD, 9, pool):
        d = syntactic_homogeneous_degree(f)
        if d is None or d == 0:
            continue
        a, vparts = formula_to_abp(f)
        assert abp_expand(a) == oracle(f.root)
        _check_vparts(f, a, vparts)
        checked += 1
    assert checked > 100_000


def test_vparts_randomized_medium():
    rng = random.Random(90210)
    for _ in range(300):
        f = random_homogeneous(rng, Z5, rng.randint(1, 5), budget=10)
        if len(str(f.root)) > 4000:
            continue
        a, vparts = formula_to_abp(f)
        assert abp_expand(a) == expand(f)
        _check_vparts(f, a, vparts)


def test_split_components_cover_expansion():
    rng = random.Random(4)
    from helpers import random_formula

    for _ in range(400):
        f = random_formula(rng, Z5, rng.randrange(1, 30, 2), 3)
        p = expand(f)
        comps = split_degree_components(f)
        degrees = set()
        for d, a in comps.items():
            assert abp_expand(a) == p.degree_part(d)
            degrees.add(d)
        for d in p.degrees():
            if d >= 1:
                assert d in degrees  # every realized degree has a component


def test_gf2_cancellation():
    # parallel-edge merge cancels the labels and the component collapses
    f = parse_formula("(+ x1 x1)", GF2_FIELD)
    a = split_degree_components(f)[1]
    assert abp_expand(a).is_zero()
    assert all(not layer for layer in a.edges)
    # distinct parallel paths survive; cancellation happens in the polynomial
    g = parse_formula("(+ (* x1 x2) (* x1 x2))", GF2_FIELD)
    comps = split_degree_components(g)
    assert abp_expand(comps[2]).is_zero()


def test_level_matrices_shapes_and_reassembly():
    f = parse_formula("(+ (* x1 x2) (* x3 x4))", QQ)
    a, _ = formula_to_abp(f)
    mats = level_matrices(a)
    assert set(mats) == {1, 2}
    assert set(mats[2]) == {1, 3} and set(mats[1]) == {2, 4}
    m2 = mats[2]
    assert m2[1].nrows == 1 and m2[1].ncols == 2

    # reassembly: sum_k x_k M^(k) applied to level-below node polynomials
    polys = _node_polys_from_sink(a)
    d = a.degree
    for i in sorted(mats):
        j = d - i
        below = [polys[(j + 1, q)] for q in range(len(a.levels[j + 1]))]
        for p in range(len(a.levels[j])):
            acc = NcPoly.zero(QQ)
            for k, mk in mats[i].items():
                xk = NcPoly.variable(QQ, k)
                acc = acc + xk * scalar_combination(QQ, mk.rows[p], below)
            assert acc == polys[(j, p)]


def test_no_edges_between_levels_gives_zero_matrices():
    f = parse_formula("(+ x1 x1)", GF2_FIELD)
    a = split_degree_components(f)[1]
    mats = level_matrices(a)
    assert set(mats) == {1}
    assert mats[1] == {}  # no variable contributes a nonzero matrix


def test_exports():
    f = parse_formula("(+ (* x1 x2) (* x3 x4))", QQ)
    a, _ = formula_to_abp(f)
    j = abp_to_json(a)
    assert j["format"] == "ncips-abp-1"
    assert j["degree"] == 2
    assert len(j["edges"]) == 4
    dot = abp_to_dot(a)
    assert dot.startswith("digraph") and "->" in dot
