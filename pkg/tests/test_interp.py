import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from famverify.contract import contract_network
from famverify.diagram import (
    ZH_H, ZH_Z, ZW_CROSS, ZW_W, ZW_Z, ZX_H, ZX_X, ZX_Z, Diagram, Node, PolyPhase, compose,
    empty, instantiate_phase, tensor,
)
from famverify.errors import DimensionCapExceeded, HasBangbox, NotSimple
from famverify.interp import (
    degree_bound, diagram_degree, interpret_exact, interpret_family, interpret_simple,
)
from famverify.phasepoly import DegreePair, GaussianRational, LaurentPoly, PolyMatrix, mat_degree

from conftest import zx
from strategies import generator, small_diagram

a = LaurentPoly.var("a")


def one_node(language, kind, phase=None, n_in=1, n_out=1):
    ins = [f"i{k}" for k in range(n_in)]
    outs = [f"o{k}" for k in range(n_out)]
    return Diagram.build(language, [Node("g", kind, phase)],
                         [(s, "g") for s in ins] + [("g", s) for s in outs], ins, outs)


def rows(m: PolyMatrix):
    return [[m[i, j] for j in range(m.cols)] for i in range(m.rows)]


# generators

def test_zx_spider_corner():
    m = interpret_family(one_node("ZX", ZX_Z, zx(a=1)))
    assert m == PolyMatrix.from_rows([[1, 0], [0, a]])


def test_zx_hadamard():
    m = interpret_simple(one_node("ZX", ZX_H))
    assert np.array_equal(m, [[1, 1], [1, -1]])


def test_zw_crossing():
    d = Diagram.build("ZW", [Node("x", ZW_CROSS)],
                      [("i0", ("x", 0)), ("i1", ("x", 1)), (("x", 2), "o0"), (("x", 3), "o1")],
                      ["i0", "i1"], ["o0", "o1"])
    expected = [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]]
    assert np.array_equal(interpret_simple(d), expected)


def test_zx_identity_spider():
    assert np.array_equal(interpret_simple(one_node("ZX", ZX_Z, zx(0))), np.eye(2))


def test_zh_hbox_phase():
    d = one_node("ZH", ZH_H, PolyPhase(LaurentPoly.const(3)))
    assert np.array_equal(interpret_simple(d), [[1, 1], [1, 3]])
    assert interpret_family(one_node("ZH", ZH_H, PolyPhase(a))) == \
        PolyMatrix.from_rows([[1, 1], [1, a]])


def test_zh_hbox_default_is_hadamard():
    assert np.array_equal(interpret_simple(one_node("ZH", ZH_H)), [[1, 1], [1, -1]])


def test_zw_w_state():
    d = one_node("ZW", ZW_W, n_in=0, n_out=2)
    assert np.array_equal(interpret_simple(d), [[0], [1], [1], [0]])


def test_zw_w_four_legs():
    d = one_node("ZW", ZW_W, n_in=0, n_out=4)
    v = interpret_simple(d).ravel()
    assert [k for k in range(16) if v[k]] == [1, 2, 4, 8] and set(v[[1, 2, 4, 8]]) == {1}


def test_zw_w_with_zero_legs_is_zero():
    assert np.array_equal(interpret_simple(one_node("ZW", ZW_W, n_in=0, n_out=0)), [[0]])


def test_zw_z_spider():
    m = interpret_family(one_node("ZW", ZW_Z, PolyPhase(a ** 2), n_in=1, n_out=2))
    assert m[0, 0] == LaurentPoly.const(1) and m[3, 1] == a ** 2
    assert sum(not e.is_zero() for e in m.entries) == 2


def test_x_spider_is_h_conjugated_z():
    x = interpret_simple(one_node("ZX", ZX_X, zx(Fraction(1, 2))))
    z = interpret_simple(one_node("ZX", ZX_Z, zx(Fraction(1, 2))))
    h = np.array([[1, 1], [1, -1]])
    assert np.allclose(x, h @ z @ h)


def test_x_pi_exact():
    m = interpret_exact(one_node("ZX", ZX_X, zx(1)))
    assert m.tolist() == [[0, 2], [2, 0]]
    assert all(isinstance(x, GaussianRational) for x in m.ravel())


def test_exact_none_for_irrational_angles():
    assert interpret_exact(one_node("ZX", ZX_Z, zx(Fraction(1, 4)))) is None


@pytest.mark.parametrize("arity", [4, 5, 6])
def test_large_arity_chains(arity):
    d = one_node("ZX", ZX_Z, zx(a=1), n_in=arity // 2, n_out=arity - arity // 2)
    m = interpret_family(d)
    nonzero = {(i, j): e for i in range(m.rows) for j in range(m.cols)
               if not (e := m[i, j]).is_zero()}
    assert nonzero == {(0, 0): LaurentPoly.const(1), (m.rows - 1, m.cols - 1): a}
    h = interpret_family(one_node("ZH", ZH_H, PolyPhase(a), n_in=0, n_out=arity))
    assert [e for e in h.entries if e != LaurentPoly.const(1)] == [a]
    w = interpret_simple(one_node("ZW", ZW_W, n_in=0, n_out=arity)).ravel()
    assert sorted(np.flatnonzero(w)) == [1 << k for k in range(arity)]


def test_scalars():
    assert np.array_equal(interpret_simple(empty("ZX")), [[1]])
    loop = Diagram.build("ZX", [Node("l", ZX_Z)], [("l", "l")])
    assert np.array_equal(interpret_simple(loop), [[2]])


def test_self_loop_on_spider():
    d = Diagram.build("ZX", [Node("s", ZX_Z, zx(1))], [("i", "s"), ("s", "s"), ("s", "o")],
                      ["i"], ["o"])
    assert np.array_equal(interpret_simple(d), [[1, 0], [0, -1]])


def test_bare_wires():
    swap = Diagram.build("ZX", [], [("i0", "o1"), ("i1", "o0")], ["i0", "i1"], ["o0", "o1"])
    m = interpret_simple(swap)
    assert np.array_equal(m, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    cup = Diagram.build("ZX", [], [("o0", "o1")], [], ["o0", "o1"])
    assert np.array_equal(interpret_simple(cup), [[1], [0], [0], [1]])


def test_quotient_mode():
    d = one_node("ZX", ZX_Z, zx(t=9))
    t = LaurentPoly.var("t")
    assert interpret_family(d, {"t": 8}) == PolyMatrix.from_rows([[1, 0], [0, t]])
    assert interpret_family(d)[1, 1] == t ** 9


def test_errors():
    boxed = Diagram.build("ZX", [Node("s", ZX_Z)], bangboxes={"d": ["s"]})
    with pytest.raises(HasBangbox):
        interpret_family(boxed)
    with pytest.raises(NotSimple):
        interpret_simple(one_node("ZX", ZX_Z, zx(a=1)))
    with pytest.raises(DimensionCapExceeded):
        interpret_simple(one_node("ZX", ZX_Z, n_in=4, n_out=4), max_dim=8)


# degrees

def test_degree_negative_spider_bound():
    d = one_node("ZX", ZX_Z, zx(a=-2))
    assert degree_bound(d, "a") == DegreePair(0, 2)
    assert diagram_degree(d, "a").pair == DegreePair(0, 2)


def test_degree_absent_var():
    assert diagram_degree(one_node("ZX", ZX_Z, zx(b=1)), "a").pair == DegreePair(0, 0)


def test_degree_two_variable_fusion_example():
    d = compose(one_node("ZX", ZX_Z, zx(a=1)), one_node("ZX", ZX_Z, zx(b=1)))
    for v in ("a", "b"):
        deg = diagram_degree(d, v)
        assert deg.exact and deg.pair == DegreePair(1, 0)


def test_degree_falls_back_to_bound():
    d = one_node("ZX", ZX_Z, zx(a=3), n_in=4, n_out=4)
    deg = diagram_degree(d, "a", max_dim=8)
    assert not deg.exact and deg.pair == DegreePair(3, 0)


def test_degree_bound_with_quotient():
    d = compose(one_node("ZX", ZX_Z, zx(a=5)), one_node("ZX", ZX_Z, zx(a=6)))
    assert degree_bound(d, "a", 8) == DegreePair(7, 0)
    assert degree_bound(one_node("ZX", ZX_Z, zx(a=-1)), "a", 8) == DegreePair(7, 0)
    assert degree_bound(one_node("ZX", ZX_Z, zx(a=2)), "a", 8) == DegreePair(2, 0)


@given(st.sampled_from(["ZX", "ZH", "ZW"]).flatmap(small_diagram))
def test_exact_degree_below_bound(d):
    for v in ("a", "b"):
        exact = diagram_degree(d, v)
        bound = degree_bound(d, v)
        assert exact.exact
        assert exact.pair.clamped() <= bound


# properties

def _y(lang, v):
    return cmath.exp(1j * cmath.pi * v) if lang == "ZX" else v


@given(st.sampled_from(["ZX", "ZH", "ZW"]).flatmap(small_diagram),
       st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(1, 3), Fraction(7, 5)]),
       st.sampled_from([Fraction(1, 4), Fraction(3, 2), Fraction(2)]))
def test_evaluation_commutes_with_instantiation(d, va, vb):
    if d.language != "ZX":
        va, vb = va + 1, vb
    m = interpret_family(d)
    inst = instantiate_phase(instantiate_phase(d, "a", va), "b", vb)
    direct = interpret_simple(inst)
    via = m.evaluate({"a": _y(d.language, va), "b": _y(d.language, vb)})
    assert np.max(np.abs(direct - via)) <= 1e-9
    ex = interpret_exact(inst)
    if ex is not None and d.language != "ZX":
        exact_via = np.array([e.evaluate({"a": va, "b": vb}) for e in m.entries],
                             dtype=object).reshape(m.shape)
        assert (ex == exact_via).all()


@given(st.sampled_from(["ZX", "ZH", "ZW"]).flatmap(small_diagram), st.integers(0, 10 ** 6))
def test_contraction_order_independent(d, seed):
    assert interpret_family(d, order=seed) == interpret_family(d)


@given(st.sampled_from(["ZX", "ZH", "ZW"]).flatmap(lambda l: st.tuples(generator(l),
                                                                        generator(l))))
def test_functoriality_tensor(pair):
    from famverify.phasepoly import mat_kron
    x, y = pair
    assert interpret_family(tensor(x, y)) == mat_kron(interpret_family(x), interpret_family(y))


@st.composite
def composable(draw):
    lang = draw(st.sampled_from(["ZX", "ZH", "ZW"]))
    x = draw(generator(lang))
    y = draw(generator(lang, n_in=len(x.outputs)))
    return x, y


@given(composable())
def test_functoriality_compose(pair):
    from famverify.phasepoly import mat_mul
    x, y = pair
    assert interpret_family(compose(x, y)) == mat_mul(interpret_family(y), interpret_family(x))


def test_contract_network_outer_product():
    u = np.array([1, 2], dtype=complex)
    v = np.array([3, 5], dtype=complex)
    out = contract_network([(u, ["x"]), (v, ["y"])], ["y", "x"])
    assert np.array_equal(out, np.outer(v, u))
