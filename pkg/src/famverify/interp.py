"""Matrix semantics of diagrams.

Every generator becomes a small tensor with one 2-dimensional axis per leg;
generators of high arity are split into a chain of 3-leg tensors joined by
internal bond wires so that no single tensor grows with the arity.  The X
spider is built as a Z spider with a Hadamard on every leg, the ZH H-box as
a weighted copy tensor with ``[[1, 0], [1, 1]]`` on every leg, and the W
spider as a chain that counts how many legs carry a 1 (the W tensor is read
with every leg as an output, bending input wires).

Three entry algebras share the same network: ``complex`` floats, exact
Gaussian rationals, and Laurent polynomials in the phase variables (ZX
variable ``a`` stands for ``Y_a = exp(i*a)``; ZH/ZW variables stand for
themselves).  Matrices have the outputs as rows and the inputs as columns,
first boundary slot most significant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from .contract import DEFAULT_MAX_DIM, contract_network
from .diagram import (
    ZH_H, ZH_Z, ZW_CROSS, ZW_W, ZW_Z, ZX_H, ZX_X, ZX_Z, Diagram, is_simple,
)
from .errors import DimensionCapExceeded, HasBangbox, NotSimple
from .gauss import GaussOps
from .phasepoly import (
    DegreePair, GaussianRational, LaurentPoly, PolyMatrix, mat_degree, quotient_reduce,
)

CHAIN_ABOVE = 3

_HADAMARD = ((1, 1), (1, -1))
_IDENTITY = ((1, 0), (0, 1))
_HBOX_LEG = ((1, 0), (1, 1))  # [x][b]: leg x sees bond b


class _Algebra:
    dtype = object

    def const(self, c):
        raise NotImplementedError

    def corner(self, phase):
        raise NotImplementedError


class _Complex(_Algebra):
    dtype = complex

    def const(self, c):
        return complex(c)

    def corner(self, phase):
        return complex(phase.corner().constant_value())


class _Exact(_Algebra):
    def const(self, c):
        return GaussianRational(c) if not isinstance(c, GaussianRational) else c

    def corner(self, phase):
        v = phase.corner().constant_value()
        if not isinstance(v, GaussianRational):
            raise TypeError("inexact phase")
        return v


class _Symbolic(_Algebra):
    def __init__(self, quotients: Mapping[str, int] | None = None):
        self.quotients = dict(quotients or {})

    def const(self, c):
        return LaurentPoly.const(c)

    def reduce(self, p: LaurentPoly) -> LaurentPoly:
        for v, g in self.quotients.items():
            if v in p.variables():
                p = quotient_reduce(p, v, g)
        return p

    def corner(self, phase):
        return self.reduce(phase.corner())


def _copy_spider(alg, weights, leg, labels, fresh):
    """Tensors of ``sum_b weights[b] * prod_i leg[x_i][b]`` over the given leg labels."""
    k = len(labels)
    w = [weights[0], weights[1]]
    if k <= CHAIN_ABOVE:
        arr = np.empty((2,) * k, dtype=alg.dtype)
        for xs in itertools.product((0, 1), repeat=k):
            acc = alg.const(0)
            for b in (0, 1):
                coeff = 1
                for x in xs:
                    coeff *= leg[x][b]
                if coeff:
                    acc = acc + w[b] * alg.const(coeff)
            arr[xs] = acc
        return [(arr, list(labels))]
    bonds = [fresh() for _ in range(k - 1)]
    out = []
    first = np.empty((2, 2), dtype=alg.dtype)
    for x in (0, 1):
        for b in (0, 1):
            first[x, b] = w[b] * alg.const(leg[x][b])
    out.append((first, [labels[0], bonds[0]]))
    for i in range(1, k - 1):
        mid = np.empty((2, 2, 2), dtype=alg.dtype)
        for b in (0, 1):
            for x in (0, 1):
                for b2 in (0, 1):
                    mid[b, x, b2] = alg.const(leg[x][b] if b == b2 else 0)
        out.append((mid, [bonds[i - 1], labels[i], bonds[i]]))
    last = np.empty((2, 2), dtype=alg.dtype)
    for b in (0, 1):
        for x in (0, 1):
            last[b, x] = alg.const(leg[x][b])
    out.append((last, [bonds[-1], labels[-1]]))
    return out


def _w_spider(alg, labels, fresh):
    k = len(labels)
    if k <= CHAIN_ABOVE:
        arr = np.empty((2,) * k, dtype=alg.dtype)
        for xs in itertools.product((0, 1), repeat=k):
            arr[xs] = alg.const(1 if sum(xs) == 1 else 0)
        return [(arr, list(labels))]
    bonds = [fresh() for _ in range(k - 1)]
    out = []
    first = np.empty((2, 2), dtype=alg.dtype)
    for x in (0, 1):
        for c in (0, 1):
            first[x, c] = alg.const(1 if c == x else 0)
    out.append((first, [labels[0], bonds[0]]))
    for i in range(1, k - 1):
        mid = np.empty((2, 2, 2), dtype=alg.dtype)
        for c in (0, 1):
            for x in (0, 1):
                for c2 in (0, 1):
                    mid[c, x, c2] = alg.const(1 if c2 == c + x else 0)
        out.append((mid, [bonds[i - 1], labels[i], bonds[i]]))
    last = np.empty((2, 2), dtype=alg.dtype)
    for c in (0, 1):
        for x in (0, 1):
            last[c, x] = alg.const(1 if c + x == 1 else 0)
    out.append((last, [bonds[-1], labels[-1]]))
    return out


def _crossing(alg, labels):
    arr = np.empty((2, 2, 2, 2), dtype=alg.dtype)
    for i0, i1, o0, o1 in itertools.product((0, 1), repeat=4):
        val = (-1 if i0 and i1 else 1) if (o0 == i1 and o1 == i0) else 0
        arr[i0, i1, o0, o1] = alg.const(val)
    return [(arr, list(labels))]


def _matrix2(alg, rows, labels):
    arr = np.empty((2, 2), dtype=alg.dtype)
    for i in (0, 1):
        for j in (0, 1):
            arr[i, j] = alg.const(rows[i][j])
    return [(arr, list(labels))]


def node_tensors(alg, node, labels, fresh):
    """Network fragment of one generator over the given leg labels."""
    kind = node.kind
    if kind == ZX_H:
        return _matrix2(alg, _HADAMARD, labels)
    if kind == ZW_CROSS:
        return _crossing(alg, labels)
    if kind == ZW_W:
        return _w_spider(alg, labels, fresh)
    one = alg.const(1)
    if kind in (ZX_Z, ZW_Z):
        return _copy_spider(alg, (one, alg.corner(node.effective_phase())), _IDENTITY, labels, fresh)
    if kind == ZX_X:
        return _copy_spider(alg, (one, alg.corner(node.effective_phase())), _HADAMARD, labels, fresh)
    if kind == ZH_Z:
        return _copy_spider(alg, (one, one), _IDENTITY, labels, fresh)
    if kind == ZH_H:
        return _copy_spider(alg, (one, alg.corner(node.effective_phase()) - one), _HBOX_LEG,
                            labels, fresh)
    raise ValueError(f"no interpretation for {kind}")


def build_network(d: Diagram, alg) -> tuple[list, list]:
    counter = itertools.count()

    def fresh():
        return ("bond", next(counter))

    legs: dict = {n.id: [] for n in d.nodes}
    ports: dict = {n.id: {} for n in d.nodes}
    tensors = []
    ident = _IDENTITY
    for k, (a, b) in enumerate(d.edges):
        sa, sb = d.is_slot(a.ref), d.is_slot(b.ref)
        if sa and sb:
            tensors += _matrix2(alg, ident, [("slot", a.ref), ("slot", b.ref)])
            continue
        if sa or sb:
            slot, end = (a, b) if sa else (b, a)
            ends = [(end, ("slot", slot.ref))]
        elif a.ref == b.ref:
            la, lb = ("edge", k, 0), ("edge", k, 1)
            tensors += _matrix2(alg, ident, [la, lb])
            ends = [(a, la), (b, lb)]
        else:
            ends = [(a, ("edge", k)), (b, ("edge", k))]
        for end, lbl in ends:
            if end.port is None:
                legs[end.ref].append(lbl)
            else:
                ports[end.ref][end.port] = lbl
    for n in d.nodes:
        labels = [ports[n.id][p] for p in range(4)] if n.kind == ZW_CROSS else legs[n.id]
        tensors += node_tensors(alg, n, labels, fresh)
    open_labels = [("slot", s) for s in d.outputs] + [("slot", s) for s in d.inputs]
    return tensors, open_labels


def _contract(d: Diagram, alg, max_dim: int, order="greedy") -> np.ndarray:
    tensors, open_labels = build_network(d, alg)
    ops = GaussOps() if isinstance(alg, _Exact) else None
    arr = contract_network(tensors, open_labels, max_dim=max_dim, dtype=alg.dtype, order=order,
                           ops=ops)
    if ops is not None:
        arr = arr.to_array()
    return np.asarray(arr, dtype=alg.dtype).reshape(2 ** len(d.outputs), 2 ** len(d.inputs))


def _check_no_boxes(d: Diagram):
    if d.bangboxes:
        raise HasBangbox(f"diagram still has !-boxes {sorted(d.boxes)}")


def interpret_family(d: Diagram, quotients: Mapping[str, int] | None = None,
                     max_dim: int = DEFAULT_MAX_DIM, order="greedy") -> PolyMatrix:
    """Laurent polynomial matrix of a !-box-free diagram."""
    _check_no_boxes(d)
    q = tuple(sorted((quotients or {}).items()))
    if order == "greedy":
        return _interpret_family_cached(d, q, max_dim)
    return _interpret_family(d, q, max_dim, order)


def _interpret_family(d, q, max_dim, order):
    alg = _Symbolic(dict(q))
    arr = _contract(d, alg, max_dim, order)
    return PolyMatrix(arr.shape[0], arr.shape[1], [alg.reduce(e) for e in arr.ravel()])


@lru_cache(maxsize=512)
def _interpret_family_cached(d, q, max_dim):
    return _interpret_family(d, q, max_dim, "greedy")


def is_exact_diagram(d: Diagram) -> bool:
    for n in d.nodes:
        ph = n.effective_phase()
        if ph is not None and not ph.corner().is_exact():
            return False
    return True


def interpret_simple(d: Diagram, max_dim: int = DEFAULT_MAX_DIM, order="greedy") -> np.ndarray:
    """Complex matrix of a simple diagram."""
    if not is_simple(d):
        raise NotSimple("diagram has phase variables or !-boxes")
    return _contract(d, _Complex(), max_dim, order)


def interpret_exact(d: Diagram, max_dim: int = DEFAULT_MAX_DIM, order="greedy") -> np.ndarray | None:
    """Exact Gaussian-rational matrix of a simple diagram, or None if a phase is inexact."""
    if not is_simple(d):
        raise NotSimple("diagram has phase variables or !-boxes")
    if not is_exact_diagram(d):
        return None
    return _contract(d, _Exact(), max_dim, order)


@dataclass(frozen=True)
class DiagramDegree:
    """Degree of one variable in a diagram; ``exact`` is False for the additive bound."""

    pos: float
    neg: float
    exact: bool

    @property
    def pair(self) -> DegreePair:
        return DegreePair(self.pos, self.neg)


def degree_bound(d: Diagram, var: str, quotient: int | None = None) -> DegreePair:
    """Sum of per-generator degrees; an upper bound on the interpreted degree."""
    pos = neg = 0
    for n in d.nodes:
        ph = n.effective_phase()
        if ph is None:
            continue
        deg = ph.degree(var).clamped()
        pos += deg.pos
        neg += deg.neg
    if quotient is not None:
        # exponents land in [0, g-1]; a negative one can land anywhere there
        return DegreePair(quotient - 1 if neg else min(pos, quotient - 1), 0)
    return DegreePair(pos, neg)


def diagram_degree(d: Diagram, var: str, quotients: Mapping[str, int] | None = None,
                   max_dim: int = DEFAULT_MAX_DIM) -> DiagramDegree:
    _check_no_boxes(d)
    try:
        m = interpret_family(d, quotients, max_dim)
    except DimensionCapExceeded:
        b = degree_bound(d, var, (quotients or {}).get(var))
        return DiagramDegree(b.pos, b.neg, False)
    deg = mat_degree(m, var)
    return DiagramDegree(deg.pos, deg.neg, True)


def diagram_degrees(d: Diagram, variables, quotients: Mapping[str, int] | None = None,
                    max_dim: int = DEFAULT_MAX_DIM) -> dict:
    """Degrees of several variables from a single interpretation."""
    _check_no_boxes(d)
    try:
        m = interpret_family(d, quotients, max_dim)
    except DimensionCapExceeded:
        out = {}
        for v in variables:
            b = degree_bound(d, v, (quotients or {}).get(v))
            out[v] = DiagramDegree(b.pos, b.neg, False)
        return out
    out = {}
    for v in variables:
        deg = mat_degree(m, v)
        out[v] = DiagramDegree(deg.pos, deg.neg, True)
    return out
