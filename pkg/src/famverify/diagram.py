"""Open-graph model of parameterised ZX, ZH and ZW diagrams.

A :class:`Diagram` is a set of generator nodes joined by undirected edges,
with ordered input and output boundary slots and labelled !-box regions.
Edges join *ends*; an end names a node or a boundary slot and, for the ZW
crossing only, a port number 0-3 (ports 0 and 1 are the inputs, 2 and 3 the
outputs of its matrix).  All other generators have unordered legs.

ZX phases are linear forms ``c*pi + sum(b_j * alpha_j)`` with integer
``b_j``.  Angles, both the constant ``c`` and any value substituted for a
variable, are measured in half-turns (units of pi), so ``Fraction(1, 2)``
means pi/2.  ZH and ZW phases are Laurent polynomials in the variables.

A !-box lists its direct members: node ids, boundary slot ids and the labels
of !-boxes nested inside it.  Nesting is also inferred when the contents of
one box are strictly contained in another's.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from numbers import Complex, Real
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    BoundaryMismatch, DiagramError, LanguageMismatch, NotLaminar, NotMaximalBox,
    UnknownKind, UnknownLabel, WrongValueKind,
)
from .phasepoly import DegreePair, GaussianRational, LaurentPoly, root_of_unity

LANGUAGES = ("ZX", "ZH", "ZW")

ZX_Z, ZX_X, ZX_H = "ZX-Z", "ZX-X", "ZX-H"
ZH_Z, ZH_H, ZH_GREY = "ZH-Z", "ZH-H", "ZH-grey"
ZW_Z, ZW_W, ZW_CROSS = "ZW-Z", "ZW-W", "ZW-cross"

# short names used in equation files, per language
KIND_NAMES = {
    "ZX": {"Z": ZX_Z, "X": ZX_X, "H": ZX_H},
    "ZH": {"Z": ZH_Z, "H": ZH_H},
    "ZW": {"Z": ZW_Z, "W": ZW_W, "cross": ZW_CROSS},
}
SHORT_NAME = {kind: short for lang in KIND_NAMES.values() for short, kind in lang.items()}
LANGUAGE_OF = {kind: lang for lang, kinds in KIND_NAMES.items() for kind in kinds.values()}

PHASED_KINDS = frozenset({ZX_Z, ZX_X, ZH_H, ZW_Z})
ARBITRARY_ARITY = frozenset({ZX_Z, ZX_X, ZH_Z, ZH_H, ZW_Z, ZW_W})
FIXED_ARITY = {ZX_H: 2, ZW_CROSS: 4}

# Unordered pairs of arbitrary-arity kinds that can always be pulled apart.
# ZX: every pair. ZH: grey only exists as a table token here.
_SEPARABLE = {
    "ZX": {frozenset({ZX_Z}): True, frozenset({ZX_X}): True, frozenset({ZX_Z, ZX_X}): True},
    "ZH": {
        frozenset({ZH_Z}): True,
        frozenset({ZH_Z, ZH_GREY}): True,
        frozenset({ZH_GREY, ZH_H}): True,
        frozenset({ZH_H}): False,
        frozenset({ZH_H, ZH_Z}): False,
        frozenset({ZH_GREY}): False,
    },
    "ZW": {
        frozenset({ZW_Z}): True,
        frozenset({ZW_Z, ZW_W}): True,
        frozenset({ZW_W}): False,
    },
}
_TABLE_KINDS = {"ZX": {ZX_Z, ZX_X}, "ZH": {ZH_Z, ZH_H, ZH_GREY}, "ZW": {ZW_Z, ZW_W}}


# phase expressions

def _norm_angle(c):
    if isinstance(c, float):
        return c % 2.0
    return Fraction(c) % 2


@dataclass(frozen=True)
class AngleLinear:
    """ZX phase ``const*pi + sum(coeff * var)``; ``const`` in half-turns within [0, 2)."""

    const: Fraction | float = Fraction(0)
    coeffs: tuple = ()

    @classmethod
    def make(cls, const=0, coeffs: Mapping[str, int] | Iterable = ()) -> "AngleLinear":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict = {}
        for v, b in items:
            if int(b) != b:
                raise WrongValueKind(f"ZX variable coefficients must be integers, got {b}")
            acc[v] = acc.get(v, 0) + int(b)
        return cls(_norm_angle(const), tuple(sorted((v, b) for v, b in acc.items() if b)))

    def variables(self) -> set[str]:
        return {v for v, _ in self.coeffs}

    def is_exact(self) -> bool:
        return not isinstance(self.const, float)

    def substitute(self, var: str, value) -> "AngleLinear":
        if isinstance(value, Complex) and not isinstance(value, Real):
            raise WrongValueKind(f"ZX phases take real angles, got {value!r}")
        if not isinstance(value, (Real, Fraction)):
            raise WrongValueKind(f"ZX phases take real angles, got {value!r}")
        coeffs = dict(self.coeffs)
        b = coeffs.pop(var, 0)
        if not b:
            return self
        if isinstance(value, float) or isinstance(self.const, float):
            const = float(self.const) + b * float(value)
        else:
            const = self.const + b * Fraction(value)
        return AngleLinear.make(const, coeffs)

    def rename(self, mapping: Mapping[str, str]) -> "AngleLinear":
        return AngleLinear.make(self.const, [(mapping.get(v, v), b) for v, b in self.coeffs])

    def degree(self, var: str) -> DegreePair:
        b = dict(self.coeffs).get(var, 0)
        return DegreePair(max(b, 0), max(-b, 0))

    def corner(self) -> LaurentPoly:
        """Entry of the all-ones corner: ``exp(i*pi*const) * prod(Y_j ** b_j)``."""
        return LaurentPoly.monomial(dict(self.coeffs), root_of_unity(self.const))

    def __str__(self):
        from .fileformat import format_angle
        return format_angle(self)


@dataclass(frozen=True)
class PolyPhase:
    """ZH/ZW phase: a Laurent polynomial in the phase variables."""

    poly: LaurentPoly

    def variables(self) -> set[str]:
        return self.poly.variables()

    def is_exact(self) -> bool:
        return self.poly.is_exact()

    def substitute(self, var: str, value) -> "PolyPhase":
        if not isinstance(value, (Complex, Fraction, GaussianRational)):
            raise WrongValueKind(f"ZH/ZW phases take complex values, got {value!r}")
        if var not in self.poly.variables():
            return self
        return PolyPhase(self.poly.substitute(var, value))

    def rename(self, mapping: Mapping[str, str]) -> "PolyPhase":
        return PolyPhase(self.poly.rename(mapping))

    def degree(self, var: str) -> DegreePair:
        return self.poly.degree(var)

    def corner(self) -> LaurentPoly:
        return self.poly

    def __str__(self):
        return self.poly.to_string()


PhaseExpr = AngleLinear | PolyPhase


def default_phase(kind: str) -> PhaseExpr | None:
    """Phase assumed for a phased kind written without one."""
    if kind in (ZX_Z, ZX_X):
        return AngleLinear()
    if kind == ZH_H:
        return PolyPhase(LaurentPoly.const(-1))
    if kind == ZW_Z:
        return PolyPhase(LaurentPoly.const(1))
    return None


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    phase: PhaseExpr | None = None

    def effective_phase(self) -> PhaseExpr | None:
        return self.phase if self.phase is not None else default_phase(self.kind)


class End(NamedTuple):
    ref: str
    port: int | None = None

    def __str__(self):
        return self.ref if self.port is None else f"{self.ref}:{self.port}"


Edge = tuple  # tuple[End, End]


def child_name(name: str, box: str, index: int) -> str:
    """Fresh name of the copy of ``name`` made by copy ``index`` of ``box``."""
    return f"{name}{{{box}.{index}}}"


# diagrams

@dataclass(frozen=True)
class Diagram:
    language: str
    nodes: tuple = ()
    edges: tuple = ()
    inputs: tuple = ()
    outputs: tuple = ()
    bangboxes: tuple = ()  # ((label, frozenset(direct members)), ...)
    lineage: tuple = ()  # ((child, parent), ...) recorded by child-mode instantiation

    @classmethod
    def build(cls, language: str, nodes: Iterable[Node] = (), edges: Iterable = (),
              inputs: Sequence[str] = (), outputs: Sequence[str] = (),
              bangboxes: Mapping[str, Iterable[str]] | None = None,
              lineage: Mapping[str, str] | None = None, check: bool = True) -> "Diagram":
        """Normalising constructor; edges may be given as pairs of strings or :class:`End`."""
        norm_edges = []
        for e in edges:
            a, b = e
            norm_edges.append((_as_end(a), _as_end(b)))
        d = cls(
            language,
            tuple(nodes),
            tuple(norm_edges),
            tuple(inputs),
            tuple(outputs),
            tuple(sorted((lbl, frozenset(m)) for lbl, m in (bangboxes or {}).items())),
            tuple(sorted((lineage or {}).items())),
        )
        if check:
            d.check()
        return d

    # lookups

    @cached_property
    def node_map(self) -> dict:
        return {n.id: n for n in self.nodes}

    @cached_property
    def boxes(self) -> dict:
        return dict(self.bangboxes)

    @property
    def boundary(self) -> tuple:
        return self.inputs + self.outputs

    @cached_property
    def _slot_set(self) -> frozenset:
        return frozenset(self.boundary)

    def is_slot(self, ref: str) -> bool:
        return ref in self._slot_set

    def parents_map(self) -> dict:
        return dict(self.lineage)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for n in self.nodes:
            if n.phase is not None:
                out |= n.phase.variables()
        return out

    def incident(self, node_id: str) -> list:
        """Edge indices at a node, once per end (a self-loop appears twice)."""
        out = []
        for i, (a, b) in enumerate(self.edges):
            if a.ref == node_id:
                out.append(i)
            if b.ref == node_id:
                out.append(i)
        return out

    # !-box structure

    @cached_property
    def _contents(self) -> dict:
        """label -> node/slot ids in the box, including nested boxes' contents."""
        boxes = self.boxes
        memo: dict = {}

        def visit(label, stack):
            if label in memo:
                return memo[label]
            if label in stack:
                raise NotLaminar(f"!-box {label} is nested inside itself")
            ids = set()
            for m in boxes[label]:
                if m in boxes:
                    ids |= visit(m, stack | {label})
                else:
                    ids.add(m)
            memo[label] = frozenset(ids)
            return memo[label]

        for label in boxes:
            visit(label, frozenset())
        return memo

    @cached_property
    def _explicit_desc(self) -> dict:
        boxes = self.boxes
        memo: dict = {}

        def visit(label):
            if label not in memo:
                out = set()
                for m in boxes[label]:
                    if m in boxes:
                        out |= {m} | visit(m)
                memo[label] = frozenset(out)
            return memo[label]

        self._contents  # cycle check
        for label in boxes:
            visit(label)
        return memo

    def contents(self, label: str) -> frozenset:
        if label not in self.boxes:
            raise UnknownLabel(label)
        return self._contents[label]

    def inside(self, a: str, b: str) -> bool:
        """True when box ``a`` is nested (at any depth) inside box ``b``."""
        if a == b:
            return False
        if a in self._explicit_desc[b]:
            return True
        ca, cb = self._contents[a], self._contents[b]
        return bool(ca) and ca < cb and b not in self._explicit_desc[a]

    @cached_property
    def _ancestors(self) -> dict:
        labels = list(self.boxes)
        anc = {a: [b for b in labels if self.inside(a, b)] for a in labels}
        for a in labels:
            for b in labels:
                if a < b and self.inside(a, b) and self.inside(b, a):
                    raise NotLaminar(f"!-boxes {a} and {b} each contain the other")
        return anc

    def region_labels(self, label: str) -> list[str]:
        """Boxes nested inside ``label`` (any depth), sorted."""
        return sorted(a for a in self.boxes if self.inside(a, label))

    def is_maximal(self, label: str) -> bool:
        if label not in self.boxes:
            raise UnknownLabel(label)
        return not self._ancestors[label]

    def in_region(self, label: str, ref: str) -> bool:
        return ref in self._contents[label]

    def crossing_edges(self, label: str) -> list[int]:
        """Indices of edges with exactly one end inside the box."""
        inside = self.contents(label)
        return [i for i, (a, b) in enumerate(self.edges) if (a.ref in inside) != (b.ref in inside)]

    def enclosed_slots(self, label: str) -> tuple[tuple, tuple]:
        inside = self.contents(label)
        return (tuple(s for s in self.inputs if s in inside),
                tuple(s for s in self.outputs if s in inside))

    # validation

    def check(self) -> "Diagram":
        if self.language not in LANGUAGES:
            raise DiagramError(f"unknown language {self.language!r}")
        ids = [n.id for n in self.nodes]
        slots = list(self.boundary)
        seen: set = set()
        for x in ids + slots:
            if x in seen:
                raise DiagramError(f"duplicate id {x!r}")
            seen.add(x)
        for lbl in self.boxes:
            if lbl in seen:
                raise DiagramError(f"!-box label {lbl!r} clashes with a node or slot id")
        for n in self.nodes:
            if LANGUAGE_OF.get(n.kind) != self.language:
                raise UnknownKind(f"kind {n.kind!r} is not a {self.language} generator")
            if n.phase is not None:
                if n.kind not in PHASED_KINDS:
                    raise DiagramError(f"node {n.id} of kind {n.kind} takes no phase")
                want = AngleLinear if self.language == "ZX" else PolyPhase
                if not isinstance(n.phase, want):
                    raise DiagramError(f"node {n.id}: wrong phase type for {self.language}")
        slot_uses = {s: 0 for s in slots}
        legs = {i: [] for i in ids}
        for a, b in self.edges:
            if a == b and self.is_slot(a.ref):
                raise DiagramError(f"boundary slot {a.ref} joined to itself")
            for end in (a, b):
                if end.ref in slot_uses:
                    if end.port is not None:
                        raise DiagramError(f"boundary slot {end.ref} has no ports")
                    slot_uses[end.ref] += 1
                elif end.ref in legs:
                    legs[end.ref].append(end.port)
                else:
                    raise DiagramError(f"edge end {end.ref!r} is not a node or boundary slot")
            if a.ref == b.ref and self.node_map[a.ref].kind not in ARBITRARY_ARITY:
                raise DiagramError(f"self-loop on non-spider node {a.ref}")
        for s, k in slot_uses.items():
            if k != 1:
                raise DiagramError(f"boundary slot {s} occurs in {k} edges (needs exactly 1)")
        for n in self.nodes:
            ports = legs[n.id]
            if n.kind == ZW_CROSS:
                if sorted(p for p in ports if p is not None) != [0, 1, 2, 3] or None in ports:
                    raise DiagramError(f"crossing {n.id} needs ports 0-3 each used exactly once")
            else:
                if any(p is not None for p in ports):
                    raise DiagramError(f"node {n.id} of kind {n.kind} has no ports")
                if n.kind in FIXED_ARITY and len(ports) != FIXED_ARITY[n.kind]:
                    raise DiagramError(
                        f"node {n.id} of kind {n.kind} needs exactly {FIXED_ARITY[n.kind]} legs")
        for lbl, members in self.boxes.items():
            for m in members:
                if m not in seen and m not in self.boxes:
                    raise DiagramError(f"!-box {lbl} member {m!r} does not exist")
        self.check_laminar()
        return self

    def check_laminar(self) -> None:
        labels = sorted(self.boxes)
        self._ancestors
        for i, a in enumerate(labels):
            for b in labels[i + 1:]:
                if self.inside(a, b) or self.inside(b, a):
                    continue
                ca, cb = self._contents[a], self._contents[b]
                if ca & cb:
                    if ca == cb:
                        raise NotLaminar(
                            f"!-boxes {a} and {b} have identical contents; list one inside the other")
                    raise NotLaminar(f"!-boxes {a} and {b} overlap without nesting")

    def __str__(self):
        from .fileformat import format_diagram
        return format_diagram(self)


def _as_end(x) -> End:
    if isinstance(x, End):
        return x
    if isinstance(x, tuple):
        return End(*x)
    return End(x)


# nesting

@dataclass(frozen=True)
class NestingForest:
    parent: dict = field(default_factory=dict)  # label -> parent label or None

    @property
    def labels(self) -> list[str]:
        return sorted(self.parent)

    @property
    def roots(self) -> list[str]:
        return sorted(l for l, p in self.parent.items() if p is None)

    def children(self, label: str | None) -> list[str]:
        return sorted(l for l, p in self.parent.items() if p == label)

    def remove(self, label: str) -> "NestingForest":
        """Drop a root, promoting its children to roots."""
        if self.parent.get(label, "") is not None:
            raise NotMaximalBox(f"{label} is not a root of the nesting forest")
        return NestingForest({l: (None if p == label else p)
                              for l, p in self.parent.items() if l != label})


def nesting_order(d: Diagram) -> NestingForest:
    d.check_laminar()
    parent = {}
    for label in d.boxes:
        anc = d._ancestors[label]
        if not anc:
            parent[label] = None
        else:
            # the innermost ancestor has every other ancestor as an ancestor
            parent[label] = max(anc, key=lambda b: (len(d._ancestors[b]), b))
    return NestingForest(parent)


def separable_pair(language: str, kind1: str, kind2: str) -> bool:
    kinds = _TABLE_KINDS.get(language)
    if kinds is None:
        raise UnknownKind(f"unknown language {language!r}")
    for k in (kind1, kind2):
        if k not in kinds:
            raise UnknownKind(f"{k!r} is not an arbitrary-arity {language} kind")
    return _SEPARABLE[language].get(frozenset({kind1, kind2}), False)


def is_separated(d: Diagram) -> list[tuple[str, str]]:
    """Pairs of non-nested boxes joined by at least one edge (empty when separated)."""
    labels = sorted(d.boxes)
    offenders = []
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            if d.inside(a, b) or d.inside(b, a):
                continue
            ca, cb = d.contents(a), d.contents(b)
            for x, y in d.edges:
                if (x.ref in ca and y.ref in cb) or (x.ref in cb and y.ref in ca):
                    offenders.append((a, b))
                    break
    return offenders


def separation_report(d: Diagram) -> list[tuple[str, str, list]]:
    """For each offending pair, the node-kind pairs on the joining edges and their separability."""
    out = []
    for a, b in is_separated(d):
        ca, cb = d.contents(a), d.contents(b)
        pairs = []
        for x, y in d.edges:
            if (x.ref in ca and y.ref in cb) or (x.ref in cb and y.ref in ca):
                kx = d.node_map[x.ref].kind if x.ref in d.node_map else None
                ky = d.node_map[y.ref].kind if y.ref in d.node_map else None
                try:
                    sep = separable_pair(d.language, kx, ky)
                except UnknownKind:
                    sep = False
                pairs.append((kx, ky, sep))
        out.append((a, b, pairs))
    return out


def is_simple(d: Diagram) -> bool:
    return not d.bangboxes and not d.variables()


# instantiation

def instantiate_phase(d: Diagram, var: str, value) -> Diagram:
    if d.language == "ZX":
        if isinstance(value, GaussianRational) or (isinstance(value, Complex) and not isinstance(value, Real)):
            raise WrongValueKind(f"ZX phase variables take real angles, got {value!r}")
    elif not isinstance(value, (Complex, Fraction, GaussianRational)):
        raise WrongValueKind(f"{d.language} phase variables take complex values, got {value!r}")
    if var not in d.variables():
        return d
    nodes = tuple(n if n.phase is None or var not in n.phase.variables()
                  else replace(n, phase=n.phase.substitute(var, value)) for n in d.nodes)
    return replace(d, nodes=nodes)


def instantiate_bangbox(d: Diagram, label: str, count: int, mode: str = "copy") -> Diagram:
    """Replace a maximal !-box by ``count`` copies of its contents."""
    if label not in d.boxes:
        raise UnknownLabel(label)
    if not d.is_maximal(label):
        raise NotMaximalBox(f"!-box {label} is nested inside another box")
    if count < 0:
        raise ValueError("!-box counts are non-negative")
    if mode not in ("copy", "child"):
        raise ValueError(f"unknown mode {mode!r}")

    inside = d.contents(label)
    nested = d.region_labels(label)
    inner_vars = set()
    for n in d.nodes:
        if n.id in inside and n.phase is not None:
            inner_vars |= n.phase.variables()

    def rid(x, i):
        return child_name(x, label, i)

    lineage = dict(d.lineage)
    renames = []
    for i in range(count):
        if mode == "child":
            r = {v: rid(v, i) for v in sorted(inner_vars)}
            r.update({b: rid(b, i) for b in nested})
            for old, new in r.items():
                lineage[new] = old
        else:
            r = {}
        renames.append(r)

    nodes = []
    for n in d.nodes:
        if n.id not in inside:
            nodes.append(n)
    for i in range(count):
        for n in d.nodes:
            if n.id in inside:
                phase = n.phase
                if phase is not None and renames[i]:
                    phase = phase.rename(renames[i])
                nodes.append(Node(rid(n.id, i), n.kind, phase))

    edges = []
    crossing = []
    internal = []
    for a, b in d.edges:
        ia, ib = a.ref in inside, b.ref in inside
        if not ia and not ib:
            edges.append((a, b))
        elif ia and ib:
            internal.append((a, b))
        else:
            out_end = b if ia else a
            if d.is_slot(out_end.ref):
                raise DiagramError(
                    f"!-box {label} joins exterior boundary slot {out_end.ref} directly")
            crossing.append((a, b))
    for i in range(count):
        for a, b in crossing:
            if a.ref in inside:
                edges.append((End(rid(a.ref, i), a.port), b))
            else:
                edges.append((a, End(rid(b.ref, i), b.port)))
        for a, b in internal:
            edges.append((End(rid(a.ref, i), a.port), End(rid(b.ref, i), b.port)))

    def expand(slots):
        out = []
        placed = False
        enclosed = [s for s in slots if s in inside]
        for s in slots:
            if s not in inside:
                out.append(s)
            elif not placed:
                placed = True
                out.extend(rid(t, i) for i in range(count) for t in enclosed)
        return tuple(out)

    boxes = {}
    for lbl, members in d.boxes.items():
        if lbl == label:
            continue
        if lbl not in nested:
            boxes[lbl] = members
            continue
        if mode == "copy":
            boxes[lbl] = frozenset(m if m in d.boxes else rid(m, i)
                                   for i in range(count) for m in members) | boxes.get(lbl, frozenset())
        else:
            for i in range(count):
                boxes[renames[i][lbl]] = frozenset(
                    renames[i][m] if m in d.boxes else rid(m, i) for m in members)
    if mode == "copy" and count:
        for lbl in nested:
            boxes.setdefault(lbl, frozenset())
    elif mode == "copy":
        # no copies means no nested boxes either
        for lbl in nested:
            boxes.pop(lbl, None)
    return Diagram(
        d.language, tuple(nodes), tuple(edges), expand(d.inputs), expand(d.outputs),
        tuple(sorted(boxes.items())), tuple(sorted(lineage.items())),
    )


# composition

def _rename_apart(d: Diagram, taken: set) -> Diagram:
    mapping = {}
    for x in [n.id for n in d.nodes] + list(d.boundary):
        y = x
        while y in taken or y in mapping.values():
            y = y + "'"
        mapping[x] = y
    if all(k == v for k, v in mapping.items()):
        return d
    return Diagram(
        d.language,
        tuple(replace(n, id=mapping[n.id]) for n in d.nodes),
        tuple((End(mapping[a.ref], a.port), End(mapping[b.ref], b.port)) for a, b in d.edges),
        tuple(mapping[s] for s in d.inputs),
        tuple(mapping[s] for s in d.outputs),
        tuple((lbl, frozenset(mapping.get(m, m) for m in ms)) for lbl, ms in d.bangboxes),
        d.lineage,
    )


def _merge_boxes(a: Diagram, b: Diagram) -> tuple:
    boxes = dict(a.boxes)
    for lbl, ms in b.boxes.items():
        boxes[lbl] = boxes.get(lbl, frozenset()) | ms
    return tuple(sorted(boxes.items()))


def _ids(d: Diagram) -> set:
    return {n.id for n in d.nodes} | set(d.boundary)


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    if d1.language != d2.language:
        raise LanguageMismatch(f"{d1.language} vs {d2.language}")
    d2 = _rename_apart(d2, _ids(d1))
    return Diagram(
        d1.language, d1.nodes + d2.nodes, d1.edges + d2.edges,
        d1.inputs + d2.inputs, d1.outputs + d2.outputs,
        _merge_boxes(d1, d2), tuple(sorted(set(d1.lineage) | set(d2.lineage))),
    )


def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """Plug the outputs of ``d1`` into the inputs of ``d2``."""
    if d1.language != d2.language:
        raise LanguageMismatch(f"{d1.language} vs {d2.language}")
    if len(d1.outputs) != len(d2.inputs):
        raise BoundaryMismatch(f"{len(d1.outputs)} outputs vs {len(d2.inputs)} inputs")
    d2 = _rename_apart(d2, _ids(d1))
    glue = {}
    for o, i in zip(d1.outputs, d2.inputs):
        glue[o] = i
        glue[i] = o
    edges = list(d1.edges + d2.edges)
    nodes = list(d1.nodes + d2.nodes)
    loops = 0
    while True:
        hit = next(((k, end) for k, e in enumerate(edges) for end in e if end.ref in glue), None)
        if hit is None:
            break
        k, end = hit
        partner = glue.pop(end.ref)
        del glue[partner]
        a, b = edges[k]
        other = b if a == end else a
        if other.ref == partner:
            # wire closed on itself: a loop with no nodes
            del edges[k]
            loops += 1
            continue
        j = next(j for j, e in enumerate(edges) if j != k and any(x.ref == partner for x in e))
        c, e2 = edges[j]
        other2 = e2 if c.ref == partner else c
        for idx in sorted((k, j), reverse=True):
            del edges[idx]
        edges.append((other, other2))
    for n in range(loops):
        loop_id = f"loop{n}"
        while loop_id in {x.id for x in nodes}:
            loop_id += "'"
        kind = {"ZX": ZX_Z, "ZH": ZH_Z, "ZW": ZW_Z}[d1.language]
        nodes.append(Node(loop_id, kind))
        edges.append((End(loop_id), End(loop_id)))
    glued = set(d1.outputs) | set(d2.inputs)
    boxes = tuple((lbl, frozenset(m for m in ms if m not in glued))
                  for lbl, ms in _merge_boxes(d1, d2))
    return Diagram(
        d1.language, tuple(nodes), tuple(edges), d1.inputs, d2.outputs, boxes,
        tuple(sorted(set(d1.lineage) | set(d2.lineage))),
    )


def identity(language: str, n: int = 1) -> Diagram:
    ins = [f"i{k}" for k in range(n)]
    outs = [f"o{k}" for k in range(n)]
    return Diagram.build(language, (), [(i, o) for i, o in zip(ins, outs)], ins, outs)


def empty(language: str) -> Diagram:
    return Diagram(language)


# families

@dataclass(frozen=True)
class EquationFamily:
    lhs: Diagram
    rhs: Diagram
    phase_vars: tuple = ()
    bang_labels: tuple = ()
    mode: str = "copy"
    quotients: tuple = ()  # ((var, g), ...)

    @classmethod
    def build(cls, lhs: Diagram, rhs: Diagram, phase_vars: Sequence[str] | None = None,
              bang_labels: Sequence[str] | None = None, mode: str = "copy",
              quotients: Mapping[str, int] | None = None, check: bool = True) -> "EquationFamily":
        if phase_vars is None:
            phase_vars = sorted(lhs.variables() | rhs.variables())
        if bang_labels is None:
            bang_labels = sorted(set(lhs.boxes) | set(rhs.boxes))
        fam = cls(lhs, rhs, tuple(phase_vars), tuple(bang_labels), mode,
                  tuple(sorted((quotients or {}).items())))
        if check:
            fam.check()
        return fam

    @property
    def language(self) -> str:
        return self.lhs.language

    @property
    def quotient_map(self) -> dict:
        return dict(self.quotients)

    def lineage(self) -> dict:
        out = dict(self.lhs.lineage)
        out.update(self.rhs.lineage)
        return out

    def root_of(self, name: str) -> str:
        parents = self.lineage()
        while name in parents:
            name = parents[name]
        return name

    def quotient_for(self, var: str) -> int | None:
        return self.quotient_map.get(self.root_of(var))

    def variables(self) -> list[str]:
        present = self.lhs.variables() | self.rhs.variables()
        return [v for v in self.phase_vars if v in present] + sorted(
            present - set(self.phase_vars))

    def labels(self) -> list[str]:
        present = set(self.lhs.boxes) | set(self.rhs.boxes)
        return [b for b in self.bang_labels if b in present] + sorted(
            present - set(self.bang_labels))

    def check(self) -> "EquationFamily":
        if self.lhs.language != self.rhs.language:
            raise LanguageMismatch(f"{self.lhs.language} vs {self.rhs.language}")
        if self.mode not in ("copy", "child"):
            raise DiagramError(f"unknown mode {self.mode!r}")
        if len(self.lhs.inputs) != len(self.rhs.inputs):
            raise BoundaryMismatch(
                f"lhs has {len(self.lhs.inputs)} inputs, rhs has {len(self.rhs.inputs)}")
        if len(self.lhs.outputs) != len(self.rhs.outputs):
            raise BoundaryMismatch(
                f"lhs has {len(self.lhs.outputs)} outputs, rhs has {len(self.rhs.outputs)}")
        for lbl in set(self.lhs.boxes) | set(self.rhs.boxes):
            sl = self.lhs.enclosed_slots(lbl) if lbl in self.lhs.boxes else ((), ())
            sr = self.rhs.enclosed_slots(lbl) if lbl in self.rhs.boxes else ((), ())
            if (len(sl[0]), len(sl[1])) != (len(sr[0]), len(sr[1])):
                raise BoundaryMismatch(
                    f"!-box {lbl} encloses {len(sl[0])} in/{len(sl[1])} out on the lhs "
                    f"but {len(sr[0])} in/{len(sr[1])} out on the rhs")
        declared = set(self.phase_vars)
        for v in self.lhs.variables() | self.rhs.variables():
            if self.root_of(v) not in declared:
                raise DiagramError(f"phase variable {v!r} is not declared")
        for lbl in set(self.lhs.boxes) | set(self.rhs.boxes):
            if self.root_of(lbl) not in set(self.bang_labels):
                raise DiagramError(f"!-box label {lbl!r} is not declared")
        for v, g in self.quotients:
            if g < 1:
                raise DiagramError(f"quotient order for {v} must be >= 1")
        return self

    def instantiate_phase(self, var: str, value) -> "EquationFamily":
        return replace(self, lhs=instantiate_phase(self.lhs, var, value),
                       rhs=instantiate_phase(self.rhs, var, value))

    def instantiate_bangbox(self, label: str, count: int) -> "EquationFamily":
        lhs = instantiate_bangbox(self.lhs, label, count, self.mode) if label in self.lhs.boxes else self.lhs
        rhs = instantiate_bangbox(self.rhs, label, count, self.mode) if label in self.rhs.boxes else self.rhs
        return replace(self, lhs=lhs, rhs=rhs)

    def is_simple(self) -> bool:
        return is_simple(self.lhs) and is_simple(self.rhs)


def is_well_nested(eq: EquationFamily) -> bool:
    return nesting_order(eq.lhs) == nesting_order(eq.rhs)
