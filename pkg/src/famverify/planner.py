"""Construction of a finite verifying set for an equation family.

!-boxes are removed first, outermost first, each one replaced by its
instances ``0..N`` where ``N = 2**n_lhs + 2**n_rhs`` and ``n_side`` counts the
wires joining the box to the rest of that side.  Phase variables are removed
afterwards by instantiating them on a grid whose size per variable is the
largest positive degree on either side plus the largest negative degree on
either side plus one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .contract import DEFAULT_MAX_DIM
from .diagram import ARBITRARY_ARITY, EquationFamily, is_separated, is_well_nested, nesting_order
from .errors import (
    GridTooSmall, HasBangbox, NotMaximalBox, NotSeparated, NotWellNested, QuotientTooSmall,
)
from .interp import diagram_degrees

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Assignment:
    phases: tuple = ()  # ((var, value), ...) in instantiation order
    boxes: tuple = ()  # ((label, count), ...) in instantiation order

    def with_phase(self, var, value) -> "Assignment":
        return Assignment(self.phases + ((var, value),), self.boxes)

    def with_box(self, label, count) -> "Assignment":
        return Assignment(self.phases, self.boxes + ((label, count),))

    @property
    def phase_map(self) -> dict:
        return dict(self.phases)

    @property
    def box_map(self) -> dict:
        return dict(self.boxes)


@dataclass(frozen=True)
class Member:
    """A family produced along the way, with the assignment that produced it."""

    family: EquationFamily
    assignment: Assignment = Assignment()


@dataclass(frozen=True)
class PlanEntry:
    assignment: Assignment
    lhs: object
    rhs: object


@dataclass
class Settings:
    grid: str = "uniform"  # or "per-equation"
    max_dim: int = DEFAULT_MAX_DIM
    quotient: int | None = None  # applied to every ZX variable without its own order


@dataclass
class VerificationPlan:
    family: EquationFamily
    entries: list
    bounds: dict = field(default_factory=dict)  # !-box label -> largest N used
    grids: dict = field(default_factory=dict)  # variable -> points (uniform mode)
    removal_order: list = field(default_factory=list)
    grid_mode: str = "uniform"
    warnings: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)


# grids

def _quotients(eq: EquationFamily, settings: Settings | None = None) -> dict:
    q = dict(eq.quotients)
    if settings is not None and settings.quotient is not None:
        if eq.language != "ZX":
            raise ValueError("a quotient order only applies to ZX phase variables")
        for v in eq.phase_vars:
            q.setdefault(v, settings.quotient)
    return q


def _expand_quotients(eq: EquationFamily, q: dict, variables) -> dict:
    """Quotient orders for every variable, children inheriting from their root."""
    out = {}
    for v in variables:
        g = q.get(eq.root_of(v))
        if g is not None:
            out[v] = g
    return out


def grid_sizes(lhs, rhs, variables, quotients=None, max_dim=DEFAULT_MAX_DIM) -> dict:
    if lhs.bangboxes or rhs.bangboxes:
        raise HasBangbox("grid sizes need !-box-free diagrams")
    variables = list(variables)
    dl = diagram_degrees(lhs, variables, quotients, max_dim)
    dr = diagram_degrees(rhs, variables, quotients, max_dim)
    out = {}
    for v in variables:
        a, b = dl[v].pair.clamped(), dr[v].pair.clamped()
        out[v] = int(max(a.pos, b.pos) + max(a.neg, b.neg) + 1)
    return out


def grid_size(lhs, rhs, var: str, quotients=None, max_dim=DEFAULT_MAX_DIM) -> int:
    return grid_sizes(lhs, rhs, [var], quotients, max_dim)[var]


def choose_points(language: str, size: int, quotient: int | None = None) -> list:
    """Distinct grid values: ZX angles in half-turns, ZH/ZW nonzero integers."""
    if size < 1:
        raise ValueError("grid size must be at least 1")
    if language == "ZX":
        if quotient is not None:
            if size > quotient:
                raise QuotientTooSmall(
                    f"{size} distinct values needed but the phase group has only {quotient}")
            return [Fraction(2 * k, quotient) for k in range(size)]
        return [Fraction(2 * k, size) for k in range(size)]
    if quotient is not None:
        raise ValueError("a quotient order only applies to ZX phase variables")
    return list(range(1, size + 1))


# !-boxes

def _crossing_count(d, label) -> int:
    return len(d.crossing_edges(label)) if label in d.boxes else 0


def bbox_bound(eq: EquationFamily, label: str) -> int:
    for side, d in (("lhs", eq.lhs), ("rhs", eq.rhs)):
        if label not in d.boxes:
            continue
        if not d.is_maximal(label):
            raise NotMaximalBox(f"!-box {label} is nested inside another box on the {side}")
        bad = [p for p in is_separated(d) if label in p]
        if bad:
            raise NotSeparated(bad, side)
    return 2 ** _crossing_count(eq.lhs, label) + 2 ** _crossing_count(eq.rhs, label)


def non_spider_joins(eq: EquationFamily, label: str) -> list[str]:
    """Nodes outside ``label`` reached by a join wire that cannot take arbitrary arity."""
    out = []
    for d in (eq.lhs, eq.rhs):
        if label not in d.boxes:
            continue
        inside = d.contents(label)
        for k in d.crossing_edges(label):
            for end in d.edges[k]:
                if end.ref not in inside and end.ref in d.node_map \
                        and d.node_map[end.ref].kind not in ARBITRARY_ARITY:
                    out.append(end.ref)
    return sorted(set(out))


def _instances(eq: EquationFamily, label: str) -> list[str]:
    """Labels present in ``eq`` that are ``label`` or one of its child copies."""
    return [b for b in eq.labels() if eq.root_of(b) == label]


def bang_remove(eqs, label: str, mode: str | None = None, bounds: dict | None = None,
                warnings: list | None = None) -> list:
    """Replace every family by its instances of ``label`` at 0..N (per family)."""
    eqs = list(eqs)
    wrapped = any(isinstance(e, Member) for e in eqs)
    out = []
    for item in eqs:
        member = item if isinstance(item, Member) else Member(item)
        work = [member]
        instances = _instances(member.family, label) if (mode or member.family.mode) == "child" \
            else ([label] if label in member.family.labels() else [])
        for inst in instances:
            nxt = []
            for m in work:
                if inst not in m.family.labels():
                    nxt.append(m)
                    continue
                n = bbox_bound(m.family, inst)
                if bounds is not None:
                    bounds[inst] = max(bounds.get(inst, 0), n)
                if warnings is not None:
                    for ref in non_spider_joins(m.family, inst):
                        msg = f"!-box {inst} joins non-spider node {ref}"
                        if msg not in warnings:
                            warnings.append(msg)
                for count in range(n + 1):
                    nxt.append(Member(m.family.instantiate_bangbox(inst, count),
                                      m.assignment.with_box(inst, count)))
            work = nxt
        out.extend(work)
    return out if wrapped else [m.family for m in out]


def alpha_remove(eqs, var: str, points, check: bool = True, quotients=None,
                 max_dim: int = DEFAULT_MAX_DIM) -> list:
    """Instantiate ``var`` at every point for every family."""
    eqs = list(eqs)
    wrapped = any(isinstance(e, Member) for e in eqs)
    out = []
    points = list(points)
    for item in eqs:
        member = item if isinstance(item, Member) else Member(item)
        fam = member.family
        if var not in fam.variables():
            out.append(member)
            continue
        if check:
            need = grid_size(fam.lhs, fam.rhs, var, quotients, max_dim)
            if len(points) < need:
                raise GridTooSmall(f"{var} needs {need} grid points, got {len(points)}")
        for a in points:
            out.append(Member(fam.instantiate_phase(var, a), member.assignment.with_phase(var, a)))
    return out if wrapped else [m.family for m in out]


def removal_order(eq: EquationFamily) -> list[str]:
    """Boxes outermost first; ties broken lexicographically."""
    forest = nesting_order(eq.lhs)
    order = []
    while forest.parent:
        nxt = forest.roots[0]
        order.append(nxt)
        forest = forest.remove(nxt)
    return order


def check_preconditions(eq: EquationFamily) -> None:
    if not is_well_nested(eq):
        raise NotWellNested("the two sides have different !-box nesting")
    for side, d in (("lhs", eq.lhs), ("rhs", eq.rhs)):
        bad = is_separated(d)
        if bad:
            raise NotSeparated(bad, side)


def _largest_instance(eq: EquationFamily, order, bounds) -> EquationFamily:
    """The family with every box instantiated at its largest required count."""
    fam = eq
    for label in order:
        if fam.mode == "child":
            insts = _instances(fam, label)
        else:
            insts = [label] if label in fam.labels() else []
        for inst in insts:
            fam = fam.instantiate_bangbox(inst, bounds.get(inst, 0))
    return fam


def build_plan(eq: EquationFamily, settings: Settings | None = None) -> VerificationPlan:
    settings = settings or Settings()
    check_preconditions(eq)
    q = _quotients(eq, settings)
    order = removal_order(eq)
    bounds: dict = {}
    warnings: list = []
    members = [Member(eq)]
    for label in order:
        members = bang_remove(members, label, eq.mode, bounds, warnings)
        log.debug("after removing %s: %d families", label, len(members))

    variables = []
    for m in members:
        for v in m.family.variables():
            if v not in variables:
                variables.append(v)
    qv = _expand_quotients(eq, q, variables)

    grids: dict = {}
    if settings.grid == "uniform" and variables:
        largest = _largest_instance(eq, order, bounds)
        sizes = grid_sizes(largest.lhs, largest.rhs, variables, qv, settings.max_dim)
        # every surviving family must fit the uniform grid as well
        for m in members:
            fv = [v for v in variables if v in m.family.variables()]
            if fv:
                for v, s in grid_sizes(m.family.lhs, m.family.rhs, fv, qv, settings.max_dim).items():
                    sizes[v] = max(sizes[v], s)
        for v in variables:
            grids[v] = choose_points(eq.language, sizes[v], qv.get(v))
        for v in variables:
            members = alpha_remove(members, v, grids[v], check=False)
    elif variables:
        out = []
        for m in members:
            fv = [v for v in variables if v in m.family.variables()]
            sizes = grid_sizes(m.family.lhs, m.family.rhs, fv, qv, settings.max_dim) if fv else {}
            work = [m]
            for v in fv:
                pts = choose_points(eq.language, sizes[v], qv.get(v))
                prev = grids.get(v, [])
                grids[v] = pts if len(pts) > len(prev) else prev
                work = alpha_remove(work, v, pts, check=False)
            out.extend(work)
        members = out

    entries = [PlanEntry(m.assignment, m.family.lhs, m.family.rhs) for m in members]
    return VerificationPlan(eq, entries, bounds, grids, order, settings.grid, warnings)
