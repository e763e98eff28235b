import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from famverify.checker import (
    FALSIFIED, VERIFIED, check_simple, run_plan, symbolic_check,
)
from famverify.diagram import ZH_H, ZX_Z, Diagram, EquationFamily, Node, PolyPhase, tensor
from famverify.errors import HasBangbox, NotSimple, ShapeMismatch
from famverify.fileformat import report_to_dict, report_to_json
from famverify.phasepoly import LaurentPoly
from famverify.planner import Settings, build_plan

from conftest import load, z_chain, zx
from strategies import random_family

Y = LaurentPoly.var("a")


def test_identical_sides_pass():
    d = z_chain("ZX", [(ZX_Z, zx(Fraction(1, 2)))])
    rec = check_simple(d, d)
    assert rec.passed and rec.exact and rec.deviation == 0


def test_inexact_phase_falls_back_to_floats():
    d = z_chain("ZX", [(ZX_Z, zx(Fraction(1, 3)))])
    rec = check_simple(d, d)
    assert rec.passed and not rec.exact


def test_fusion_instance_passes():
    lhs = z_chain("ZX", [(ZX_Z, zx(Fraction(1, 4))), (ZX_Z, zx(Fraction(1, 2)))])
    rhs = z_chain("ZX", [(ZX_Z, zx(Fraction(3, 4)))])
    assert check_simple(lhs, rhs).passed


def test_phase_flip_deviation_two():
    rec = check_simple(z_chain("ZX", [(ZX_Z, zx(0))]), z_chain("ZX", [(ZX_Z, zx(1))]))
    assert not rec.passed
    assert rec.deviation == pytest.approx(2.0)


def test_float_phase_uses_tolerance():
    lhs = z_chain("ZX", [(ZX_Z, zx(0.25))])
    rhs = z_chain("ZX", [(ZX_Z, zx(0.25 + 1e-12))])
    rec = check_simple(lhs, rhs)
    assert not rec.exact and rec.passed
    assert not check_simple(lhs, rhs, tolerance=1e-14).passed


def test_up_to_scalar():
    lhs = z_chain("ZX", [(ZX_Z, zx(0)), (ZX_Z, zx(0))])
    two = z_chain("ZX", [(ZX_Z, zx(0))])
    # a leg-free Z(0) is the scalar 2
    scalar = Diagram.build("ZX", [Node("k", ZX_Z, zx(0))], [], [], [])
    scaled = tensor(lhs, scalar)
    assert not check_simple(scaled, two).passed
    assert check_simple(scaled, two, up_to_scalar=True).passed


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        check_simple(z_chain("ZX", [(ZX_Z, zx(0))]), z_chain("ZX", [(ZX_Z, zx(0))], n_out=2))


def test_not_simple(spider_law):
    d = z_chain("ZX", [(ZX_Z, zx(0))])
    with pytest.raises(NotSimple):
        check_simple(spider_law.lhs, d)
    with pytest.raises(NotSimple):
        check_simple(z_chain("ZX", [(ZX_Z, zx(a=1))]), d)


# plans

def test_spider_law_verified(spider_law):
    report = run_plan(build_plan(spider_law))
    assert report.verdict == VERIFIED
    assert report.checked == 100
    assert report.counterexample is None


def test_perturbed_falsified_at_first_failure():
    plan = build_plan(load("spider_law_perturbed.feq"))
    report = run_plan(plan)
    assert report.verdict == FALSIFIED
    first = next(k for k, r in enumerate(report.records) if not r.passed)
    assert report.counterexample == plan.entries[first].assignment
    assert first == 0


def test_stop_on_failure():
    report = run_plan(build_plan(load("spider_law_perturbed.feq")), stop_on_failure=True)
    assert report.verdict == FALSIFIED and report.checked == 1


def test_empty_plan_is_verified():
    from dataclasses import replace
    plan = replace(build_plan(load("parameter_free.feq")), entries=[])
    report = run_plan(plan)
    assert report.verdict == VERIFIED and report.checked == 0


def test_jobs_preserve_order(spider_law):
    plan = build_plan(spider_law)
    serial = report_to_dict(run_plan(plan))
    parallel = report_to_dict(run_plan(plan, jobs=4))
    assert serial == parallel


def test_report_json_deterministic(spider_law):
    a = report_to_json(run_plan(build_plan(spider_law)))
    b = report_to_json(run_plan(build_plan(spider_law)))
    assert a == b
    data = json.loads(a)
    assert list(data)[:3] == ["verdict", "checked", "plan_size"]
    assert "seconds" not in data
    assert "seconds" in json.loads(report_to_json(run_plan(build_plan(spider_law)),
                                                  include_timing=True))


def test_report_records_counterexample():
    data = report_to_dict(run_plan(build_plan(load("spider_law_perturbed.feq"))))
    assert data["verdict"] == "falsified"
    assert data["counterexample"]["boxes"] == {"d1": 0, "d2": 0}


@settings(max_examples=15)
@given(st.floats(1e-12, 1e-3), st.floats(1e-12, 1e-3))
def test_tolerance_monotone(t1, t2):
    lo, hi = sorted((t1, t2))
    lhs = z_chain("ZX", [(ZX_Z, zx(0.3))])
    rhs = z_chain("ZX", [(ZX_Z, zx(0.3 + 1e-7))])
    if check_simple(lhs, rhs, tolerance=lo).passed:
        assert check_simple(lhs, rhs, tolerance=hi).passed


def test_join_dimension_beyond_bound(join_dimension):
    plan = build_plan(join_dimension)
    assert run_plan(plan).verdict == VERIFIED
    n = plan.bounds["d"]
    for k in range(n + 1, n + 11):
        inst = join_dimension.instantiate_bangbox("d", k)
        assert check_simple(inst.lhs, inst.rhs).passed


def test_per_equation_grid_agrees(spider_law):
    assert run_plan(build_plan(spider_law, Settings(grid="per-equation"))).verdict == VERIFIED


# symbolic oracle

def test_symbolic_spider_law_instance(spider_law):
    fam = spider_law.instantiate_bangbox("d1", 2).instantiate_bangbox("d2", 1)
    assert symbolic_check(fam)


def test_symbolic_detects_difference():
    h = lambda p: z_chain("ZH", [(ZH_H, PolyPhase(p))])
    assert symbolic_check(EquationFamily.build(h(Y), h(Y)))
    assert not symbolic_check(EquationFamily.build(h(Y), h(Y ** 2)))


def test_symbolic_rejects_boxes(spider_law):
    with pytest.raises(HasBangbox):
        symbolic_check(spider_law)


def test_symbolic_respects_quotient():
    assert symbolic_check(load("clifford_t.feq"))


@settings(max_examples=25)
@given(random_family())
def test_plan_agrees_with_symbolic(eq):
    expected = symbolic_check(eq)
    got = run_plan(build_plan(eq)).verdict
    assert got == (VERIFIED if expected else FALSIFIED)
