"""Lowering circuit programs to mode-indexed plans and executing them."""

import warnings

import numpy as np
import pytest

from cvpol.circuit import parse
from cvpol.compiler import compile_program, execute_plan
from cvpol.engine import run_program
from cvpol.gaussian import BrightFieldWarning

CHAIN = """\
source coh A 200.0
source coh B 150.0 pol=y
source vac V
pbs A B -> C D
loss 0.9 C -> E
measure stokes E S1
measure stokes E S2
"""


def test_mode_numbering_follows_source_order():
    plan = compile_program(parse(CHAIN))
    assert plan.n_modes == 6
    labels = [m.label for m in plan.initial.modes]
    assert labels == ["A.x", "A.y", "B.x", "B.y", "V.x", "V.y"]


def test_compile_is_deterministic():
    prog = parse(CHAIN)
    p1 = compile_program(prog)
    p2 = compile_program(prog)
    assert np.array_equal(p1.initial.means, p2.initial.means)
    assert np.array_equal(p1.initial.cov, p2.initial.cov)
    assert [s.label for s in p1.steps] == [s.label for s in p2.steps]
    assert p1.stations == p2.stations
    s1 = execute_plan(p1)
    s2 = execute_plan(p2)
    assert np.array_equal(s1.means, s2.means)
    assert np.array_equal(s1.cov, s2.cov)


def test_plan_step_kinds_and_labels():
    plan = compile_program(parse(
        "source sq A x 200.0 -3.0 3.0\n"
        "source coh B 200.0\n"
        "bs 0.5 A B -> C D conv=mirrored\n"
        "wp quarter 45.0 C -> E\n"
        "rot 10.0 D -> F\n"
        "phase 20.0 E -> G\n"
        "loss 0.8 F -> H\n"
        "measure stokes G S0\n"
        "measure stokes H S0\n"
    ))
    kinds = [s.kind for s in plan.steps]
    assert kinds == ["symplectic"] * 4 + ["loss"]
    assert plan.steps[0].label == "bs(t=0.5, mirrored)"
    assert plan.steps[1].label == "wp(quarter, 45 deg)"
    assert plan.steps[2].label == "rot(10 deg)"
    assert plan.steps[3].label == "phase(20 deg)"
    assert plan.steps[4].label == "loss(0.8)"
    assert plan.steps[4].efficiency == 0.8
    assert plan.steps[4].transform is None
    assert all(s.transform is not None for s in plan.steps[:4])


def test_station_binding_survives_renames():
    plan = compile_program(parse(
        "source coh A 200.0\n"
        "rot 12.0 A -> B\n"
        "phase 7.0 B -> C\n"
        "loss 0.95 C -> OUT\n"
        "measure stokes OUT S1\n"
    ))
    st = plan.station("OUT")
    assert (st.mode_x, st.mode_y) == (0, 1)
    with pytest.raises(KeyError):
        plan.station("NOPE")


def test_stations_in_first_reference_order():
    plan = compile_program(parse(
        "source coh A 200.0\n"
        "source coh B 200.0\n"
        "measure joint S1 - B A\n"
        "measure stokes A S2\n"
    ))
    assert [st.label for st in plan.stations] == ["B", "A"]


def test_identity_rotation_executes_exactly():
    prog = parse("source coh A 300.0\nrot 0.0 A -> B\nmeasure stokes B S0\n")
    plan = compile_program(prog)
    state = execute_plan(plan)
    assert np.array_equal(state.means, plan.initial.means)
    assert np.array_equal(state.cov, plan.initial.cov)


def test_pbs_routes_by_polarization():
    a1, a2 = 180.0, 140.0
    prog = parse(
        f"source coh A {a1} pol=x\n"
        f"source coh B {a2} pol=y\n"
        "pbs A B -> C D\n"
        "measure stokes C S0\n"
    )
    plan = compile_program(prog)
    state = execute_plan(plan)
    # C keeps A's slots and collects both bright components
    assert plan.station("C") == plan.stations[0]
    assert (plan.stations[0].mode_x, plan.stations[0].mode_y) == (0, 1)
    np.testing.assert_allclose(
        state.means[[0, 2, 4, 6]], [2 * a1, 2 * a2, 0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(state.means[1::2], 0.0, atol=1e-12)


def test_loss_scales_means_by_root_efficiency():
    prog = parse("source coh A 200.0\nloss 0.5 A -> B\nmeasure stokes B S0\n")
    state = execute_plan(compile_program(prog))
    half = 200.0 / np.sqrt(2.0)
    np.testing.assert_allclose(
        state.means[0::2][:2], 2 * half * np.sqrt(0.5), rtol=1e-12)
    # coherent light stays coherent under loss
    np.testing.assert_allclose(state.cov, np.eye(4), atol=1e-12)


def test_source_phase_matches_phase_element():
    baked = execute_plan(compile_program(parse(
        "source sq S x 100.0 -3.4 23.5 phase_deg=90.0\n"
        "measure stokes S S1\n"
    )))
    routed = execute_plan(compile_program(parse(
        "source sq S x 100.0 -3.4 23.5\n"
        "phase 90.0 S -> T\n"
        "measure stokes T S1\n"
    )))
    assert baked.isclose(routed, atol=1e-9)


def test_coherent_source_phase_rotates_means():
    state = execute_plan(compile_program(parse(
        "source coh A 100.0 pol=x phase_deg=90.0\nmeasure stokes A S0\n")))
    np.testing.assert_allclose(state.means[0], 0.0, atol=1e-12)
    np.testing.assert_allclose(state.means[1], 200.0, rtol=1e-12)


def test_dim_source_warns():
    prog = parse("source coh A 50.0\nmeasure stokes A S0\n")
    with pytest.warns(BrightFieldWarning):
        compile_program(prog)


def test_bright_source_does_not_warn():
    prog = parse("source coh A 500.0\nmeasure stokes A S0\n")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        compile_program(prog)


def test_measuring_dark_port_fails_at_analysis():
    prog = parse(
        "source coh P 200.0\n"
        "source vac V\n"
        "measure stokes P S1\n"
        "measure stokes V S0\n"
    )
    with pytest.raises(ValueError, match="dark ports"):
        run_program(prog)


def test_run_program_port_and_combo_shape():
    result = run_program(parse(
        "source coh A 300.0\n"
        "source coh B 300.0\n"
        "measure stokes A S1\n"
        "measure stokes A S3\n"
        "measure joint S1 - A B\n"
        "measure joint S3 + A B\n"
    ))
    assert [p.label for p in result.ports] == ["A", "B"]
    assert result.port("A").measured == (1, 3)
    assert result.port("B").measured == ()
    (joint,) = result.joints
    assert joint.labels == ("A", "B")
    assert [(c.parameter, c.sign) for c in joint.combos] == [(1, -1), (3, +1)]
    # independent coherent beams: every normalized combo sits at shot noise
    for combo in joint.combos:
        assert combo.variance_snu == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(KeyError):
        result.port("Z")
