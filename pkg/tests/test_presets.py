"""Canonical scenarios: structure, closed-form numbers, and golden files."""

from importlib import resources

import numpy as np
import pytest

from cvpol.circuit import parse
from cvpol.engine import run_program
from cvpol.presets import (
    ALIASES,
    CALIBRATED_EFFICIENCY,
    DEFAULTS,
    PRESET_NAMES,
    preset,
    render,
)

S_LIN = 10.0 ** (-3.4 / 10.0)      # squeezed quadrature, linear units
A_LIN = 10.0 ** (23.5 / 10.0)      # anti-squeezed quadrature


def after_loss(v: float, eta: float) -> float:
    return eta * v + (1.0 - eta)


def test_known_names():
    assert PRESET_NAMES == (
        "polarization_squeezing", "paper_entanglement", "bright_port",
        "two_squeezed",
    )
    assert set(ALIASES) == {"paper_entanglement_calibrated"}


def test_unknown_name_and_parameters_raise():
    with pytest.raises(ValueError, match="unknown preset 'bogus'"):
        preset("bogus")
    with pytest.raises(ValueError, match="unknown preset parameter"):
        preset("paper_entanglement", wavelength_nm=1500.0)
    with pytest.raises(ValueError, match="efficiency must be in"):
        preset("paper_entanglement", efficiency=1.2)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_parse_without_warnings(name):
    prog = preset(name)
    assert prog.name == name
    assert prog.warnings == ()
    assert prog.measurements


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_packaged_circuit_files_are_golden(name):
    text = (resources.files("cvpol") / "circuits" / f"{name}.pol").read_text()
    assert text == render(name)
    assert parse(text).signature() == preset(name).signature()


def test_alias_pins_calibrated_efficiency():
    alias = preset("paper_entanglement_calibrated")
    explicit = preset("paper_entanglement", efficiency=CALIBRATED_EFFICIENCY)
    assert alias.signature() == explicit.signature()
    assert alias.metadata["parameters"]["efficiency"] == CALIBRATED_EFFICIENCY
    # overrides still win over the pinned value
    loose = preset("paper_entanglement_calibrated", efficiency=0.5)
    assert loose.signature() == preset("paper_entanglement", efficiency=0.5).signature()


def test_entanglement_preset_structure():
    prog = preset("paper_entanglement")
    kinds = [s.kind for s in prog.sources]
    assert kinds == ["sq", "sq", "vac"]
    elements = [(e.kind, e.transmittance if e.kind == "bs" else None)
                for e in prog.elements]
    assert elements == [("pbs", None), ("bs", 0.5), ("loss", None), ("loss", None)]
    assert prog.elements[1].convention == "mirrored"
    assert [(m.kind, m.parameter) for m in prog.measurements] == [
        ("stokes", 1), ("stokes", 1), ("joint", 1), ("joint", 3)]


def test_other_preset_structures():
    pol = preset("polarization_squeezing")
    assert [e.kind for e in pol.elements] == ["pbs", "rot", "loss"]
    assert len(pol.measurements) == 4
    bright = preset("bright_port")
    assert [s.kind for s in bright.sources] == ["sq", "sq", "coh"]
    assert bright.sources[2].amplitude == pytest.approx(
        DEFAULTS["amplitude"] * np.sqrt(2.0))
    assert bright.sources[2].phase_deg == 90.0
    two = preset("two_squeezed")
    assert [s.kind for s in two.sources] == ["sq"] * 4
    assert [e.kind for e in two.elements] == [
        "pbs", "pbs", "phase", "bs", "loss", "loss"]


def test_metadata_carries_scenario_context():
    result = run_program(preset("paper_entanglement_calibrated"))
    assert "Sagnac" in result.metadata["source"]
    assert "17.5 MHz" in result.metadata["detection"]
    assert result.parameters["efficiency"] == CALIBRATED_EFFICIENCY
    assert result.parameters["squeeze_db"] == -3.4


# --- closed-form numbers ---

def test_polarization_squeezing_round_trips_input_db():
    result = run_program(preset("polarization_squeezing"))
    port = result.port("OUT")
    shot = port.stats.shot_noise
    assert shot == pytest.approx(2.0 * DEFAULTS["amplitude"] ** 2, rel=1e-12)
    assert port.stats.variances[1] / shot == pytest.approx(S_LIN, rel=1e-12)
    assert port.stats.variances[3] / shot == pytest.approx(A_LIN, rel=1e-12)
    assert port.stats.variance_db(1) == pytest.approx(-3.4, abs=1e-9)
    assert port.stats.variance_db(3) == pytest.approx(23.5, abs=1e-9)
    assert port.squeezing.triples == ((1, 2, 3),)
    # mean field points along S2
    assert port.stats.means[2] / shot == pytest.approx(1.0, rel=1e-12)


def test_polarization_squeezing_with_loss():
    eta = 0.7
    result = run_program(preset("polarization_squeezing", efficiency=eta))
    port = result.port("OUT")
    shot = port.stats.shot_noise
    assert shot == pytest.approx(eta * 2.0 * DEFAULTS["amplitude"] ** 2, rel=1e-12)
    assert port.stats.variances[1] / shot == pytest.approx(
        after_loss(S_LIN, eta), rel=1e-12)


def test_rel_phase_moves_mean_to_s3():
    result = run_program(preset("polarization_squeezing", rel_phase_deg=90.0))
    st = result.port("OUT").stats
    assert st.means[3] / st.shot_noise == pytest.approx(1.0, rel=1e-12)
    assert abs(st.means[2]) / st.shot_noise == pytest.approx(0.0, abs=1e-9)
    # squeezing still sits in S1
    assert st.variances[1] / st.shot_noise == pytest.approx(S_LIN, rel=1e-12)


def test_basis_rotation_moves_mean_to_s1():
    result = run_program(preset("polarization_squeezing", basis_deg=45.0))
    st = result.port("OUT").stats
    assert abs(st.means[1]) / st.shot_noise == pytest.approx(1.0, rel=1e-12)
    assert st.variances[3] / st.shot_noise == pytest.approx(A_LIN, rel=1e-12)


def test_entanglement_port_variance_lossless():
    result = run_program(preset("paper_entanglement"))
    for label in ("A", "B"):
        stats = result.port(label).stats
        v1 = stats.variances[1] / stats.shot_noise
        assert v1 == pytest.approx((1.0 + S_LIN) / 2.0, rel=1e-12)
        assert stats.variance_db(1) == pytest.approx(-1.375441576, abs=1e-6)


def test_entanglement_combos_and_criteria_lossless():
    result = run_program(preset("paper_entanglement"))
    (joint,) = result.joints
    by_key = {(c.parameter, c.sign): c.variance_snu for c in joint.combos}
    assert by_key[(1, -1)] == pytest.approx(S_LIN, rel=1e-12)
    assert by_key[(3, +1)] == pytest.approx(1.0, rel=1e-12)
    crit = joint.criteria
    assert crit.duan_lhs_normalized == pytest.approx(1.0 + S_LIN, rel=1e-12)
    assert crit.duan_nonseparable
    epr_expected = 4 * S_LIN * A_LIN / ((1 + S_LIN) * (1 + A_LIN))
    assert crit.epr_product_normalized == pytest.approx(epr_expected, rel=1e-12)
    assert not crit.epr_entangled


def test_entanglement_combos_and_criteria_calibrated():
    eta = CALIBRATED_EFFICIENCY
    s_eff = after_loss(S_LIN, eta)
    a_eff = after_loss(A_LIN, eta)
    result = run_program(preset("paper_entanglement_calibrated"))
    (joint,) = result.joints
    by_key = {(c.parameter, c.sign): c.variance_snu for c in joint.combos}
    assert by_key[(1, -1)] == pytest.approx(s_eff, rel=1e-12)
    assert by_key[(3, +1)] == pytest.approx(1.0, rel=1e-12)
    crit = joint.criteria
    assert crit.duan_lhs_normalized == pytest.approx(1.0 + s_eff, rel=1e-12)
    assert crit.duan_nonseparable
    epr_expected = 4 * s_eff * a_eff / ((1 + s_eff) * (1 + a_eff))
    assert crit.epr_product_normalized == pytest.approx(epr_expected, rel=1e-12)
    assert not crit.epr_entangled


def test_two_squeezed_reaches_invested_squeezing():
    result = run_program(preset("two_squeezed"))
    (joint,) = result.joints
    by_key = {(c.parameter, c.sign): c.variance_snu for c in joint.combos}
    assert by_key[(1, -1)] == pytest.approx(S_LIN, rel=1e-12)
    assert by_key[(3, +1)] == pytest.approx(S_LIN, rel=1e-12)
    crit = joint.criteria
    assert crit.duan_lhs_normalized == pytest.approx(2.0 * S_LIN, rel=1e-12)
    assert crit.duan_nonseparable
    epr_expected = (2 * S_LIN * A_LIN / (S_LIN + A_LIN)) ** 2
    assert crit.epr_product_normalized == pytest.approx(epr_expected, rel=1e-12)
    assert crit.epr_entangled


def test_bright_port_pushes_both_combos_below_shot():
    result = run_program(preset("bright_port"))
    (joint,) = result.joints
    by_key = {(c.parameter, c.sign): c.variance_snu for c in joint.combos}
    assert by_key[(1, -1)] == pytest.approx((1.0 + S_LIN) / 2.0, rel=1e-12)
    assert by_key[(3, +1)] == pytest.approx((1.0 + S_LIN) / 2.0, rel=1e-12)
    assert by_key[(1, -1)] < 1.0 and by_key[(3, +1)] < 1.0
    assert joint.criteria.duan_lhs_normalized == pytest.approx(
        1.0 + S_LIN, rel=1e-12)
    assert joint.criteria.duan_nonseparable


def test_parameter_overrides_flow_through():
    result = run_program(preset("polarization_squeezing",
                                squeeze_db=-6.0, antisqueeze_db=10.0))
    st = result.port("OUT").stats
    assert st.variances[1] / st.shot_noise == pytest.approx(10 ** -0.6, rel=1e-12)
    assert st.variances[3] / st.shot_noise == pytest.approx(10.0, rel=1e-12)


def test_zero_efficiency_means_dark_detectors():
    with pytest.raises(ValueError, match="dark ports"):
        run_program(preset("polarization_squeezing", efficiency=0.0))
