import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinform import verification as V
from spinform.dynamics import Law, PhysicalParams, initial_state, integrate
from spinform.exceptions import DomainError
from spinform.fields import ConstantField
from spinform.pauli import SIGMA_0
from spinform.states import bloch_from_angles, density_from_bloch


@pytest.mark.parametrize("residual, tol, status", [(0.5, 1.0, "pass"), (1.0, 1.0, "pass"),
                                                   (1.5, 1.0, "fail"), (1e9, None, "report")])
def test_check_report_status(residual, tol, status):
    r = V.CheckReport("x", residual, tol)
    assert r.status == status
    assert r.passed == (status != "fail")
    d = r.to_dict()
    assert set(d) == {"check", "status", "residual", "tolerance", "params"}


def test_algebra_checks_pass():
    for r in (V.check_pauli_identity(200), V.check_pauli_commutator(200),
              V.check_singularity(200), V.check_realization_singularity(50)):
        assert r.status == "pass", r


def test_singularity_examples():
    assert np.linalg.det(SIGMA_0 - density_from_bloch([0, 0, 1])) == 0.0
    assert abs(np.linalg.det(SIGMA_0 - density_from_bloch(bloch_from_angles(np.pi / 2, 0)))) <= 1e-16


def test_is_asserted_pair():
    assert V.is_asserted_pair("bloch", "von_neumann", 0.0)
    assert V.is_asserted_pair("llg", "nonlinear_vn", 0.3)
    assert not V.is_asserted_pair("llg", "sp_collapse", 0.3)
    assert not V.is_asserted_pair("schrodinger_pauli", "sp_collapse", 0.0)
    assert not V.is_asserted_pair("bloch", "llg", 0.3)


def test_equivalence_at_pole_is_exact():
    cfg = V.EquivalenceConfig(theta0=0.0, t_end=20.0, dt=1e-3, params=PhysicalParams(k_i=0.2))
    reports = V.check_equivalence(cfg)
    assert len(reports) == 6
    assert all(r.residual <= 1e-12 for r in reports)
    assert [r.status for r in reports if "sp_collapse" in r.name] == ["report", "report"]


def test_equivalence_short_run():
    cfg = V.EquivalenceConfig(t_end=4 * np.pi, params=PhysicalParams(k_i=0.1))
    reports = V.check_equivalence(cfg)
    assert all(r.passed for r in reports)
    names = [r.name for r in reports]
    assert "equivalence.llg~nonlinear_vn[k_i=0.1]" in names


def test_max_deviation_needs_same_grid(zfield, unit_params):
    a = integrate(Law.BLOCH, [1, 0, 0], zfield, unit_params, 1.0, 0.1)
    b = integrate(Law.BLOCH, [1, 0, 0], zfield, unit_params, 1.0, 0.05)
    with pytest.raises(DomainError):
        V.max_deviation(a, b)
    assert V.max_deviation(a, a) == 0.0


def test_collapse_trend_short():
    r = V.check_collapse_trend(k_i=0.2, periods=2, dt=1e-3)
    assert r.status == "pass"
    assert r.params["slope"] == pytest.approx(-0.2, rel=1e-4)


def test_integrator_order():
    r = V.check_integrator_order()
    assert r.status == "pass"
    assert 15 <= r.params["ratio"] <= 17


def test_sp_residual_checks(zfield, unit_params):
    eig = integrate(Law.SCHRODINGER_PAULI, [1, 0], zfield, unit_params, 2.0, 1e-2)
    assert V.check_sp_residual(eig).residual <= 1e-14
    rec = integrate(Law.SCHRODINGER_PAULI, initial_state(Law.SCHRODINGER_PAULI, np.pi / 3),
                    zfield, unit_params, 2.0, 1e-2)
    assert V.check_sp_residual(rec).status == "pass"
    with pytest.raises(DomainError):
        V.check_sp_residual(integrate(Law.BLOCH, [1, 0, 0], zfield, unit_params, 1.0, 0.1))


def test_sp_collapse_checks_short():
    assert V.check_sp_collapse_norm(n_steps=5000).status == "pass"
    assert V.check_sp_collapse_reduction(t_end=2 * np.pi).status == "pass"


def test_extended_body_examples(unit_params):
    anti = V.extended_body_consistency(2, [0, 0, 1.0], unit_params, 2 * np.pi, 1e-2,
                                       moments=[[1, 0, 0], [-1, 0, 0]])
    assert anti.residual <= 1e-15
    whole = integrate(Law.BLOCH, [0, 0, 0], ConstantField([0, 0, 1.0]), unit_params, 1.0, 0.1)
    np.testing.assert_array_equal(whole.states, 0)
    single = V.extended_body_consistency(1, [0, 0, 1.0], unit_params, 1.0, 1e-2)
    assert single.residual == 0.0
    many = V.extended_body_consistency(16, [0.2, 0, 1.0], unit_params, 2 * np.pi, 1e-3)
    assert many.status == "pass"


def test_loop_torque_examples():
    loop = V.LoopModel()
    np.testing.assert_allclose(V.loop_torque_numeric(loop, [0, 0, 1], 1000), 0, atol=1e-14)
    np.testing.assert_allclose(V.loop_torque_numeric(loop, [1, 0, 0], 10_000), [0, np.pi, 0],
                               rtol=1e-8, atol=1e-12)
    with pytest.raises(DomainError):
        V.loop_torque_numeric(loop, [1, 0, 0], 4)


def test_loop_torque_converges_fast():
    loop = V.LoopModel(R=1.3, I=0.7)
    B = np.array([0.3, -1.1, 0.4])
    exact = np.pi * loop.I * loop.R ** 2 * np.cross([0, 0, 1], B)
    errs = [np.linalg.norm(V.loop_torque_numeric(loop, B, n) - exact) for n in (8, 16, 32)]
    assert all(e <= 1e-12 for e in errs)


def test_particle_torque_examples():
    loop = V.LoopModel()
    np.testing.assert_allclose(V.particle_torque_avg(loop, [0, 0, 1], 1000), 0, atol=1e-12)
    np.testing.assert_allclose(V.particle_torque_avg(loop, [1, 0, 0], 10_000), [0, 0.5, 0],
                               rtol=1e-6, atol=1e-12)
    rev = V.particle_torque_avg(V.LoopModel(omega=-1.0), [1, 0, 0], 10_000)
    np.testing.assert_allclose(rev, [0, -0.5, 0], atol=1e-12)


@given(st.floats(0.2, 3), st.floats(0.2, 3), st.floats(-2, 2).filter(lambda w: abs(w) > 0.1),
       st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_torque_models_agree(R, q, omega, B):
    loop = V.LoopModel(R=R, q=q, omega=omega, I=q * omega / (2 * np.pi))
    a = V.loop_torque_numeric(loop, B, 64)
    b = V.particle_torque_avg(loop, B, 64)
    np.testing.assert_allclose(a, b, atol=1e-12 * (1 + np.linalg.norm(a)))


def test_gyromagnetic_examples():
    assert V.gyromagnetic_classical(0.0, 1.0) == 0.0
    g = V.gyromagnetic_classical(1.602176634e-19, 9.1093837015e-31)
    assert g == pytest.approx(8.7941e10, rel=1e-4)
    assert V.gyromagnetic_classical(2.0, 3.0) == 2 * V.gyromagnetic_classical(1.0, 3.0)
    a, b = V.gyromagnetic_models(V.LoopModel(R=2.5, q=3.0, m_mass=0.5, omega=7.0))
    assert a == pytest.approx(3.0) and b == pytest.approx(3.0)
    with pytest.raises(DomainError):
        V.gyromagnetic_classical(1.0, 0.0)


def test_loop_model_validation():
    with pytest.raises(DomainError):
        V.LoopModel(R=0.0)
    with pytest.raises(DomainError):
        V.LoopModel(m_mass=-1.0)


def test_select_checks():
    assert V.select_checks("pauli*") == ["pauli_commutator", "pauli_identity"]
    assert len(V.select_checks()) == len(V.SUITE)
    with pytest.raises(DomainError):
        V.select_checks("nothing*")


def test_run_suite_sorted():
    reports = V.run_suite("*torque*")
    assert [r.name for r in reports] == sorted(r.name for r in reports)
    assert all(r.status == "pass" for r in reports)
