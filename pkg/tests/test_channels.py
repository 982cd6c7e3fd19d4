import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from pdmnm.channels import (
    ADParams,
    GADParams,
    KrausChannel,
    NotCPTPError,
    ad_family,
    ad_roots,
    amplitude_damping,
    apply,
    choi,
    completeness_error,
    decay_rate_ad,
    gad_family,
    generalized_amplitude_damping,
    identity_channel,
    identity_family,
    intermediate_map_witness,
    jamiolkowski,
    jamiolkowski_from_transfer,
    random_channel,
    tabulated_family,
    transfer_matrix,
    unitary_channel,
    unitary_family,
)
from pdmnm.linalg import SIGMA_X, partial_transpose, random_unitary

seeds = st.integers(0, 2**32 - 1)
KET0 = np.diag([1.0, 0.0])
KET1 = np.diag([0.0, 1.0])
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
SIGMA_PLUS = SIGMA_MINUS.T.copy()
# first zero of G for gamma0 = 3, b = 0.6: tan(0.9 t) = -3
T_ROOT = (np.pi - np.arctan(3)) / 0.9


def test_kraus_completeness_enforced():
    with pytest.raises(NotCPTPError):
        KrausChannel((np.eye(2) * 0.9,))
    with pytest.raises(ValueError):
        KrausChannel((np.eye(2), np.eye(3)))


def test_apply_examples():
    rho = np.array([[0.6, 0.1j], [-0.1j, 0.4]])
    np.testing.assert_allclose(apply(identity_channel(), rho), rho)
    np.testing.assert_allclose(apply(amplitude_damping(1.0), KET1), KET0)
    np.testing.assert_allclose(apply(amplitude_damping(0.5), KET1), np.diag([0.5, 0.5]))
    with pytest.raises(ValueError):
        apply(identity_channel(), np.eye(4) / 4)


@given(seeds)
@settings(max_examples=50)
def test_apply_preserves_state_properties(seed):
    rng = np.random.default_rng(seed)
    ch = random_channel(rng, n_kraus=int(rng.integers(1, 5)))
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = z @ z.conj().T
    rho /= np.trace(rho)
    out = apply(ch, rho)
    assert abs(np.trace(out) - 1) < 1e-12
    assert np.max(np.abs(out - out.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(out)[0] > -1e-10


@pytest.mark.parametrize("fam", [
    ad_family(ADParams(3, 0.6)),
    ad_family(ADParams(0.6, 3)),
    ad_family(ADParams(0.5, 1.0)),  # critical d = 0
    gad_family(GADParams(0.0)),
    gad_family(GADParams(3.0)),
    unitary_family(),
    identity_family(),
], ids=["ad-nm", "ad-tdm", "ad-critical", "gad-0", "gad-3", "unitary", "identity"])
def test_family_completeness_random_times(fam):
    ts = np.random.default_rng(7).uniform(0, 10, 100)
    for t in ts:
        assert completeness_error(fam(t).stacked()) < 1e-9
    if fam.batch is not None:
        stack, flags = fam.kraus_stack(ts)
        assert not flags.any()
        assert completeness_error(stack) < 1e-9


def test_families_start_at_identity():
    for fam in (ad_family(ADParams(3, 0.6)), gad_family(GADParams(2.0))):
        np.testing.assert_allclose(transfer_matrix(fam(0.0)), np.eye(4), atol=1e-15)


def test_ad_G_examples():
    p = ADParams(3, 0.6)
    assert p.G(0.0) == 1.0
    assert p.r(0.0) == 0.0
    assert p.non_markovian and not ADParams(0.6, 3).non_markovian
    assert T_ROOT == pytest.approx(2.1029, abs=1e-4)
    roots = ad_roots(p, 10.0)
    assert roots[0] == pytest.approx(T_ROOT, abs=1e-12)
    np.testing.assert_allclose(roots, T_ROOT + np.arange(3) * np.pi / 0.9, atol=1e-12)


def test_ad_G_tdm_positive_decreasing():
    p = ADParams(0.6, 3)
    assert p.d.imag == 0 and p.d.real == pytest.approx(np.sqrt(5.4))
    g = p.G(np.linspace(0, 5, 5001))
    assert np.all(g[1:] > 0)
    assert np.all(np.diff(g) < 0)


@pytest.mark.parametrize("gb", [(3, 0.6), (0.6, 3), (0.5, 1.0), (1.0, 2.0)])
def test_G_matches_oracles(gb):
    t = np.linspace(0, 10, 501)
    p = ADParams(*gb)
    np.testing.assert_allclose(p.G(t), oracles.G_real(*gb, t), atol=1e-14)
    np.testing.assert_allclose(p.G(t), oracles.G_ode(*gb, t), atol=1e-10)
    h = 1e-6
    np.testing.assert_allclose(p.G_dot(t[1:-1]), (p.G(t[1:-1] + h) - p.G(t[1:-1] - h)) / (2 * h),
                               atol=1e-8)


@pytest.mark.parametrize("gb", [(3, 0.6), (0.6, 3), (1.0, 2.0), (2.0, 1.0)])
def test_decay_rate_matches_finite_difference(gb):
    t = np.linspace(0.05, 10, 400)
    g = oracles.G_real(*gb, t)
    keep = np.abs(g) > 0.05
    got = decay_rate_ad(ADParams(*gb), t[keep])
    np.testing.assert_allclose(got, oracles.gamma_fd(*gb, t[keep]), rtol=1e-6, atol=1e-6)


def test_decay_rate_limits_and_signs():
    for gb in [(3, 0.6), (0.6, 3)]:
        p = ADParams(*gb)
        assert decay_rate_ad(p, 0.0) == 0.0
        assert abs(decay_rate_ad(p, 1e-6)) < 1e-5
    tdm = decay_rate_ad(ADParams(0.6, 3), np.linspace(0, 5, 2001))
    assert np.all(tdm >= 0)
    after = decay_rate_ad(ADParams(3, 0.6), T_ROOT + np.linspace(1e-3, 0.3, 50))
    assert np.all(after < 0)


def test_decay_rate_singularity_flag():
    p = ADParams(3, 0.6)
    assert np.isnan(decay_rate_ad(p, T_ROOT))
    assert np.isfinite(decay_rate_ad(p, T_ROOT + 0.01))


def test_master_equation_consistency():
    p = ADParams(3, 0.6)
    fam = ad_family(p)
    rho0 = np.array([[0.3, 0.2 - 0.35j], [0.2 + 0.35j, 0.7]])
    h = 1e-6
    for t in np.linspace(0.1, 10, 60):
        if abs(p.G(t)) <= 0.05:
            continue
        lhs = (apply(fam(t + h), rho0) - apply(fam(t - h), rho0)) / (2 * h)
        rho = apply(fam(t), rho0)
        ps = SIGMA_PLUS @ SIGMA_MINUS
        rhs = decay_rate_ad(p, t) * (
            SIGMA_MINUS @ rho @ SIGMA_PLUS - 0.5 * (ps @ rho + rho @ ps)
        )
        np.testing.assert_allclose(lhs, rhs, atol=1e-5)


def test_gad_examples():
    # omega = 0 reduces to AD with lambda(t) as damping
    fam = gad_family(GADParams(0.0))
    for t in (0.3, 1.7):
        lam = 1 - np.exp(-t)
        np.testing.assert_allclose(
            transfer_matrix(fam(t)), transfer_matrix(amplitude_damping(lam)), atol=1e-14
        )
    ch = gad_family(GADParams(3.0))(np.pi / 6)
    assert np.allclose(ch.kraus[0], 0) and np.allclose(ch.kraus[1], 0)
    np.testing.assert_allclose(
        transfer_matrix(ch),
        transfer_matrix(generalized_amplitude_damping(1.0, 1 - np.exp(-np.pi / 6))),
    )


def test_choi_examples():
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    np.testing.assert_array_equal(choi(identity_channel()), swap)
    chi = choi(amplitude_damping(1.0))
    np.testing.assert_allclose(chi, np.diag([1, 0, 1, 0]))
    assert np.trace(chi).real == pytest.approx(2)
    assert np.linalg.eigvalsh(partial_transpose(chi, which=0))[0] >= 0


@given(seeds)
@settings(max_examples=50)
def test_choi_conventions(seed):
    rng = np.random.default_rng(seed)
    ch = random_channel(rng, n_kraus=int(rng.integers(1, 5)))
    chi = choi(ch)
    j = jamiolkowski(ch)
    assert np.max(np.abs(chi - chi.conj().T)) < 1e-12
    assert np.trace(chi).real == pytest.approx(2)
    np.testing.assert_allclose(partial_transpose(chi, which=0), j, atol=1e-12)
    assert np.linalg.eigvalsh(j)[0] > -1e-12
    np.testing.assert_allclose(jamiolkowski_from_transfer(transfer_matrix(ch)), j, atol=1e-12)


def test_transfer_matrix_examples():
    np.testing.assert_allclose(transfer_matrix(identity_channel()), np.eye(4))
    r = 0.36
    expected = np.array([
        [1, 0, 0, 0],
        [0, 0.8, 0, 0],
        [0, 0, 0.8, 0],
        [r, 0, 0, 1 - r],
    ])
    np.testing.assert_allclose(transfer_matrix(amplitude_damping(r)), expected, atol=1e-15)
    np.testing.assert_allclose(transfer_matrix(unitary_channel(SIGMA_X)), np.diag([1, 1, -1, -1]))


@given(seeds)
@settings(max_examples=50)
def test_transfer_matrix_multiplicative(seed):
    rng = np.random.default_rng(seed)
    e, f = random_channel(rng, 2), random_channel(rng, 3)
    np.testing.assert_allclose(
        transfer_matrix(f.then(e)), transfer_matrix(e) @ transfer_matrix(f), atol=1e-10
    )


def test_witness_identity_and_unitary():
    assert intermediate_map_witness(identity_family(), 1.0, 0.5) == pytest.approx(0, abs=1e-14)
    assert intermediate_map_witness(unitary_family(), 1.0, 0.5) == pytest.approx(0, abs=1e-12)


def test_witness_tdm_grid():
    fam = ad_family(ADParams(0.6, 3))
    for t in np.linspace(0, 5, 11):
        for tau in (0.01, 0.1, 1.0):
            assert intermediate_map_witness(fam, t, tau) >= -1e-9


def test_witness_nm_revival_negative_and_singular_flag():
    fam = ad_family(ADParams(3, 0.6))
    assert intermediate_map_witness(fam, T_ROOT + 0.05, 0.05) < 0
    assert np.isnan(intermediate_map_witness(fam, T_ROOT, 0.05))
    with pytest.raises(ValueError):
        intermediate_map_witness(fam, 1.0, 0.0)


def test_tabulated_family_interpolates_and_repairs():
    u = random_unitary(2, np.random.default_rng(5))
    fam = tabulated_family([0.0, 1.0, 2.0], [[np.eye(2)], [u], [np.eye(2)]])
    np.testing.assert_allclose(fam(1.0).kraus[0], u)
    mid = fam(0.5)
    assert completeness_error(mid.stacked()) < 1e-9
    with pytest.raises(ValueError):
        fam(2.5)
    stack, flags = fam.kraus_stack(np.array([0.0, 1.5, 3.0]))
    np.testing.assert_array_equal(flags, [False, False, True])


def test_tabulated_ad_samples_close_to_exact():
    p = ADParams(0.6, 3)
    ts = np.linspace(0, 2, 201)
    fam = tabulated_family(ts, [ad_family(p)(t).kraus for t in ts])
    exact = ad_family(p)(0.505)
    np.testing.assert_allclose(
        transfer_matrix(fam(0.505)), transfer_matrix(exact), atol=1e-4
    )


def test_params_validation():
    with pytest.raises(ValueError):
        ADParams(0, 1)
    with pytest.raises(ValueError):
        GADParams(-1)
    with pytest.raises(ValueError):
        amplitude_damping(1.5)
