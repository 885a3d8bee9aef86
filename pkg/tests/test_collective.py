import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entdist.collective import (
    CollectiveMoments,
    PropositionViolation,
    collective_moments,
    collective_moments_from_state,
    critical_sample_size,
    cut_negativities,
    e_ab,
    mu_pair,
    nu_virtual,
    prop2_check,
    prop2_conditions,
    prop2_epsilon,
    singlet_mixture_moments,
    virtual_state,
    virtual_state_multi,
)
from entdist.matcore import hermitian_eigenvalues, partial_trace, partial_transpose
from entdist.pairdata import PairData
from entdist.pairmeasures import UnphysicalStateError, negativity
from entdist.states import (
    Partition,
    PureState,
    apply_local_unitaries,
    basis_state,
    dicke,
    extract_pair_data,
    generalized_singlet,
    pair_reduced_state,
    singlet_noise_mixture,
)

from conftest import collective_dense, proj, PSI_PLUS, random_unitary


def min_pt_eig(rho):
    return hermitian_eigenvalues(partial_transpose(rho, [2, 2], 1))[0]


def x_pairdata(g_z_a, g_z_b, h_xx, h_zz, eps=1):
    """Pair data in the X form with per-pair ``h_xx`` / ``h_zz`` arrays."""
    h_xx = np.asarray(h_xx, float)
    n_a, n_b = h_xx.shape
    h = np.zeros((n_a, n_b, 3, 3))
    h[..., 0, 0] = h_xx
    h[..., 1, 1] = eps * h_xx
    h[..., 2, 2] = h_zz
    g_a = np.zeros((n_a, 3))
    g_a[:, 2] = g_z_a
    g_b = np.zeros((n_b, 3))
    g_b[:, 2] = g_z_b
    return PairData(g_a, g_b, h).validate()


def test_moments_from_state_match_dense_operators(rng):
    v = rng.normal(size=64) + 1j * rng.normal(size=64)
    state = PureState(v / np.linalg.norm(v))
    part = Partition((0, 3), (1, 4, 5))
    ops_a = collective_dense(part.a_sites, 6)
    ops_b = collective_dense(part.b_sites, 6)
    rho = proj(state.amplitudes)
    cm = collective_moments_from_state(state, part)
    for i in range(3):
        assert cm.S_a[i] == pytest.approx(0.5 * np.trace(rho @ ops_a[i]).real, abs=1e-12)
        assert cm.S_b[i] == pytest.approx(0.5 * np.trace(rho @ ops_b[i]).real, abs=1e-12)
        for j in range(3):
            assert cm.T[i, j] == pytest.approx(0.25 * np.trace(rho @ ops_a[i] @ ops_b[j]).real, abs=1e-12)


@pytest.mark.parametrize(
    "state,part",
    [
        (singlet_noise_mixture(3, 0.35), Partition.halves(3)),
        (dicke(7, 3), Partition((0, 6), (2, 3, 4))),
        (generalized_singlet(2), Partition((0, 2), (1, 3))),
    ],
)
def test_two_routes_to_moments_agree(state, part):
    direct = collective_moments_from_state(state, part)
    summed = collective_moments(extract_pair_data(state, part))
    np.testing.assert_allclose(direct.S_a, summed.S_a, atol=1e-12)
    np.testing.assert_allclose(direct.S_b, summed.S_b, atol=1e-12)
    np.testing.assert_allclose(direct.T, summed.T, atol=1e-12)


def test_moments_examples():
    cm = collective_moments_from_state(dicke(4, 0), Partition.halves(2))
    np.testing.assert_allclose(cm.S_a, [0, 0, 1])
    np.testing.assert_allclose(cm.T, np.diag([0, 0, 1]))
    np.testing.assert_allclose(cm.s_a, [0, 0, 1])
    np.testing.assert_allclose(cm.t, np.diag([0, 0, 1]))

    cm = collective_moments_from_state(generalized_singlet(2), Partition.halves(2))
    np.testing.assert_allclose(cm.t, -2 / 3 * np.eye(3), atol=1e-12)

    cm = collective_moments_from_state(dicke(2, 1), Partition.halves(1))
    np.testing.assert_allclose(cm.t, np.diag([1, 1, -1]), atol=1e-12)
    np.testing.assert_allclose(cm.s_a, 0, atol=1e-12)


def test_normalization_and_bounds():
    cm = collective_moments_from_state(dicke(5, 2), Partition((0, 1), (2, 3, 4)))
    np.testing.assert_allclose(cm.s_a, 2 * cm.S_a / 2)
    np.testing.assert_allclose(cm.t, 4 * cm.T / 6)
    assert np.all(np.abs(cm.S_a) <= 1 + 1e-12) and np.all(np.abs(cm.T) <= 6 / 4 + 1e-12)


def test_strict_paper_rejects_unequal_sizes():
    with pytest.raises(ValueError, match="strict"):
        collective_moments_from_state(dicke(5, 2), Partition((0, 1), (2, 3, 4)), strict_paper=True)


@pytest.mark.parametrize(
    "state,part",
    [
        (singlet_noise_mixture(3, 0.2), Partition.halves(3)),
        (dicke(6, 2), Partition((5, 0), (1, 3, 4))),
    ],
)
def test_virtual_state_is_uniform_pair_mixture(state, part, rng):
    state = apply_local_unitaries(state, [random_unitary(rng) for _ in range(state.num_qubits)])
    rho = virtual_state(collective_moments_from_state(state, part))
    mix = np.mean([pair_reduced_state(state, a, b) for a in part.a_sites for b in part.b_sites], axis=0)
    np.testing.assert_allclose(rho, mix, atol=1e-12)


def test_virtual_state_examples():
    rho = virtual_state(collective_moments_from_state(dicke(2, 1), Partition.halves(1)))
    np.testing.assert_allclose(rho, proj(PSI_PLUS), atol=1e-12)
    assert negativity(rho) == pytest.approx(0.5, abs=1e-12)

    rho = virtual_state(collective_moments_from_state(generalized_singlet(3), Partition.halves(3)))
    assert negativity(rho) == pytest.approx(1 / 6, abs=1e-12)

    rho = virtual_state(collective_moments_from_state(dicke(4, 0), Partition.halves(2)))
    assert rho[0, 0] == pytest.approx(1) and negativity(rho) == 0


def test_virtual_state_rejects_inconsistent_moments():
    cm = CollectiveMoments.from_normalized(np.zeros(3), np.zeros(3), np.eye(3), 2, 2)
    with pytest.raises(UnphysicalStateError):
        virtual_state(cm)


def test_e_ab_examples():
    cm = collective_moments_from_state(singlet_noise_mixture(2, 0.5), Partition.halves(2))
    assert e_ab(cm) == pytest.approx(0.0625, abs=1e-12)
    cm = collective_moments_from_state(singlet_noise_mixture(4, 0.5), Partition.halves(4))
    assert e_ab(cm) == pytest.approx(0, abs=1e-12)
    for n in (1, 2, 3):
        cm = collective_moments_from_state(dicke(6, 3), Partition.halves(n))
        assert e_ab(cm) == pytest.approx(0.1, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("p", [0.0, 0.25, 0.6, 1.0])
def test_closed_form_moments_match_state(n, p):
    cm = collective_moments_from_state(singlet_noise_mixture(n, p), Partition.halves(n))
    ref = singlet_mixture_moments(n, p)
    np.testing.assert_allclose(cm.t, ref.t, atol=1e-12)
    np.testing.assert_allclose(cm.s_a, ref.s_a, atol=1e-12)


def test_critical_sample_size():
    assert critical_sample_size(0.5) == 3
    assert critical_sample_size(0.6) == 4
    assert critical_sample_size(0.0) == 1
    assert critical_sample_size(1.0) is None


def test_epsilon_examples():
    assert prop2_epsilon(extract_pair_data(generalized_singlet(2), Partition.halves(2))) == 1
    assert prop2_epsilon(extract_pair_data(dicke(4, 1), Partition.halves(2))) == 1
    # h_xx = h_yy = 0 with h_zz = +1: only eps = -1 satisfies eps*h_zz <= 0
    assert prop2_epsilon(extract_pair_data(dicke(4, 0), Partition.halves(2))) == -1
    # nothing correlated at all
    assert prop2_epsilon(x_pairdata(0, 0, np.zeros((1, 1)), 0)) is None


def test_conditions_reported_false_for_mixed_zz_signs():
    pd = x_pairdata(0, 0, np.full((1, 2), -0.2), np.array([[-0.3, 0.3]]))
    cond = prop2_conditions(pd)
    assert cond["epsilon"] is None and not cond["iii"]
    report = prop2_check(pd)
    assert not report.in_form and not report.equality_holds and report.e_ab is None


def test_mu_pair_examples():
    assert mu_pair(0, 0, -1, -1, 1) == pytest.approx(-0.5)
    assert mu_pair(0, 0, 0, 0, 1) == pytest.approx(0.25)
    state = singlet_noise_mixture(2, 0.5)
    pd = extract_pair_data(state, Partition.halves(2))
    mus = [mu_pair(pd.g_a[i, 2], pd.g_b[j, 2], pd.h[i, j, 0, 0], pd.h[i, j, 2, 2], 1)
           for i in range(2) for j in range(2)]
    brute = [min_pt_eig(pair_reduced_state(state, a, b)) for a in (0, 1) for b in (2, 3)]
    np.testing.assert_allclose(mus, brute, atol=1e-12)
    assert np.mean(mus) == pytest.approx(-0.0625, abs=1e-12)


def test_nu_virtual_examples():
    for n in range(1, 6):
        cm = collective_moments_from_state(generalized_singlet(n), Partition.halves(n))
        assert nu_virtual(cm, 1) == pytest.approx(-1 / (2 * n), abs=1e-12)
    assert nu_virtual(singlet_mixture_moments(2, 1.0), 1) == pytest.approx(-0.25)
    zero = CollectiveMoments(np.zeros(3), np.zeros(3), np.zeros((3, 3)), 3, 3)
    assert nu_virtual(zero, 1) == pytest.approx(0.25)


@pytest.mark.parametrize("g_a,g_b,eps", [(0.3, -0.1, 1), (0.2, 0.4, -1), (0.0, 0.0, 1)])
def test_nu_is_min_pt_eigenvalue_of_x_state(g_a, g_b, eps, rng):
    h_xx = rng.uniform(-0.3, 0.3, size=(2, 3))
    pd = x_pairdata(g_a, g_b, h_xx, -eps * 0.4, eps)
    cm = collective_moments(pd)
    assert nu_virtual(cm, eps) == pytest.approx(min_pt_eig(virtual_state(cm)), abs=1e-10)


def test_prop2_mixture_equality():
    pd = extract_pair_data(singlet_noise_mixture(2, 0.8), Partition.halves(2))
    r = prop2_check(pd)
    assert r.in_form and r.epsilon == 1 and r.equality_holds
    assert r.e_ab == pytest.approx(0.175, abs=1e-12)
    assert r.e_bar == pytest.approx(0.175, abs=1e-12)


def test_prop2_singlet_equality():
    r = prop2_check(extract_pair_data(generalized_singlet(3), Partition.halves(3)))
    assert r.equality_holds and abs(r.delta) < 1e-12


def test_prop2_varying_h_xx_is_strict():
    h_xx = np.array([[-0.1, -0.3], [-0.2, -0.35]])
    pd = x_pairdata(0.2, 0.1, h_xx, -0.5)
    r = prop2_check(pd)
    assert r.in_form and not r.h_xx_constant and not r.equality_holds
    assert r.delta > 1e-4
    assert r.red1_lhs < r.red1_rhs
    assert r.e_bar > r.e_ab + 1e-4


def test_prop2_delta_vanishes_without_z_magnetization():
    # with c = 0 the averaged root is 2|h_xx|, linear on a single sign
    h_xx = np.array([[-0.2, -0.3]])
    r = prop2_check(x_pairdata(0, 0, h_xx, -0.6))
    assert not r.h_xx_constant and not r.equality_holds
    assert abs(r.delta) < 1e-12
    assert r.e_ab == pytest.approx(r.e_bar, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    c=st.floats(-2, 2),
    h=st.lists(st.floats(-1, 1), min_size=1, max_size=12),
)
def test_root_averaging_inequality(c, h):
    h = np.array(h)
    lhs = np.sqrt(c**2 + 4 * h.mean() ** 2)
    rhs = np.mean(np.sqrt(c**2 + 4 * h**2))
    assert lhs <= rhs + 1e-9
    if np.ptp(h) == 0:
        assert abs(lhs - rhs) < 1e-12


def test_multi_m2_reduces_to_virtual_state():
    state = singlet_noise_mixture(2, 0.7)
    multi = virtual_state_multi(state, [(0, 1), (2, 3)])
    two = virtual_state(collective_moments_from_state(state, Partition.halves(2)))
    np.testing.assert_allclose(multi, two, atol=1e-12)


def test_multi_w_state():
    w = dicke(3, 1)
    rho = virtual_state_multi(w, [(0,), (1,), (2,)])
    np.testing.assert_allclose(rho, proj(w.amplitudes), atol=1e-12)
    negs = cut_negativities(rho)
    assert set(negs) == {(0,), (0, 1), (0, 2)}
    vals = list(negs.values())
    assert min(vals) > 0.1 and np.ptp(vals) < 1e-12


def test_multi_product_state():
    st_ = basis_state([0, 1, 1, 0, 0, 1])
    rho = virtual_state_multi(st_, [(0, 1), (2, 3), (4, 5)])
    assert all(v < 1e-12 for v in cut_negativities(rho).values())
    assert hermitian_eigenvalues(rho)[0] >= -1e-9


def test_multi_marginals_match_pairwise(rng):
    state = apply_local_unitaries(dicke(6, 3), [random_unitary(rng) for _ in range(6)])
    samples = [(0,), (1, 2), (3, 4), (5,)]
    rho = virtual_state_multi(state, samples)
    assert hermitian_eigenvalues(rho)[0] >= -1e-9
    for i in range(4):
        for j in range(i + 1, 4):
            marg = partial_trace(rho, [2] * 4, [i, j])
            ref = virtual_state(collective_moments_from_state(state, Partition(samples[i], samples[j])))
            np.testing.assert_allclose(marg, ref, atol=1e-10)


def test_multi_validation():
    with pytest.raises(ValueError):
        virtual_state_multi(dicke(4, 1), [(0,)])
    with pytest.raises(ValueError):
        virtual_state_multi(dicke(4, 1), [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        virtual_state_multi(dicke(6, 1), [(0,), (1,), (2,), (3,), (4,)])


def test_prop2_violation_raised_on_inconsistent_claim(monkeypatch):
    import entdist.collective as col

    pd = extract_pair_data(generalized_singlet(2), Partition.halves(2))
    monkeypatch.setattr(col, "nu_virtual", lambda cm, eps: -0.3)
    with pytest.raises(PropositionViolation):
        col.prop2_check(pd)
