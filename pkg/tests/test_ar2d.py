from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from icsel.ar1d import ArModel1D, autocovariance, fit_order, simulate
from icsel.ar2d import (
    ArModel2D,
    Support2D,
    acov2d,
    fit_support_2d,
    ic_2d,
    qp_support,
    select_classical_2d,
    select_nishii_2d,
    simulate_2d,
)
from icsel.criteria import Criterion, beta_bounds, penalty
from icsel.errors import SingularSystemError

THREE = {(0, 1): -0.4, (1, 0): -0.3, (2, 3): 0.25}


def phi_min(n):
    return Criterion.phi_beta(beta_bounds(n)[0])


def brute_acov(img, l1, l2):
    x = img - img.mean()
    h, w = x.shape
    total = 0.0
    for r in range(h):
        for c in range(w):
            if 0 <= r + l2 < h and 0 <= c + l1 < w:
                total += x[r, c] * x[r + l2, c + l1]
    return total / x.size


def spectral_variance(model: ArModel2D, grid=512):
    """Oracle: sigma2 * mean of 1/|A(w1, w2)|^2 over a fine frequency grid."""
    w = 2 * np.pi * np.arange(grid) / grid
    A = np.ones((grid, grid), complex)
    for (i1, i2), a in model.coeffs.items():
        A += a * np.exp(-1j * (w[None, :] * i1 + w[:, None] * i2))
    return model.sigma2 * np.mean(1 / np.abs(A) ** 2)


def test_qp_support_examples():
    assert qp_support("QP1", 0, 0).indices == ()
    assert set(qp_support("QP1", 1, 1)) == {(0, 1), (1, 0), (1, 1)}
    qp2 = qp_support("QP2", 2, 1)
    assert len(qp2) == 5 and all(i1 <= 0 for i1, _ in qp2)


@given(st.sampled_from(["QP1", "QP2"]), st.integers(0, 18), st.integers(0, 18))
def test_qp_support_cardinality(orient, k1, k2):
    assert len(qp_support(orient, k1, k2)) == (k1 + 1) * (k2 + 1) - 1


def test_support_validation():
    with pytest.raises(ValueError):
        Support2D("QP1", ((0, 0),))
    with pytest.raises(ValueError):
        Support2D("QP1", ((-1, 1),))
    with pytest.raises(ValueError):
        Support2D("QP2", ((1, 0),))
    with pytest.raises(ValueError):
        Support2D("NSHP", ())
    assert Support2D("QP1", ((1, 0),)).mirrored() == Support2D("QP2", ((-1, 0),))


def test_acov2d_examples():
    np.testing.assert_array_equal(acov2d(np.full((6, 5), 2.0), 2, 2).table, 0)
    rng = np.random.default_rng(0)
    img = rng.standard_normal((7, 9))
    acov = acov2d(img, 3, 2)
    assert acov(0, 0) == pytest.approx(np.var(img))
    for l1 in range(-3, 4):
        for l2 in range(-2, 3):
            assert acov(l1, l2) == pytest.approx(brute_acov(img, l1, l2), abs=1e-12)
    h, w = 8, 10
    checker = np.where((np.add.outer(np.arange(h), np.arange(w)) % 2) == 0, 1.0, -1.0)
    acov = acov2d(checker, 1, 1)
    assert acov(1, 0) == pytest.approx(-acov(0, 0) * (w - 1) / w)
    assert acov(0, 1) == pytest.approx(-acov(0, 0) * (h - 1) / h)
    with pytest.raises(ValueError):
        acov2d(img, 9, 1)
    with pytest.raises(ValueError):
        acov(4, 0)


def test_fit_empty_support():
    img = np.random.default_rng(1).standard_normal((16, 16))
    acov = acov2d(img, 2, 2)
    a, s2 = fit_support_2d(acov, Support2D("QP1"))
    assert a.size == 0 and s2 == acov(0, 0)


def test_separable_field_factorises():
    # x[r, c] = u[r] * w[c] has r(l1, l2) = r_w(l1) r_u(l2) exactly
    u = simulate(ArModel1D({1: -0.6}), 120, 1)
    w = simulate(ArModel1D({1: 0.5, 2: -0.2}), 150, 2)
    u, w = u - u.mean(), w - w.mean()
    img = np.outer(u, w)
    au, su = fit_order(autocovariance(u, 1), 1)
    aw, sw = fit_order(autocovariance(w, 2), 2)
    support = qp_support("QP1", 2, 1)
    a, s2 = fit_support_2d(acov2d(img, 2, 1), support)
    poly_w, poly_u = np.r_[1.0, aw], np.r_[1.0, au]
    expected = [poly_w[i1] * poly_u[i2] for i1, i2 in support]
    np.testing.assert_allclose(a, expected, atol=1e-6)
    assert s2 == pytest.approx(su * sw, rel=1e-6)


def test_simulated_field_coefficients_recovered():
    model = ArModel2D.from_dict({(0, 1): -0.4, (1, 0): -0.3})
    img = simulate_2d(model, 256, 256, seed=3)
    a, s2 = fit_support_2d(acov2d(img, 1, 1), model.support)
    np.testing.assert_allclose(a, [model.coeffs[p] for p in model.support], atol=0.05)
    assert s2 == pytest.approx(1.0, abs=0.05)


def test_ic_2d_examples():
    acov = acov2d(np.random.default_rng(2).standard_normal((40, 40)), 18, 18)
    unit = acov2d(np.array([[1.0, -1.0], [-1.0, 1.0]]), 0, 0)
    assert unit(0, 0) == 1.0
    assert ic_2d(unit, Support2D("QP1"), Criterion.bic()) == 0
    c = Criterion.aic()
    for (k1, k2), size in [((1, 1), 3), ((18, 18), 360)]:
        s = qp_support("QP1", k1, k2)
        fit = acov.n * np.log(fit_support_2d(acov, s)[1])
        assert ic_2d(acov, s, c) - fit == pytest.approx(size * penalty(c, acov.n))


def test_qp2_is_mirror_of_qp1():
    img = simulate_2d(ArModel2D.from_dict(THREE), 64, 80, seed=4)
    s1 = qp_support("QP1", 3, 2)
    a1, v1 = fit_support_2d(acov2d(img[:, ::-1], 3, 2), s1)
    a2, v2 = fit_support_2d(acov2d(img, 3, 2), s1.mirrored())
    lookup = dict(zip(s1.mirrored().indices, a2))
    np.testing.assert_allclose(a1, [lookup[(-i1, i2)] for i1, i2 in s1], atol=1e-10)
    assert v1 == pytest.approx(v2, abs=1e-10)


@given(
    st.integers(0, 100),
    st.sets(st.sampled_from(qp_support("QP1", 3, 3).indices)),
    st.sets(st.sampled_from(qp_support("QP1", 3, 3).indices)),
)
def test_residual_variance_nonincreasing_2d(seed, s, extra):
    img = np.random.default_rng(seed).standard_normal((24, 24))
    acov = acov2d(img, 3, 3)
    small = Support2D("QP1", tuple(s))
    big = Support2D("QP1", tuple(s | extra))
    assert fit_support_2d(acov, big)[1] <= fit_support_2d(acov, small)[1] + 1e-12


def test_simulate_2d_white_noise_and_determinism():
    empty = ArModel2D.from_dict({})
    img = simulate_2d(empty, 10, 12, seed=5, margin=3)
    expected = np.random.default_rng(5).standard_normal((13, 15))[3:, 3:]
    np.testing.assert_array_equal(img, expected)
    model = ArModel2D.from_dict(THREE)
    np.testing.assert_array_equal(simulate_2d(model, 20, 20, 1), simulate_2d(model, 20, 20, 1))


def test_simulate_2d_qp2_is_flipped_qp1():
    qp1 = ArModel2D.from_dict(THREE)
    qp2 = ArModel2D.from_dict({(-a, b): v for (a, b), v in THREE.items()}, orientation="QP2")
    np.testing.assert_array_equal(
        simulate_2d(qp2, 30, 40, 2)[:, ::-1], simulate_2d(qp1, 30, 40, 2)
    )


def test_simulate_2d_variance_matches_spectrum():
    model = ArModel2D.from_dict(THREE)
    img = simulate_2d(model, 512, 512, seed=1)
    assert acov2d(img, 0, 0)(0, 0) == pytest.approx(spectral_variance(model), rel=0.10)


def test_white_noise_selects_nothing():
    classical, nishii = Counter(), Counter()
    for seed in range(20):
        img = np.random.default_rng(seed).standard_normal((64, 64))
        acov = acov2d(img, 3, 3)
        classical[select_classical_2d(acov, 3, 3, Criterion.bic())] += 1
        nishii[select_nishii_2d(acov, 3, 3, Criterion.bic()).indices] += 1
    assert classical.most_common(1)[0][0] == (0, 0)
    assert nishii.most_common(1)[0][0] == ()


def test_round_trip_single_seed():
    img = simulate_2d(ArModel2D.from_dict(THREE), 256, 256, seed=0)
    c = phi_min(img.size)
    assert set(select_nishii_2d(img, 4, 4, c)) == set(THREE)
    assert select_classical_2d(img, 4, 4, c) == (2, 3)


def test_nishii_keeps_site_outside_classical_rectangle():
    model = ArModel2D.from_dict({(0, 1): -0.4, (1, 0): -0.3, (4, 4): 0.05})
    img = simulate_2d(model, 256, 256, seed=0)
    c = phi_min(img.size)
    k1, k2 = select_classical_2d(img, 4, 4, c)
    kept = select_nishii_2d(img, 4, 4, c)
    assert (4, 4) in kept
    assert not set(kept) <= set(qp_support("QP1", k1, k2))


def test_classical_tie_breaks(monkeypatch):
    import icsel.ar2d as ar2d

    acov = acov2d(np.random.default_rng(0).standard_normal((12, 12)), 2, 2)
    monkeypatch.setattr(ar2d, "ic_2d", lambda *args, **kw: 0.0)
    assert select_classical_2d(acov, 2, 2, Criterion.bic()) == (0, 0)
    # (1, 0) and (0, 1) tie on IC and size: lexicographic order decides
    monkeypatch.setattr(ar2d, "ic_2d", lambda a, s, c, n=None: -1.0 if len(s) == 1 else 0.0)
    assert select_classical_2d(acov, 2, 2, Criterion.bic()) == (0, 1)


def test_singular_full_universe():
    with pytest.raises(SingularSystemError, match="size 3"):
        select_nishii_2d(np.zeros((5, 5)), 1, 1, Criterion.bic())
