import warnings

import numpy as np
import pytest

from graphonlab import graphons as G
from graphonlab import spectral as SP
from graphonlab.sampling import induced_graphon, sample_graph
from graphonlab.errors import ParameterError


def test_k4_induced():
    A = np.ones((4, 4)) - np.eye(4)
    sp = SP.spectrum_of_step(induced_graphon(A), 4)
    assert np.allclose(sp.positive, [0.75])
    assert np.allclose(sp.negative, [-0.25, -0.25, -0.25])
    gsp = SP.spectrum_of_graph(A, 4)
    assert np.allclose(gsp.positive, sp.positive) and np.allclose(gsp.negative, sp.negative)


def test_two_block():
    sp = SP.spectrum_of_step(G.StepGraphon([[0.8, 0.2], [0.2, 0.8]]))
    assert np.allclose(sp.positive, [0.5, 0.3], atol=1e-14)
    assert len(sp.negative) == 0


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_constant_step(p):
    sp = SP.spectrum_of_step(G.StepGraphon([[p]]))
    assert sp.value(1) == pytest.approx(p, abs=1e-15)


def test_nonuniform_matches_refinement():
    # oracle: expand the non-uniform step graphon onto a uniform grid that
    # contains its breakpoints; the uniform k'-block formula M/k' applies
    M = np.array([[0.9, 0.1, 0.4], [0.1, 0.6, 0.2], [0.4, 0.2, 0.0]])
    g = G.StepGraphon(M, [0, 0.25, 0.5, 1])
    idx = np.array([0, 1, 2, 2])
    fine = G.StepGraphon(M[np.ix_(idx, idx)])
    a, b = SP.spectrum_of_step(g), SP.spectrum_of_step(fine)
    assert np.allclose(a.positive, b.positive, atol=1e-12)
    assert np.allclose(a.negative, b.negative, atol=1e-12)


def test_product_rank_one():
    sp = SP.spectrum_of_analytic(G.product(), 3)
    assert abs(sp.value(1) - 1 / 3) < 1e-4
    assert all(abs(sp.value(i)) < 1e-6 for i in (2, 3, -1, -2, -3))
    assert sp.converged


def test_product_fine_grid_oracle():
    # the midpoint rule gives sum(x^2)/m = 1/3 - 1/(12 m^2) exactly
    m = 1024
    x = (np.arange(m) + 0.5) / m
    assert np.dot(x, x) / m == pytest.approx(1 / 3 - 1 / (12 * m * m), rel=1e-12)
    sp = SP.spectrum_of_analytic(G.product(), 1, m=m)
    assert sp.value(1) == pytest.approx(1 / 3 - 1 / (12 * sp.resolution ** 2), abs=1e-12)


def test_constant_analytic():
    sp = SP.spectrum_of_analytic(G.constant(0.5), 3)
    assert sp.value(1) == pytest.approx(0.5, abs=1e-12)
    assert abs(sp.value(2)) < 1e-6


def test_figure1_resolution_stable():
    g = G.figure1_family(4, 4.0, 7)
    sp = SP.spectrum_of_analytic(g, 3)
    assert sp.converged
    m = sp.resolution
    again = SP.spectrum_of_analytic(g, 3, m=2 * m)
    for i in (1, 2, 3, -1, -2, -3):
        assert abs(sp.value(i) - again.value(i)) < 1e-5


def test_nonconvergence_warns():
    g = G.AnalyticGraphon("sinusoid", (0.5, 0.5, 200.0))
    with pytest.warns(RuntimeWarning):
        sp = SP.spectrum_of_analytic(g, 3, m=64, tol=1e-14, cap=128)
    assert not sp.converged
    assert sp.resolution == 128


def test_small_m_rejected():
    with pytest.raises(ParameterError):
        SP.spectrum_of_analytic(G.product(), 3, m=32)


def test_weyl_identical():
    sp = SP.spectrum_of_step(G.StepGraphon([[0.8, 0.2], [0.2, 0.8]]))
    assert all(r.gap == 0 for r in SP.weyl_gaps(sp, sp))


def test_weyl_arithmetic():
    a = SP.Spectrum(np.array([1 / 3]), np.array([]), None, "w")
    b = SP.Spectrum(np.array([0.31]), np.array([]), None, "g")
    recs = SP.weyl_gaps(a, b, 3)
    assert [r.index for r in recs] == [1, 2, 3, -1, -2, -3]
    assert recs[0].gap == pytest.approx(1 / 3 - 0.31)
    assert recs[0].gap == pytest.approx(0.0233333, abs=1e-7)
    assert all(r.gap == 0 for r in recs[1:])


@pytest.mark.parametrize("n", [5, 17, 100])
def test_weyl_complete_graph(n):
    A = np.ones((n, n)) - np.eye(n)
    recs = SP.weyl_gaps(SP.spectrum(G.constant(1.0)), SP.spectrum_of_graph(A))
    assert recs[0].gap == pytest.approx(1 / n, abs=1e-12)
    # negative branch of K_n is -1/n repeated
    assert recs[3].gap == pytest.approx(1 / n, abs=1e-12)


def random_step(rng, k, zero_diag=False):
    M = rng.random((k, k))
    M = (M + M.T) / 2
    if zero_diag:
        np.fill_diagonal(M, 0)
    return M


@pytest.mark.parametrize("seed", range(5))
def test_scale_equivariance(seed):
    rng = np.random.default_rng(seed)
    M = random_step(rng, 6)
    a = SP.spectrum_of_step(G.StepGraphon(M), 6)
    b = SP.spectrum_of_step(G.StepGraphon(0.5 * M), 6)
    assert np.allclose(b.positive, 0.5 * a.positive, atol=1e-14)
    assert np.allclose(b.negative, 0.5 * a.negative, atol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    M = random_step(rng, 7)
    perm = rng.permutation(7)
    a = SP.spectrum_of_step(G.StepGraphon(M), 7)
    b = SP.spectrum_of_step(G.StepGraphon(M[np.ix_(perm, perm)]), 7)
    assert np.allclose(a.positive, b.positive, atol=1e-10)
    assert np.allclose(a.negative, b.negative, atol=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_trace_zero_diagonal(seed):
    rng = np.random.default_rng(seed)
    k = 8
    b = np.concatenate([[0], np.sort(rng.random(k - 1)), [1]])
    sp = SP.spectrum_of_step(G.StepGraphon(random_step(rng, k, True), b), k)
    assert abs(sp.positive.sum() + sp.negative.sum()) < 1e-10


@pytest.mark.parametrize("g", [G.product(), G.figure1_family(4, 4.0, 7),
                               G.AnalyticGraphon("max")], ids=lambda g: g.name)
def test_spectral_range(g):
    sp = SP.spectrum(g, 3)
    assert np.all(np.abs(sp.positive) <= 1) and np.all(np.abs(sp.negative) <= 1)


def test_arpack_path_agrees_with_dense(monkeypatch):
    A = sample_graph(G.figure1_family(3, 2.0, 1), 300, "stochastic", "iid", 0).adjacency
    dense = SP.spectrum_of_graph(A, 3)
    monkeypatch.setattr(SP, "DENSE_LIMIT", 100)
    sparse = SP.spectrum_of_graph(A, 3)
    assert sparse.zero_mass is None
    assert np.allclose(dense.positive, sparse.positive, atol=1e-10)
    assert np.allclose(dense.negative, sparse.negative, atol=1e-10)


def test_convergence_sanity_product():
    # median i=1 gap at n=2000 below n=125 over 10 trials
    w = SP.spectrum(G.product(), 1)
    med = []
    for n in (125, 2000):
        gaps = [SP.weyl_gaps(w, SP.spectrum_of_graph(
            sample_graph(G.product(), n, "weighted", "sorted", 1000 * t + n)), 1)[0].gap
            for t in range(10)]
        med.append(np.median(gaps))
    assert med[1] < med[0]


def test_rows_export():
    sp = SP.spectrum_of_step(G.StepGraphon([[0.8, 0.2], [0.2, 0.8]]))
    rows = sp.rows(2)
    assert rows[0][1] == 1 and rows[0][2] == pytest.approx(0.5)
    assert [r[1] for r in rows] == [1, 2, -1, -2]
    assert rows[2][2] == 0.0


def test_warning_free_default():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        SP.spectrum(G.AnalyticGraphon("min"), 3)
