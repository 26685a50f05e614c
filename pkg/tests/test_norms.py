import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphonlab import graphons as G
from graphonlab import norms as N
from graphonlab.errors import ParameterError


def brute_cut(sk):
    """Independent oracle: all 2^k x 2^k block-subset pairs, no sign tricks."""
    B = sk.lengths[:, None] * sk.block_matrix * sk.lengths[None, :]
    k = sk.k
    best = 0.0
    for S in itertools.product([0, 1], repeat=k):
        r = np.array(S) @ B
        for T in itertools.product([0, 1], repeat=k):
            best = max(best, abs(r @ np.array(T)))
    return best


CHECKER = N.StepKernel([[0.5, -0.5], [-0.5, 0.5]])


def test_checker_exact():
    res = N.cutnorm_exact_step(CHECKER)
    assert res.value == pytest.approx(0.125, abs=1e-15)
    assert res.exact
    # both diagonal blocks attain the optimum; the first one found is kept
    assert res.S == (0,) and res.T == (0,)


def test_checker_norms():
    assert N.operator_norm(CHECKER) == pytest.approx(0.5, abs=1e-15)
    assert N.hs_norm(CHECKER) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("c", [-0.7, 0.0, 0.3, 1.0])
def test_constant_kernel(c):
    K = N.StepKernel([[c]])
    assert N.cutnorm_exact_step(K).value == pytest.approx(abs(c))
    assert N.operator_norm(K) == pytest.approx(abs(c))
    assert N.hs_norm(K) == pytest.approx(abs(c))


def test_zero_kernel_all_norms():
    Z = N.StepKernel(np.zeros((3, 3)))
    assert N.cutnorm_exact_step(Z).value == 0
    assert N.cutnorm_heuristic(Z, 32, 4).value == 0
    assert N.operator_norm(Z) == 0
    assert N.hs_norm(Z) == 0


def test_zero_difference_analytic():
    K = N.DifferenceKernel(G.product(), G.product())
    assert N.cutnorm_heuristic(K, 32, 4).value == 0
    assert N.operator_norm(K, 64) == 0
    assert N.hs_norm(K, 64) == 0


@pytest.mark.parametrize("seed", range(25))
def test_exact_vs_brute_force(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 6))
    sk = N.random_step_kernel(k, rng)
    assert N.cutnorm_exact_step(sk).value == pytest.approx(brute_cut(sk), abs=1e-14)


def test_certificate_attains_value():
    rng = np.random.default_rng(11)
    sk = N.random_step_kernel(7, rng)
    res = N.cutnorm_exact_step(sk)
    B = sk.lengths[:, None] * sk.block_matrix * sk.lengths[None, :]
    assert abs(B[np.ix_(res.S, res.T)].sum()) == pytest.approx(res.value, abs=1e-14)


def test_exact_cap():
    with pytest.raises(ParameterError):
        N.cutnorm_exact_step(N.StepKernel(np.zeros((5, 5))), cap=4)


def test_exact_needs_step():
    with pytest.raises(ParameterError):
        N.cutnorm_exact_step(N.DifferenceKernel(G.product(), G.constant(0.2)))


def test_heuristic_on_checker():
    val = N.cutnorm_heuristic(CHECKER, 16, 8, 0).value
    assert 0.125 - 1e-9 <= val <= 0.125 + 1e-9


def test_heuristic_monotone_in_restarts():
    K = N.DifferenceKernel(G.figure1_family(4, 4.0, 7), G.constant(0.5))
    vals = [N.cutnorm_heuristic(K, 32, r, 5).value for r in (0, 1, 4, 16)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_heuristic_grid_too_small():
    with pytest.raises(ParameterError):
        N.cutnorm_heuristic(CHECKER, 8)


@pytest.mark.parametrize("seed", range(20))
def test_heuristic_lower_bound(seed):
    rng = np.random.default_rng(100 + seed)
    sk = N.random_step_kernel(int(rng.integers(1, 9)), rng)
    assert N.cutnorm_heuristic(sk, 32, 8, seed).value <= N.cutnorm_exact_step(sk).value + 1e-12


def test_difference_refinement():
    U = G.StepGraphon([[0.8, 0.2], [0.2, 0.8]])
    V = G.StepGraphon([[0.5, 0.5, 0.5], [0.5, 0.5, 0.5], [0.5, 0.5, 0.5]])
    sk = N.DifferenceKernel(U, V).as_step()
    assert sk.k == 4
    x = np.linspace(0, 1, 41)
    direct = U.evaluate(x[:, None], x[None, :]) - V.evaluate(x[:, None], x[None, :])
    assert np.allclose(sk.evaluate(x[:, None], x[None, :]), direct)


def test_operator_vs_grid_oracle():
    # aligned step kernels: exact block formula agrees with the m-grid discretization
    rng = np.random.default_rng(2)
    sk = N.random_step_kernel(4, rng, uniform=True)
    m = 256
    grid_op = np.max(np.abs(np.linalg.eigvalsh(sk.grid(m) / m)))
    assert N.operator_norm(sk) == pytest.approx(grid_op, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 10))
def test_operator_le_hs(seed, k):
    sk = N.random_step_kernel(k, np.random.default_rng(seed))
    assert N.operator_norm(sk) <= N.hs_norm(sk) + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 8))
def test_sandwich_property(seed, k):
    sk = N.random_step_kernel(k, np.random.default_rng(seed))
    cut = N.cutnorm_exact_step(sk).value
    op = N.operator_norm(sk)
    assert cut <= op + 1e-12
    assert op <= np.sqrt(8 * cut) + 1e-12


def test_sandwich_audit_small():
    recs = N.sandwich_audit(10, 6, seed=1, grid=32, restarts=4)
    assert len(recs) == 10
    assert all(r.lower_ok and r.upper_ok and r.heuristic_ok for r in recs)


def test_cut_distance_relabeling():
    M = np.array([[0.9, 0.1, 0.3], [0.1, 0.5, 0.7], [0.3, 0.7, 0.2]])
    perm = np.array([2, 0, 1])
    U = G.StepGraphon(M)
    V = G.StepGraphon(M[np.ix_(perm, perm)])
    assert N.cutnorm(N.DifferenceKernel(U, V)).value > 0.01
    d, _ = N.cut_distance_step(U, V)
    assert d == pytest.approx(0, abs=1e-15)


def test_result_serialisable():
    d = N.cutnorm_exact_step(CHECKER).to_dict()
    assert json.loads(json.dumps(d))["value"] == pytest.approx(0.125)


def test_kernel_validation():
    with pytest.raises(ParameterError):
        N.StepKernel([[1.5]])
    with pytest.raises(ParameterError):
        N.StepKernel([[0.1, 0.2], [0.3, 0.1]])


def test_constant_graphon_counts_as_step():
    K = N.DifferenceKernel(G.StepGraphon([[0.5, 0.0], [0.0, 0.5]]), G.constant(0.25))
    sk = K.as_step()
    assert sk is not None and sk.k == 2
    assert N.cutnorm(K).exact
    assert N.cutnorm(K).value == pytest.approx(0.0625)
