"""Multilinear algebra layer: slot calculus, the Kulkarni-Nomizu product and
its brute-force permutation oracle, mu contractions, nu embedding, Hodge star.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylspin.clifford import E, act
from weylspin.errors import RankError, SlotError, SymmetryError
from weylspin.tensors import (
    alt,
    hodge_star,
    kulkarni_nomizu,
    metric,
    mu_contract,
    nu_embed,
    sym0,
    tensor_rank,
    vector_to_two_form,
)


def kn_oracle(w, h):
    """Brute-force Kulkarni-Nomizu product.

    Evaluates [(23) + (12)(24)(34) - (24) - (12)(23)] (w (x) h) by looping over
    all index tuples, with the slot-relabel (forward) permutation action:
    (p.T)(v1..v4) = T(v_p(1), .., v_p(4)). The four relabeled index tuples and
    the summation order match the production implementation term for term, so
    the comparison can demand bitwise equality.
    """
    out = np.empty((3, 3, 3, 3))
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    t1 = w[i, k] * h[j, l]  # (23)
                    t2 = w[j, l] * h[i, k]  # (12)(24)(34)
                    t3 = w[i, l] * h[k, j]  # (24)
                    t4 = w[j, k] * h[i, l]  # (12)(23)
                    out[i, j, k, l] = ((t1 + t2) - t3) - t4
    return out


def test_rank_detection():
    assert tensor_rank(np.zeros((3, 3))) == (2, False)
    assert tensor_rank(np.zeros((3, 3, 2))) == (2, True)
    assert tensor_rank(np.zeros((3,))) == (1, False)
    assert tensor_rank(np.zeros(2)) == (0, True)
    with pytest.raises(RankError):
        tensor_rank(np.zeros((4, 3)))
    with pytest.raises(RankError):
        tensor_rank(np.zeros((3, 2, 3)))


def test_alt_and_sym0():
    rng = np.random.default_rng(0)
    T = rng.standard_normal((3, 3))
    a = alt(T)
    assert np.max(np.abs(a + a.T)) == 0.0
    assert np.array_equal(alt(a), 2.0 * a)
    s = sym0(T)
    assert np.max(np.abs(s - s.T)) == 0.0
    assert abs(np.trace(s)) < 1e-14
    assert np.max(np.abs(sym0(a))) < 1e-15
    with pytest.raises(RankError):
        alt(np.zeros(3))
    with pytest.raises(RankError):
        sym0(np.zeros((3, 3, 2)))


def test_alt_on_spinor_valued_rank2():
    rng = np.random.default_rng(1)
    T = rng.standard_normal((3, 3, 2)) + 1j * rng.standard_normal((3, 3, 2))
    a = alt(T)
    assert np.max(np.abs(a + np.swapaxes(a, 0, 1))) == 0.0


def test_kulkarni_nomizu_matches_oracle_exactly():
    # bitwise agreement with the loop oracle on 100 random pairs
    rng = np.random.default_rng(2)
    for _ in range(100):
        w = rng.standard_normal((3, 3))
        h = rng.standard_normal((3, 3))
        assert np.array_equal(kulkarni_nomizu(w, h), kn_oracle(w, h))


def test_kulkarni_nomizu_symmetries():
    rng = np.random.default_rng(3)
    w = rng.standard_normal((3, 3))
    w = w + w.T
    h = rng.standard_normal((3, 3))
    h = h + h.T
    R = kulkarni_nomizu(w, h)
    assert np.max(np.abs(R + np.einsum("jikl->ijkl", R))) < 1e-13
    assert np.max(np.abs(R + np.einsum("ijlk->ijkl", R))) < 1e-13
    assert np.max(np.abs(R - np.einsum("klij->ijkl", R))) < 1e-13
    # symmetric factors commute
    assert np.max(np.abs(kulkarni_nomizu(h, w) - R)) < 1e-13


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_kulkarni_nomizu_bilinear(a, b):
    rng = np.random.default_rng(17)
    w1 = rng.standard_normal((3, 3))
    w2 = rng.standard_normal((3, 3))
    h = rng.standard_normal((3, 3))
    lhs = kulkarni_nomizu(a * w1 + b * w2, h)
    rhs = a * kulkarni_nomizu(w1, h) + b * kulkarni_nomizu(w2, h)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_mu_contract_single_slot():
    rng = np.random.default_rng(4)
    T = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    out = mu_contract([1], T)
    by_hand = sum(E[a] @ T[a] for a in range(3))
    assert np.max(np.abs(out - by_hand)) < 1e-15


def test_mu_contract_order_is_first_slot_leftmost():
    rng = np.random.default_rng(5)
    v = rng.uniform(-1, 1, 3)
    w = rng.uniform(-1, 1, 3)
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    T = np.einsum("i,j,s->ijs", v, w, psi)
    assert np.max(np.abs(mu_contract([1, 2], T) - act(v, act(w, psi)))) < 1e-14
    assert np.max(np.abs(mu_contract([2, 1], T) - act(w, act(v, psi)))) < 1e-14


def test_mu_contract_surviving_slots_keep_order():
    rng = np.random.default_rng(6)
    T = rng.standard_normal((3, 3, 3, 2)) + 1j * rng.standard_normal((3, 3, 3, 2))
    out = mu_contract([2], T)
    assert out.shape == (3, 3, 2)
    for i in range(3):
        for k in range(3):
            by_hand = sum(E[a] @ T[i, a, k] for a in range(3))
            assert np.max(np.abs(out[i, k] - by_hand)) < 1e-14


def test_mu_contract_slot_errors():
    T = np.zeros((3, 3, 2))
    with pytest.raises(SlotError):
        mu_contract([1, 1], T)
    with pytest.raises(SlotError):
        mu_contract([3], T)  # slot 3 is the spinor axis, not a frame slot
    with pytest.raises(SlotError):
        mu_contract([0], T)
    with pytest.raises(SlotError):
        mu_contract([], T)


def test_nu_embed_rows_are_clifford_images():
    rng = np.random.default_rng(7)
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    nu = nu_embed(psi)
    assert nu.shape == (3, 2)
    for i in range(3):
        assert np.max(np.abs(nu[i] - E[i] @ psi)) == 0.0


def test_nu_embed_on_spinor_valued_tensor():
    rng = np.random.default_rng(8)
    T = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    nu = nu_embed(T)
    assert nu.shape == (3, 3, 2)
    for i in range(3):
        for j in range(3):
            assert np.max(np.abs(nu[i, j] - E[i] @ T[j])) == 0.0


def test_hodge_star_roundtrip():
    rng = np.random.default_rng(9)
    for _ in range(50):
        v = rng.uniform(-2, 2, 3)
        F = vector_to_two_form(v)
        assert np.max(np.abs(F + F.T)) == 0.0
        assert np.max(np.abs(hodge_star(F) - v)) < 1e-15


def test_hodge_star_basis_values():
    F = np.zeros((3, 3))
    F[0, 1], F[1, 0] = 1.0, -1.0  # sigma_1 ^ sigma_2
    assert np.array_equal(hodge_star(F), np.array([0.0, 0.0, 1.0]))


def test_hodge_star_rejects_symmetric_part():
    with pytest.raises(SymmetryError):
        hodge_star(np.eye(3))


def test_metric_is_identity():
    assert np.array_equal(metric(), np.eye(3))
