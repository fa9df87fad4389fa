"""Irreducible representation of the 3-dimensional Clifford algebra on C^2.

The generators are fixed once and for all as e_k = i * sigma_k (Pauli matrices),
which satisfies both defining relations exactly, with entries in {0, +-1, +-i}:

    e_i e_j + e_j e_i = -2 delta_ij Id
    e_i e_j = -sum_k eps_ijk e_k   (i != j)

The quaternionic structure J psi = e_2 conj(psi) is antilinear, squares to -Id,
and commutes with Clifford multiplication by real frame vectors. Its existence
is what forces the solution space of the Killing equation to be even-dimensional.
"""

import numpy as np

from .errors import ShapeError

# e_k = i * sigma_k
E = np.array(
    [
        [[0.0, 1j], [1j, 0.0]],
        [[0.0, 1.0], [-1.0, 0.0]],
        [[1j, 0.0], [0.0, -1j]],
    ],
    dtype=complex,
)
E.setflags(write=False)

EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPS[_i, _j, _k] = 1.0
    EPS[_j, _i, _k] = -1.0
EPS.setflags(write=False)


def generators():
    """Return the three generator matrices (e_1, e_2, e_3) as fresh copies."""
    return E[0].copy(), E[1].copy(), E[2].copy()


def as_spinor(psi):
    """Coerce to a complex length-2 vector, rejecting non-finite entries."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise ShapeError(f"spinor must have shape (2,), got {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise ShapeError("spinor has non-finite entries")
    return psi


def act(v, psi):
    """Clifford multiplication (sum_k v_k e_k) psi for a real frame vector v.

    Real coefficients only; applying the same v twice gives -||v||^2 psi.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ShapeError(f"frame vector must have shape (3,), got {v.shape}")
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim == 0 or psi.shape[-1] != 2:
        raise ShapeError(f"spinor values need a trailing axis of length 2, got {psi.shape}")
    return np.einsum("k,kst,...t->...s", v, E, psi)


def vector_matrix(v):
    """The 2x2 matrix of Clifford multiplication by the real frame vector v."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ShapeError(f"frame vector must have shape (3,), got {v.shape}")
    return np.einsum("k,kst->st", v, E)


def j_structure(psi):
    """Quaternionic structure J psi = e_2 conj(psi).

    Antilinear, J^2 = -Id, commutes with Clifford multiplication by real
    vectors, preserves the norm. For psi != 0 the pair (psi, J psi) is a
    C-basis of the spinor space: det[psi, J psi] = -||psi||^2 != 0.
    """
    psi = np.asarray(psi, dtype=complex)
    return np.einsum("st,...t->...s", E[1], np.conj(psi))
