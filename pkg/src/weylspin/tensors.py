"""Dense tensor calculus over a 3-dimensional orthonormal frame.

Frame tensors of rank r are numpy arrays of shape (3,)*r; spinor-valued tensors
carry one extra trailing axis of length 2. Since frame axes have length 3 the
two kinds never collide, and every operation here infers the kind from the
shape.

Conventions pinned by the identity suite (see docs/CONVENTIONS.md):

  * Alt is unnormalized: (Alt T)_{ij...} = T_{ij...} - T_{ji...}.
  * Kulkarni-Nomizu permutations act by slot relabeling,
    (p.T)(v1,..,v4) = T(v_{p(1)},..,v_{p(4)}), with the permutation word
    composed right to left.
  * mu with several slots composes Clifford factors left to right in the
    listed slot order (mu over slots (3,4) puts the slot-3 factor leftmost).
"""

import numpy as np

from .clifford import E, EPS
from .errors import RankError, SlotError, SymmetryError

_ID3 = np.eye(3)


def metric():
    """The gauge metric in the orthonormal frame: the 3x3 identity."""
    return _ID3.copy()


def tensor_rank(T):
    """Return (rank, spinor_valued) for a dense frame tensor.

    The trailing axis of length 2, if present, is the spinor axis; all other
    axes must have length 3.
    """
    T = np.asarray(T)
    shape = T.shape
    spinor = bool(shape) and shape[-1] == 2
    frame_shape = shape[:-1] if spinor else shape
    if any(n != 3 for n in frame_shape):
        raise RankError(f"not a frame tensor shape: {shape}")
    return len(frame_shape), spinor


def alt(T):
    """Antisymmetrize the first two frame slots, unnormalized (1 - (12)).

    Alt(Alt(T)) = 2 Alt(T). Requires rank >= 2.
    """
    T = np.asarray(T)
    rank, _ = tensor_rank(T)
    if rank < 2:
        raise RankError(f"alt needs rank >= 2, got rank {rank}")
    return T - np.swapaxes(T, 0, 1)


def sym0(S):
    """Symmetric trace-free part of a rank-2 frame tensor."""
    S = np.asarray(S)
    rank, spinor = tensor_rank(S)
    if rank != 2 or spinor:
        raise RankError(f"sym0 needs a plain rank-2 tensor, got shape {S.shape}")
    return 0.5 * (S + S.T) - (np.trace(S) / 3.0) * _ID3


def kulkarni_nomizu(w, h):
    """Kulkarni-Nomizu product of two rank-2 frame tensors.

    (w kn h) = [(23) + (12)(24)(34) - (24) - (12)(23)] applied to w (x) h,
    permutations acting by slot relabeling. The einsum index maps below are
    the four relabelings written out (the word (12)(24)(34) composes, right
    to left, to the relabeling out[ijkl] = T[jlik]).
    """
    w = np.asarray(w)
    h = np.asarray(h)
    for a in (w, h):
        rank, spinor = tensor_rank(a)
        if rank != 2 or spinor:
            raise RankError(f"kulkarni_nomizu needs rank-2 tensors, got shape {a.shape}")
    t = np.einsum("ij,kl->ijkl", w, h)
    return (
        np.einsum("ikjl->ijkl", t)
        + np.einsum("jlik->ijkl", t)
        - np.einsum("ilkj->ijkl", t)
        - np.einsum("jkil->ijkl", t)
    )


def mu_contract(slots, T):
    """Clifford-contract the listed frame slots of a spinor-valued tensor.

    Slots are 1-based and distinct. Each listed slot j is summed against the
    frame, contributing a Clifford factor e_a; factors compose left to right
    in the listed order, so mu over (3,4) yields e_a e_b acting on the spinor
    part with a from slot 3 and b from slot 4. The surviving slots keep their
    original relative order.
    """
    T = np.asarray(T, dtype=complex)
    rank, spinor = tensor_rank(T)
    if not spinor:
        raise RankError("mu_contract needs a spinor-valued tensor")
    slots = list(slots)
    if not slots:
        raise SlotError("need at least one slot to contract")
    if len(set(slots)) != len(slots):
        raise SlotError(f"slots must be distinct, got {slots}")
    for s in slots:
        if not 1 <= s <= rank:
            raise SlotError(f"slot {s} out of range for rank {rank}")
    listed = [s - 1 for s in slots]
    rest = [a for a in range(rank) if a not in listed]
    T = np.transpose(T, listed + rest + [rank])
    # Contract the last listed slot first so earlier factors multiply on the
    # left, giving the left-to-right composition order.
    for j in reversed(range(len(listed))):
        T = np.moveaxis(T, j, -2)
        T = np.einsum("ast,...at->...s", E, T)
    return T


def nu_embed(x):
    """Prepend a frame slot with values e_i . x.

    Accepts a bare spinor (rank 0) or any spinor-valued tensor; the new slot
    becomes slot 1.
    """
    x = np.asarray(x, dtype=complex)
    _, spinor = tensor_rank(x)
    if not spinor:
        raise RankError("nu_embed needs a spinor or spinor-valued tensor")
    return np.einsum("ist,...t->i...s", E, x)


def nu12(psi):
    """Rank-2 embedding with entries e_i e_j psi."""
    psi = np.asarray(psi, dtype=complex)
    return np.einsum("isu,jut,...t->ij...s", E, E, psi)


def hodge_star(F):
    """Hodge star of an antisymmetric rank-2 frame tensor, (*F)_k = 1/2 eps_ijk F_ij."""
    F = np.asarray(F)
    rank, spinor = tensor_rank(F)
    if rank != 2 or spinor:
        raise RankError(f"hodge_star needs a plain rank-2 tensor, got shape {F.shape}")
    if np.max(np.abs(F + F.T)) >= 1e-12:
        raise SymmetryError("hodge_star needs an antisymmetric input")
    return 0.5 * np.einsum("ijk,ij->k", EPS, F)


def vector_to_two_form(v):
    """Inverse of hodge_star on this pair of spaces: F_ij = sum_k eps_ijk v_k."""
    v = np.asarray(v)
    if v.shape != (3,):
        raise RankError(f"need a rank-1 frame tensor, got shape {v.shape}")
    return np.einsum("ijk,k->ij", EPS, v)
