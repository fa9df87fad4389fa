"""Killing spinor construction by parallel transport of the flat connection.

Paths live on the simply connected model of the homogeneous geometry. An arc
is the flow of a fixed frame direction d for a parameter length t; along it the
Killing connection is the constant matrix sum(d_i B_i), so transport is an
exact 2x2 matrix exponential. Loop bookkeeping uses the unit-quaternion model
of the group when the Milnor parameters allow it (pairwise positive products;
e_i corresponds to alpha_i q_i with alpha_i = sqrt(lambda_j lambda_k)/2) and
the abelian R^3 model when the structure constants vanish; anything else
raises UnsupportedModel. The quaternion logarithm keeps its rotation angle in
[0, 2pi), i.e. quaternion angle in [0, pi], matching the simply connected
double cover.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .clifford import E, j_structure
from .errors import NoConvergence, NotFlat, OpenPath, ShapeError, UnsupportedModel
from .geometry import (
    WeightedDensity,
    analyze,
    curvature_package,
    density_derivative,
    milnor_geometry,
    milnor_parameters,
)
from .spinconn import killing_connection, killing_curvature, spin_connection
from .tensors import hodge_star

_ID2 = np.eye(2, dtype=complex)
_Q = -E  # unit quaternion generators as 2x2 matrices: q_i q_j = eps_ijk q_k


@dataclass(frozen=True)
class GroupArc:
    direction: tuple  # unit vector of frame coefficients
    length: float

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        if d.shape != (3,):
            raise ShapeError(f"arc direction must have shape (3,), got {d.shape}")
        if abs(np.linalg.norm(d) - 1.0) > 1e-10:
            raise ShapeError("arc direction must be a unit vector")
        object.__setattr__(self, "direction", tuple(float(x) for x in d))
        object.__setattr__(self, "length", float(self.length))


def arc_from_vector(v):
    """Arc flowing along the frame vector v: direction v/||v||, length ||v||."""
    v = np.asarray(v, dtype=float)
    t = float(np.linalg.norm(v))
    if t == 0.0:
        return GroupArc((1.0, 0.0, 0.0), 0.0)
    return GroupArc(tuple(v / t), t)


# ---------------------------------------------------------------------------
# transport


def transport_operator(g, beta, arc):
    """exp(-t sum_i d_i B_i), the parallel transport of the Killing connection."""
    B = killing_connection(g, beta).matrices
    M = np.einsum("i,iab->ab", np.asarray(arc.direction), B)
    return expm(-arc.length * M)


def transport_arc(g, beta, arc, psi0):
    return transport_operator(g, beta, arc) @ np.asarray(psi0, dtype=complex)


def transport_sequence_operator(g, beta, arcs):
    """Ordered product of arc transports; the last arc's matrix is leftmost."""
    out = _ID2.copy()
    for a in arcs:
        out = transport_operator(g, beta, a) @ out
    return out


def rk4_transport(g, beta, arc, psi0, steps=256):
    """Independent cross-check: integrate psi' = -(sum d_i B_i) psi with RK4."""
    B = killing_connection(g, beta).matrices
    M = -np.einsum("i,iab->ab", np.asarray(arc.direction), B)
    h = arc.length / steps
    psi = np.asarray(psi0, dtype=complex)
    for _ in range(steps):
        k1 = M @ psi
        k2 = M @ (psi + 0.5 * h * k1)
        k3 = M @ (psi + 0.5 * h * k2)
        k4 = M @ (psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return psi


# ---------------------------------------------------------------------------
# simply connected group model


def group_model(g):
    """("su2", alpha) or ("abelian", None); UnsupportedModel otherwise."""
    c = g.structure_constants
    if np.max(np.abs(c)) == 0.0:
        return "abelian", None
    lam = milnor_parameters(g)
    if lam is not None:
        prods = np.array([lam[1] * lam[2], lam[2] * lam[0], lam[0] * lam[1]])
        if np.all(prods > 0.0):
            return "su2", 0.5 * np.sqrt(prods)
    raise UnsupportedModel(
        "loop model needs abelian or definite-signature Milnor structure constants"
    )


def _su2_exp(x):
    """exp of sum x_k q_k in the 2x2 quaternion representation."""
    phi = float(np.linalg.norm(x))
    X = np.einsum("k,kab->ab", np.asarray(x, dtype=float), _Q)
    return np.cos(phi) * _ID2 + np.sinc(phi / np.pi) * X


def _su2_log(M):
    """Coefficients x with exp(sum x_k q_k) = M, quaternion angle in [0, pi]."""
    a = float(np.real(np.trace(M))) / 2.0
    b = np.array([-float(np.real(np.trace(_Q[k] @ M))) / 2.0 for k in range(3)])
    nb = float(np.linalg.norm(b))
    if nb < 1e-14:
        if a > 0.0:
            return np.zeros(3)
        raise UnsupportedModel("group logarithm hit the branch point (antipode)")
    phi = float(np.arctan2(nb, a))
    return (phi / nb) * b


def group_endpoint(g, arcs):
    """Endpoint of the arc sequence from the identity, in the group model."""
    kind, alpha = group_model(g)
    if kind == "abelian":
        out = np.zeros(3)
        for a in arcs:
            out = out + a.length * np.asarray(a.direction)
        return kind, out
    out = _ID2.copy()
    for a in arcs:
        x = a.length * np.asarray(a.direction) * alpha
        out = out @ _su2_exp(x)
    return kind, out


def closure_defect(g, arcs):
    kind, end = group_endpoint(g, arcs)
    if kind == "abelian":
        return float(np.linalg.norm(end))
    return float(np.max(np.abs(end - _ID2)))


def closing_arc(g, arcs):
    """Arc that closes the given sequence into a loop, via the group logarithm."""
    kind, end = group_endpoint(g, arcs)
    if kind == "abelian":
        return arc_from_vector(-end)
    _, alpha = group_model(g)
    z = _su2_log(np.conj(end.T))  # inverse of an SU(2) matrix is its adjoint
    return arc_from_vector(z / alpha)


def triangle_loop(g, rng, length_scale=1.0):
    """Two random arcs plus the closing third; a closed loop by construction."""

    def rand_arc():
        d = rng.standard_normal(3)
        d /= np.linalg.norm(d)
        return GroupArc(tuple(d), float(rng.uniform(0.4, 1.2)) * length_scale)

    a1, a2 = rand_arc(), rand_arc()
    return [a1, a2, closing_arc(g, [a1, a2])]


def loop_holonomy(g, beta, arcs, closure_tolerance=1e-10):
    """Holonomy of the Killing connection around a closed loop.

    Raises OpenPath when the arc sequence does not end at the identity of the
    simply connected model (within closure_tolerance).
    """
    arcs = list(arcs)
    if arcs:
        defect = closure_defect(g, arcs)
        if defect > closure_tolerance:
            raise OpenPath(f"arc sequence does not close up (defect {defect:.3e})")
    H = transport_sequence_operator(g, beta, arcs)
    return H, float(np.max(np.abs(H - _ID2)))


# ---------------------------------------------------------------------------
# the Killing basis


class KillingBasis:
    """Two parallel sections of the flat Killing connection.

    base_values holds the spinor values at the group identity: (1, 0) and its
    quaternionic partner J (1, 0). transport(arcs) returns their values after
    parallel transport along the arc sequence; the transport matrix is
    invertible, so the pair stays linearly independent everywhere.
    """

    def __init__(self, g, beta):
        self.geometry = g
        self.beta = beta
        psi1 = np.array([1.0, 0.0], dtype=complex)
        self.base_values = (psi1, j_structure(psi1))

    def transport_operator(self, arcs):
        return transport_sequence_operator(self.geometry, self.beta, arcs)

    def transport(self, arcs):
        U = self.transport_operator(arcs)
        return U @ self.base_values[0], U @ self.base_values[1]

    def min_singular_value(self, arcs):
        """Smallest singular value of the normalized transported pair."""
        v1, v2 = self.transport(arcs)
        m = np.stack([v1 / np.linalg.norm(v1), v2 / np.linalg.norm(v2)], axis=1)
        return float(np.linalg.svd(m, compute_uv=False)[-1])


def killing_basis(g, beta, flat_tolerance=1e-10):
    """Construct the basis; the connection must actually be flat.

    A curvature residual at or above flat_tolerance raises NotFlat, which by
    the flatness-GT equivalence signals that (g, beta) is not Gauduchon-Tod.
    """
    kc = killing_curvature(g, beta)
    if not kc.residual < flat_tolerance:
        raise NotFlat(
            f"Killing connection curvature residual {kc.residual:.3e} "
            f"is not below {flat_tolerance:g}"
        )
    return KillingBasis(g, beta)


def path_independence_residual(g, beta, rng, pairs=5, length_scale=1.0):
    """Max transport disagreement between random path pairs to a common endpoint."""
    worst = 0.0
    for _ in range(pairs):
        loop = triangle_loop(g, rng, length_scale)
        two_leg = loop[:2]
        direct = closing_arc(g, two_leg)
        # direct closes the two-leg path, so traversing it backwards is a
        # one-arc path to the same endpoint
        back = GroupArc(direct.direction, -direct.length)
        U1 = transport_sequence_operator(g, beta, two_leg)
        U2 = transport_sequence_operator(g, beta, [back])
        worst = max(worst, float(np.max(np.abs(U1 - U2))))
    return worst


def killing_residual(g, beta, basis, samples, h=1e-5):
    """Finite-difference check of the Killing equation on transported sections.

    For each sample point (an arc sequence from the identity) the frame
    derivative e_i(psi) is approximated by central differences of parallel
    transports over +-h, and the report is
        max_i ||e_i(psi) + A_i psi - beta e_i psi|| / ||psi||
    over all samples and both basis sections. Expected size O(h^2).
    """
    A = spin_connection(g, 0.0).matrices
    B = killing_connection(g, beta).matrices
    plus = [expm(-h * B[i]) for i in range(3)]
    minus = [expm(h * B[i]) for i in range(3)]
    worst = 0.0
    for arcs in samples:
        U = basis.transport_operator(arcs)
        for psi0 in basis.base_values:
            psi = U @ psi0
            scale = float(np.max(np.abs(psi)))
            for i in range(3):
                fd = (plus[i] @ psi - minus[i] @ psi) / (2.0 * h)
                defect = fd + A[i] @ psi - beta.value * (E[i] @ psi)
                worst = max(worst, float(np.max(np.abs(defect))) / scale)
    return worst


# ---------------------------------------------------------------------------
# Gauduchon-Tod parameter search


@dataclass(frozen=True)
class GTSearchResult:
    params: tuple
    residual_norm: float
    iterations: int
    report: object  # GTReport at the solution


_PIN_INDEX = {"lambda1": 0, "lambda2": 1, "lambda3": 2, "theta3": 3, "beta": 4}


def milnor_theta3_family(params):
    """(l1, l2, l3, theta3, beta) -> Milnor geometry with theta = (0, 0, theta3)."""
    params = np.asarray(params, dtype=float)
    g = milnor_geometry(params[:3], (0.0, 0.0, params[3]))
    return g, WeightedDensity(float(params[4]), -1.0)


def gt_residual_vector(g, beta):
    """Stacked Gauduchon-Tod residuals: sym0 Ric (9), R - 24 beta^2, 4 grad - *F (3)."""
    pkg = curvature_package(g)
    grad = density_derivative(g, beta)
    star_f = hodge_star(pkg.faraday)
    return np.concatenate(
        [
            pkg.sym0_ricci.ravel(),
            [pkg.scalar - 24.0 * beta.value**2],
            4.0 * grad - star_f,
        ]
    )


def find_gt_parameters(
    x0,
    family=None,
    pin=("lambda1", None),
    tolerance=1e-10,
    max_iterations=50,
    fd_step=1e-6,
    max_halvings=20,
):
    """Damped Newton search for a root of the Gauduchon-Tod residual system.

    One coordinate is pinned to quotient out the conformal rescaling freedom:
    pin = (name_or_index, value), with value None meaning "keep x0's entry".
    Newton steps solve the least-squares system for the stacked residual
    vector, with a central finite-difference Jacobian and simple backtracking
    (halve the step while the residual norm does not decrease). Success means
    max-norm residual below tolerance within max_iterations; otherwise
    NoConvergence carries the best iterate seen.
    """
    if family is None:
        family = milnor_theta3_family
    x = np.asarray(x0, dtype=float).copy()
    name, value = pin
    idx = _PIN_INDEX[name] if isinstance(name, str) else int(name)
    if value is not None:
        x[idx] = value
    free = [k for k in range(x.size) if k != idx]

    def residual(params):
        g, b = family(params)
        return gt_residual_vector(g, b)

    r = residual(x)
    norm = float(np.max(np.abs(r)))
    best_x, best_norm = x.copy(), norm
    for it in range(max_iterations):
        if norm < tolerance:
            g, b = family(x)
            return GTSearchResult(tuple(x), norm, it, analyze(g, b))
        jac = np.zeros((r.size, len(free)))
        for col, k in enumerate(free):
            xp, xm = x.copy(), x.copy()
            xp[k] += fd_step
            xm[k] -= fd_step
            jac[:, col] = (residual(xp) - residual(xm)) / (2.0 * fd_step)
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        t = 1.0
        for _ in range(max_halvings + 1):
            xt = x.copy()
            xt[free] += t * step
            rt = residual(xt)
            nt = float(np.max(np.abs(rt)))
            if nt < norm:
                break
            t *= 0.5
        else:
            raise NoConvergence(
                f"backtracking stalled at residual {best_norm:.3e}",
                best_params=tuple(best_x),
                best_residual=best_norm,
                iterations=it,
            )
        x, r, norm = xt, rt, nt
        if norm < best_norm:
            best_x, best_norm = x.copy(), norm
    if norm < tolerance:
        g, b = family(x)
        return GTSearchResult(tuple(x), norm, max_iterations, analyze(g, b))
    raise NoConvergence(
        f"iteration cap {max_iterations} hit at residual {best_norm:.3e}",
        best_params=tuple(best_x),
        best_residual=best_norm,
        iterations=max_iterations,
    )
