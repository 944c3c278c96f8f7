"""Characters of compact unitary groups and their complexifications.

Characters are evaluated as Schur polynomials at eigenvalue multisets via the
Jacobi-Trudi determinant in complete homogeneous symmetric functions.  The
determinant route is total: it has no 0/0 issue at repeated eigenvalues,
which occur structurally at the diagonal elements used everywhere here.

Genuine (double-cover) weights carry half-integral determinant twists; the
twist is consumed as an integer power of the carried root of the block
determinant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidParameterError
from .group import CoverElement, cartan_decompose, cpow_int, theta_t_cover, theta_z_cover
from .weights import ThetaDatum, gl_dim

__all__ = [
    "GLWeight",
    "schur_eval",
    "schur_eval_batch",
    "genuine_char",
    "char_of_cover",
    "psi_pi",
]


@dataclass(frozen=True)
class GLWeight:
    """Integer highest weight plus a det twist stored as a doubled exponent."""

    parts: tuple[int, ...]
    det_twist_numerator: int = 0

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidParameterError(f"weight parts must be weakly decreasing: {parts}")

    @property
    def rank(self) -> int:
        return len(self.parts)

    def dim(self) -> int:
        return gl_dim([Fraction(p) for p in self.parts])


def _elementary(eigs):
    """Coefficients e_0..e_m of prod (1 + x_i t)."""
    e = [1]
    for x in eigs:
        e = [e[0]] + [e[k] + x * e[k - 1] for k in range(1, len(e))] + [x * e[-1]]
    return e


def _complete_homogeneous(eigs, kmax: int):
    """h_0..h_kmax from the elementary functions by the standard recurrence."""
    m = len(eigs)
    e = _elementary(eigs)
    h = [1]
    for k in range(1, kmax + 1):
        acc = 0
        for i in range(1, min(k, m) + 1):
            term = e[i] * h[k - i]
            acc = acc + term if i % 2 == 1 else acc - term
        h.append(acc)
    return h


def _det_leibniz(rows):
    """Division-free determinant (tiny matrices only)."""
    m = len(rows)
    total = 0
    for perm in itertools.permutations(range(m)):
        sign = 1
        seen = list(perm)
        for i in range(m):  # parity by counting inversions
            for j in range(i + 1, m):
                if seen[i] > seen[j]:
                    sign = -sign
        term = rows[0][perm[0]]
        for i in range(1, m):
            term = term * rows[i][perm[i]]
        total = total + sign * term
    return total


def _normalize_parts(mu):
    mu = [int(x) for x in mu]
    if any(a < b for a, b in zip(mu, mu[1:])):
        raise InvalidParameterError(f"parts must be weakly decreasing: {mu}")
    return mu


def schur_eval(mu, eigs):
    """Schur polynomial s_mu at the given eigenvalues (exact for exact inputs).

    Negative parts are handled by factoring out the smallest part as a power
    of the determinant, which requires the eigenvalues to be invertible.
    """
    mu = _normalize_parts(mu)
    eigs = list(eigs)
    if len(eigs) != len(mu):
        raise InvalidParameterError(
            f"need as many eigenvalues as weight parts ({len(mu)}), got {len(eigs)}"
        )
    if not mu:
        return 1
    shift = mu[-1]
    if shift != 0:
        det = eigs[0]
        for x in eigs[1:]:
            det = det * x
        if shift < 0 and not det:
            raise InvalidParameterError("zero eigenvalue with negative determinant shift")
        detpow = det**shift if not isinstance(det, complex) else cpow_int(det, shift)
        return detpow * schur_eval([x - shift for x in mu], eigs)
    nu = [x for x in mu if x > 0]
    ell = len(nu)
    if ell == 0:
        return 1 if not isinstance(eigs[0], complex) else 1.0 + 0j
    h = _complete_homogeneous(eigs, nu[0] + ell - 1)

    def h_at(k):
        return h[k] if 0 <= k < len(h) else 0

    rows = [[h_at(nu[i] - (i + 1) + (j + 1)) for j in range(ell)] for i in range(ell)]
    return _det_leibniz(rows)


def schur_eval_batch(mu, eigs: np.ndarray) -> np.ndarray:
    """Vectorized Schur evaluation over a batch of eigenvalue rows (N, m)."""
    mu = _normalize_parts(mu)
    eigs = np.asarray(eigs, dtype=complex)
    if eigs.ndim == 1:
        eigs = eigs[None, :]
    count, m = eigs.shape
    if m != len(mu):
        raise InvalidParameterError("eigenvalue rows must match the weight length")
    shift = mu[-1] if mu else 0
    pref = np.ones(count, dtype=complex)
    if shift != 0:
        det = np.prod(eigs, axis=1)
        pref = cpow_int(det, shift)
        mu = [x - shift for x in mu]
    nu = [x for x in mu if x > 0]
    ell = len(nu)
    if ell == 0:
        return pref
    kmax = nu[0] + ell - 1
    e = np.zeros((count, m + 1), dtype=complex)
    e[:, 0] = 1.0
    for idx in range(m):
        x = eigs[:, idx]
        e[:, 1 : idx + 2] = e[:, 1 : idx + 2] + x[:, None] * e[:, 0 : idx + 1]
    h = np.zeros((count, kmax + 1), dtype=complex)
    h[:, 0] = 1.0
    for k in range(1, kmax + 1):
        acc = np.zeros(count, dtype=complex)
        for i in range(1, min(k, m) + 1):
            term = e[:, i] * h[:, k - i]
            acc = acc + term if i % 2 == 1 else acc - term
        h[:, k] = acc
    mat = np.zeros((count, ell, ell), dtype=complex)
    for i in range(ell):
        for j in range(ell):
            k = nu[i] - (i + 1) + (j + 1)
            if 0 <= k <= kmax:
                mat[:, i, j] = h[:, k]
    return pref * np.linalg.det(mat)


def genuine_char(w: GLWeight, block, zeta: complex) -> complex:
    """Holomorphically extended character of one block, with the half-integer
    determinant twist consumed by the carried root ``zeta``."""
    block = np.atleast_2d(np.asarray(block, dtype=complex))
    if block.shape[0] != w.rank:
        raise InvalidParameterError(f"block size {block.shape[0]} != weight rank {w.rank}")
    eigs = np.linalg.eigvals(block)
    value = complex(schur_eval_batch(list(w.parts), eigs[None, :])[0])
    if w.det_twist_numerator:
        value *= cpow_int(complex(zeta), w.det_twist_numerator)
    return value


def char_of_cover(w_n: GLWeight, w_1: GLWeight, el: CoverElement) -> complex:
    """Product character of a block-diagonal cover element."""
    a = genuine_char(w_n, el.block_n, el.zeta_n)
    b = genuine_char(w_1, np.array([[el.block_1]]), el.zeta_1)
    return a * b


def _lambda_glweights(theta: ThetaDatum) -> tuple[GLWeight, GLWeight]:
    (pn, tn2), (p1, t12) = theta.lambda_gl()
    return GLWeight(pn, tn2), GLWeight(p1, t12)


def psi_pi(g, lam_weights, zeta_sign: int = +1, route: str = "direct") -> complex:
    """Canonical conjugation-invariant matrix coefficient at ``g``.

    ``lam_weights`` is either a :class:`~arczeta.weights.ThetaDatum` or an
    explicit pair of :class:`GLWeight`.  ``zeta_sign`` flips the carried
    roots of the unitary factor; it never changes the value because the two
    det twists balance.  ``route="conjugated"`` evaluates through the
    rotation that diagonalizes the positive factor instead (both routes agree
    to numerical precision, which is tested).
    """
    if isinstance(lam_weights, ThetaDatum):
        w_n, w_1 = _lambda_glweights(lam_weights)
    else:
        w_n, w_1 = lam_weights
    z, t, k_z, k = cartan_decompose(g)
    if zeta_sign == -1:
        k = k.flip_both()
    if route == "direct":
        el = theta_z_cover(z).compose(k)
    elif route == "conjugated":
        el = theta_t_cover(t, z.n).compose(k_z.inverse().compose(k).compose(k_z))
    else:
        raise InvalidParameterError(f"unknown route {route!r}")
    return char_of_cover(w_n, w_1, el)
