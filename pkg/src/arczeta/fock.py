"""Holomorphic polynomial model of the oscillator representation.

Polynomials live in the (n+1)^2 variables z_ij arranged as an (n+1) x (n+1)
matrix; the top-left n x p block is A, top-right n x q block is B, bottom row
splits into C (first p columns) and D (last q columns).  The compact group
acts by the substitution

    f  ->  (det x)^{(p-q)/2} (det y)^{-(p-q)/2} f(tx A, x^{-1} B; y^{-1} C, ty D)

extended verbatim to invertible complex blocks, and the hyperbolic
one-parameter family acts by an explicit Gaussian integral transform in the
first row of variables.

Two coefficient modes share all code paths: complex floats, and exact
Gaussian rationals times integer powers of pi (:class:`~arczeta.exact.PiLaurent`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidParameterError
from .exact import PiLaurent, QQi, exact_det, exact_inverse
from .group import CoverElement, b_t_cover, cpow_int
from .weights import Case, ThetaDatum

__all__ = [
    "FockPoly",
    "ExactCover",
    "bargmann_inner",
    "gaussian_pair",
    "minors",
    "harmonic_hwv",
    "omega_k",
    "omega_kprime",
    "omega_at",
    "weil_transform_bruteforce",
    "AtTransform",
    "omega_matcoef",
    "omega_matcoef_transform_route",
    "highest_weight_check",
    "MatrixCoefficient",
]


def _var(n: int, i: int, j: int) -> int:
    """Flat index of z_ij (1-based matrix indices)."""
    if not (1 <= i <= n + 1 and 1 <= j <= n + 1):
        raise InvalidParameterError(f"variable index ({i},{j}) out of range for n={n}")
    return (i - 1) * (n + 1) + (j - 1)


def _is_exact(c) -> bool:
    return isinstance(c, (PiLaurent, QQi, Fraction, int))


def _coerce(c, exact: bool):
    if exact:
        return c if isinstance(c, PiLaurent) else PiLaurent.coerce(QQi.coerce(c) if not isinstance(c, QQi) else c)
    return complex(c)


class FockPoly:
    """Sparse polynomial in the (n+1)^2 matrix variables.

    Terms map exponent tuples to nonzero coefficients; coefficients are all
    complex (float mode) or all :class:`PiLaurent` (exact mode).
    """

    __slots__ = ("n", "terms", "exact")

    def __init__(self, n: int, terms: Optional[dict] = None, exact: bool = True):
        self.n = int(n)
        self.exact = bool(exact)
        nvars = (n + 1) * (n + 1)
        clean: dict[tuple, object] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise InvalidParameterError(f"bad exponent vector {exps}")
            c = _coerce(c, self.exact)
            if c:
                prev = clean.get(exps)
                c = c + prev if prev is not None else c
                if c:
                    clean[exps] = c
                else:
                    clean.pop(exps, None)
        self.terms = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, n: int, exact: bool = True) -> "FockPoly":
        return cls(n, {}, exact)

    @classmethod
    def one(cls, n: int, exact: bool = True) -> "FockPoly":
        z = (0,) * ((n + 1) ** 2)
        return cls(n, {z: 1}, exact)

    @classmethod
    def variable(cls, n: int, i: int, j: int, exact: bool = True) -> "FockPoly":
        e = [0] * ((n + 1) ** 2)
        e[_var(n, i, j)] = 1
        return cls(n, {tuple(e): 1}, exact)

    # -- ring ops ------------------------------------------------------------
    def _check(self, other: "FockPoly"):
        if self.n != other.n or self.exact != other.exact:
            raise InvalidParameterError("polynomial mode/size mismatch")

    def __add__(self, other: "FockPoly") -> "FockPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            prev = out.get(e)
            s = c + prev if prev is not None else c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        res = FockPoly.zero(self.n, self.exact)
        res.terms = out
        return res

    def __neg__(self) -> "FockPoly":
        res = FockPoly.zero(self.n, self.exact)
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other: "FockPoly") -> "FockPoly":
        return self + (-other)

    def __mul__(self, other) -> "FockPoly":
        if not isinstance(other, FockPoly):
            return self.scale(other)
        self._check(other)
        out: dict[tuple, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                prev = out.get(e)
                s = c + prev if prev is not None else c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        res = FockPoly.zero(self.n, self.exact)
        res.terms = out
        return res

    __rmul__ = __mul__

    def scale(self, scalar) -> "FockPoly":
        scalar = _coerce(scalar, self.exact)
        res = FockPoly.zero(self.n, self.exact)
        if scalar:
            res.terms = {e: c * scalar for e, c in self.terms.items()}
        return res

    def __pow__(self, k: int) -> "FockPoly":
        if k < 0:
            raise InvalidParameterError("negative power of a polynomial")
        out = FockPoly.one(self.n, self.exact)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- queries -------------------------------------------------------------
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), PiLaurent() if self.exact else 0j)

    def to_float(self) -> "FockPoly":
        if not self.exact:
            return self
        res = FockPoly.zero(self.n, exact=False)
        res.terms = {e: complex(c) for e, c in self.terms.items()}
        return res

    def __eq__(self, other):
        return (
            isinstance(other, FockPoly)
            and self.n == other.n
            and self.exact == other.exact
            and self.terms == other.terms
        )

    def __repr__(self):
        k = len(self.terms)
        return f"FockPoly(n={self.n}, terms={k}, deg={self.degree()}, exact={self.exact})"


# ---------------------------------------------------------------------------
# inner product and the basic Gaussian integral


def _log_monomial_norm(exps) -> float:
    return sum(math.lgamma(e + 1) for e in exps) - sum(exps) * math.log(math.pi)


def bargmann_inner(f: FockPoly, g: FockPoly):
    """Hermitian inner product; monomial z^a has squared norm a!/pi^|a|.

    Exact mode returns :class:`PiLaurent`, float mode a complex number.  The
    second argument is the conjugated one.
    """
    if f.n != g.n:
        raise InvalidParameterError("mismatched variable counts")
    if f.exact != g.exact:
        raise InvalidParameterError("mismatched coefficient modes")
    if f.exact:
        acc = PiLaurent()
        for e, c in f.terms.items():
            d = g.terms.get(e)
            if d is None:
                continue
            norm = 1
            for k in e:
                norm *= math.factorial(k)
            acc = acc + c * d.conjugate() * PiLaurent.single(norm, -sum(e))
        return acc
    acc = 0j
    for e, c in f.terms.items():
        d = g.terms.get(e)
        if d is None:
            continue
        acc += c * d.conjugate() * math.exp(_log_monomial_norm(e))
    return acc


def gaussian_pair(i: int, j: int, c):
    """The one-variable Gaussian integral of w^i wbar^j against e^{pi c wbar}.

    Returns ``i!/(i-j)! * c^(i-j) / pi^j`` for i >= j, else 0.  Exact scalar
    inputs give a :class:`PiLaurent`, floats give a complex number.
    """
    if i < 0 or j < 0:
        raise InvalidParameterError("exponents must be non-negative")
    if _is_exact(c):
        if i < j:
            return PiLaurent()
        cc = c if isinstance(c, QQi) else QQi.coerce(c)
        coeff = QQi.coerce(math.factorial(i) // math.factorial(i - j)) * cc ** (i - j)
        return PiLaurent.single(coeff, -j)
    if i < j:
        return 0j
    return (
        math.factorial(i)
        / math.factorial(i - j)
        * complex(c) ** (i - j)
        / math.pi**j
    )


# ---------------------------------------------------------------------------
# minors and highest-weight vectors


def _det_poly(n: int, rows: Sequence[int], cols: Sequence[int], exact: bool) -> FockPoly:
    import itertools as it

    out = FockPoly.zero(n, exact)
    for perm in it.permutations(range(len(cols))):
        sign = 1
        for i in range(len(perm)):
            for j in range(i + 1, len(perm)):
                if perm[i] > perm[j]:
                    sign = -sign
        term = FockPoly.one(n, exact)
        for r, ci in zip(rows, perm):
            term = term * FockPoly.variable(n, r, cols[ci], exact)
        out = out + term.scale(sign)
    return out


def minors(n: int, i: int, exact: bool = True) -> tuple[FockPoly, FockPoly]:
    """The leading principal i x i minor and its anti-corner companion
    (rows n-i+1..n, columns n-i+2..n+1)."""
    if not 1 <= i <= n:
        raise InvalidParameterError(f"minor index {i} out of range for n={n}")
    delta = _det_poly(n, range(1, i + 1), range(1, i + 1), exact)
    delta_p = _det_poly(n, range(n - i + 1, n + 1), range(n - i + 2, n + 2), exact)
    return delta, delta_p


def harmonic_hwv(theta: ThetaDatum, exact: bool = True) -> FockPoly:
    """Joint highest-weight polynomial of the classified datum.

    Case I: product of anti-corner minors to the alpha-difference powers
    times z_{n+1,1}^gamma.  Case II: principal minors to the beta-difference
    powers, anti-corner minors to the alpha-difference powers, times
    z_{n+1,p+1}^gamma.  Normalized with leading coefficient one.
    """
    n = theta.n
    gamma = theta.gamma
    if gamma.denominator != 1 or any(a.denominator != 1 for a in theta.alphas) or any(
        b.denominator != 1 for b in theta.betas
    ):
        raise InvalidParameterError(
            "highest-weight vector needs integral classification data "
            "(parameter is in the flagged congruence class)"
        )
    out = FockPoly.one(n, exact)
    if theta.case is Case.I:
        alphas = [int(a) for a in theta.alphas] + [0]
        for i in range(1, n + 1):
            e = alphas[i - 1] - alphas[i]
            if e:
                out = out * minors(n, i, exact)[1] ** e
        out = out * FockPoly.variable(n, n + 1, 1, exact) ** int(gamma)
    else:
        betas = [int(b) for b in theta.betas] + [0]
        for i in range(1, theta.p + 1):
            e = betas[i - 1] - betas[i]
            if e:
                out = out * minors(n, i, exact)[0] ** e
        alphas = [int(a) for a in theta.alphas] + [0]
        for i in range(1, theta.q):
            e = alphas[i - 1] - alphas[i]
            if e:
                out = out * minors(n, i, exact)[1] ** e
        out = out * FockPoly.variable(n, n + 1, theta.p + 1, exact) ** int(gamma)
    return out


# ---------------------------------------------------------------------------
# exact cover elements (the float side lives in arczeta.group)


@dataclass(frozen=True)
class ExactCover:
    """Block-diagonal element with Gaussian-rational entries.

    Only the ratio of the two roots of the block determinants is carried:
    every genuine weight in scope has balanced opposite det twists, so the
    ratio is the only quantity that ever enters, and it stays rational even
    when the individual roots do not (e.g. the hyperbolic family, whose two
    block determinants are equal).
    """

    block_n: tuple[tuple[QQi, ...], ...]
    block_1: QQi
    zeta_ratio: QQi

    def __post_init__(self):
        bn = tuple(tuple(QQi.coerce(x) for x in row) for row in self.block_n)
        object.__setattr__(self, "block_n", bn)
        object.__setattr__(self, "block_1", QQi.coerce(self.block_1))
        object.__setattr__(self, "zeta_ratio", QQi.coerce(self.zeta_ratio))
        dn = exact_det([list(r) for r in bn])
        if not dn or not self.block_1:
            raise InvalidParameterError("cover blocks must be invertible")
        if self.zeta_ratio * self.zeta_ratio * self.block_1 != dn:
            raise InvalidParameterError("zeta_ratio**2 != det(block_n)/block_1")

    @classmethod
    def identity(cls, n: int) -> "ExactCover":
        eye = tuple(tuple(QQi(1 if i == j else 0) for j in range(n)) for i in range(n))
        return cls(eye, QQi(1), QQi(1))

    @classmethod
    def diagonal(cls, diag: Sequence, block_1, zeta_ratio) -> "ExactCover":
        d = [QQi.coerce(x) for x in diag]
        bn = tuple(tuple(d[i] if i == j else QQi(0) for j in range(len(d))) for i in range(len(d)))
        return cls(bn, block_1, zeta_ratio)

    @classmethod
    def hyperbolic(cls, ch: Fraction, n: int, inverse: bool = False) -> "ExactCover":
        """Exact analogue of the diagonal family diag(ch, 1, .., 1, ch); both
        block determinants equal ch so the root ratio is exactly one."""
        c = Fraction(ch) if not inverse else 1 / Fraction(ch)
        diag = [c] + [Fraction(1)] * (n - 1)
        return cls.diagonal(diag, QQi.coerce(c), QQi(1))

    @property
    def n(self) -> int:
        return len(self.block_n)

    def compose(self, other: "ExactCover") -> "ExactCover":
        n = self.n
        prod = tuple(
            tuple(
                sum((self.block_n[i][k] * other.block_n[k][j] for k in range(n)), QQi(0))
                for j in range(n)
            )
            for i in range(n)
        )
        return ExactCover(prod, self.block_1 * other.block_1, self.zeta_ratio * other.zeta_ratio)

    def inverse(self) -> "ExactCover":
        inv = exact_inverse([list(r) for r in self.block_n])
        return ExactCover(
            tuple(tuple(row) for row in inv),
            self.block_1.inverse(),
            self.zeta_ratio.inverse(),
        )

    def flip(self) -> "ExactCover":
        return ExactCover(self.block_n, self.block_1, -self.zeta_ratio)


def _cover_data(k, exact: bool):
    """(transpose-of-n-block rows, inverse-of-n-block rows, y, y_inv, ratio)."""
    if isinstance(k, ExactCover):
        if not exact:
            raise InvalidParameterError("exact cover supplied to a float computation")
        n = k.n
        xt = [[k.block_n[j][i] for j in range(n)] for i in range(n)]
        xi = exact_inverse([list(r) for r in k.block_n])
        return xt, xi, k.block_1, k.block_1.inverse(), k.zeta_ratio
    if isinstance(k, CoverElement):
        if exact:
            raise InvalidParameterError("float cover supplied to an exact computation")
        bn = k.block_n
        return bn.T, np.linalg.inv(bn), k.block_1, 1.0 / k.block_1, k.zeta_ratio
    raise InvalidParameterError(f"unsupported cover element {type(k).__name__}")


def _substitute(f: FockPoly, images: dict[int, list[tuple[int, object]]]) -> FockPoly:
    """Substitute each variable by a linear form (list of (var, coeff))."""
    out = FockPoly.zero(f.n, f.exact)
    cache: dict[tuple[int, int], FockPoly] = {}

    def image_power(v: int, e: int) -> FockPoly:
        key = (v, e)
        if key in cache:
            return cache[key]
        lin = FockPoly.zero(f.n, f.exact)
        for w, c in images[v]:
            mono = FockPoly.variable(f.n, 1 + w // (f.n + 1), 1 + w % (f.n + 1), f.exact)
            lin = lin + mono.scale(c)
        val = lin**e
        cache[key] = val
        return val

    for exps, coeff in f.terms.items():
        term = FockPoly.one(f.n, f.exact)
        for v, e in enumerate(exps):
            if e:
                term = term * image_power(v, e)
        out = out + term.scale(coeff)
    return out


def omega_k(k, f: FockPoly, theta: ThetaDatum) -> FockPoly:
    """Substitution action of a (complexified) block-diagonal element.

    Blocks are split by the datum's (p, q): the first p columns pair with the
    transpose action, the rest with the inverse action, and the genuine det
    twist enters through the cover's root ratio to the power p - q.
    """
    n, p = theta.n, theta.p
    xt, xi, y, yi, ratio = _cover_data(k, f.exact)
    images: dict[int, list[tuple[int, object]]] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 2):
            v = _var(n, i, j)
            rowmat = xt if j <= p else xi
            images[v] = [
                (_var(n, kk, j), rowmat[i - 1][kk - 1]) for kk in range(1, n + 1)
            ]
    for j in range(1, n + 2):
        v = _var(n, n + 1, j)
        images[v] = [(v, yi if j <= p else y)]
    out = _substitute(f, images)
    tw = p - theta.q
    if tw:
        twist = ratio**tw if f.exact else cpow_int(complex(ratio), tw)
        out = out.scale(twist)
    return out


def omega_kprime(kp, f: FockPoly, theta: ThetaDatum) -> FockPoly:
    """Column-side substitution action of the partner compact group.

    Left action mirroring the row side: the U(p) factor acts on the first p
    columns by A -> A xp and C -> C t(xp)^{-1}, the U(q) factor on the rest by
    B -> B t(yq)^{-1} and D -> D yq, with det twists (n-1)/2 and -(n-1)/2
    consumed through the root ratio.  ``kp`` is a (xp, yq, ratio) triple.
    """
    n, p, q = theta.n, theta.p, theta.q
    xp, yq_mat, ratio = kp
    if f.exact:
        xp = [[QQi.coerce(v) for v in row] for row in xp]
        yq_mat = [[QQi.coerce(v) for v in row] for row in yq_mat]
        xi_p = exact_inverse(xp) if p else []
        yi = exact_inverse(yq_mat)
    else:
        xp = np.asarray(xp, dtype=complex).reshape(p, p)
        yq_mat = np.asarray(yq_mat, dtype=complex).reshape(q, q)
        xi_p = np.linalg.inv(xp) if p else xp
        yi = np.linalg.inv(yq_mat)
    images: dict[int, list[tuple[int, object]]] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 2):
            v = _var(n, i, j)
            if j <= p:  # (A xp)_ij = sum_c z_ic xp[c][j]
                images[v] = [(_var(n, i, c), xp[c - 1][j - 1]) for c in range(1, p + 1)]
            else:  # (B t(yq)^{-1})_ij = sum_c z_i,p+c yqinv[j-p][c]
                images[v] = [
                    (_var(n, i, p + c), yi[j - p - 1][c - 1]) for c in range(1, q + 1)
                ]
    for j in range(1, n + 2):
        v = _var(n, n + 1, j)
        if j <= p:  # (C t(xp)^{-1})_j = sum_c z_(n+1)c xpinv[j][c]
            images[v] = [(_var(n, n + 1, c), xi_p[j - 1][c - 1]) for c in range(1, p + 1)]
        else:  # (D yq)_j = sum_c z_(n+1),p+c yq[c][j-p]
            images[v] = [
                (_var(n, n + 1, p + c), yq_mat[c - 1][j - p - 1]) for c in range(1, q + 1)
            ]
    out = _substitute(f, images)
    tw = n - 1
    if tw:
        twist = ratio**tw if f.exact else cpow_int(complex(ratio), tw)
        out = out.scale(twist)
    return out


# ---------------------------------------------------------------------------
# the hyperbolic transform


def _hyperbolic_scalars(t, exact: bool):
    """(cosh, tanh) in the right scalar ring; exact input is a (ch, sh) pair."""
    if exact:
        ch, sh = t
        ch, sh = Fraction(ch), Fraction(sh)
        if ch * ch - sh * sh != 1:
            raise InvalidParameterError("need cosh^2 - sinh^2 = 1 exactly")
        return ch, sh / ch
    return math.cosh(t), math.tanh(t)


@dataclass(frozen=True)
class AtTransform:
    """Result of the hyperbolic action: scalar prefactor, the coefficient of
    the corner bilinear form inside the exponential tag, and the transformed
    polynomial.  The full action is
    prefactor * exp(pi * tanh * sum_j z_1j z_(n+1)j) * poly."""

    n: int
    prefactor: object
    tanh: object
    poly: FockPoly

    def exp_factor(self, max_degree: int) -> FockPoly:
        """The exponential tag expanded through total degree ``max_degree``."""
        exact = self.poly.exact
        bil = FockPoly.zero(self.n, exact)
        for j in range(1, self.n + 2):
            bil = bil + FockPoly.variable(self.n, 1, j, exact) * FockPoly.variable(
                self.n, self.n + 1, j, exact
            )
        out = FockPoly.one(self.n, exact)
        power = FockPoly.one(self.n, exact)
        for m in range(1, max_degree // 2 + 1):
            power = power * bil
            if exact:
                coeff = PiLaurent.single(QQi.coerce(Fraction(self.tanh) ** m * Fraction(1, math.factorial(m))), m)
            else:
                coeff = (math.pi * self.tanh) ** m / math.factorial(m)
            out = out + power.scale(coeff)
        return out

    def pair_with(self, g: FockPoly):
        """Inner product of the full transformed vector against ``g``.

        The exponential tag is expanded only through deg(g); higher orders
        are orthogonal to ``g``.
        """
        full = self.exp_factor(g.degree()) * self.poly
        val = bargmann_inner(full, g)
        return self.prefactor * val


def omega_at(t, f: FockPoly) -> AtTransform:
    """Closed form of the hyperbolic action on a polynomial.

    ``t`` is a float in float mode, or an exact ``(cosh, sinh)`` pair of
    Fractions in exact mode.  Derivation: substitute the first variable row
    by the integration row and the last row by its shifted image, then kill
    each integral with :func:`gaussian_pair`; the middle rows ride along.
    """
    exact = f.exact
    n = f.n
    ch, th = _hyperbolic_scalars(t, exact)
    chinv = (1 / ch) if exact else 1.0 / ch

    out = FockPoly.zero(n, exact)
    for exps, coeff in f.terms.items():
        # column data for the first and last variable rows
        parts = [FockPoly.zero(n, exact)]
        acc = [(exps, coeff)]
        for j in range(1, n + 2):
            v1 = _var(n, 1, j)
            v2 = _var(n, n + 1, j)
            i_j = exps[v1]
            g_j = exps[v2]
            new_acc = []
            for cur_exps, cur_coeff in acc:
                for ell in range(0, min(i_j, g_j) + 1):
                    binom = math.comb(g_j, ell)
                    fall = math.factorial(i_j) // math.factorial(i_j - ell)
                    power = (g_j - ell) + (i_j - ell)
                    if exact:
                        scal = PiLaurent.single(
                            QQi.coerce(
                                Fraction(binom * fall)
                                * (Fraction(-1) * th) ** ell
                                * Fraction(chinv) ** power
                            ),
                            -ell,
                        )
                    else:
                        scal = binom * fall * (-th) ** ell * chinv**power / math.pi**ell
                    e = list(cur_exps)
                    e[v1] = i_j - ell
                    e[v2] = g_j - ell
                    new_acc.append((tuple(e), cur_coeff * scal))
            acc = new_acc
        for e, c in acc:
            out = out + FockPoly(n, {e: c}, exact)

    if exact:
        pref = PiLaurent.single(QQi.coerce(Fraction(chinv) ** (n + 1)), 0)
        tanh_val = th
    else:
        pref = chinv ** (n + 1)
        tanh_val = th
    return AtTransform(n=n, prefactor=pref, tanh=tanh_val, poly=out)


def weil_transform_bruteforce(t, f: FockPoly) -> AtTransform:
    """Independent evaluation of the hyperbolic action straight from the
    integral kernel: the exponential is expanded multinomially per variable
    (middle rows one source, corner rows two sources including the joint
    antiholomorphic term) and each variable is integrated by monomial
    orthogonality.  Used as the oracle against :func:`omega_at`."""
    exact = f.exact
    n = f.n
    ch, th = _hyperbolic_scalars(t, exact)
    chinv = (1 / ch) if exact else 1.0 / ch

    out = FockPoly.zero(n, exact)
    for exps, coeff in f.terms.items():
        acc = [(list(exps), coeff)]
        # middle rows: single kernel source pi * z_rj wbar_rj; the expansion
        # order is forced to the monomial exponent and the integral returns
        # the same monomial.
        # corner columns: sources pi/ch * z_1j wbar_1j, pi/ch * z_(n+1)j
        # wbar_(n+1)j, and -pi*th * wbar_1j wbar_(n+1)j.
        new_acc = []
        for cur_exps, cur_coeff in acc:
            items = [(list(cur_exps), cur_coeff)]
            for j in range(1, n + 2):
                v1 = _var(n, 1, j)
                v2 = _var(n, n + 1, j)
                i_j = exps[v1]
                g_j = exps[v2]
                expanded = []
                for e_cur, c_cur in items:
                    for m in range(0, min(i_j, g_j) + 1):
                        a = i_j - m
                        b = g_j - m
                        # kernel coefficient: (pi/ch)^a/a! * (pi/ch)^b/b! *
                        # (-pi th)^m/m!, integrals give i!/pi^i * g!/pi^g
                        if exact:
                            num = (
                                Fraction(chinv) ** (a + b)
                                * (Fraction(-1) * th) ** m
                                * Fraction(
                                    math.factorial(i_j) * math.factorial(g_j),
                                    math.factorial(a) * math.factorial(b) * math.factorial(m),
                                )
                            )
                            scal = PiLaurent.single(QQi.coerce(num), (a + b + m) - i_j - g_j)
                        else:
                            scal = (
                                (math.pi * chinv) ** a
                                / math.factorial(a)
                                * (math.pi * chinv) ** b
                                / math.factorial(b)
                                * (-math.pi * th) ** m
                                / math.factorial(m)
                                * math.factorial(i_j)
                                / math.pi**i_j
                                * math.factorial(g_j)
                                / math.pi**g_j
                            )
                        e = list(e_cur)
                        e[v1] = a
                        e[v2] = b
                        expanded.append((e, c_cur * scal))
                items = expanded
            new_acc.extend(items)
        for e, c in new_acc:
            out = out + FockPoly(n, {tuple(e): c}, exact)

    # (det P)^(-1/2) with P = diag(ch,1,...,1,ch) tensor identity
    if exact:
        detp = (Fraction(ch) * Fraction(ch)) ** (n + 1)
        root = Fraction(ch) ** (n + 1)
        assert root * root == detp
        pref = PiLaurent.single(QQi.coerce(1 / root), 0)
    else:
        pref = (ch * ch) ** (-(n + 1) / 2.0)
    return AtTransform(n=n, prefactor=pref, tanh=th, poly=out)


# ---------------------------------------------------------------------------
# matrix coefficients of the compact action


def _bt_sign(theta: ThetaDatum) -> int:
    return +1 if theta.case is Case.I else -1


def omega_matcoef(kp, t, k, theta: ThetaDatum, phi: Optional[FockPoly] = None):
    """<omega(k' a_t k) phi, phi> by the substitution route.

    The hyperbolic element contributes the scalar (cosh t)^{-(n+1)} and the
    diagonal companion (or its inverse in Case II) sandwiched between the two
    unitaries; root ratios multiply along the composition.
    """
    n = theta.n
    exact = isinstance(k, ExactCover)
    if phi is None:
        phi = harmonic_hwv(theta, exact=exact)
    sign = _bt_sign(theta)
    if exact:
        ch, _ = _hyperbolic_scalars(t, True)
        mid = ExactCover.hyperbolic(ch, n, inverse=(sign < 0))
        el = kp.compose(mid).compose(k)
        pref = PiLaurent.single(QQi.coerce((1 / Fraction(ch)) ** (n + 1)), 0)
    else:
        mid = b_t_cover(t, n)
        if sign < 0:
            mid = mid.inverse()
        el = kp.compose(mid).compose(k)
        pref = math.cosh(t) ** (-(n + 1))
    return pref * bargmann_inner(omega_k(el, phi, theta), phi)


def omega_matcoef_transform_route(kp, t, k, theta: ThetaDatum, phi: Optional[FockPoly] = None):
    """<omega(k' a_t k) phi, phi> through the hyperbolic integral transform.

    Independent of :func:`omega_matcoef`: uses unitarity to move k' to the
    right, applies the transform to omega(k) phi, and pairs with the
    exponential tag truncated at the relevant degree.
    """
    exact = isinstance(k, ExactCover)
    if phi is None:
        phi = harmonic_hwv(theta, exact=exact)
    f = omega_k(k, phi, theta)
    g = omega_k(kp.inverse(), phi, theta)
    return omega_at(t, f).pair_with(g)


# ---------------------------------------------------------------------------
# weight bookkeeping and the highest-weight report


def _variable_weights(theta: ThetaDatum):
    """Per-variable torus weights for both compact factors.

    Returns two dicts: var -> (axis index, +-1) for the row-side group
    (axis n is the scalar factor) and for the column-side group (axes 0..p-1
    for the first factor, p..n for the second)."""
    n, p = theta.n, theta.p
    row_w = {}
    col_w = {}
    for i in range(1, n + 2):
        for j in range(1, n + 2):
            v = _var(n, i, j)
            if i <= n:
                row_w[v] = (i - 1, +1) if j <= p else (i - 1, -1)
            else:
                row_w[v] = (n, -1) if j <= p else (n, +1)
            if j <= p:
                col_w[v] = (j - 1, +1) if i <= n else (j - 1, -1)
            else:
                col_w[v] = (p + (j - p - 1), -1) if i <= n else (p + (j - p - 1), +1)
    return row_w, col_w


def _monomial_weight(exps, wmap, axes: int):
    out = [0] * axes
    for v, e in enumerate(exps):
        if e:
            ax, s = wmap[v]
            out[ax] += s * e
    return tuple(out)


def _first_order(poly: FockPoly, moves: list[tuple[int, int, int]]) -> FockPoly:
    """Apply sum of sign * z_src d/d z_dst to the polynomial."""
    out = FockPoly.zero(poly.n, poly.exact)
    for exps, coeff in poly.terms.items():
        for src, dst, sign in moves:
            e = exps[dst]
            if e:
                newe = list(exps)
                newe[dst] -= 1
                newe[src] += 1
                out = out + FockPoly(poly.n, {tuple(newe): coeff * (sign * e)}, poly.exact)
    return out


@dataclass
class HighestWeightReport:
    row_weight: tuple
    col_weight: tuple
    row_expected: tuple
    col_expected: tuple
    row_matches: bool
    col_matches: bool
    failed_raising: list[str]

    @property
    def ok(self) -> bool:
        return self.row_matches and self.col_matches and not self.failed_raising


def highest_weight_check(phi: FockPoly, theta: ThetaDatum) -> HighestWeightReport:
    """Verify joint highest-weight structure of ``phi``.

    (a) every monomial carries the contragredient weight on the row side and
    the partner weight on the column side (det twists included); (b) each
    compact simple raising direction, computed by exact differentiation of
    the substitution action, annihilates ``phi``.
    """
    n, p, q = theta.n, theta.p, theta.q
    row_w, col_w = _variable_weights(theta)
    row_twist = (Fraction(theta.p - theta.q, 2),) * n + (-Fraction(theta.p - theta.q, 2),)
    col_twist = (Fraction(n - 1, 2),) * p + (-Fraction(n - 1, 2),) * q

    weights_row = set()
    weights_col = set()
    for exps in phi.terms:
        weights_row.add(_monomial_weight(exps, row_w, n + 1))
        weights_col.add(_monomial_weight(exps, col_w, n + 1))
    if len(weights_row) != 1 or len(weights_col) != 1:
        raise InvalidParameterError("polynomial is not a weight vector")
    rw = tuple(Fraction(x) + t for x, t in zip(weights_row.pop(), row_twist))
    cw = tuple(Fraction(x) + t for x, t in zip(weights_col.pop(), col_twist))

    row_expected = theta.LambdaDual.first + theta.LambdaDual.second
    col_expected = theta.LambdaPrime.first + theta.LambdaPrime.second

    failed = []
    # row-side simple raising: z_ib d/dz_(i+1)b on the first block, minus
    # z_(i+1)b d/dz_ib on the second
    for i in range(1, n):
        moves = [(_var(n, i, b), _var(n, i + 1, b), +1) for b in range(1, p + 1)]
        moves += [(_var(n, i + 1, b), _var(n, i, b), -1) for b in range(p + 1, n + 2)]
        if not _first_order(phi, moves).is_zero():
            failed.append(f"row raising {i}->{i + 1}")
    # column-side raising in the first factor
    for j in range(1, p):
        moves = [(_var(n, a, j), _var(n, a, j + 1), +1) for a in range(1, n + 1)]
        moves += [(_var(n, n + 1, j + 1), _var(n, n + 1, j), -1)]
        if not _first_order(phi, moves).is_zero():
            failed.append(f"first-factor column raising {j}->{j + 1}")
    # column-side raising in the second factor
    for c in range(1, q):
        moves = [(_var(n, a, p + c + 1), _var(n, a, p + c), -1) for a in range(1, n + 1)]
        moves += [(_var(n, n + 1, p + c), _var(n, n + 1, p + c + 1), +1)]
        if not _first_order(phi, moves).is_zero():
            failed.append(f"second-factor column raising {c}->{c + 1}")

    return HighestWeightReport(
        row_weight=rw,
        col_weight=cw,
        row_expected=row_expected,
        col_expected=col_expected,
        row_matches=rw == row_expected,
        col_matches=cw == col_expected,
        failed_raising=failed,
    )


# ---------------------------------------------------------------------------
# compiled matrix-coefficient evaluator for the integration hot path


class _SymCoef:
    """Sparse polynomial in the entries of the substitution data (used once
    per datum to compile the matrix coefficient, then evaluated in batch)."""

    __slots__ = ("terms", "nsym")

    def __init__(self, nsym: int, terms=None):
        self.nsym = nsym
        self.terms = dict(terms or {})

    @classmethod
    def const(cls, nsym, value):
        return cls(nsym, {(0,) * nsym: complex(value)} if value else {})

    @classmethod
    def symbol(cls, nsym, idx):
        e = [0] * nsym
        e[idx] = 1
        return cls(nsym, {tuple(e): 1.0 + 0j})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0j) + c
            if not out[e]:
                del out[e]
        return _SymCoef(self.nsym, out)

    def __mul__(self, other):
        if not isinstance(other, _SymCoef):
            if not other:
                return _SymCoef(self.nsym)
            return _SymCoef(self.nsym, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0j) + c1 * c2
                if not out[e]:
                    del out[e]
        return _SymCoef(self.nsym, out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)


class MatrixCoefficient:
    """Compiled highest-weight matrix coefficient of the compact action.

    Evaluates <omega(M) phi, phi> for batches of block-diagonal complex
    elements M; the dependence on M is polynomial in the entries of the
    transposed block, the inverted block and the scalar block (plus the det
    twist through the root ratio), so it is expanded once symbolically and
    then evaluated with vectorized power products.
    """

    def __init__(self, theta: ThetaDatum):
        self.theta = theta
        n, p = theta.n, theta.p
        self.n = n
        phi = harmonic_hwv(theta, exact=True)
        self.phi_norm2 = complex(bargmann_inner(phi, phi))
        nsym = 2 * n * n + 2
        self.nsym = nsym

        def sym_xt(i, k):  # entry (i,k) of the transposed block
            return _SymCoef.symbol(nsym, (i - 1) * n + (k - 1))

        def sym_xi(i, k):  # entry (i,k) of the inverted block
            return _SymCoef.symbol(nsym, n * n + (i - 1) * n + (k - 1))

        sym_y = _SymCoef.symbol(nsym, 2 * n * n)
        sym_yi = _SymCoef.symbol(nsym, 2 * n * n + 1)

        # expand omega(M) phi with symbolic coefficients
        expanded: dict[tuple, _SymCoef] = {}
        zero = _SymCoef(nsym)
        cache: dict[tuple[int, int], dict[tuple, _SymCoef]] = {}

        def image_power(v, e):
            key = (v, e)
            if key not in cache:
                i, j = 1 + v // (n + 1), 1 + v % (n + 1)
                if i <= n:
                    lin = {}
                    for kk in range(1, n + 1):
                        lin[_var(n, kk, j)] = sym_xt(i, kk) if j <= p else sym_xi(i, kk)
                else:
                    lin = {v: (sym_yi if j <= p else sym_y)}
                # repeated multiplication by the linear form; monomials in the
                # z variables are kept as sorted tuples of variable indices
                poly = {(): _SymCoef.const(nsym, 1.0)}
                for _ in range(e):
                    nxt: dict[tuple, _SymCoef] = {}
                    for mono, c in poly.items():
                        for w, s in lin.items():
                            key2 = tuple(sorted(mono + (w,)))
                            add = c * s
                            nxt[key2] = nxt[key2] + add if key2 in nxt else add
                    poly = nxt
                cache[key] = poly
            return cache[key]

        for exps, coeff in phi.terms.items():
            base = complex(coeff)
            partials = {(): _SymCoef.const(nsym, base)}
            for v, e in enumerate(exps):
                if not e:
                    continue
                img = image_power(v, e)
                nxt: dict[tuple, _SymCoef] = {}
                for mono1, c1 in partials.items():
                    for mono2, c2 in img.items():
                        key2 = tuple(sorted(mono1 + mono2))
                        add = c1 * c2
                        nxt[key2] = nxt[key2] + add if key2 in nxt else add
                partials = nxt
            for mono, c in partials.items():
                expanded[mono] = expanded[mono] + c if mono in expanded else c

        # pair against phi: pick the phi-monomials, weight by conj(coeff)*norm
        coeff_acc = _SymCoef(nsym)
        for exps, coeff in phi.terms.items():
            mono = tuple(sorted(
                v for v, e in enumerate(exps) for _ in range(e)
            ))
            if mono not in expanded:
                continue
            base = complex(coeff) if not isinstance(coeff, PiLaurent) else complex(coeff)
            norm = math.exp(_log_monomial_norm(exps))
            coeff_acc = coeff_acc + expanded[mono] * (base.conjugate() * norm)

        self._exponents = np.array(list(coeff_acc.terms.keys()), dtype=np.int64)
        self._coeffs = np.array(list(coeff_acc.terms.values()), dtype=complex)

    def evaluate(self, block_n: np.ndarray, block_1: np.ndarray, ratio: np.ndarray) -> np.ndarray:
        """Batched evaluation; block_n is (N, n, n), block_1 and ratio (N,)."""
        n = self.n
        count = block_n.shape[0]
        xt = block_n.transpose(0, 2, 1).reshape(count, n * n)
        xi = np.linalg.inv(block_n).reshape(count, n * n)
        vals = np.concatenate(
            [xt, xi, block_1[:, None], (1.0 / block_1)[:, None]], axis=1
        )
        out = np.zeros(count, dtype=complex)
        chunk = max(1, 2_000_000 // max(1, len(self._coeffs)))
        for start in range(0, count, chunk):
            sl = slice(start, min(count, start + chunk))
            prods = np.prod(
                vals[sl, None, :] ** self._exponents[None, :, :], axis=2
            )
            out[sl] = prods @ self._coeffs
        tw = self.theta.p - self.theta.q
        if tw:
            out = out * cpow_int(ratio, tw)
        return out
