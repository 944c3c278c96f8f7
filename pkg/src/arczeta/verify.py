"""Cross-verification harness: closed forms against independent integration.

Every ``verify_*`` entry point returns a report with an :class:`Estimate`
(value, standard error, sample count, seed), the exact closed value where one
exists, and a PASS/FAIL verdict at the three-standard-error band (or the
quadrature tolerance for the deterministic one-dimensional paths).

Estimates are reproducible bit for bit for a fixed (seed, workers) pair: the
sample budget is split into per-worker substreams with spawned seed
sequences, evaluated in vectorized chunks, and reduced in worker order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .characters import schur_eval_batch
from .errors import ConvergenceError, InvalidParameterError
from .exact import rational_hyperbolic
from .fock import (
    FockPoly,
    MatrixCoefficient,
    bargmann_inner,
    harmonic_hwv,
    omega_at,
    omega_matcoef,
    omega_matcoef_transform_route,
    weil_transform_bruteforce,
)
from .group import CoverElement, cpow_int, haar_unitary, weighted_ball_volume
from .weights import (
    Case,
    ClosedValue,
    HCParameter,
    ThetaDatum,
    classify_theta,
    closed_S,
    closed_S_factors,
    closed_T,
    closed_T_factors,
    dual_S_arguments,
    formal_degree_product,
    gl_dim,
    weyl_dim,
    zeta_closed,
)

__all__ = [
    "Estimate",
    "VerifyReport",
    "verify_S",
    "verify_T",
    "verify_zeta",
    "verify_formal_degree",
    "verify_prop61",
    "verify_at_lemma",
    "verify_schur_orthogonality",
    "POLE_DISTANCE",
]

POLE_DISTANCE = Fraction(1, 2)
DEFAULT_CHUNK = 100_000


@dataclass(frozen=True)
class Estimate:
    """Numerical integration result."""

    value: complex
    stderr: float
    samples: int
    seed: int
    wall_time: float = 0.0

    def __post_init__(self):
        if self.stderr < 0:
            raise InvalidParameterError("stderr must be non-negative")


@dataclass
class VerifyReport:
    name: str
    estimate: Estimate
    closed: Optional[ClosedValue]
    verdict: str
    rel_err: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def _substreams(seed: int, workers: int) -> list[np.random.Generator]:
    root = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(s)) for s in root.spawn(workers)]


def _split_budget(samples: int, workers: int) -> list[int]:
    base, extra = divmod(samples, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _reduce_mean(chunks_fn, samples: int, workers: int, seed: int):
    """Run the per-chunk evaluator across worker substreams, fixed order."""
    total = 0.0 + 0.0j
    total_sq = 0.0
    count = 0
    rngs = _substreams(seed, workers)
    for rng, budget in zip(rngs, _split_budget(samples, workers)):
        remaining = budget
        while remaining > 0:
            m = min(DEFAULT_CHUNK, remaining)
            vals = chunks_fn(rng, m)
            total += vals.sum()
            total_sq += float((np.abs(vals) ** 2).sum())
            count += m
            remaining -= m
    mean = total / count
    var = max(total_sq / count - abs(mean) ** 2, 0.0)
    stderr = math.sqrt(var / count)
    return mean, stderr, count


def _guard_poles(factors: Sequence[Fraction], context: str):
    worst = min(factors)
    if worst <= POLE_DISTANCE:
        raise ConvergenceError(
            f"{context}: denominator factor {worst} within {POLE_DISTANCE} of a pole; "
            "integral refused (divergent or too slowly convergent)"
        )


def _fractional_char_batch(kappas: Sequence[Fraction], eigs: np.ndarray) -> np.ndarray:
    """Character with a possibly fractional common det twist at positive-real
    or complex eigenvalue batches (N, m)."""
    kappas = [Fraction(k) for k in kappas]
    if not kappas:
        return np.ones(eigs.shape[0], dtype=complex)
    tau = kappas[-1] - int(kappas[-1])
    parts = [k - tau for k in kappas]
    if any(p.denominator != 1 for p in parts):
        raise InvalidParameterError(f"weight entries not mutually congruent: {kappas}")
    out = schur_eval_batch([int(p) for p in parts], eigs)
    if tau:
        out = out * np.prod(eigs, axis=1) ** float(tau)
    return out


# ---------------------------------------------------------------------------
# the scalar domain integral


def _s_integrand_radial(p, q, kap, iot, s):
    """Radial integrand over u in (0,1) for min(p,q) == 1, including the
    sphere volume factor and the trace normalization."""
    m = max(p, q)
    dim = gl_dim(kap) * gl_dim(iot)
    const = math.pi**m / math.gamma(m) / dim

    def g(u):
        eig_inv = np.array([[1.0 / (1.0 - u)] + [1.0] * (p - 1)])
        eig_gram = np.array([[1.0 - u] + [1.0] * (q - 1)])
        chi1 = _fractional_char_batch(kap, eig_inv)[0] if p else 1.0
        chi2 = _fractional_char_batch(iot, eig_gram)[0] if q else 1.0
        return const * (chi1 * chi2).real * (1.0 - u) ** float(s - (p + q)) * u ** (m - 1)

    return g


def verify_S(p: int, q: int, kappas, iotas, s, *, samples: int = 200_000,
             seed: int = 0, workers: int = 1, method: str = "auto") -> VerifyReport:
    """Check the closed scalar of the twisted domain integral numerically.

    Deterministic radial quadrature when min(p,q) == 1 and the integrand is
    radial (it always is: characters only see the rank-one gram spectrum);
    Monte Carlo with matched radial importance sampling otherwise or when
    requested.
    """
    kap = tuple(Fraction(k) for k in (kappas if not isinstance(kappas, (int, Fraction)) else [kappas] * p))
    iot = tuple(Fraction(i) for i in (iotas if not isinstance(iotas, (int, Fraction)) else [iotas] * q))
    s = Fraction(s)
    closed = closed_S(p, q, kap, iot, s)
    t0 = time.perf_counter()
    if p == 0 or q == 0:  # zero-dimensional ball: the integral is the point mass
        est = Estimate(1.0 + 0j, 0.0, 0, seed, time.perf_counter() - t0)
        return VerifyReport("verify_S", est, closed, "PASS", 0.0, {"method": "degenerate"})
    factors = closed_S_factors(p, q, kap, iot, s)
    _guard_poles(factors, "verify_S")

    if method == "auto":
        method = "quad" if min(p, q) == 1 else "mc"

    if method == "quad":
        if min(p, q) != 1:
            raise InvalidParameterError("quadrature path needs min(p,q) == 1")
        g = _s_integrand_radial(p, q, kap, iot, s)
        val, err = quad(g, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=400)
        est = Estimate(val, err, 0, seed, time.perf_counter() - t0)
        rel = abs(val - float(closed)) / abs(float(closed))
        verdict = "PASS" if rel <= 1e-8 else "FAIL"
        return VerifyReport("verify_S", est, closed, verdict, rel, {"method": "quad"})

    dim = gl_dim(kap) * gl_dim(iot)
    if min(p, q) == 1:
        m = max(p, q)
        e_imp = float(min(factors)) - 1.0
        c_norm = weighted_ball_volume(m, e_imp)

        def chunk(rng, size):
            u = rng.beta(m, e_imp + 1.0, size=size)
            eig_inv = np.concatenate(
                [1.0 / (1.0 - u)[:, None], np.ones((size, p - 1))], axis=1
            ) if p > 1 else (1.0 / (1.0 - u))[:, None]
            eig_gram = np.concatenate(
                [(1.0 - u)[:, None], np.ones((size, q - 1))], axis=1
            ) if q > 1 else (1.0 - u)[:, None]
            chi1 = _fractional_char_batch(kap, eig_inv[:, :p]) if p else 1.0
            chi2 = _fractional_char_batch(iot, eig_gram[:, :q]) if q else 1.0
            resid = (1.0 - u) ** (float(s - (p + q)) - e_imp)
            return c_norm * chi1 * chi2 * resid / dim
    else:
        box_vol = 4.0 ** (p * q)
        exponent = float(s - (p + q))

        def chunk(rng, size):
            re = rng.uniform(-1.0, 1.0, size=(size, p, q))
            im = rng.uniform(-1.0, 1.0, size=(size, p, q))
            z = re + 1j * im
            gram = np.eye(p)[None] - z @ z.conj().transpose(0, 2, 1)
            eig = np.linalg.eigvalsh(gram)
            ok = eig[:, 0] > 1e-12
            vals = np.zeros(size, dtype=complex)
            if ok.any():
                ge = eig[ok]
                chi1 = _fractional_char_batch(kap, 1.0 / ge)
                gram_q = np.eye(q)[None] - z[ok].conj().transpose(0, 2, 1) @ z[ok]
                eig_q = np.linalg.eigvalsh(gram_q)
                chi2 = _fractional_char_batch(iot, eig_q)
                detg = np.prod(ge, axis=1)
                vals[ok] = box_vol * chi1 * chi2 * detg**exponent / dim
            return vals

    mean, stderr, count = _reduce_mean(chunk, samples, workers, seed)
    est = Estimate(mean, stderr, count, seed, time.perf_counter() - t0)
    diff = abs(mean - float(closed))
    rel = diff / abs(float(closed))
    verdict = "PASS" if diff <= max(3.0 * stderr, 1e-12 * abs(float(closed))) else "FAIL"
    return VerifyReport("verify_S", est, closed, verdict, rel, {"method": "mc"})


# ---------------------------------------------------------------------------
# the endomorphism scalar


def verify_T(theta: ThetaDatum, s, *, samples: int = 200_000, seed: int = 0,
             workers: int = 1, method: str = "quad") -> VerifyReport:
    """Check the endomorphism scalar at parameter ``s``.

    The integrand is the trace-normalized character of the triangular-factor
    ratio, which is radial on the rank-one ball, so a deterministic radial
    path is always available; a Monte Carlo path is kept for sampler
    validation.
    """
    s = Fraction(s)
    closed = closed_T(theta, s)
    factors = closed_T_factors(theta, s)
    _guard_poles(factors, "verify_T")
    n = theta.n
    t0 = time.perf_counter()

    if theta.case is Case.I:
        kap = theta.LambdaDual.first
        dim = gl_dim(kap)

        def chi(u):  # character at diag((1-u)^{-1}, 1, .., 1) over the first factor
            eigs = np.concatenate([1.0 / (1.0 - u)[:, None], np.ones((len(u), n - 1))], axis=1)
            return _fractional_char_batch(kap, eigs) / dim
    else:
        iota = theta.LambdaDual.second[0]

        def chi(u):  # the one-dimensional second factor at the scalar 1-u
            return (1.0 - u) ** float(iota)

    const = math.pi**n / math.gamma(n)
    expo = float(s - (n + 1))

    if method == "quad":
        def g(u):
            arr = np.array([u])
            return const * chi(arr)[0].real * (1.0 - u) ** expo * u ** (n - 1)

        val, err = quad(g, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=400)
        est = Estimate(val, err, 0, seed, time.perf_counter() - t0)
        rel = abs(val - float(closed)) / abs(float(closed))
        verdict = "PASS" if rel <= 1e-8 else "FAIL"
        return VerifyReport("verify_T", est, closed, verdict, rel, {"method": "quad"})

    e_imp = float(min(factors)) - 1.0
    c_norm = weighted_ball_volume(n, e_imp)

    def chunk(rng, size):
        u = rng.beta(n, e_imp + 1.0, size=size)
        return c_norm * chi(u) * (1.0 - u) ** (expo - e_imp)

    mean, stderr, count = _reduce_mean(chunk, samples, workers, seed)
    est = Estimate(mean, stderr, count, seed, time.perf_counter() - t0)
    diff = abs(mean - float(closed))
    rel = diff / abs(float(closed))
    verdict = "PASS" if diff <= max(3.0 * stderr, 1e-12 * abs(float(closed))) else "FAIL"
    return VerifyReport("verify_T", est, closed, verdict, rel, {"method": "mc"})


# ---------------------------------------------------------------------------
# the end-to-end group integral


def _rank_one_batch(dirs: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """Batch of I + (scale - 1) u u* for unit rows ``dirs`` (N, n)."""
    count, n = dirs.shape
    outer = dirs[:, :, None] * dirs.conj()[:, None, :]
    return np.eye(n)[None] + (scale - 1.0)[:, None, None] * outer


def zeta_integrand_samples(theta: ThetaDatum, rng: np.random.Generator, size: int,
                           e_imp: float, coeff_eval: MatrixCoefficient,
                           flip_roots: bool = False) -> np.ndarray:
    """One chunk of importance-weighted samples of the group integrand.

    The sampled element is (z, k); one root ratio is drawn for k and threaded
    through both genuine factors, so flipping every carried root
    (``flip_roots``) must leave each sample bit-identical.
    """
    n = theta.n
    u = rng.beta(n, e_imp + 1.0, size=size)
    dirs = rng.standard_normal((size, n)) + 1j * rng.standard_normal((size, n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    x = haar_unitary(n, rng, size=size)
    yang = rng.uniform(0.0, 2.0 * np.pi, size=size)
    y = np.exp(1j * yang)

    detx = np.linalg.det(x)
    ratio_k = np.exp(0.5j * np.angle(detx)) * np.exp(-0.5j * yang)
    if flip_roots:
        # flipping the carried root of the block determinant negates the
        # ratio; the two genuine factors consume opposite integer powers, so
        # every sample below must come out bit-identical
        ratio_k = -ratio_k

    one_minus_u = 1.0 - u
    sign = +1 if theta.case is Case.I else -1
    bz_scale = one_minus_u ** (-0.5 * sign)
    bz_n = _rank_one_batch(dirs, bz_scale)
    bz_1 = one_minus_u ** (-0.5 * sign)
    m_b_n = bz_n @ x
    m_b_1 = bz_1 * y
    coeff = coeff_eval.evaluate(m_b_n, m_b_1, ratio_k)

    thz_n = _rank_one_batch(dirs, one_minus_u**0.5)
    m_t_n = thz_n @ x
    m_t_1 = one_minus_u ** (-0.5) * y
    (parts_n, tw2n), (parts_1, _) = theta.lambda_gl()
    eigs = np.linalg.eigvals(m_t_n)
    psi = schur_eval_batch(list(parts_n), eigs)
    if parts_1[0]:
        psi = psi * cpow_int(m_t_1, parts_1[0])
    if tw2n:
        ratio_theta = one_minus_u**0.5 * ratio_k
        psi = psi * cpow_int(ratio_theta, tw2n)

    c_norm = weighted_ball_volume(n, e_imp)
    return c_norm * coeff * psi * one_minus_u ** (-0.5 * (n + 1) - e_imp)


def verify_zeta(lam_or_theta, *, samples: int = 1_000_000, seed: int = 0,
                workers: int = 1, method: str = "mc") -> VerifyReport:
    """End-to-end check of the group integral against its closed value.

    ``method="mc"`` samples the ball radially (importance-matched to the
    boundary behavior read off the closed-form factors) and the compact group
    by Haar; ``method="radial"`` uses the character-reduced one-dimensional
    integrand instead (deterministic).  The expected value is the closed form
    times the squared norm of the joint highest-weight vector.
    """
    theta = lam_or_theta if isinstance(lam_or_theta, ThetaDatum) else classify_theta(lam_or_theta)
    n = theta.n
    s0 = Fraction(n + 1, 2)
    closed = zeta_closed(theta)
    phi = harmonic_hwv(theta, exact=True)
    norm2 = complex(bargmann_inner(phi, phi)).real
    target = ClosedValue(closed.rational, closed.pi_exp)
    target_float = float(closed) * norm2
    factors = closed_T_factors(theta, s0)
    _guard_poles(factors, "verify_zeta")
    t0 = time.perf_counter()

    if method == "radial":
        rep = verify_T(theta, s0, method="quad")
        val = rep.estimate.value * norm2 / theta.dim_sigma()
        est = Estimate(val, rep.estimate.stderr * norm2 / theta.dim_sigma(), 0, seed,
                       time.perf_counter() - t0)
        rel = abs(val - target_float) / abs(target_float)
        verdict = "PASS" if rel <= 1e-8 else "FAIL"
        return VerifyReport("verify_zeta", est, target, verdict, rel,
                            {"method": "radial", "phi_norm2": norm2})

    e_imp = float(min(factors)) - 1.0
    coeff_eval = MatrixCoefficient(theta)

    def chunk(rng, size):
        return zeta_integrand_samples(theta, rng, size, e_imp, coeff_eval)

    mean, stderr, count = _reduce_mean(chunk, samples, workers, seed)
    est = Estimate(mean, stderr, count, seed, time.perf_counter() - t0)
    diff = abs(mean - target_float)
    rel = diff / abs(target_float)
    verdict = "PASS" if diff <= max(3.0 * stderr, 1e-12 * abs(target_float)) else "FAIL"
    return VerifyReport("verify_zeta", est, target, verdict, rel,
                        {"method": "mc", "phi_norm2": norm2,
                         "importance_exponent": e_imp})


# ---------------------------------------------------------------------------
# formal degree consistency


def verify_formal_degree(lams: Sequence[HCParameter]) -> VerifyReport:
    """Exact rational test that dim/S(dual, 0) is proportional to the product
    of absolute parameter differences with a parameter-free constant."""
    t0 = time.perf_counter()
    if not lams:
        raise InvalidParameterError("need at least one parameter")
    ratios = []
    rows = []
    for lam in lams:
        theta = classify_theta(lam)
        sval = closed_S(*dual_S_arguments(theta), 0)
        dim = weyl_dim(lam)
        fd = formal_degree_product(lam)
        ratio = ClosedValue(Fraction(dim), 0) / sval / fd
        ratios.append(ratio)
        rows.append({"lambda": str(lam), "dim": dim, "S0": str(sval),
                     "fd_product": str(fd), "ratio": str(ratio)})
    ok = all(r == ratios[0] for r in ratios)
    mismatches = [rows[i]["lambda"] for i, r in enumerate(ratios) if r != ratios[0]]
    est = Estimate(complex(len(lams)), 0.0, len(lams), 0, time.perf_counter() - t0)
    return VerifyReport(
        "verify_formal_degree", est, ratios[0], "PASS" if ok else "FAIL",
        0.0 if ok else 1.0,
        {"rows": rows, "mismatches": mismatches},
    )


# ---------------------------------------------------------------------------
# identity suites


def prop61_sweep(nmax: int = 2) -> list[ThetaDatum]:
    """Admissible parameters units for the two-route identity suite."""
    from .weights import admissible_sweep

    out = []
    for lam in admissible_sweep(1, 3):
        out.append(classify_theta(lam))
    if nmax >= 2:
        for lam in admissible_sweep(2, Fraction(7, 2)):
            th = classify_theta(lam)
            if th.case is Case.I:
                out.append(th)
    return out


def verify_prop61(*, trials: int = 20, seed: int = 0, tol: float = 1e-9,
                  thetas: Optional[Sequence[ThetaDatum]] = None) -> VerifyReport:
    """Substitution route versus transform route at random (t, k, k')."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    thetas = list(thetas) if thetas is not None else prop61_sweep()
    worst = 0.0
    failures = []
    for theta in thetas:
        phi = harmonic_hwv(theta, exact=False)
        for _ in range(trials):
            t = float(rng.uniform(-1.5, 1.5))
            k = CoverElement.from_blocks(haar_unitary(theta.n, rng),
                                         np.exp(2j * np.pi * rng.uniform()))
            kp = CoverElement.from_blocks(haar_unitary(theta.n, rng),
                                          np.exp(2j * np.pi * rng.uniform()))
            lhs = omega_matcoef_transform_route(kp, t, k, theta, phi)
            rhs = omega_matcoef(kp, t, k, theta, phi)
            rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
            worst = max(worst, rel)
            if rel > tol:
                failures.append({"lambda": str(theta.lam), "t": t, "rel": rel})
    est = Estimate(complex(worst), 0.0, trials * len(thetas), seed, time.perf_counter() - t0)
    return VerifyReport("verify_prop61", est, None,
                        "PASS" if not failures else "FAIL", worst,
                        {"cases": len(thetas), "failures": failures})


def verify_at_lemma(*, max_degree: int = 4, rho: Fraction = Fraction(1, 3)) -> VerifyReport:
    """Closed hyperbolic transform versus brute-force kernel integration,
    exact arithmetic, every monomial of bounded degree in one ball variable."""
    import itertools

    t0 = time.perf_counter()
    ch, sh = rational_hyperbolic(rho)
    bad = []
    total = 0
    for exps in itertools.product(range(max_degree + 1), repeat=4):
        if sum(exps) > max_degree:
            continue
        total += 1
        f = FockPoly(1, {exps: 1}, exact=True)
        a = omega_at((ch, sh), f)
        b = weil_transform_bruteforce((ch, sh), f)
        if not (a.poly == b.poly and a.prefactor == b.prefactor
                and Fraction(a.tanh) == Fraction(b.tanh)):
            bad.append(exps)
    est = Estimate(complex(total - len(bad)), 0.0, total, 0, time.perf_counter() - t0)
    return VerifyReport("verify_at", est, None, "PASS" if not bad else "FAIL",
                        0.0 if not bad else 1.0,
                        {"monomials": total, "mismatches": [list(b) for b in bad]})


def verify_schur_orthogonality(weights: Sequence[Sequence[int]], *, samples: int = 200_000,
                               seed: int = 0, workers: int = 1) -> VerifyReport:
    """Monte Carlo check that each irreducible character has unit L2 norm on
    the compact group under exactly invariant sampling."""
    t0 = time.perf_counter()
    rows = []
    ok = True
    worst = 0.0
    for idx, mu in enumerate(weights):
        mu = list(mu)
        m = len(mu)

        def chunk(rng, size, mu=mu, m=m):
            k = haar_unitary(m, rng, size=size)
            eigs = np.linalg.eigvals(k)
            chi = schur_eval_batch(mu, eigs)
            return (np.abs(chi) ** 2).astype(complex)

        mean, stderr, count = _reduce_mean(chunk, samples, workers, seed + idx)
        dev = abs(mean.real - 1.0)
        passed = dev <= 3.0 * stderr
        ok = ok and passed
        worst = max(worst, dev)
        rows.append({"weight": mu, "mean": mean.real, "stderr": stderr, "pass": passed})
    est = Estimate(complex(worst), 0.0, samples * len(weights), seed, time.perf_counter() - t0)
    return VerifyReport("verify_schur", est, None, "PASS" if ok else "FAIL", worst,
                        {"rows": rows})
