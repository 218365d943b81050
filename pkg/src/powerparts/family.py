"""Khinchin-family evaluation for the power-partition generating functions.

Everything here is driven by the fulcrum F(z) = ln f(e^z) of the product
form: for the unrestricted kind F(z) = sum_j -Log(1 - e^(j^k z)) on
Re z < 0, and the distinct kind is evaluated as F(z) - F(2z).  Mean and
variance of the family at t = e^(-s) are the first and second derivatives
of the fulcrum at -s.

Series are truncated with a certified tail bound (recorded in
SeriesTruncation) and accumulated with math.fsum over numpy-generated
terms, so accumulation error is a single rounding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .bigcount import CoeffTable, PartitionKind, log_integer

SERIES_CAP = 100_000_000
DERIVATIVE_ORDER_CAP = 8
SAMPLE_TAIL_EPS = 1e-9

_LN2 = math.log(2.0)


class TruncationError(RuntimeError):
    """Requested series tail bound unreachable within the summand cap."""

    def __init__(self, requested: float, achieved: float, terms: int):
        super().__init__(
            f"series tail bound {requested:g} unreachable; best certified "
            f"{achieved:g} at {terms} terms"
        )
        self.requested = requested
        self.achieved = achieved
        self.terms = terms


@dataclass(frozen=True)
class SeriesTruncation:
    """Number of retained product factors plus the certified tail bound."""

    eps: float
    terms: int
    tail_bound: float


@dataclass(frozen=True)
class FamilyPoint:
    """A family parameter s > 0 (t = e^(-s)) with cached mean and variance."""

    kind: PartitionKind
    k: int
    s: float
    mean: float
    variance: float
    tail_eps: float


@lru_cache(maxsize=64)
def _h_deriv_poly(m: int) -> tuple:
    """Coefficients of p_m with h^(m)(x) = (-1)^m p_m(u), u = 1/(e^x - 1).

    h(x) = -ln(1 - e^(-x)); from u' = -u(u+1) follows p_1 = u and
    p_{m+1} = u(u+1) p_m'.  Coefficients are exact integers.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    coeffs = [0, 1]  # p_1(u) = u
    for _ in range(m - 1):
        deriv = [(i + 1) * c for i, c in enumerate(coeffs[1:])]
        nxt = [0] * (len(deriv) + 2)
        for i, d in enumerate(deriv):
            nxt[i + 1] += d
            nxt[i + 2] += d
        coeffs = nxt
    return tuple(coeffs)


def _tail_certificate(k: int, s: float, terms: int, weight: int, poly_at_one: float) -> float:
    """Certified upper bound on sum_{j > terms} j^weight * c * e^(-j^k s).

    Uses u_j <= e^(-x_j)/(1 - e^(-x_{J+1})) with x_j = j^k s, the bound
    p(u) <= p(1) u for 0 <= u <= 1 (nonnegative coefficients), and
    geometric domination of j^w e^(-j^k s) beyond J+1 with ratio
    rho = (1 + 1/(J+1))^w * e^(-k (J+1)^(k-1) s).
    """
    j1 = terms + 1
    x1 = float(j1) ** k * s
    if x1 <= _LN2:
        return math.inf  # u_{J+1} > 1: polynomial bound not yet valid
    rho = (1.0 + 1.0 / j1) ** weight * math.exp(-k * float(j1) ** (k - 1) * s)
    if rho >= 1.0:
        return math.inf
    log_head = weight * math.log(j1) - x1
    if log_head > 700.0:
        return math.inf
    scale = poly_at_one / (-math.expm1(-x1))
    return scale * math.exp(log_head) / (1.0 - rho)


@lru_cache(maxsize=4096)
def _series_terms(k: int, s: float, eps: float, weight: int = 0,
                  poly_at_one: float = 1.0) -> SeriesTruncation:
    """Smallest certified factor count J with tail <= eps, starting from the
    closed-form seed e^(-J^k s) <= eps (1 - e^(-s))."""
    if not s > 0.0:
        raise ValueError(f"requires s > 0, got {s!r}")
    if not eps > 0.0:
        raise ValueError(f"requires eps > 0, got {eps!r}")
    target = eps * (-math.expm1(-s))
    seed = (max(math.log(1.0 / target), 1.0) / s) ** (1.0 / k)
    j = max(8, math.ceil(seed))
    while True:
        bound = _tail_certificate(k, s, j, weight, poly_at_one)
        if bound <= eps:
            return SeriesTruncation(eps=eps, terms=j, tail_bound=bound)
        if j >= SERIES_CAP:
            raise TruncationError(requested=eps, achieved=bound, terms=j)
        j = min(SERIES_CAP, max(j + 8, int(j * 1.3)))


def _part_powers(k: int, terms: int) -> np.ndarray:
    j = np.arange(1, terms + 1, dtype=np.float64)
    return j**k if k > 1 else j


def _fulcrum_unrestricted(k: int, z: complex, eps: float) -> complex:
    s = -z.real
    tr = _series_terms(k, s, eps)
    powers = _part_powers(k, tr.terms)
    if z.imag == 0.0:
        x = powers * s
        vals = -np.log(-np.expm1(-x))
        return complex(math.fsum(vals), 0.0)
    w = np.exp(powers * z)
    vals = -np.log1p(-w)
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


def fulcrum(kind: PartitionKind, k: int, z: Union[complex, float],
            eps: float = 1e-12) -> complex:
    """log of the generating function at e^z, analytic on Re z < 0 and real
    on the negative real axis.  Distinct kind: F(z) - F(2z)."""
    _validate_k(k)
    z = complex(z)
    if not z.real < 0.0:
        raise ValueError(f"fulcrum requires Re(z) < 0, got {z!r}")
    if kind is PartitionKind.DISTINCT:
        return _fulcrum_unrestricted(k, z, eps / 2) - _fulcrum_unrestricted(k, 2 * z, eps / 2)
    return _fulcrum_unrestricted(k, z, eps)


def _poly_eval(coeffs: tuple, u: np.ndarray) -> np.ndarray:
    val = np.zeros_like(u)
    for c in reversed(coeffs):
        val = val * u + c
    return val


def _fulcrum_deriv_unrestricted(k: int, m: int, z: complex, eps: float) -> complex:
    """m-th derivative of the unrestricted fulcrum at z (Re z < 0).

    Per-term form j^(mk) p_m(u_j) with u_j = 1/(e^(x_j) - 1), x_j = -j^k z;
    u is computed as e^(-x)/(1 - e^(-x)) which never overflows on Re x > 0.
    """
    s = -z.real
    coeffs = _h_deriv_poly(m)
    tr = _series_terms(k, s, eps, weight=m * k, poly_at_one=float(sum(coeffs)))
    powers = _part_powers(k, tr.terms)
    if z.imag == 0.0:
        x = powers * s
        u = np.exp(-x) / (-np.expm1(-x))
        vals = _poly_eval(coeffs, u) * powers**m
        return complex(math.fsum(vals), 0.0)
    x = -powers * z
    u = np.exp(-x) / (-np.expm1(-x))
    vals = _poly_eval(coeffs, u) * powers**m
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


def fulcrum_derivative(kind: PartitionKind, k: int, m: int, s: float,
                       eps: float = 1e-12, m_cap: int = DERIVATIVE_ORDER_CAP) -> float:
    """m-th derivative of the fulcrum at -s, s > 0 (a positive real number).

    Distinct kind combines the two product routes:
    G^(m)(-s) = F^(m)(-s) - 2^m F^(m)(-2s).
    """
    _validate_k(k)
    if not s > 0.0:
        raise ValueError(f"requires s > 0, got {s!r}")
    if not 1 <= m <= m_cap:
        raise ValueError(f"derivative order m={m} outside 1..{m_cap}")
    if kind is PartitionKind.DISTINCT:
        a = _fulcrum_deriv_unrestricted(k, m, complex(-s), eps / 2)
        b = _fulcrum_deriv_unrestricted(k, m, complex(-2.0 * s), eps / 2**(m + 1))
        return a.real - 2**m * b.real
    return _fulcrum_deriv_unrestricted(k, m, complex(-s), eps).real


def fulcrum_derivative_at(kind: PartitionKind, k: int, m: int, z: complex,
                          eps: float = 1e-12, m_cap: int = DERIVATIVE_ORDER_CAP) -> complex:
    """Complex-argument variant of fulcrum_derivative (used by the bound scans)."""
    _validate_k(k)
    z = complex(z)
    if not z.real < 0.0:
        raise ValueError(f"requires Re(z) < 0, got {z!r}")
    if not 1 <= m <= m_cap:
        raise ValueError(f"derivative order m={m} outside 1..{m_cap}")
    if kind is PartitionKind.DISTINCT:
        a = _fulcrum_deriv_unrestricted(k, m, z, eps / 2)
        b = _fulcrum_deriv_unrestricted(k, m, 2 * z, eps / 2**(m + 1))
        return a - 2**m * b
    return _fulcrum_deriv_unrestricted(k, m, z, eps)


def mean(kind: PartitionKind, k: int, s: float, eps: float = 1e-12) -> float:
    return fulcrum_derivative(kind, k, 1, s, eps)


def variance(kind: PartitionKind, k: int, s: float, eps: float = 1e-12) -> float:
    v = fulcrum_derivative(kind, k, 2, s, eps)
    if not v > 0.0:
        raise ArithmeticError(f"variance must be positive, got {v!r} at s={s}")
    return v


def family_point(kind: PartitionKind, k: int, s: float, eps: float = 1e-12) -> FamilyPoint:
    return FamilyPoint(kind=kind, k=k, s=s,
                       mean=mean(kind, k, s, eps),
                       variance=variance(kind, k, s, eps),
                       tail_eps=eps)


def char_fn_normalized(kind: PartitionKind, k: int, s: float, theta: float,
                       eps: float = 1e-12) -> complex:
    """Characteristic function of the normalized variable at theta:
    exp(F(-s + i*theta/sigma) - F(-s) - i*theta*mean/sigma)."""
    m = mean(kind, k, s, eps)
    sigma = math.sqrt(variance(kind, k, s, eps))
    base = fulcrum(kind, k, complex(-s), eps).real
    val = fulcrum(kind, k, complex(-s, theta / sigma), eps)
    return cmath.exp(val - base - 1j * theta * m / sigma)


def pgf_modulus_ratio(kind: PartitionKind, k: int, s: float, phi: float,
                      eps: float = 1e-12) -> float:
    """|f(e^(-s+i*phi))| / f(e^(-s)), always in (0, 1] away from phi = 0 mod 2pi."""
    base = fulcrum(kind, k, complex(-s), eps).real
    val = fulcrum(kind, k, complex(-s, phi), eps).real
    return math.exp(val - base)


def pmf(point: FamilyPoint, n: int, table: CoeffTable) -> float:
    """P(X_t = n) = a_n t^n / f(t), computed in log space."""
    if table.kind is not point.kind or table.k != point.k:
        raise ValueError("table kind/k does not match the family point")
    if not 0 <= n <= table.n_max:
        raise ValueError(f"n={n} outside table range 0..{table.n_max}")
    a = table.coeffs[n]
    if a == 0:
        return 0.0
    base = fulcrum(point.kind, point.k, complex(-point.s), point.tail_eps).real
    return math.exp(log_integer(a) - n * point.s - base)


def sample(point: FamilyPoint, count: int, seed: int) -> np.ndarray:
    """i.i.d. draws of X_t by the independent-components decomposition.

    Unrestricted: X = sum_j j^k G_j with G_j geometric (failures before
    success) of success probability 1 - t^(j^k).  Distinct: independent
    Bernoulli with success t^(j^k)/(1 + t^(j^k)).  Parts beyond J are
    dropped; J is certified so the probability any dropped part is nonzero
    is at most SAMPLE_TAIL_EPS.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count!r}")
    k, s = point.k, point.s
    tr = _series_terms(k, s, SAMPLE_TAIL_EPS)
    rng = np.random.default_rng(seed)
    out = np.zeros(count, dtype=np.int64)
    for j in range(1, tr.terms + 1):
        w = j**k
        x = w * s
        u = math.exp(-x)  # t^(j^k)
        if u == 0.0:
            break
        if point.kind is PartitionKind.UNRESTRICTED:
            p_success = -math.expm1(-x)
            out += w * (rng.geometric(p_success, count) - 1)
        else:
            p_take = u / (1.0 + u)
            out += w * (rng.random(count) < p_take)
    return out


def _validate_k(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")


__all__ = [
    "FamilyPoint",
    "SeriesTruncation",
    "TruncationError",
    "fulcrum",
    "fulcrum_derivative",
    "fulcrum_derivative_at",
    "mean",
    "variance",
    "family_point",
    "char_fn_normalized",
    "pgf_modulus_ratio",
    "pmf",
    "sample",
    "SAMPLE_TAIL_EPS",
]
