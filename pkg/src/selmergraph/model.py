"""Curve family parameters, square classes, and torsor coefficients.

The family is parametrized by a sign eps, a pair of odd primes p < q whose
gap is a power of two (q = p + 2^m), and an odd positive square-free D
coprime to pq.  The two curves under study are

    E :  y^2 = x(x + eps*p*D)(x + eps*q*D) = x^3 + eps(p+q)D x^2 + pq D^2 x
    E':  y^2 = x^3 - 2 eps(p+q)D x^2 + 4^m D^2 x

linked by the dual pair of 2-isogenies.  Descent happens inside the group
Q(S,2) = (Z/2)^(n+4) with ordered basis (-1, 2, p, q, D_1, ..., D_n), where
the D_i are D's prime factors in canonical order: the s factors that split
(Jacobi (pq/D_i) = +1) first, ascending, then the non-split ones ascending.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .arith import NotSquareFree, factor_squarefree, is_prime, jacobi, v2


class InvalidGap(ValueError):
    """q - p is not a positive power of two."""


class InvalidD(ValueError):
    """D is not an odd positive square-free integer coprime to pq."""


class NotPrime(ValueError):
    """p or q fails the primality requirement."""


@dataclass(frozen=True)
class CurveParams:
    eps: int
    p: int
    q: int
    m: int
    D: int
    factors: tuple[int, ...]
    s: int

    @property
    def n(self) -> int:
        return len(self.factors)

    def dhat(self, i: int) -> int:
        """D / D_i for the 0-based factor index i."""
        return self.D // self.factors[i]

    @property
    def basis(self) -> tuple[int, ...]:
        return (-1, 2, self.p, self.q) + self.factors

    @property
    def key(self) -> str:
        return "%+d:%d:%d:%d" % (self.eps, self.p, self.q, self.D)


def validate_params(eps: int, p: int, q: int, D: int) -> CurveParams:
    """Check every family constraint and return the canonical parameters."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1, got %r" % (eps,))
    for name, value in (("p", p), ("q", q)):
        if value < 3 or value % 2 == 0 or not is_prime(value):
            raise NotPrime("%s must be an odd prime, got %r" % (name, value))
    gap = q - p
    if gap < 2 or gap & (gap - 1):
        raise InvalidGap("q - p must be a positive power of 2, got %d" % gap)
    m = v2(gap)
    if D < 1 or D % 2 == 0:
        raise InvalidD("D must be odd and positive, got %r" % (D,))
    if D % p == 0 or D % q == 0:
        raise InvalidD("D must be coprime to pq, got D=%d with p=%d q=%d" % (D, p, q))
    try:
        primes = factor_squarefree(D)
    except NotSquareFree as exc:
        raise InvalidD("D must be square-free: %s" % exc) from exc
    pq = p * q
    split = [r for r in primes if jacobi(pq, r) == 1]
    nonsplit = [r for r in primes if jacobi(pq, r) == -1]
    return CurveParams(eps=eps, p=p, q=q, m=m, D=D,
                       factors=tuple(split + nonsplit), s=len(split))


class Place(NamedTuple):
    """A place of Q relevant to descent: tag in {inf, 2, p, q, D}."""

    tag: str
    value: int


def place_inf() -> Place:
    return Place("inf", 0)


def place_two() -> Place:
    return Place("2", 2)


def place_p(params: CurveParams) -> Place:
    return Place("p", params.p)


def place_q(params: CurveParams) -> Place:
    return Place("q", params.q)


def place_di(params: CurveParams, i: int) -> Place:
    return Place("D", params.factors[i])


def places(params: CurveParams) -> tuple[Place, ...]:
    """All places where the torsors can fail: infinity, 2, p, q, each D_i."""
    out = [place_inf(), place_two(), place_p(params), place_q(params)]
    out.extend(place_di(params, i) for i in range(params.n))
    return tuple(out)


class SquareClass:
    """An element of Q(S,2) as a bit vector over the ordered basis.

    Bit i of ``mask`` marks the i-th basis entry (-1, 2, p, q, D_1, ...).
    The canonical textual form is the signed square-free representative,
    e.g. "-2", "35", "1".
    """

    __slots__ = ("mask", "params")

    def __init__(self, params: CurveParams, mask: int):
        size = params.n + 4
        if not 0 <= mask < (1 << size):
            raise ValueError("mask %r out of range for %d basis bits" % (mask, size))
        self.params = params
        self.mask = mask

    def as_integer(self) -> int:
        rep = 1
        basis = self.params.basis
        mask = self.mask
        i = 0
        while mask:
            if mask & 1:
                rep *= basis[i]
            mask >>= 1
            i += 1
        return rep

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if not isinstance(other, SquareClass):
            return NotImplemented
        if self.params != other.params:
            raise ValueError("square classes live over different parameters")
        return SquareClass(self.params, self.mask ^ other.mask)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SquareClass)
                and self.mask == other.mask and self.params == other.params)

    def __hash__(self) -> int:
        return hash((self.mask, self.params))

    def __repr__(self) -> str:
        return "SquareClass(%d)" % self.as_integer()

    def __str__(self) -> str:
        return str(self.as_integer())


def class_mul(a: SquareClass, b: SquareClass) -> SquareClass:
    return a * b


def enumerate_classes(params: CurveParams) -> list[SquareClass]:
    """All 2^(n+4) classes in lexicographic bit order (mask ascending)."""
    return [SquareClass(params, mask) for mask in range(1 << (params.n + 4))]


def class_from_integer(params: CurveParams, value: int) -> SquareClass:
    """Inverse of as_integer for integers supported on the basis."""
    if value == 0:
        raise ValueError("0 is not a square class representative")
    mask = 0
    rest = value
    if rest < 0:
        mask |= 1
        rest = -rest
    for i, b in enumerate(params.basis[1:], start=1):
        if rest % b == 0:
            mask |= 1 << i
            rest //= b
    if rest != 1:
        raise ValueError("%d is not supported on the class basis" % value)
    return SquareClass(params, mask)


class TorsorCoeffs(NamedTuple):
    """Quartic model d*w^2 = a + b z^2 + c z^4 of a descent torsor."""

    a: int
    b: int
    c: int


def torsor_coeffs(params: CurveParams, d: int, family: str) -> TorsorCoeffs:
    """Coefficients of the torsor attached to class representative d.

    family "E" gives the torsor whose everywhere-local solvability puts d in
    the Selmer group of the isogeny out of E; family "Eprime" the dual one.
    """
    p, q, D, m, eps = params.p, params.q, params.D, params.m, params.eps
    if family == "E":
        return TorsorCoeffs(d * d, -2 * eps * (p + q) * D * d, 4 ** m * D * D)
    if family == "Eprime":
        return TorsorCoeffs(d * d, eps * (p + q) * D * d, p * q * D * D)
    raise ValueError("family must be 'E' or 'Eprime', got %r" % (family,))


def curve_coefficients(params: CurveParams, family: str) -> tuple[int, int]:
    """(a2, a4) of the Weierstrass model y^2 = x^3 + a2 x^2 + a4 x."""
    p, q, D, m, eps = params.p, params.q, params.D, params.m, params.eps
    if family == "E":
        return (eps * (p + q) * D, p * q * D * D)
    if family == "Eprime":
        return (-2 * eps * (p + q) * D, 4 ** m * D * D)
    raise ValueError("family must be 'E' or 'Eprime', got %r" % (family,))
