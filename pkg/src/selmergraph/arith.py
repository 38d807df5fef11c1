"""Exact integer arithmetic primitives used throughout the package.

Legendre/Jacobi symbols, small valuations, deterministic primality, and
square-free factorization.  All functions operate on plain Python ints and
never approximate.
"""

from __future__ import annotations

from . import _backend


class NotSquareFree(ValueError):
    """A square-free integer was required but a repeated factor was found."""


# deterministic Miller-Rabin witnesses, valid far beyond anything we factor
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, l: int) -> int:
    """Legendre symbol (a/l) for an odd prime l; 0 exactly when l | a."""
    if l < 3 or l % 2 == 0 or not is_prime(l):
        raise ValueError("modulus must be an odd prime, got %r" % (l,))
    return _backend.jacobi(a % l, l)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n; (a/1) = 1 for every a."""
    if n < 1 or n % 2 == 0:
        raise ValueError("modulus must be odd and positive, got %r" % (n,))
    return _backend.jacobi(a, n)


def v2(a: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if a == 0:
        raise ValueError("v2(0) is undefined")
    return (a & -a).bit_length() - 1


def vl(a: int, l: int) -> int:
    """l-adic valuation of a nonzero integer, l >= 2."""
    if a == 0:
        raise ValueError("valuation of 0 is undefined")
    a = abs(a)
    e = 0
    while a % l == 0:
        a //= l
        e += 1
    return e


def factor_squarefree(a: int) -> list[int]:
    """Prime factors of a square-free positive integer, increasing.

    Trial division; raises NotSquareFree on a repeated prime factor.
    """
    if a < 1:
        raise ValueError("argument must be positive, got %r" % (a,))
    factors = []
    rest = a
    d = 2
    while d * d <= rest:
        if rest % d == 0:
            rest //= d
            if rest % d == 0:
                raise NotSquareFree("%d divides %d more than once" % (d, a))
            factors.append(d)
        d += 1 if d == 2 else 2
    if rest > 1:
        factors.append(rest)
    return factors
