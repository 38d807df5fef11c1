# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the Jacobi symbol and the p-adic residue-disc search.

Semantics mirror selmergraph._pure exactly.  The disc search here works in a
fixed modulus l^J < 2^62 chosen from the depth bound; whenever a node would
need more precision than that it returns -2 and the backend re-runs the call
on the exact big-integer reference implementation.
"""

BACKEND_NAME = "compiled"

from . import _pure as _ref

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64
ctypedef long long i64


cdef inline u64 mulmod(u64 a, u64 b, u64 m) noexcept:
    return <u64>((<u128>a * b) % m)


cdef int _jacobi_c(i64 a, i64 n) noexcept:
    cdef int result = 1
    cdef i64 t
    while a:
        while a % 2 == 0:
            a //= 2
            t = n % 8
            if t == 3 or t == 5:
                result = -result
        t = a
        a = n
        n = t
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    if n == 1:
        return result
    return 0


def jacobi(a, n):
    """Jacobi symbol (a/n) for odd positive n."""
    aa = a % n
    if n >> 62:
        return _ref.jacobi(aa, n)
    return _jacobi_c(<i64> aa, <i64> n)


cdef inline int _decide_unit_c(int e, u64 unit, int l) noexcept:
    if e & 1:
        return 0
    if l == 2:
        return 1 if unit % 8 == 1 else 0
    return 1 if _jacobi_c(<i64> (unit % l), l) == 1 else 0


cdef int _disc_c(u64 A, u64 B, u64 C, u64 z0, int k, int l,
                 int kmax, int J, u64 M) noexcept:
    # Same decision rules as _pure._disc_search, on residues mod M = l^J.
    # A modular zero only bounds the valuation below by J; both of its uses
    # stay sound (Hensel with the lower bound, the stable-class test with
    # e1 = J instead of the exact derivative valuation).  In the rare corner
    # where that is too conservative the search just branches further and
    # ends in -1 / -2 rather than a wrong verdict.
    cdef int margin = 3 if l == 2 else 1
    if k > kmax:
        return -1
    if k + margin > J:
        return -2
    cdef u64 zz = mulmod(z0, z0, M)
    cdef u64 g0 = (mulmod(mulmod(A, zz, M) + B, zz, M) + C) % M
    cdef int e = J
    cdef u64 unit = g0
    cdef int exact = 0
    cdef int need = 0
    if g0 != 0:
        e = 0
        while unit % l == 0:
            unit //= l
            e += 1
        exact = 1
        need = e + margin
        if k >= need:
            return _decide_unit_c(e, unit, l)
    cdef u64 g1 = mulmod((mulmod(mulmod(A, zz, M), 4, M) + mulmod(B, 2, M)) % M,
                         z0, M)
    cdef int e1 = J
    cdef u64 u1 = g1
    if g1 != 0:
        e1 = 0
        while u1 % l == 0:
            u1 //= l
            e1 += 1
    if e > 2 * e1:
        return 1
    if exact and 2 * k >= need and k + e1 >= need:
        return _decide_unit_c(e, unit, l)
    cdef u64 step = 1
    cdef int i
    for i in range(k):
        step *= l
    cdef int undecided = 0
    cdef int res
    cdef int r
    for r in range(l):
        res = _disc_c(A, B, C, z0 + r * step, k + 1, l, kmax, J, M)
        if res == 1:
            return 1
        if res == -2:
            return -2
        if res == -1:
            undecided = -1
    return undecided


def quartic_padic_solvable(d, c0, c2, c4, l, kmax):
    """1/0 solvability of d*w^2 = c0 + c2 z^2 + c4 z^4 over Q_l.

    Returns -1 when the depth bound kmax was exhausted undecided and -2 when
    the fixed-width fast path lacks precision (caller falls back to _pure).
    """
    cdef int margin = 3 if l == 2 else 1
    cdef int ll = l
    cdef int J = 0
    cdef u64 M = 1
    cdef u64 LIMIT = (<u64> 1) << 62
    while J < kmax + margin and M < LIMIT // ll:
        M *= ll
        J += 1
    cdef u64 A = (d * c4) % M
    cdef u64 B = (d * c2) % M
    cdef u64 C = (d * c0) % M
    cdef int undecided = 0
    cdef int res
    cdef int r
    for r in range(ll):
        res = _disc_c(A, B, C, r, 1, ll, kmax, J, M)
        if res == 1:
            return 1
        if res == -2:
            return -2
        if res == -1:
            undecided = -1
    res = _disc_c(C, B, A, 0, 1, ll, kmax, J, M)
    if res == 1:
        return 1
    if res == -2:
        return -2
    if res == -1 or undecided == -1:
        return -1
    return 0
