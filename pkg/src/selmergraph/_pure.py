"""Pure-Python reference kernels for the hot inner loops.

The compiled module ``selmergraph._fast`` exposes the same callables with the
same semantics; ``selmergraph._backend`` picks one implementation at import
time.  Everything here is exact integer arithmetic on plain Python ints, so
this module is also the correctness reference the compiled kernels are tested
against.
"""

BACKEND_NAME = "pure"


def jacobi(a, n):
    """Jacobi symbol (a/n) for odd positive n via the reciprocity ladder."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _vl(x, l):
    # l-adic valuation of a nonzero integer, together with the unit part
    e = 0
    while x % l == 0:
        x //= l
        e += 1
    return e, x


def _decide_unit(e, unit, l):
    # squareness of l^e * unit once the class is known to be constant
    if e % 2 == 1:
        return 0
    if l == 2:
        return 1 if unit % 8 == 1 else 0
    return 1 if jacobi(unit % l, l) == 1 else 0


def _disc_search(A, B, C, z0, k, l, kmax):
    """Decide solvability of Y^2 = A z^4 + B z^2 + C on the disc z = z0 (mod l^k).

    Returns 1 (a Q_l-point with z in the disc exists), 0 (none exists), or
    -1 (undecided within depth kmax; caller turns that into an error).

    Decision rules, each valid for the whole disc:
      * exact root at the representative: point with Y = 0;
      * stable square class: across the disc, G moves by valuation at least
        min(k + v(G'(z0)), 2k) (the Taylor tail has integral coefficients),
        so once that clears v(G(z0)) + 1 (+3 when l = 2) the unit class of G
        is constant (mod l, respectively mod 8) and squareness is settled;
      * Hensel: v(G(z0)) > 2 v(G'(z0)) forces a root of G in Z_l, hence a
        Y = 0 point (the root need not stay inside the disc; solvability is
        over all of Z_l so that is still a certificate);
      * otherwise split the disc into its l children one level deeper.
    """
    if k > kmax:
        return -1
    zz = z0 * z0
    g0 = (A * zz + B) * zz + C
    if g0 == 0:
        return 1
    e, unit = _vl(g0, l)
    need = e + (3 if l == 2 else 1)
    if k >= need:
        return _decide_unit(e, unit, l)
    g1 = (4 * A * zz + 2 * B) * z0
    if g1 != 0:
        e1, _ = _vl(g1, l)
        if e > 2 * e1:
            return 1
        if 2 * k >= need and k + e1 >= need:
            return _decide_unit(e, unit, l)
    elif 2 * k >= need:
        return _decide_unit(e, unit, l)
    step = l ** k
    undecided = 0
    for r in range(l):
        res = _disc_search(A, B, C, z0 + r * step, k + 1, l, kmax)
        if res == 1:
            return 1
        if res == -1:
            undecided = -1
    return undecided


def quartic_padic_solvable(d, c0, c2, c4, l, kmax):
    """Does d*w^2 = c0 + c2 z^2 + c4 z^4 have a Q_l-point (infinity included)?

    Multiplying through by d turns the question into squareness of
    G(z) = d*(c0 + c2 z^2 + c4 z^4); the reciprocal chart u = 1/z covers
    v(z) < 0 together with the points at infinity (u = 0).
    Returns 1, 0, or -1 (depth kmax exhausted somewhere).
    """
    A, B, C = d * c4, d * c2, d * c0
    undecided = 0
    for r in range(l):
        res = _disc_search(A, B, C, r, 1, l, kmax)
        if res == 1:
            return 1
        if res == -1:
            undecided = -1
    res = _disc_search(C, B, A, 0, 1, l, kmax)
    if res == 1:
        return 1
    return -1 if undecided or res == -1 else 0
