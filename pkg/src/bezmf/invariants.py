"""Divisorial invariants and isomorphism decisions for elementaries.

For e = e_v write s = (v, u) with u = W/v, v' = v/s, u' = u/s and
m_i = ord_i(s).  Each prime index in I(s) lands in exactly one of

    I_x  (ord_i v' > 0),   I_y  (ord_i u' > 0),   I_z  (n_i = 2 m_i),

and the complete graded invariant is h(e) = (s, {I_x, I_y}); the
ordered variant (s, I_x, I_y) is complete for even isomorphism.  The
value of x on I_x (and of y on I_y) is max(m_i, n_i - 2 m_i); together
with the essence z this determines s through a per-prime inversion.

Everything is computed prime-by-prime from exponent vectors, so the
brute-force census stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

from .divisors import NormalizedDivisor, Potential
from .errors import InconsistentTriple, NotADivisor, PotentialMismatch
from .factorizations import ElementaryFactorization
from .homology import (
    even_iso_conditions,
    gcd_decomposition,
    odd_iso_conditions,
)


@dataclass(frozen=True)
class InvariantData:
    s: NormalizedDivisor
    v_prime: NormalizedDivisor
    u_prime: NormalizedDivisor
    x: NormalizedDivisor
    y: NormalizedDivisor
    z: NormalizedDivisor
    i_s: frozenset[int]
    i_x: frozenset[int]
    i_y: frozenset[int]
    i_z: frozenset[int]
    m: tuple[int, ...]


@dataclass(frozen=True)
class DivisorialInvariant:
    """h(e) = (s, {I_x, I_y}) with the unordered pair stored canonically
    (lexicographically smaller member first)."""

    s: NormalizedDivisor
    partition: tuple[tuple[int, ...], tuple[int, ...]]

    def sort_key(self):
        return (self.s.exps, self.partition)


@dataclass(frozen=True)
class EvenDivisorialInvariant:
    """h_even(e) = (s, I_x, I_y), an ordered pair of index sets."""

    s: NormalizedDivisor
    i_x: frozenset[int]
    i_y: frozenset[int]

    def sort_key(self):
        return (self.s.exps, tuple(sorted(self.i_x)), tuple(sorted(self.i_y)))


def invariant(e: ElementaryFactorization) -> InvariantData:
    pot = e.potential
    orders = pot.orders
    k = e.v.exps
    m = tuple(min(ki, ni - ki) for ki, ni in zip(k, orders))
    s = NormalizedDivisor(pot, m)
    v_prime = e.v.divide(s)
    u_prime = e.u.divide(s)
    i_s, i_x, i_y, i_z = set(), set(), set(), set()
    x_exp = [0] * pot.size
    y_exp = [0] * pot.size
    z_exp = [0] * pot.size
    for i, (mi, ni) in enumerate(zip(m, orders)):
        if mi == 0:
            continue
        i_s.add(i)
        rest = ni - 2 * mi
        if rest == 0:
            i_z.add(i)
            z_exp[i] = mi
        elif v_prime.exps[i] > 0:
            i_x.add(i)
            x_exp[i] = max(mi, rest)
        else:
            i_y.add(i)
            y_exp[i] = max(mi, rest)
    return InvariantData(
        s,
        v_prime,
        u_prime,
        NormalizedDivisor(pot, tuple(x_exp)),
        NormalizedDivisor(pot, tuple(y_exp)),
        NormalizedDivisor(pot, tuple(z_exp)),
        frozenset(i_s),
        frozenset(i_x),
        frozenset(i_y),
        frozenset(i_z),
        m,
    )


def h(e: ElementaryFactorization) -> DivisorialInvariant:
    data = invariant(e)
    pair = sorted([tuple(sorted(data.i_x)), tuple(sorted(data.i_y))])
    return DivisorialInvariant(data.s, (pair[0], pair[1]))


def h_even(e: ElementaryFactorization) -> EvenDivisorialInvariant:
    data = invariant(e)
    return EvenDivisorialInvariant(data.s, data.i_x, data.i_y)


# --------------------------------------------------------------------------
# isomorphism decisions (gcd-criterion route)
# --------------------------------------------------------------------------


def _check_same(e1: ElementaryFactorization, e2: ElementaryFactorization):
    if e1.potential != e2.potential:
        raise PotentialMismatch("isomorphism decisions are fixed-W")


def _iso_by_parts(
    k1: tuple[int, ...], k2: tuple[int, ...], orders: tuple[int, ...], odd: bool
) -> bool:
    # The pairwise-coprimality and gcd conditions of the isomorphism
    # criterion, evaluated componentwise: per prime at most one of
    # (a', b, c, d') may carry it, and s must avoid bc (resp. a'd').
    for x1, x2, n in zip(k1, k2, orders):
        a = min(x1, x2)
        b = x1 - a
        c = x2 - a
        d = n - a - b - c
        s = min(a, d)
        ap, dp = a - s, d - s
        if sum(1 for t in (ap, b, c, dp) if t > 0) > 1:
            return False
        blocker = ap + dp if odd else b + c
        if s > 0 and blocker > 0:
            return False
    return True


def iso_even(e1: ElementaryFactorization, e2: ElementaryFactorization) -> bool:
    """Even isomorphism: a', b, c, d' pairwise coprime and (bc, s) = (1)."""
    _check_same(e1, e2)
    return _iso_by_parts(e1.v.exps, e2.v.exps, e1.potential.orders, odd=False)


def iso_odd(e1: ElementaryFactorization, e2: ElementaryFactorization) -> bool:
    """Odd isomorphism: a', b, c, d' pairwise coprime and (a'd', s) = (1)."""
    _check_same(e1, e2)
    return _iso_by_parts(e1.v.exps, e2.v.exps, e1.potential.orders, odd=True)


def iso_graded(e1: ElementaryFactorization, e2: ElementaryFactorization) -> bool:
    return iso_even(e1, e2) or iso_odd(e1, e2)


def iso_even_by_decomposition(
    e1: ElementaryFactorization, e2: ElementaryFactorization
) -> bool:
    """The same criterion through the full gcd decomposition objects;
    kept as an independent slow route for cross-validation."""
    _check_same(e1, e2)
    return even_iso_conditions(gcd_decomposition(e1.v, e2.v))


def iso_odd_by_decomposition(
    e1: ElementaryFactorization, e2: ElementaryFactorization
) -> bool:
    _check_same(e1, e2)
    return odd_iso_conditions(gcd_decomposition(e1.v, e2.v))


# --------------------------------------------------------------------------
# essence and essential reduction
# --------------------------------------------------------------------------


def essence(e: ElementaryFactorization) -> NormalizedDivisor:
    return invariant(e).z


def essential_reduction(
    e: ElementaryFactorization,
) -> tuple[NormalizedDivisor, ElementaryFactorization]:
    """(z, essred(e)) with essred(e) = e_{v/z} essential over W/z^2.

    The primes of I_z drop to order zero and disappear from the reduced
    potential; (z, W/z^2) = (1) always holds.
    """
    data = invariant(e)
    z = data.z
    if z.is_unit():
        return z, e
    reduced = e.potential.drop_primes(sorted(data.i_z))
    kept = [i for i in range(e.potential.size) if i not in data.i_z]
    v_red = tuple(e.v.exps[i] - z.exps[i] for i in kept)
    return z, ElementaryFactorization(NormalizedDivisor(reduced, v_red), e.unit)


def _invert_order(o: int, n: int) -> int:
    """Recover m from o = max(m, n - 2m), preferring the m = o branch.

    Both candidate preimages satisfy 3*o >= n; the printed branch rule
    keeps m = o whenever it is a legal multiplicity (n - 2m >= 1) and
    falls back to (n - o)/2 otherwise.
    """
    candidates = []
    if 1 <= o and n - 2 * o >= 1:
        candidates.append(o)
    if (n - o) % 2 == 0:
        m2 = (n - o) // 2
        if 1 <= m2 and n - 2 * m2 >= 1 and max(m2, n - 2 * m2) == o:
            candidates.append(m2)
    if not candidates:
        raise InconsistentTriple(f"no multiplicity yields order {o} under n = {n}")
    return candidates[0]


def reconstruct_s(x, y, z, w: Potential) -> NormalizedDivisor:
    """Rebuild s from (x, y, z) by inverting the per-prime order maps.

    Requires the triple to arise from some elementary factorization of W;
    raises InconsistentTriple otherwise.
    """
    x, y, z = (d if isinstance(d, NormalizedDivisor) else w.divisor(d) for d in (x, y, z))
    for d in (x, y, z):
        if d.potential != w:
            raise NotADivisor("triple components must be divisors of W")
    m = [0] * w.size
    orders = w.orders
    for i in range(w.size):
        hits = [d.exps[i] > 0 for d in (x, y, z)]
        if sum(hits) > 1:
            raise InconsistentTriple("x, y, z must have disjoint supports")
        if z.exps[i] > 0:
            if orders[i] != 2 * z.exps[i]:
                raise InconsistentTriple(
                    f"essence exponent at index {i} must be n_i / 2"
                )
            m[i] = z.exps[i]
        elif x.exps[i] > 0:
            m[i] = _invert_order(x.exps[i], orders[i])
        elif y.exps[i] > 0:
            m[i] = _invert_order(y.exps[i], orders[i])
    return NormalizedDivisor(w, tuple(m))
