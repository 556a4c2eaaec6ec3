"""Morphism modules of elementary factorizations.

Everything is driven by the gcd decomposition of a divisor pair
(v1, v2) of W:

    a = (v1, v2),  b = v1/a,  c = v2/a,  d = W/(abc),
    s = (a, d),    a' = a/s,  d' = d/s,

so that v1 = s a' b, v2 = s a' c, u1 = s c d', u2 = s b d' and
(b, c) = (a', d') = (1).  Both graded Hom modules in the homotopy
category are cyclic with annihilator <s> = <v1, u1, v2, u2>.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .divisors import FactoredElement, NormalizedDivisor, Potential, gcd
from .errors import (
    CompositionMismatch,
    NotADivisor,
    NotIntegerBackend,
    NonDivisorCoefficient,
    PotentialMismatch,
)
from .factorizations import (
    ElementaryFactorization,
    GradedMorphismMatrix,
    MatrixFactorization,
)

Coefficient = Union[int, FactoredElement]


# --------------------------------------------------------------------------
# gcd decomposition of a divisor pair
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GcdDecomposition:
    v1: NormalizedDivisor
    v2: NormalizedDivisor
    a: NormalizedDivisor
    b: NormalizedDivisor
    c: NormalizedDivisor
    d: NormalizedDivisor
    s: NormalizedDivisor
    a_prime: NormalizedDivisor
    d_prime: NormalizedDivisor

    @property
    def u1(self) -> NormalizedDivisor:
        return self.v1.complement()

    @property
    def u2(self) -> NormalizedDivisor:
        return self.v2.complement()


def _coerce_divisor(v, w: Potential | None) -> NormalizedDivisor:
    if isinstance(v, NormalizedDivisor):
        return v
    if w is None:
        raise NotADivisor("a potential is required for non-normalized input")
    return w.divisor(v)


def gcd_decomposition(v1, v2, w: Potential | None = None) -> GcdDecomposition:
    v1 = _coerce_divisor(v1, w)
    v2 = _coerce_divisor(v2, w)
    if v1.potential != v2.potential:
        raise PotentialMismatch("divisors over different potentials")
    pot = v1.potential
    a = v1.gcd(v2)
    b = v1.divide(a)
    c = v2.divide(a)
    d = pot.w_divisor().divide(a.mul(b).mul(c))
    s = a.gcd(d)
    return GcdDecomposition(
        v1, v2, a, b, c, d, s, a.divide(s), d.divide(s)
    )


def alpha(v1, v2, w: Potential | None = None) -> NormalizedDivisor:
    """alpha_W(v1, v2) = (v1, u1, v2, u2) = <s>; symmetric in v1, v2."""
    dec = gcd_decomposition(v1, v2, w)
    return dec.s


# --------------------------------------------------------------------------
# Hom modules
# --------------------------------------------------------------------------

GeneratorMatrix = tuple[
    tuple[Optional[FactoredElement], Optional[FactoredElement]],
    tuple[Optional[FactoredElement], Optional[FactoredElement]],
]


@dataclass(frozen=True)
class HomModuleDescription:
    """Hom of fixed parity in the homotopy category: a cyclic module
    R/<s> on the generator epsilon_0 = diag(c, b) or
    epsilon_1 = [[0, a'], [-d', 0]]."""

    source: ElementaryFactorization
    target: ElementaryFactorization
    parity: int
    generator: GeneratorMatrix
    annihilator: NormalizedDivisor

    def is_zero(self) -> bool:
        return self.annihilator.is_unit()


def hom_module(
    e1: ElementaryFactorization, e2: ElementaryFactorization, parity: int
) -> HomModuleDescription:
    if e1.potential != e2.potential:
        raise PotentialMismatch("Hom needs a common potential")
    dec = gcd_decomposition(e1.v, e2.v)
    if parity == 0:
        gen: GeneratorMatrix = (
            (dec.c.to_factored(), None),
            (None, dec.b.to_factored()),
        )
    elif parity == 1:
        gen = (
            (None, dec.a_prime.to_factored()),
            (dec.d_prime.to_factored(-1), None),
        )
    else:
        raise CompositionMismatch("parity must be 0 or 1")
    return HomModuleDescription(e1, e2, parity, gen, dec.s)


def end_ring_presentation(
    e: ElementaryFactorization,
) -> tuple[NormalizedDivisor, NormalizedDivisor]:
    """(d, t) with End(e_v) = (R/<d>)[w] / <w^2 + t>, where d = (u, v)
    and t = [u, v] / (u, v)."""
    d = e.v.gcd(e.u)
    t = e.v.lcm(e.u).divide(d)
    return d, t


# --------------------------------------------------------------------------
# morphism classes and composition
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MorphismClass:
    """A multiple of the parity generator of Hom(source, target).

    On the integer backend the coefficient is a residue modulo the
    annihilator; on the abstract backend it is a factored multiplier
    (0 denotes the zero morphism on either backend).
    """

    source: ElementaryFactorization
    target: ElementaryFactorization
    parity: int
    coeff: Coefficient


def _reduce_coeff(
    coeff: Coefficient, ann: NormalizedDivisor
) -> Coefficient:
    if isinstance(coeff, int):
        if ann.potential.is_integer_backend():
            return coeff % ann.value()
        return 0 if coeff == 0 else coeff
    if ann.to_factored().divides(coeff):
        return 0
    return coeff


def morphism(
    e1: ElementaryFactorization,
    e2: ElementaryFactorization,
    parity: int,
    coeff: Coefficient,
) -> MorphismClass:
    if e1.potential != e2.potential:
        raise PotentialMismatch("morphism needs a common potential")
    if parity not in (0, 1):
        raise CompositionMismatch("parity must be 0 or 1")
    ann = alpha(e1.v, e2.v)
    if e1.potential.is_integer_backend():
        if isinstance(coeff, FactoredElement):
            coeff = coeff.value()
        coeff = coeff % ann.value()
    else:
        if isinstance(coeff, int):
            if coeff in (1, -1):
                coeff = FactoredElement.one(coeff)
            elif coeff != 0:
                raise NonDivisorCoefficient(
                    "abstract coefficients must be factored multipliers"
                )
        coeff = _reduce_coeff(coeff, ann)
    return MorphismClass(e1, e2, parity, coeff)


def identity_class(e: ElementaryFactorization) -> MorphismClass:
    one: Coefficient = 1 if e.potential.is_integer_backend() else FactoredElement.one()
    return morphism(e, e, 0, one)


def _class_factor(
    kf: int, kg: int, d12: GcdDecomposition, d23: GcdDecomposition
) -> tuple[int, FactoredElement, int]:
    """(parity, |factor|, sign) for the generator composition relations."""
    v1, v2, v3 = d12.v1, d12.v2, d23.v2
    u1, u2 = v1.complement(), v2.complement()
    try:
        if (kf, kg) == (0, 0):
            num = v2.to_factored() * v1.gcd(v3).to_factored()
            den = d12.a.to_factored() * d23.a.to_factored()
            return 0, num.divide(den), 1
        if (kf, kg) == (1, 0):
            num = v2.to_factored() * u1.gcd(v3).to_factored()
            den = u1.gcd(v2).to_factored() * d23.a.to_factored()
            return 1, num.divide(den), 1
        if (kf, kg) == (0, 1):
            num = v1.to_factored() * u1.gcd(v3).to_factored()
            den = d12.a.to_factored() * u2.gcd(v3).to_factored()
            return 1, num.divide(den), 1
        num = u1.to_factored() * v1.gcd(v3).to_factored()
        den = u2.gcd(v3).to_factored() * u1.gcd(v2).to_factored()
        return 0, num.divide(den), -1
    except NotADivisor as exc:  # the relations guarantee integrality
        raise NonDivisorCoefficient(str(exc)) from exc


def compose(g: MorphismClass, f: MorphismClass) -> MorphismClass:
    """g o f through the generator composition relations, reduced into
    canonical form modulo the annihilator of the composite Hom module."""
    if f.target != g.source:
        raise CompositionMismatch("target of f must equal source of g")
    e1, e3 = f.source, g.target
    d12 = gcd_decomposition(f.source.v, f.target.v)
    d23 = gcd_decomposition(g.source.v, g.target.v)
    s13 = alpha(e1.v, e3.v)
    parity, factor, sign = _class_factor(f.parity, g.parity, d12, d23)
    if f.coeff == 0 or g.coeff == 0:
        return MorphismClass(e1, e3, parity, 0)
    if isinstance(f.coeff, int) and isinstance(g.coeff, int):
        raw = sign * f.coeff * g.coeff * factor.value()
        return MorphismClass(e1, e3, parity, raw % s13.value())
    raw_fe = f.coeff * g.coeff * factor
    if sign < 0:
        raw_fe = raw_fe.negate()
    return MorphismClass(e1, e3, parity, _reduce_coeff(raw_fe, s13))


# --------------------------------------------------------------------------
# constructive Bezout solvers
# --------------------------------------------------------------------------


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = ax + by, g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def solve_bezout_linear(
    s: int, x: int, y: int, z: int
) -> Optional[tuple[int, int, int]]:
    """Solve s*(g1*x + g2*y) + g3*z = 1 over the integers.

    Solvable iff (s*(x, y), z) = (1); returns None otherwise.  The
    construction goes through t = (x, y) first, then splits t.
    """
    t, tx, ty = _xgcd(x, y)
    g, g4, g3 = _xgcd(s * t, z)
    if g != 1:
        return None
    g1, g2 = tx * g4, ty * g4
    assert s * (g1 * x + g2 * y) + g3 * z == 1
    return g1, g2, g3


# --------------------------------------------------------------------------
# explicit isomorphism witnesses (integer backend)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IsoWitness:
    """Cocycles f12: e1 -> e2 and f21: e2 -> e1 with homotopies g, h
    realizing f21 f12 = 1 + d(g) and f12 f21 = 1 + d(h) exactly."""

    f12: GradedMorphismMatrix
    f21: GradedMorphismMatrix
    g: GradedMorphismMatrix
    h: GradedMorphismMatrix
    m1: MatrixFactorization
    m2: MatrixFactorization


def even_iso_conditions(dec: GcdDecomposition) -> bool:
    """a', b, c, d' pairwise coprime and (bc, s) = (1)."""
    parts = [dec.a_prime, dec.b, dec.c, dec.d_prime]
    for i in range(4):
        for j in range(i + 1, 4):
            if not parts[i].gcd(parts[j]).is_unit():
                return False
    return dec.b.mul(dec.c).gcd(dec.s).is_unit()


def odd_iso_conditions(dec: GcdDecomposition) -> bool:
    """a', b, c, d' pairwise coprime and (a'd', s) = (1)."""
    parts = [dec.a_prime, dec.b, dec.c, dec.d_prime]
    for i in range(4):
        for j in range(i + 1, 4):
            if not parts[i].gcd(parts[j]).is_unit():
                return False
    return dec.a_prime.mul(dec.d_prime).gcd(dec.s).is_unit()


def iso_witness(
    e1: ElementaryFactorization, e2: ElementaryFactorization
) -> Optional[IsoWitness]:
    """Construct an even isomorphism witness, or None when e1 and e2 are
    not isomorphic in the even homotopy category."""
    if e1.potential != e2.potential:
        raise PotentialMismatch("witness needs a common potential")
    if not e1.potential.is_integer_backend():
        raise NotIntegerBackend("witnesses need integer residue arithmetic")
    dec = gcd_decomposition(e1.v, e2.v)
    if not even_iso_conditions(dec):
        return None
    s = dec.s.value()
    ap, b, c, dp = (x.value() for x in (dec.a_prime, dec.b, dec.c, dec.d_prime))
    s1, s2 = e1.unit, e2.unit

    # gamma * bc - s*g4 = 1, then split s*g4 along each Bezout pair
    gbc, gamma, negg4 = _xgcd(b * c, s)
    assert gbc == 1
    g4 = -negg4
    g1, gt1, gt2 = _xgcd(ap * b, c * dp)
    h1, ht1, ht2 = _xgcd(ap * c, b * dp)
    assert g1 == h1 == 1  # forced by pairwise coprimality

    f12 = GradedMorphismMatrix(0, (((gamma * c,),), ((s1 * s2 * gamma * b,),)))
    f21 = GradedMorphismMatrix(0, (((b,),), ((s1 * s2 * c,),)))
    g = GradedMorphismMatrix(1, (((s1 * gt1 * g4,),), ((s1 * gt2 * g4,),)))
    h = GradedMorphismMatrix(1, (((s2 * ht1 * g4,),), ((s2 * ht2 * g4,),)))
    return IsoWitness(f12, f21, g, h, e1.as_matrix(), e2.as_matrix())
