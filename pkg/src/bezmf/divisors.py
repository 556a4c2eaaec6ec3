"""Exact arithmetic on the divisor lattice of a GCD/Bezout domain.

Ring elements are kept in factored form: a finite prime -> exponent map
together with a unit datum.  Two backends share the representation:

* abstract: primes are opaque symbol names, no residue arithmetic;
* integer:  primes are positive prime integers, full residue arithmetic.

All values are immutable and all operations are pure functions, so
everything here is safe to share between threads.
"""

from __future__ import annotations

import itertools
import json
import os
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    BackendMismatch,
    BoundExceeded,
    DuplicatePrime,
    NonPrimeInteger,
    NotADivisor,
    NotIntegerBackend,
    OrderBelowTwo,
    ParseError,
    ZeroElement,
)

Prime = Union[int, str]

DEFAULT_FACTOR_BOUND = 2**63
FACTOR_BOUND_ENV = "BEZMF_FACTOR_BOUND"


def _prime_key(p: Prime):
    # ints before symbols, each kind in natural order
    if isinstance(p, bool) or not isinstance(p, (int, str)):
        raise ParseError(f"prime id must be int or str, got {p!r}")
    return (0, p, "") if isinstance(p, int) else (1, 0, p)


def factor_bound() -> int:
    raw = os.environ.get(FACTOR_BOUND_ENV)
    return int(raw) if raw else DEFAULT_FACTOR_BOUND


# --------------------------------------------------------------------------
# factored elements
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FactoredElement:
    """A non-zero ring element up to units, as sign * prod(p^e).

    ``exps`` is a sorted tuple of (prime, exponent) pairs with all
    exponents positive (canonical sparse form).  ``sign`` is the unit
    datum; on the abstract backend it is a formal +-1 and association
    ignores it either way.
    """

    exps: tuple[tuple[Prime, int], ...] = ()
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ParseError(f"unit must be +1 or -1, got {self.sign!r}")
        seen = set()
        for p, e in self.exps:
            _prime_key(p)
            if p in seen:
                raise DuplicatePrime(f"prime {p!r} repeated")
            seen.add(p)
            if not isinstance(e, int) or e <= 0:
                raise ParseError(f"exponent of {p!r} must be a positive int")
        if list(self.exps) != sorted(self.exps, key=lambda pe: _prime_key(pe[0])):
            object.__setattr__(
                self, "exps", tuple(sorted(self.exps, key=lambda pe: _prime_key(pe[0])))
            )

    @classmethod
    def from_map(cls, mapping: Mapping[Prime, int], sign: int = 1) -> "FactoredElement":
        return cls(tuple((p, e) for p, e in mapping.items() if e != 0), sign)

    @classmethod
    def one(cls, sign: int = 1) -> "FactoredElement":
        return cls((), sign)

    # -- structure ---------------------------------------------------------

    @property
    def support(self) -> tuple[Prime, ...]:
        return tuple(p for p, _ in self.exps)

    def exponent(self, p: Prime) -> int:
        for q, e in self.exps:
            if q == p:
                return e
        return 0

    def as_dict(self) -> dict[Prime, int]:
        return dict(self.exps)

    def is_unit(self) -> bool:
        return not self.exps

    def is_associate(self, other: "FactoredElement") -> bool:
        return self.exps == other.exps

    def normalized(self) -> "FactoredElement":
        return self if self.sign == 1 else FactoredElement(self.exps, 1)

    def is_integer_backend(self) -> bool:
        return all(isinstance(p, int) for p, _ in self.exps)

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other: "FactoredElement") -> "FactoredElement":
        acc = self.as_dict()
        for p, e in other.exps:
            acc[p] = acc.get(p, 0) + e
        return FactoredElement.from_map(acc, self.sign * other.sign)

    def divide(self, other: "FactoredElement") -> "FactoredElement":
        """Exact quotient self / other; raises NotADivisor otherwise."""
        acc = self.as_dict()
        for p, e in other.exps:
            left = acc.get(p, 0) - e
            if left < 0:
                raise NotADivisor(f"{other} does not divide {self}")
            acc[p] = left
        return FactoredElement.from_map(acc, self.sign * other.sign)

    def divides(self, other: "FactoredElement") -> bool:
        return all(other.exponent(p) >= e for p, e in self.exps)

    def pow(self, k: int) -> "FactoredElement":
        if k < 0:
            raise NotADivisor("negative power leaves the divisor monoid")
        return FactoredElement(
            tuple((p, e * k) for p, e in self.exps) if k else (),
            self.sign if k % 2 else 1,
        )

    def negate(self) -> "FactoredElement":
        return FactoredElement(self.exps, -self.sign)

    def value(self) -> int:
        """Signed integer value; integer backend only."""
        if not self.is_integer_backend():
            raise NotIntegerBackend(f"{self} contains symbolic primes")
        out = self.sign
        for p, e in self.exps:
            out *= p**e
        return out

    def __str__(self) -> str:
        body = "*".join(f"{p}^{e}" if e > 1 else f"{p}" for p, e in self.exps)
        if not body:
            return "1" if self.sign == 1 else "-1"
        return body if self.sign == 1 else "-" + body


def gcd(a: FactoredElement, b: FactoredElement) -> FactoredElement:
    """Componentwise minimum of exponents, canonical positive unit."""
    out = {p: min(e, b.exponent(p)) for p, e in a.exps}
    return FactoredElement.from_map(out)


def lcm(a: FactoredElement, b: FactoredElement) -> FactoredElement:
    """Componentwise maximum; satisfies gcd*lcm = a*b up to units."""
    out = a.as_dict()
    for p, e in b.exps:
        out[p] = max(out.get(p, 0), e)
    return FactoredElement.from_map(out)


def gcd_many(items: Iterable[FactoredElement]) -> FactoredElement:
    items = list(items)
    if not items:
        raise ZeroElement("gcd of an empty family")
    acc = items[0].normalized()
    for x in items[1:]:
        acc = gcd(acc, x)
    return acc


def lcm_many(items: Iterable[FactoredElement]) -> FactoredElement:
    items = list(items)
    if not items:
        raise ZeroElement("lcm of an empty family")
    acc = items[0].normalized()
    for x in items[1:]:
        acc = lcm(acc, x)
    return acc


# --------------------------------------------------------------------------
# integer factorization (plumbing for the integer backend)
# --------------------------------------------------------------------------

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the 2^63 desk bound."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # deterministic sweep over increments; n is odd, composite, not a prime power of a tiny prime
    if n % 2 == 0:
        return 2
    from math import gcd as igcd

    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = igcd(abs(x - y), n)
        if d != n:
            return d
    raise BoundExceeded(f"failed to split {n}")  # pragma: no cover


def factor_integer(n: int, bound: int | None = None) -> FactoredElement:
    """Prime factorization of a non-zero integer with its sign.

    Trial division by small primes first, then deterministic primality
    checks with Pollard rho splitting for any large cofactor.
    """
    if n == 0:
        raise ZeroElement("0 has no factorization")
    limit = factor_bound() if bound is None else bound
    if abs(n) > limit:
        raise BoundExceeded(f"|{n}| exceeds factorization bound {limit}")
    sign = 1 if n > 0 else -1
    n = abs(n)
    out: dict[Prime, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 7
    wheel = itertools.cycle((4, 2, 4, 2, 4, 6, 2, 6))
    while p * p <= n and p < 10**6:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += next(wheel)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return FactoredElement.from_map(out, sign)


# --------------------------------------------------------------------------
# potentials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Potential:
    """A validated critically-finite W = W0 * prod p_i^{n_i} with n_i >= 2.

    ``critical`` holds the primes of order >= 2; ``noncritical`` the
    square-free part W0 (each prime of order exactly one).  Primes are
    stored sorted, critical block first, and are indexed 0-based in that
    order throughout the package.
    """

    critical: tuple[tuple[Prime, int], ...]
    noncritical: tuple[Prime, ...] = ()

    @property
    def primes(self) -> tuple[Prime, ...]:
        return tuple(p for p, _ in self.critical) + self.noncritical

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(n for _, n in self.critical) + (1,) * len(self.noncritical)

    @property
    def r(self) -> int:
        """Number of critical primes."""
        return len(self.critical)

    @property
    def size(self) -> int:
        return len(self.critical) + len(self.noncritical)

    def is_integer_backend(self) -> bool:
        return all(isinstance(p, int) for p in self.primes)

    def critical_indices_even(self) -> frozenset[int]:
        return frozenset(i for i, (_, n) in enumerate(self.critical) if n % 2 == 0)

    def critical_indices_odd(self) -> frozenset[int]:
        return frozenset(i for i, (_, n) in enumerate(self.critical) if n % 2 == 1)

    def w_factored(self) -> FactoredElement:
        return FactoredElement.from_map(dict(zip(self.primes, self.orders)))

    def w_value(self) -> int:
        return self.w_factored().value()

    def divisor_count(self) -> int:
        out = 1
        for n in self.orders:
            out *= n + 1
        return out

    def divisor(self, x) -> "NormalizedDivisor":
        """Coerce ``x`` (exponent sequence, FactoredElement or int) to a
        normalized divisor of this potential."""
        if isinstance(x, NormalizedDivisor):
            if x.potential != self:
                raise NotADivisor("divisor belongs to a different potential")
            return x
        if isinstance(x, int):
            x = factor_integer(x)
        if isinstance(x, FactoredElement):
            exps = []
            known = dict(zip(self.primes, self.orders))
            for p, e in x.exps:
                if p not in known:
                    raise NotADivisor(f"{p!r} is not a prime of W")
                if e > known[p]:
                    raise NotADivisor(f"{p}^{e} exceeds its order in W")
            exps = tuple(x.exponent(p) for p in self.primes)
            return NormalizedDivisor(self, exps)
        exps = tuple(int(k) for k in x)
        if len(exps) != self.size:
            raise NotADivisor("exponent vector length mismatch")
        for k, n in zip(exps, self.orders):
            if k < 0 or k > n:
                raise NotADivisor("exponent outside [0, n_i]")
        return NormalizedDivisor(self, exps)

    def one(self) -> "NormalizedDivisor":
        return NormalizedDivisor(self, (0,) * self.size)

    def w_divisor(self) -> "NormalizedDivisor":
        return NormalizedDivisor(self, self.orders)

    def all_divisors(self, bound: int = 10**6) -> Iterator["NormalizedDivisor"]:
        """All of A_W = prod {0..n_i} in lexicographic order."""
        if self.divisor_count() > bound:
            raise BoundExceeded(
                f"|A_W| = {self.divisor_count()} exceeds enumeration bound {bound}"
            )
        for exps in itertools.product(*(range(n + 1) for n in self.orders)):
            yield NormalizedDivisor(self, exps)

    def drop_primes(self, indices: Iterable[int]) -> "Potential":
        """The reduced potential with the given prime positions removed
        (orders sent to zero), as used for W / z_J^2."""
        drop = set(indices)
        crit = tuple(pe for i, pe in enumerate(self.critical) if i not in drop)
        non = tuple(
            p
            for j, p in enumerate(self.noncritical)
            if j + len(self.critical) not in drop
        )
        return Potential(crit, non)

    def to_json(self) -> dict:
        return {
            "primes": [{"p": p, "n": n} for p, n in self.critical],
            "noncritical": list(self.noncritical),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Potential":
        crit = [(entry["p"], int(entry["n"])) for entry in obj.get("primes", [])]
        non = list(obj.get("noncritical", []))
        return validate_potential(crit, non)

    def __str__(self) -> str:
        return str(self.w_factored())


def validate_potential(
    critical: Sequence[tuple[Prime, int]], noncritical: Sequence[Prime] = ()
) -> Potential:
    """Validate raw prime/order lists into a Potential.

    Raises DuplicatePrime, OrderBelowTwo, NonPrimeInteger or
    BackendMismatch as appropriate.
    """
    crit = [(p, int(n)) for p, n in critical]
    non = list(noncritical)
    allp = [p for p, _ in crit] + non
    kinds = {isinstance(p, str) for p in allp}
    if len(kinds) > 1:
        raise BackendMismatch("cannot mix symbolic and integer primes")
    seen = set()
    for p in allp:
        _prime_key(p)
        if p in seen:
            raise DuplicatePrime(f"prime {p!r} repeated in potential")
        seen.add(p)
        if isinstance(p, int) and not is_prime(p):
            raise NonPrimeInteger(f"{p} is not a positive prime")
    for p, n in crit:
        if n < 2:
            raise OrderBelowTwo(f"critical prime {p!r} has order {n} < 2")
    crit.sort(key=lambda pe: _prime_key(pe[0]))
    non.sort(key=_prime_key)
    return Potential(tuple(crit), tuple(non))


def reduction(w: Potential) -> FactoredElement:
    """W_red: exponents floor(n_i / 2) over the critical primes.

    Generates the critical ideal; every critical divisor of W divides it.
    """
    return FactoredElement.from_map({p: n // 2 for p, n in w.critical if n >= 2})


def is_critical_divisor(d: FactoredElement, w: Potential) -> bool:
    """True iff d is a non-unit with d^2 | W."""
    if d.is_unit():
        return False
    wf = w.w_factored()
    return all(2 * e <= wf.exponent(p) for p, e in d.exps)


# --------------------------------------------------------------------------
# normalized divisors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalizedDivisor:
    """The canonical representative prod p_i^{k_i}, 0 <= k_i <= n_i, of a
    principal ideal containing W.  Bijective with the exponent set A_W."""

    potential: Potential
    exps: tuple[int, ...]

    def __post_init__(self):
        if len(self.exps) != self.potential.size:
            raise NotADivisor("exponent vector length mismatch")
        for k, n in zip(self.exps, self.potential.orders):
            if not 0 <= k <= n:
                raise NotADivisor("exponent outside [0, n_i]")

    def ord(self, i: int) -> int:
        return self.exps[i]

    def complement(self) -> "NormalizedDivisor":
        """u = W / v."""
        return NormalizedDivisor(
            self.potential,
            tuple(n - k for k, n in zip(self.exps, self.potential.orders)),
        )

    def gcd(self, other: "NormalizedDivisor") -> "NormalizedDivisor":
        self._same(other)
        return NormalizedDivisor(
            self.potential, tuple(map(min, self.exps, other.exps))
        )

    def lcm(self, other: "NormalizedDivisor") -> "NormalizedDivisor":
        self._same(other)
        return NormalizedDivisor(
            self.potential, tuple(map(max, self.exps, other.exps))
        )

    def mul(self, other: "NormalizedDivisor") -> "NormalizedDivisor":
        self._same(other)
        return NormalizedDivisor(
            self.potential, tuple(a + b for a, b in zip(self.exps, other.exps))
        )

    def divide(self, other: "NormalizedDivisor") -> "NormalizedDivisor":
        self._same(other)
        return NormalizedDivisor(
            self.potential, tuple(a - b for a, b in zip(self.exps, other.exps))
        )

    def divides(self, other: "NormalizedDivisor") -> bool:
        self._same(other)
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def is_unit(self) -> bool:
        return not any(self.exps)

    def to_factored(self, sign: int = 1) -> FactoredElement:
        return FactoredElement.from_map(
            dict(zip(self.potential.primes, self.exps)), sign
        )

    def value(self) -> int:
        return self.to_factored().value()

    def _same(self, other: "NormalizedDivisor"):
        if self.potential != other.potential:
            raise NotADivisor("divisors over different potentials")

    def __str__(self) -> str:
        return str(self.to_factored())


def index_set(t: NormalizedDivisor) -> frozenset[int]:
    """I(t): the support of the exponent vector."""
    return frozenset(i for i, k in enumerate(t.exps) if k > 0)


# --------------------------------------------------------------------------
# text grammar:  term ("*" term)*,  term := symbol["^"int] | int["^"int]
# --------------------------------------------------------------------------

_TERM_RE = re.compile(r"^(?P<base>[A-Za-z_][A-Za-z_0-9]*|\d+)(\^(?P<exp>-?\d+))?$")


def _parse_terms(text: str) -> tuple[int, list[tuple[Prime, int, bool]]]:
    """-> (sign, [(base, exponent, had_caret)])."""
    body = text.strip().replace(" ", "")
    sign = 1
    while body.startswith("-"):
        sign = -sign
        body = body[1:]
    if not body:
        raise ParseError("empty element")
    out = []
    for raw in body.split("*"):
        m = _TERM_RE.match(raw)
        if not m:
            raise ParseError(f"bad term {raw!r}")
        base: Prime = m.group("base")
        if base.isdigit():
            base = int(base)
        exp = m.group("exp")
        out.append((base, int(exp) if exp is not None else 1, exp is not None))
    return sign, out


def parse_element(text: str) -> FactoredElement:
    """Parse an element in the factored grammar, e.g. ``p^2*q`` or ``-12``.

    Plain integer terms without a caret are factored; integers written
    with a caret are taken as primes verbatim.
    """
    sign, terms = _parse_terms(text)
    acc = FactoredElement.one(sign)
    for base, exp, had_caret in terms:
        if exp < 0:
            raise ParseError(f"negative exponent on {base!r}")
        if isinstance(base, int) and not had_caret:
            part = factor_integer(base).pow(exp)
        else:
            if isinstance(base, int) and not is_prime(base):
                raise NonPrimeInteger(f"{base} is not prime")
            part = FactoredElement.from_map({base: exp})
        acc = acc * part
    return acc


def parse_potential(text: str) -> Potential:
    """Parse a potential spec such as ``p^3*q^2``, ``2^3*3^3`` or ``216``."""
    elem = parse_element(text)
    if elem.is_unit():
        raise ParseError(f"W = {text!r} is a unit; a potential must not be")
    critical = [(p, e) for p, e in elem.exps if e >= 2]
    noncritical = [p for p, e in elem.exps if e == 1]
    return validate_potential(critical, noncritical)


def potential_to_json_str(w: Potential) -> str:
    return json.dumps(w.to_json(), sort_keys=True)
