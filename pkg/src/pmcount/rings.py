"""Commutative rings the counting engine is generic over.

Every algorithm in this package only needs ``+``, ``-``, ``*`` and ``==`` on
its scalars plus a ring descriptor that knows ``zero``, ``one`` and how to
coerce plain integers.  Three descriptors are provided:

* :data:`ZZ` -- arbitrary precision integers (plain Python ``int``),
* :class:`ModRing` -- integers modulo ``m`` (elements are :class:`ModInt`),
* :class:`PolynomialRing` -- polynomials in one variable truncated above a
  fixed degree (elements are :class:`TruncatedPolynomial`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from sympy import prime

__all__ = [
    "ZZ",
    "IntegerRing",
    "ModRing",
    "ModInt",
    "PolynomialRing",
    "TruncatedPolynomial",
    "poly_add",
    "poly_mul",
    "coefficient_of",
    "crt_combine",
    "coprime_moduli",
]


class IntegerRing:
    """The integers, backed by Python's unbounded ``int``."""

    zero = 0
    one = 1
    modulus = None

    def __call__(self, x: Any) -> int:
        if isinstance(x, ModInt):
            return x.value
        return int(x)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntegerRing)

    def __hash__(self) -> int:
        return hash("ZZ")

    def __repr__(self) -> str:
        return "ZZ"


ZZ = IntegerRing()


class ModInt:
    """Residue class ``value mod modulus`` with ``0 <= value < modulus``."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _other(self, o: Any) -> int:
        if isinstance(o, ModInt):
            if o.modulus != self.modulus:
                raise ValueError(f"modulus mismatch: {self.modulus} vs {o.modulus}")
            return o.value
        if isinstance(o, int):
            return o
        return NotImplemented

    def __add__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return v
        return ModInt(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return v
        return ModInt(self.value - v, self.modulus)

    def __rsub__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return v
        return ModInt(v - self.value, self.modulus)

    def __mul__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return v
        return ModInt(self.value * v, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ModInt(-self.value, self.modulus)

    def __eq__(self, o: object) -> bool:
        if isinstance(o, ModInt):
            return self.modulus == o.modulus and self.value == o.value
        if isinstance(o, int):
            return self.value == o % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.modulus))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"ModInt({self.value}, {self.modulus})"

    def __str__(self) -> str:
        return str(self.value)

    def __reduce__(self):
        return (ModInt, (self.value, self.modulus))


@dataclass(frozen=True)
class ModRing:
    """Integers modulo ``modulus``."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    @property
    def zero(self) -> ModInt:
        return ModInt(0, self.modulus)

    @property
    def one(self) -> ModInt:
        return ModInt(1, self.modulus)

    def __call__(self, x: Any) -> ModInt:
        if isinstance(x, ModInt):
            if x.modulus != self.modulus:
                raise ValueError(f"modulus mismatch: {x.modulus} vs {self.modulus}")
            return x
        return ModInt(int(x), self.modulus)

    def __repr__(self) -> str:
        return f"Z/{self.modulus}"


@dataclass(frozen=True)
class PolynomialRing:
    """``base[r] / (r^(cap+1))``: univariate polynomials truncated above ``cap``."""

    cap: int
    base: Any = ZZ

    @property
    def zero(self) -> "TruncatedPolynomial":
        return TruncatedPolynomial(self.base, self.cap, ())

    @property
    def one(self) -> "TruncatedPolynomial":
        return TruncatedPolynomial(self.base, self.cap, (self.base.one,))

    def __call__(self, x: Any) -> "TruncatedPolynomial":
        if isinstance(x, TruncatedPolynomial):
            _check_compatible(x, TruncatedPolynomial(self.base, self.cap, ()))
            return x
        return TruncatedPolynomial(self.base, self.cap, (self.base(x),))

    def variable(self) -> "TruncatedPolynomial":
        """The rank variable ``r`` itself."""
        return TruncatedPolynomial(self.base, self.cap, (self.base.zero, self.base.one))


class TruncatedPolynomial:
    """Dense polynomial over ``ring`` keeping only degrees ``0..cap``.

    ``coeffs`` always has exactly ``cap + 1`` entries; shorter input is
    zero-padded and longer input is truncated.
    """

    __slots__ = ("ring", "cap", "coeffs")

    def __init__(self, ring: Any, cap: int, coeffs: Iterable[Any]):
        if cap < 0:
            raise ValueError("cap must be non-negative")
        cs = [ring(c) for c in coeffs][: cap + 1]
        cs.extend([ring.zero] * (cap + 1 - len(cs)))
        self.ring = ring
        self.cap = cap
        self.coeffs = tuple(cs)

    def __add__(self, other):
        if not isinstance(other, TruncatedPolynomial):
            other = TruncatedPolynomial(self.ring, self.cap, (other,))
        return poly_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, TruncatedPolynomial):
            other = TruncatedPolynomial(self.ring, self.cap, (other,))
        _check_compatible(self, other)
        return TruncatedPolynomial(
            self.ring, self.cap, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __rsub__(self, other):
        return TruncatedPolynomial(self.ring, self.cap, (other,)) - self

    def __neg__(self):
        return TruncatedPolynomial(self.ring, self.cap, [-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, TruncatedPolynomial):
            other = TruncatedPolynomial(self.ring, self.cap, (other,))
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TruncatedPolynomial):
            return (
                self.cap == other.cap
                and self.ring == other.ring
                and self.coeffs == other.coeffs
            )
        if isinstance(other, int):
            return self == TruncatedPolynomial(self.ring, self.cap, (other,))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.cap, self.coeffs))

    def __getitem__(self, d: int):
        return coefficient_of(self, d)

    def degree(self) -> int:
        """Largest retained degree with a nonzero coefficient, -1 for zero."""
        for d in range(self.cap, -1, -1):
            if self.coeffs[d] != self.ring.zero:
                return d
        return -1

    def __repr__(self) -> str:
        terms = [
            f"{c}" if d == 0 else f"{c}*r^{d}"
            for d, c in enumerate(self.coeffs)
            if c != self.ring.zero
        ]
        body = " + ".join(terms) if terms else "0"
        return f"TruncatedPolynomial({body}; cap={self.cap})"


def _check_compatible(p: TruncatedPolynomial, q: TruncatedPolynomial) -> None:
    if p.cap != q.cap:
        raise ValueError(f"cap mismatch: {p.cap} vs {q.cap}")
    if p.ring != q.ring:
        raise ValueError(f"base ring mismatch: {p.ring!r} vs {q.ring!r}")


def poly_add(p: TruncatedPolynomial, q: TruncatedPolynomial) -> TruncatedPolynomial:
    _check_compatible(p, q)
    return TruncatedPolynomial(p.ring, p.cap, [a + b for a, b in zip(p.coeffs, q.coeffs)])


def poly_mul(p: TruncatedPolynomial, q: TruncatedPolynomial) -> TruncatedPolynomial:
    """Product of ``p`` and ``q`` with every degree above the cap discarded."""
    _check_compatible(p, q)
    cap, zero = p.cap, p.ring.zero
    out = [zero] * (cap + 1)
    a, b = p.coeffs, q.coeffs
    for i in range(cap + 1):
        ai = a[i]
        if ai == zero:
            continue
        for j in range(cap + 1 - i):
            out[i + j] = out[i + j] + ai * b[j]
    return TruncatedPolynomial(p.ring, cap, out)


def coefficient_of(p: TruncatedPolynomial, d: int):
    """Coefficient of ``r^d`` in ``p``."""
    if not 0 <= d <= p.cap:
        raise IndexError(f"degree {d} outside 0..{p.cap}")
    return p.coeffs[d]


def crt_combine(residues: Sequence[tuple[int, int]]) -> int:
    """Smallest non-negative integer congruent to each ``value mod modulus``.

    >>> crt_combine([(2, 3), (3, 5)])
    8
    """
    x, mod = 0, 1
    for value, m in residues:
        value, m = int(value), int(m)
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
        if math.gcd(mod, m) != 1:
            raise ValueError(f"moduli are not pairwise coprime (gcd({mod}, {m}) > 1)")
        # x + mod*t == value (mod m)
        t = ((value - x) * pow(mod, -1, m)) % m if m > 1 else 0
        x += mod * t
        mod *= m
    return x % mod


def coprime_moduli(n: int, lower_bound: int) -> list[int]:
    """For the first ``n`` primes, the smallest power of each exceeding ``lower_bound``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out = []
    for i in range(1, n + 1):
        p = prime(i)
        q = p
        while q <= lower_bound:
            q *= p
        out.append(q)
    return out
