"""The label extension ring ``R[U_m]`` and subset convolution.

An element of ``R[U_m]`` is a vector of ``2**m`` scalars indexed by subsets of
the label set ``{1..m}``; label ``i`` lives in bit ``i - 1`` of the index.
Multiplication only combines coordinates whose label sets are disjoint::

    (a * b)[X] = sum over Y subset of X of a[Y] * b[X - Y]

Besides the direct O(3^m) product, the module implements the ranked
zeta/Moebius pipeline (fast subset convolution, O(m^2 2^m) ring operations)
and the streaming top-coefficient formula that never materializes more than
a handful of polynomials at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .meter import NULL_METER
from .rings import ZZ, TruncatedPolynomial

__all__ = [
    "LabelRing",
    "LabelRingElement",
    "RankedTransform",
    "lr_add",
    "lr_mul_naive",
    "lr_mul_fast",
    "ranked_zeta",
    "ranked_mobius",
    "ranked_mobius_top",
    "product_top_coefficient",
    "singleton",
]


def popcount(x: int) -> int:
    return bin(x).count("1")


class LabelRingElement:
    """``sum_X coeffs[X] [X]`` over subsets ``X`` of ``{1..m}``."""

    __slots__ = ("ring", "m", "coeffs")

    def __init__(self, ring: Any, m: int, coeffs: Sequence[Any]):
        if len(coeffs) != 1 << m:
            raise ValueError(f"expected {1 << m} coefficients for m={m}, got {len(coeffs)}")
        self.ring = ring
        self.m = m
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_terms(cls, ring: Any, m: int, terms: dict) -> "LabelRingElement":
        """Build from ``{frozenset_of_labels: coefficient}`` with 1-based labels."""
        cs = [ring.zero] * (1 << m)
        for labels, c in terms.items():
            cs[_mask(labels, m)] = cs[_mask(labels, m)] + ring(c)
        return cls(ring, m, cs)

    def __getitem__(self, labels) -> Any:
        return self.coeffs[_mask(labels, self.m)]

    def embed(self, m: int) -> "LabelRingElement":
        """The same element viewed in ``R[U_m]`` for ``m >= self.m``."""
        if m < self.m:
            raise ValueError(f"cannot embed R[U_{self.m}] into R[U_{m}]")
        if m == self.m:
            return self
        pad = [self.ring.zero] * ((1 << m) - (1 << self.m))
        return LabelRingElement(self.ring, m, self.coeffs + tuple(pad))

    def top(self) -> Any:
        """Coordinate of the full label set ``{1..m}``."""
        return self.coeffs[-1]

    def _coerce(self, other) -> "LabelRingElement":
        if isinstance(other, LabelRingElement):
            return other
        return LabelRing(self.m, self.ring)(other)

    def __add__(self, other):
        return lr_add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        _check_same(self, other)
        return LabelRingElement(
            self.ring, self.m, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return LabelRingElement(self.ring, self.m, [-c for c in self.coeffs])

    def __mul__(self, other):
        return lr_mul_naive(self, self._coerce(other))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LabelRingElement):
            return self.m == other.m and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.m, self.coeffs))

    def __repr__(self) -> str:
        zero = self.ring.zero
        terms = []
        for x, c in enumerate(self.coeffs):
            if c != zero:
                labels = "".join(str(b + 1) for b in range(self.m) if x >> b & 1)
                terms.append(f"{c}[{labels or '{}'}]")
        return f"LabelRingElement(m={self.m}: {' + '.join(terms) or '0'})"


def _mask(labels, m: int) -> int:
    x = 0
    for label in labels:
        if not 1 <= label <= m:
            raise ValueError(f"label {label} outside 1..{m}")
        x |= 1 << (label - 1)
    return x


def _check_same(a: LabelRingElement, b: LabelRingElement) -> None:
    if a.m != b.m:
        raise ValueError(f"label count mismatch: {a.m} vs {b.m}")


@dataclass(frozen=True)
class LabelRing:
    """Ring descriptor for ``R[U_m]`` over ``base``."""

    m: int
    base: Any = ZZ

    @property
    def zero(self) -> LabelRingElement:
        return LabelRingElement(self.base, self.m, [self.base.zero] * (1 << self.m))

    @property
    def one(self) -> LabelRingElement:
        return singleton(self.base, self.m, 0, self.base.one)

    def __call__(self, x: Any) -> LabelRingElement:
        if isinstance(x, LabelRingElement):
            return x.embed(self.m)
        return singleton(self.base, self.m, 0, self.base(x))


def singleton(ring: Any, m: int, mask: int, value: Any) -> LabelRingElement:
    """``value [X]`` where ``X`` is given as a bitmask."""
    cs = [ring.zero] * (1 << m)
    cs[mask] = value
    return LabelRingElement(ring, m, cs)


@dataclass(frozen=True)
class RankedTransform:
    """Ranked zeta transform: ``polys[X]`` is the polynomial for subset ``X``."""

    m: int
    polys: tuple


# Raw kernels on coefficient lists.  Polynomials are plain lists whose
# length may be shorter than cap + 1 (missing high coefficients are zero).


def _zeta_raw(coeffs: Sequence[Any], m: int, zero: Any) -> list[list]:
    """Ranked zeta by Yates's algorithm; poly for X has length |X| + 1."""
    size = 1 << m
    polys = []
    for x in range(size):
        p = [zero] * (popcount(x) + 1)
        p[-1] = coeffs[x]
        polys.append(p)
    for b in range(m):
        bit = 1 << b
        for x in range(size):
            if x & bit:
                dst = polys[x]
                for t, c in enumerate(polys[x ^ bit]):
                    dst[t] = dst[t] + c
    return polys


def _mobius_raw(polys: list[list], m: int) -> list:
    """Full ranked Moebius inversion: coordinate X is [r^|X|] of the inverse.

    ``polys`` is consumed.  Every poly must have length >= |X| + 1 and no
    shorter than any of its subsets' polys.
    """
    size = 1 << m
    for b in range(m):
        bit = 1 << b
        for x in range(size):
            if x & bit:
                dst = polys[x]
                for t, c in enumerate(polys[x ^ bit]):
                    dst[t] = dst[t] - c
    return [polys[x][popcount(x)] for x in range(size)]


def _pmul(p: Sequence[Any], q: Sequence[Any], cap: int, zero: Any) -> list:
    """Truncated product of two raw polynomials."""
    if not p or not q:
        return []
    n = min(len(p) + len(q) - 1, cap + 1)
    out = [zero] * n
    lq = len(q)
    for i, a in enumerate(p):
        if i >= n:
            break
        if a == zero:
            continue
        for j in range(min(lq, n - i)):
            out[i + j] = out[i + j] + a * q[j]
    return out


def _padd_into(dst: list, src: Sequence[Any]) -> list:
    """dst += src, growing dst if needed; returns dst."""
    n_old = len(dst)
    for t in range(min(n_old, len(src))):
        dst[t] = dst[t] + src[t]
    if len(src) > n_old:
        dst.extend(src[n_old:])
    return dst


def _mul_naive_raw(a: Sequence[Any], b: Sequence[Any], m: int, zero: Any) -> list:
    out = []
    for x in range(1 << m):
        s = zero
        y = x
        while True:
            s = s + a[y] * b[x ^ y]
            if y == 0:
                break
            y = (y - 1) & x
        out.append(s)
    return out


def _mul_fast_raw(a: Sequence[Any], b: Sequence[Any], m: int, zero: Any, meter=NULL_METER) -> list:
    za = _zeta_raw(a, m, zero)
    zb = _zeta_raw(b, m, zero)
    transform_size = sum(len(p) for p in za)
    meter.alloc(2 * transform_size)
    prod = []
    for x in range(1 << m):
        p = _pmul(za[x], zb[x], m, zero)
        # Moebius needs [r^|X|] of every subset's poly: pad to |X| + 1.
        need = popcount(x) + 1
        if len(p) < need:
            p.extend([zero] * (need - len(p)))
        prod.append(p)
    meter.alloc(sum(len(p) for p in prod))
    meter.free(2 * transform_size)
    del za, zb
    live = sum(len(p) for p in prod)
    out = _mobius_raw(prod, m)
    meter.free(live)
    return out


# Public operations.


def lr_add(a: LabelRingElement, b: LabelRingElement) -> LabelRingElement:
    _check_same(a, b)
    return LabelRingElement(a.ring, a.m, [x + y for x, y in zip(a.coeffs, b.coeffs)])


def lr_mul_naive(a: LabelRingElement, b: LabelRingElement) -> LabelRingElement:
    """Product by direct enumeration of sub-masks, O(3^m) multiplications."""
    _check_same(a, b)
    return LabelRingElement(a.ring, a.m, _mul_naive_raw(a.coeffs, b.coeffs, a.m, a.ring.zero))


def lr_mul_fast(a: LabelRingElement, b: LabelRingElement, meter=NULL_METER) -> LabelRingElement:
    """Product by fast subset convolution.

    Ranked zeta transform of both operands, pointwise products of the rank
    polynomials (truncated at degree m), then ranked Moebius inversion of
    every coordinate.
    """
    _check_same(a, b)
    return LabelRingElement(
        a.ring, a.m, _mul_fast_raw(a.coeffs, b.coeffs, a.m, a.ring.zero, meter)
    )


def ranked_zeta(a: LabelRingElement) -> RankedTransform:
    polys = _zeta_raw(a.coeffs, a.m, a.ring.zero)
    return RankedTransform(a.m, tuple(TruncatedPolynomial(a.ring, a.m, p) for p in polys))


def ranked_mobius(c: RankedTransform) -> LabelRingElement:
    """Invert :func:`ranked_zeta` on every coordinate."""
    ring = c.polys[0].ring
    out = _mobius_raw([list(p.coeffs) for p in c.polys], c.m)
    return LabelRingElement(ring, c.m, out)


def ranked_mobius_top(c: RankedTransform):
    """``[r^m] sum_Y (-1)^(m-|Y|) c_Y(r)``: the coordinate of the full label set."""
    m = c.m
    total = c.polys[0].ring.zero
    for y, p in enumerate(c.polys):
        coeff = p.coeffs[m]
        if (m - popcount(y)) & 1:
            total = total - coeff
        else:
            total = total + coeff
    return total


def product_top_coefficient(
    factors: Sequence[LabelRingElement], m: int | None = None, ring: Any = None
):
    """Full-label-set coordinate of ``factors[0] * factors[1] * ...``.

    Streams over subsets X: for each X the rank polynomials of all factors are
    built on the fly from their sub-mask sums and multiplied together, so only
    O(k m) scalars are alive at any moment.  ``m``/``ring`` are needed only
    when ``factors`` is empty.
    """
    if not factors:
        if m is None:
            raise ValueError("empty factor list needs an explicit m")
        ring = ZZ if ring is None else ring
        return ring.one if m == 0 else ring.zero
    m = factors[0].m
    ring = factors[0].ring
    for e in factors:
        _check_same(factors[0], e)
    zero = ring.zero
    total = zero
    for x in range(1 << m):
        g = [ring.one]
        for e in factors:
            ex = [zero] * (m + 1)
            y = x
            while True:
                c = e.coeffs[y]
                if c != zero:
                    k = popcount(y)
                    ex[k] = ex[k] + c
                if y == 0:
                    break
                y = (y - 1) & x
            g = _pmul(g, ex, m, zero)
        if len(g) > m:
            term = g[m]
            total = total - term if (m - popcount(x)) & 1 else total + term
    return total
