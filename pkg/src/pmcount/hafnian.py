"""Hafnians and permanents over an arbitrary commutative ring.

Matrices are plain nested sequences; entries are coerced through the ring
descriptor passed as ``ring`` (default :data:`~pmcount.rings.ZZ`).

Three hafnian routines are provided and must agree on every input:

``hafnian_bruteforce``
    sums over all (2n-1)!! perfect pairings.
``hafnian_labelring``
    repeatedly squeezes the two leading rows/columns into a fresh label of
    the extension ring R[U_i] and multiplies the per-stage squeeze factors;
    O*(2^n) ring operations and 2^n stored ring elements.
``hafnian_polyspace``
    the same computation carried out in the ranked-zeta domain, one subset
    X of the labels at a time, so only polynomially many ring elements are
    alive at once.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import CapExceeded, InputError
from .labelring import (
    LabelRingElement,
    _mobius_raw,
    _padd_into,
    _pmul,
    _zeta_raw,
    lr_mul_fast,
    popcount,
)
from .meter import NULL_METER
from .rings import ZZ, ModInt, ModRing

__all__ = [
    "SqueezeResult",
    "validate_symmetric",
    "hafnian_bruteforce",
    "squeeze",
    "lift_to_label_ring",
    "hafnian_labelring",
    "hafnian_polyspace",
    "permanent_ryser",
    "permanent_bruteforce",
    "permanent_via_hafnian",
    "block_embedding",
]

Matrix = Sequence[Sequence[Any]]


def _square(A: Matrix, ring) -> list[list]:
    rows = [list(r) for r in A]
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise InputError(f"matrix is not square: row of length {len(r)} in {n}x{n}")
    return [[ring(x) for x in r] for r in rows]


def validate_symmetric(B: Matrix, ring=ZZ, strict: bool = True) -> list[list]:
    """Coerce ``B`` into ``ring`` and check it is a valid hafnian input.

    In strict mode the matrix must have even dimension, be symmetric and have
    a zero diagonal.  With ``strict=False`` only the strict upper triangle is
    read and the rest is rebuilt from it.
    """
    M = _square(B, ring)
    d = len(M)
    if d % 2:
        raise InputError(f"hafnian needs an even dimension, got {d}")
    zero = ring.zero
    if strict:
        for j in range(d):
            if M[j][j] != zero:
                raise InputError(f"nonzero diagonal entry at ({j}, {j})")
            for k in range(j + 1, d):
                if M[j][k] != M[k][j]:
                    raise InputError(f"matrix is not symmetric at ({j}, {k})")
        return M
    out = [[zero] * d for _ in range(d)]
    for j in range(d):
        for k in range(j + 1, d):
            out[j][k] = out[k][j] = M[j][k]
    return out


def hafnian_bruteforce(B: Matrix, ring=ZZ, strict: bool = True):
    """Sum over every perfect pairing of the indices (canonical permutations)."""
    M = validate_symmetric(B, ring, strict)
    zero, one = ring.zero, ring.one

    def rec(rest: tuple):
        if not rest:
            return one
        a = rest[0]
        total = zero
        for idx in range(1, len(rest)):
            e = M[a][rest[idx]]
            if e == zero:
                continue
            total = total + e * rec(rest[1:idx] + rest[idx + 1:])
        return total

    return rec(tuple(range(len(M))))


# Algorithm with explicit label ring elements.


@dataclass(frozen=True)
class SqueezeResult:
    reduced: list
    factor: LabelRingElement


def lift_to_label_ring(B: Matrix, ring=ZZ, strict: bool = True) -> list[list]:
    """Validate ``B`` and view every entry as an element of R[U_0]."""
    M = validate_symmetric(B, ring, strict)
    return [[LabelRingElement(ring, 0, (x,)) for x in row] for row in M]


def _upper_size(M: list[list]) -> int:
    d = len(M)
    return sum(len(M[j][k].coeffs) for j in range(d) for k in range(j + 1, d))


def squeeze(prev: list[list], i: int, meter=NULL_METER) -> SqueezeResult:
    """Stage ``i`` (1-based): drop the two leading rows/columns of ``prev``.

    ``prev`` holds elements of R[U_{i-1}].  Entry (j, k) of the reduced matrix
    is ``prev[j+2][k+2] + [i] * (prev[0][j+2] prev[1][k+2] + prev[0][k+2] prev[1][j+2])``
    and the squeeze factor is ``1[{}] + [i] * prev[0][1]``.  Both live in R[U_i].
    The products are fast subset convolutions sharing the zeta transforms of
    the two expunged rows.
    """
    d = len(prev)
    if d < 2:
        raise InputError(f"cannot squeeze a {d}x{d} matrix")
    if i < 1:
        raise ValueError("stage index is 1-based")
    e12 = prev[0][1]
    ring, m = e12.ring, i - 1
    if e12.m != m:
        raise ValueError(f"stage {i} expects entries of R[U_{m}], got R[U_{e12.m}]")
    zero = ring.zero
    nd = d - 2

    za = [_zeta_raw(prev[0][c].coeffs, m, zero) for c in range(2, d)]
    zb = [_zeta_raw(prev[1][c].coeffs, m, zero) for c in range(2, d)]
    transform_size = 2 * sum(len(p) for zs in za for p in zs)
    meter.alloc(transform_size)

    zero_entry = LabelRingElement(ring, i, (zero,) * (1 << i))
    reduced = [[zero_entry] * nd for _ in range(nd)]
    for j in range(nd):
        for k in range(j + 1, nd):
            polys = []
            for x in range(1 << m):
                p = _pmul(za[j][x], zb[k][x], m, zero)
                _padd_into(p, _pmul(za[k][x], zb[j][x], m, zero))
                need = popcount(x) + 1
                if len(p) < need:
                    p.extend([zero] * (need - len(p)))
                polys.append(p)
            s = _mobius_raw(polys, m)
            entry = LabelRingElement(ring, i, prev[j + 2][k + 2].coeffs + tuple(s))
            reduced[j][k] = reduced[k][j] = entry
    meter.free(transform_size)

    factor = LabelRingElement(
        ring, i, (ring.one,) + (zero,) * ((1 << m) - 1) + e12.coeffs
    )
    return SqueezeResult(reduced, factor)


def hafnian_labelring(B: Matrix, ring=ZZ, strict: bool = True, meter=NULL_METER):
    """Exponential-space algorithm: multiply the squeeze factors of all stages.

    Stage i works in R[U_i]; the running product ``h`` ends in R[U_n] and the
    hafnian is its coordinate for the full label set.
    """
    cur = lift_to_label_ring(B, ring, strict)
    n = len(cur) // 2
    h = LabelRingElement(ring, 0, (ring.one,))
    live = _upper_size(cur) + 1
    meter.alloc(live)
    for i in range(1, n + 1):
        res = squeeze(cur, i, meter)
        fresh = _upper_size(res.reduced) + len(res.factor.coeffs)
        meter.alloc(fresh)
        h = lr_mul_fast(h.embed(i), res.factor, meter)
        meter.alloc(len(h.coeffs))
        meter.free(live + fresh)
        cur = res.reduced
        live = _upper_size(cur) + len(h.coeffs)
        meter.alloc(live - len(h.coeffs))
    meter.free(live)
    return h.top()


# Algorithm in the ranked zeta domain.


class _PolyspaceKernel:
    """Works on raw scalars: Python ints (optionally reduced mod ``mod``) or
    arbitrary ring objects.  Polynomials in the rank variable are lists of
    length <= cap + 1; an empty list is the zero polynomial.
    """

    def __init__(self, n: int, zero, one, mod: int | None, meter=NULL_METER):
        self.n = n
        self.cap = n
        self.zero = zero
        self.one = one
        self.mod = mod
        self.meter = meter

    def _reduce(self, p: list) -> list:
        mod = self.mod
        if mod is not None:
            p = [c % mod for c in p]
        while p and p[-1] == self.zero:
            p.pop()
        return p

    def squeeze(self, M: list, off: int, d: int) -> list:
        """Transformed squeeze of the d x d block of ``M`` starting at ``off``.

        Returns the (d-2) x (d-2) matrix (symmetric entries shared, entries
        untouched by the squeeze shared with ``M``) and the number of freshly
        allocated coefficients.
        """
        zero, cap = self.zero, self.cap
        u, v = M[off], M[off + 1]
        nd = d - 2
        base = off + 2
        new = [[[] for _ in range(nd)] for _ in range(nd)]
        fresh = 0
        for j in range(nd):
            uj, vj = u[base + j], v[base + j]
            old_row = M[base + j]
            new_row = new[j]
            for k in range(j + 1, nd):
                uk, vk = u[base + k], v[base + k]
                s = _pmul(uj, vk, cap - 1, zero)
                t = _pmul(uk, vj, cap - 1, zero)
                old = old_row[base + k]
                if not s and not t:
                    entry = old
                else:
                    _padd_into(s, t)
                    entry = [zero]
                    entry.extend(s)
                    _padd_into(entry, old)
                    entry = self._reduce(entry)
                    fresh += len(entry)
                new_row[k] = entry
                new[k][j] = entry
        return new, fresh

    def beta_times(self, g: list, b12: list) -> list:
        """``g * (1 + r * b12)`` truncated at the cap."""
        if not b12:
            return g
        beta = [self.one]
        beta.extend(b12[: self.cap])
        return self._reduce(_pmul(g, beta, self.cap, self.zero))

    def top(self, g: list):
        return g[self.n] if len(g) > self.n else self.zero

    def signed(self, total, term, negative: bool):
        return total - term if negative else total + term

    # Depth-first traversal of the subsets X.  The first ``prefix_len``
    # stages are replayed from scratch for each prefix, keeping only the
    # current matrix; the remaining stages share matrices along the DFS path.

    def run_prefix(self, M: list, prefix: int, prefix_len: int):
        """Sum of signed contributions of all X whose first ``prefix_len``
        membership bits equal ``prefix``.
        """
        g = [self.one]
        off, d, held = 0, len(M), 0
        members = 0
        for i in range(prefix_len):
            if prefix >> i & 1:
                g = self.beta_times(g, M[off][off + 1])
                M, sz = self.squeeze(M, off, d)
                off = 0
                sz += len(g)
                self.meter.alloc(sz)
                self.meter.free(held)
                held = sz
                members += 1
            else:
                off += 2
            d -= 2
        result = self._dfs(M, off, d, prefix_len, g, members)
        self.meter.free(held)
        return result

    def run_prefixes(self, M: list, prefixes: range, prefix_len: int):
        total = self.zero
        for prefix in prefixes:
            total = total + self.run_prefix(M, prefix, prefix_len)
        return total

    def _dfs(self, M, off, d, i, g, members):
        n = self.n
        if i == n:
            return self.signed(self.zero, self.top(g), (n - members) & 1)
        # i not in X: drop two rows/columns by moving the offset
        total = self._dfs(M, off + 2, d - 2, i + 1, g, members)
        g2 = self.beta_times(g, M[off][off + 1])
        M2, sz = self.squeeze(M, off, d)
        sz += len(g2)
        self.meter.alloc(sz)
        total = total + self._dfs(M2, 0, d - 2, i + 1, g2, members + 1)
        self.meter.free(sz)
        return total


def _polyspace_task(args):
    M, n, zero, one, mod, lo, hi, prefix_len = args
    kernel = _PolyspaceKernel(n, zero, one, mod)
    return kernel.run_prefixes(M, range(lo, hi), prefix_len)


def hafnian_polyspace(
    B: Matrix,
    ring=ZZ,
    strict: bool = True,
    workers: int = 1,
    replay_levels: int | None = None,
    meter=NULL_METER,
):
    """Polynomial-space hafnian: inclusion-exclusion over subsets X of labels.

    For each X the stages are replayed with every entry a polynomial in the
    rank variable r truncated at degree n; stage i squeezes (with a factor r)
    when i is in X and merely drops two rows/columns otherwise.  The
    contribution of X is ``(-1)^(n-|X|) [r^n] prod_i beta_i``.

    The first ``replay_levels`` stages (default ``ceil(n/2)``) are recomputed
    for every membership prefix while holding a single matrix; the later,
    smaller stages are walked depth first with one matrix per stage kept on
    the path, so subsets sharing a prefix share its work.  ``replay_levels=n``
    evaluates every X from scratch and ``replay_levels=0`` is a pure DFS.

    ``workers > 1`` splits the prefixes into contiguous blocks evaluated in
    separate processes; partial sums are added back in block order, so the
    result never depends on the worker count.
    """
    M = validate_symmetric(B, ring, strict)
    d = len(M)
    n = d // 2
    if n == 0:
        return ring.one
    if replay_levels is None:
        replay_levels = (n + 1) // 2
    if not 0 <= replay_levels <= n:
        raise ValueError(f"replay_levels must lie in 0..{n}, got {replay_levels}")

    if isinstance(ring, ModRing):
        zero, one, mod = 0, 1, ring.modulus
        M = [[x.value for x in row] for row in M]
        wrap = lambda v: ModInt(v, mod)  # noqa: E731
    elif ring == ZZ:
        zero, one, mod = 0, 1, None
        wrap = int
    else:
        zero, one, mod = ring.zero, ring.one, None
        wrap = lambda v: v  # noqa: E731

    raw = [[[] if x == zero else [x] for x in row] for row in M]
    for j in range(d):
        for k in range(j):
            raw[j][k] = raw[k][j]
    base_size = sum(len(raw[j][k]) for j in range(d) for k in range(j + 1, d))
    meter.alloc(base_size)

    if workers <= 1:
        kernel = _PolyspaceKernel(n, zero, one, mod, meter)
        total = kernel.run_prefixes(raw, range(1 << replay_levels), replay_levels)
    else:
        # enough prefixes to keep every worker busy
        plen = max(replay_levels, min(n, (4 * workers - 1).bit_length()))
        chunks = min(1 << plen, 4 * workers)
        bounds = [(c * (1 << plen)) // chunks for c in range(chunks + 1)]
        tasks = [
            (raw, n, zero, one, mod, bounds[c], bounds[c + 1], plen)
            for c in range(chunks)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_polyspace_task, tasks))
        total = zero
        for part in parts:
            total = total + part
    meter.free(base_size)
    if mod is not None:
        total %= mod
    return wrap(total)


# Permanents.


def permanent_ryser(A: Matrix, ring=ZZ):
    """Ryser's inclusion-exclusion formula, walking column subsets in Gray
    code order so each step updates the row sums with one column.

    per(A) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} A[i][j]
    """
    M = _square(A, ring)
    n = len(M)
    zero, one = ring.zero, ring.one
    if n == 0:
        return one
    row_sums = [zero] * n
    total = zero
    gray = 0
    for step in range(1, 1 << n):
        col = (step & -step).bit_length() - 1
        gray ^= 1 << col
        if gray >> col & 1:
            for i in range(n):
                row_sums[i] = row_sums[i] + M[i][col]
        else:
            for i in range(n):
                row_sums[i] = row_sums[i] - M[i][col]
        prod = one
        for s in row_sums:
            prod = prod * s
        if popcount(gray) & 1:
            total = total - prod
        else:
            total = total + prod
    return zero - total if n & 1 else total


def permanent_bruteforce(A: Matrix, ring=ZZ, cap: int = 10):
    """Sum over all n! permutations."""
    M = _square(A, ring)
    n = len(M)
    if n > cap:
        raise CapExceeded(f"brute-force permanent limited to n <= {cap}, got {n}")
    total = ring.zero
    for sigma in itertools.permutations(range(n)):
        prod = ring.one
        for i, j in enumerate(sigma):
            prod = prod * M[i][j]
        total = total + prod
    return total


def block_embedding(A: Matrix, ring=ZZ) -> list[list]:
    """``[[0, A], [A^T, 0]]``, whose hafnian is per(A)."""
    M = _square(A, ring)
    n = len(M)
    zero = ring.zero
    B = [[zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            B[i][n + j] = M[i][j]
            B[n + j][i] = M[i][j]
    return B


def permanent_via_hafnian(A: Matrix, ring=ZZ, algo: str = "polyspace", **kwargs):
    B = block_embedding(A, ring)
    if algo == "polyspace":
        return hafnian_polyspace(B, ring, **kwargs)
    if algo == "labelring":
        return hafnian_labelring(B, ring, **kwargs)
    if algo == "bruteforce":
        return hafnian_bruteforce(B, ring, **kwargs)
    raise ValueError(f"unknown hafnian algorithm {algo!r}")
