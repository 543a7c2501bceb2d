"""Exact set cover counting and the reduction from 0/1 permanents.

Sets are bitmasks over the ground set ``0..ground_size-1``.

The reduction: split the rows of an n x n matrix into groups of k rows.
For every group j and k-subset T of the columns, let w_j(T) be the
permanent (mod the modulus) of the k x k block rows_j x T.  Each group owns
an extra block L_j of ground elements with two designated members ``l`` and
``r``; subsets of L_j that contain exactly one of them split into a left
family (contains ``l``) and a right family (contains ``r``).  The family of
the instance holds ``T | left_j[c]`` for the first w_j(T) left sets and every
right set.  An exact cover then picks, per group, one column block T_j and
one of its w_j(T_j) left sets plus the complementary right set, so the
number of covers is ``sum over partitions prod_j w_j(T_j)``, which is
congruent to the permanent.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .errors import CapExceeded, InputError
from .rings import coprime_moduli, crt_combine

DP_MAX_GROUND = 24
BRUTEFORCE_MAX_FAMILY = 20


@dataclass(frozen=True)
class SetCoverInstance:
    ground_size: int
    family: tuple

    def __post_init__(self):
        full = (1 << self.ground_size) - 1
        for f in self.family:
            if f <= 0 or f & ~full:
                raise InputError(f"family member {f:#b} is empty or outside the ground set")

    @classmethod
    def from_sets(cls, ground_size: int, sets) -> "SetCoverInstance":
        return cls(ground_size, tuple(sum(1 << e for e in set(s)) for s in sets))


def parse_instance(text: str) -> SetCoverInstance:
    """Parse ``u <ground_size>`` followed by ``s <elem> <elem> ...`` lines."""
    ground = None
    family = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tag, *args = line.split()
        try:
            nums = [int(a) for a in args]
        except ValueError:
            raise InputError(f"line {lineno}: expected integers") from None
        if tag == "u":
            if ground is not None or len(nums) != 1 or nums[0] < 0:
                raise InputError(f"line {lineno}: expected a single 'u <ground_size>' header")
            ground = nums[0]
        elif tag == "s":
            if ground is None:
                raise InputError(f"line {lineno}: set before 'u' header")
            if not nums:
                raise InputError(f"line {lineno}: empty set")
            if any(b <= a for a, b in zip(nums, nums[1:])):
                raise InputError(f"line {lineno}: elements must be strictly increasing")
            if nums[0] < 0 or nums[-1] >= ground:
                raise InputError(f"line {lineno}: element outside 0..{ground - 1}")
            family.append(sum(1 << e for e in nums))
        else:
            raise InputError(f"line {lineno}: unknown line type {tag!r}")
    if ground is None:
        raise InputError("missing 'u' header")
    return SetCoverInstance(ground, tuple(family))


def _elements(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def format_instance(inst: SetCoverInstance) -> str:
    lines = [f"u {inst.ground_size}"]
    lines += ["s " + " ".join(map(str, _elements(f))) for f in inst.family]
    return "\n".join(lines) + "\n"


def count_exact_covers_dp(inst: SetCoverInstance, cap: int = DP_MAX_GROUND) -> int:
    """Count exact covers by DP over the uncovered remainder.

    ``c[0] = 1`` and ``c[S]`` sums ``c[S - F]`` over members F inside S that
    contain the smallest element of S.  Only remainders reachable from the
    full ground set are visited.
    """
    if inst.ground_size > cap:
        raise CapExceeded(f"DP counter limited to ground size {cap}, got {inst.ground_size}")
    by_min: dict[int, Counter] = {}
    for f in inst.family:
        low = (f & -f).bit_length() - 1
        by_min.setdefault(low, Counter())[f] += 1
    memo = {0: 1}

    def count(s: int) -> int:
        if s in memo:
            return memo[s]
        low = (s & -s).bit_length() - 1
        total = 0
        for f, mult in by_min.get(low, {}).items():
            if f & ~s == 0:
                total += mult * count(s & ~f)
        memo[s] = total
        return total

    return count((1 << inst.ground_size) - 1)


def exact_covers_bruteforce(inst: SetCoverInstance, cap: int = BRUTEFORCE_MAX_FAMILY):
    """Yield every exact cover as a tuple of family indices.

    Walks the include/exclude tree over all members, abandoning a branch as
    soon as two chosen members overlap.
    """
    fam = inst.family
    if len(fam) > cap:
        raise CapExceeded(f"brute-force counter limited to {cap} members, got {len(fam)}")
    full = (1 << inst.ground_size) - 1

    def rec(idx: int, used: int, chosen: tuple):
        if idx == len(fam):
            if used == full:
                yield chosen
            return
        yield from rec(idx + 1, used, chosen)
        if not used & fam[idx]:
            yield from rec(idx + 1, used | fam[idx], chosen + (idx,))

    yield from rec(0, 0, ())


def count_exact_covers_bruteforce(inst: SetCoverInstance, cap: int = BRUTEFORCE_MAX_FAMILY) -> int:
    return sum(1 for _ in exact_covers_bruteforce(inst, cap))


# Reduction from permanents.


def _check_matrix(M: Sequence[Sequence[int]]) -> list[list[int]]:
    rows = [list(r) for r in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError("matrix is not square")
    for r in rows:
        for x in r:
            if x not in (0, 1):
                raise InputError(f"reduction expects a 0/1 matrix, found {x!r}")
    return rows


def group_weight(M, rows: Sequence[int], T: Sequence[int], modulus: int) -> int:
    """Permanent of the block ``M[rows, T]`` mod ``modulus``, by brute force."""
    k = len(rows)
    if len(T) != k:
        raise ValueError("row group and column subset sizes differ")
    if k > 7:
        raise CapExceeded(f"group weights are brute-forced; k must be <= 7, got {k}")
    total = 0
    for sigma in itertools.permutations(range(k)):
        prod = 1
        for l in range(k):
            prod *= M[rows[l]][T[sigma[l]]]
            if not prod:
                break
        total += prod
    return total % modulus


@dataclass(frozen=True)
class ReductionArtifacts:
    instance: SetCoverInstance
    group_count: int
    group_size: int
    modulus: int
    column_count: int
    block_size: int
    # per group: (offset of L_j, element l, element r)
    blocks: tuple
    # (group j, column tuple T) -> w_j(T)
    weights: dict = field(compare=False)
    left_sets: tuple = field(compare=False)
    right_sets: tuple = field(compare=False)


def ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


def reduce_permanent_to_setcover(
    M,
    k: int,
    modulus: int,
    block_size: int | None = None,
    wide_blocks: bool = False,
    shuffle_seed: int | None = None,
) -> ReductionArtifacts:
    """Exact set cover instance whose cover count is per(M) mod ``modulus``.

    ``block_size`` defaults to the smallest |L_j| with 2^(|L_j|-2) >= modulus;
    ``wide_blocks`` switches to ``2 ceil(log2 n) + 2``.  Left sets are listed
    in increasing bitmask order unless ``shuffle_seed`` permutes them.
    """
    M = _check_matrix(M)
    n = len(M)
    if k < 1 or n % k:
        raise InputError(f"group size {k} does not divide n = {n}")
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    groups = n // k
    if block_size is None:
        block_size = 2 * ceil_log2(n) + 2 if wide_blocks else ceil_log2(modulus) + 2
    if block_size < 2 or 1 << (block_size - 2) < modulus:
        raise InputError(
            f"block of size {block_size} holds {1 << max(block_size - 2, 0)} left sets, "
            f"fewer than the modulus {modulus}"
        )

    blocks, left_sets, right_sets = [], [], []
    rnd = random.Random(shuffle_seed) if shuffle_seed is not None else None
    for j in range(groups):
        off = n + j * block_size
        l_bit, r_bit = 1 << off, 1 << (off + 1)
        free = [sub << (off + 2) for sub in range(1 << (block_size - 2))]
        left = [l_bit | s for s in free]
        if rnd is not None:
            rnd.shuffle(left)
        blocks.append((off, off, off + 1))
        left_sets.append(tuple(left))
        right_sets.append(tuple(r_bit | s for s in free))

    family, weights = [], {}
    for j in range(groups):
        rows = list(range(j * k, (j + 1) * k))
        for T in itertools.combinations(range(n), k):
            w = group_weight(M, rows, T, modulus)
            weights[(j, T)] = w
            t_mask = sum(1 << c for c in T)
            family.extend(t_mask | left_sets[j][c] for c in range(w))
    for j in range(groups):
        family.extend(right_sets[j])

    inst = SetCoverInstance(n + groups * block_size, tuple(family))
    return ReductionArtifacts(
        inst, groups, k, modulus, n, block_size, tuple(blocks), weights,
        tuple(left_sets), tuple(right_sets),
    )


def default_moduli(n: int) -> list[int]:
    """Fewest smallest-prime-power moduli (each > n) whose product exceeds n!."""
    bound = math.factorial(n)
    count = 1
    while math.prod(coprime_moduli(count, n)) <= bound:
        count += 1
    return coprime_moduli(count, n)


def recover_permanent_crt(
    M,
    k: int,
    moduli: Sequence[int] | None = None,
    cap: int = DP_MAX_GROUND,
    **reduce_kwargs,
) -> int:
    """per(M) from exact cover counts of the reduced instances, by CRT."""
    M = _check_matrix(M)
    n = len(M)
    moduli = default_moduli(n) if moduli is None else list(moduli)
    if math.prod(moduli) <= math.factorial(n):
        raise ValueError(f"product of moduli {moduli} does not exceed {n}! = {math.factorial(n)}")
    residues = []
    for m in moduli:
        art = reduce_permanent_to_setcover(M, k, m, **reduce_kwargs)
        if art.instance.ground_size > cap:
            raise CapExceeded(
                f"reduced instance for modulus {m} has ground size "
                f"{art.instance.ground_size} > {cap}"
            )
        residues.append((count_exact_covers_dp(art.instance, cap) % m, m))
    return crt_combine(residues)
