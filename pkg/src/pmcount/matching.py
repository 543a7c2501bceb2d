"""Perfect matching counts of general graphs through the hafnian engine."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable

from sympy import prevprime

from .errors import CapExceeded, InputError
from .hafnian import hafnian_labelring, hafnian_polyspace
from .rings import ZZ, ModRing, crt_combine

# Default --max-vertices guards per algorithm.
MAX_VERTICES = {"polyspace": 36, "labelring": 26, "bruteforce": 16}

ALGORITHMS = ("bruteforce", "labelring", "polyspace")


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InputError("vertex count must be non-negative")
        for u, v in self.edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.vertex_count):
                raise InputError(f"edge ({u}, {v}) not normalized or out of range")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        seen = set()
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            for w in (u, v):
                if not 0 <= w < vertex_count:
                    raise InputError(f"vertex {w} outside 0..{vertex_count - 1}")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise InputError(f"duplicate edge {e}")
            seen.add(e)
        return cls(vertex_count, frozenset(seen))

    def neighbors(self) -> list[int]:
        """Adjacency as one bitmask per vertex."""
        adj = [0] * self.vertex_count
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph.from_edges(self.vertex_count, list(self.edges) + [(u, v)])

    def without_vertex(self, w: int) -> "Graph":
        """Delete ``w`` and relabel the vertices above it down by one."""
        shift = lambda x: x - 1 if x > w else x  # noqa: E731
        edges = [(shift(u), shift(v)) for u, v in self.edges if w not in (u, v)]
        return Graph.from_edges(self.vertex_count - 1, edges)


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InputError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def parse_graph(text: str) -> Graph:
    """Parse the ``p <vertices> <edges>`` / ``e <u> <v>`` edge-list format."""
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        tag, args = tokens[0], tokens[1:]
        if tag == "p":
            if header is not None:
                raise InputError(f"line {lineno}: duplicate header")
            if len(args) != 2:
                raise InputError(f"line {lineno}: header must be 'p <vertices> <edges>'")
            header = _ints(args, lineno)
            if min(header) < 0:
                raise InputError(f"line {lineno}: negative count in header")
        elif tag == "e":
            if len(args) != 2:
                raise InputError(f"line {lineno}: edge line must be 'e <u> <v>'")
            u, v = _ints(args, lineno)
            if u == v:
                raise InputError(f"line {lineno}: self-loop at vertex {u}")
            if header is None:
                raise InputError(f"line {lineno}: edge before 'p' header")
            if len(edges) == header[1]:
                raise InputError(f"line {lineno}: more edges than declared ({header[1]})")
            edges.append((u, v))
        else:
            raise InputError(f"line {lineno}: unknown line type {tag!r}")
    if header is None:
        raise InputError("missing 'p' header")
    if len(edges) != header[1]:
        raise InputError(f"header declares {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(header[0], edges)


def format_graph(g: Graph) -> str:
    lines = [f"p {g.vertex_count} {len(g.edges)}"]
    lines += [f"e {u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def adjacency_matrix(g: Graph, ring=ZZ) -> list[list]:
    if g.vertex_count % 2:
        raise InputError(f"adjacency hafnian needs an even vertex count, got {g.vertex_count}")
    A = [[ring.zero] * g.vertex_count for _ in range(g.vertex_count)]
    for u, v in g.edges:
        A[u][v] = A[v][u] = ring.one
    return A


def crt_primes(bound: int, start: int = 1 << 31) -> list[int]:
    """Primes just below ``start`` whose product exceeds ``bound``."""
    primes, prod, p = [], 1, start
    while prod <= bound:
        p = prevprime(p)
        primes.append(p)
        prod *= p
    return primes


def count_perfect_matchings(
    g: Graph,
    algo: str = "polyspace",
    crt: bool = False,
    workers: int = 1,
    max_vertices: int | None = None,
    meter=None,
) -> int:
    """Number of perfect matchings of ``g`` (zero for odd vertex counts).

    With ``crt=True`` the hafnian is evaluated modulo word-sized primes whose
    product exceeds (v-1)!!, the largest possible count, and recombined.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
    limit = MAX_VERTICES[algo] if max_vertices is None else max_vertices
    if g.vertex_count > limit:
        raise CapExceeded(f"{algo} limited to {limit} vertices, got {g.vertex_count}")
    if g.vertex_count % 2:
        return 0
    if algo == "bruteforce":
        return count_pm_bruteforce(g, cap=limit)

    kwargs = {}
    if meter is not None:
        kwargs["meter"] = meter
    if algo == "polyspace":
        kwargs["workers"] = workers

    def run(ring):
        A = adjacency_matrix(g, ring)
        if algo == "labelring":
            return hafnian_labelring(A, ring, **kwargs)
        return hafnian_polyspace(A, ring, **kwargs)

    if not crt:
        return run(ZZ)
    bound = math.prod(range(1, g.vertex_count, 2))
    residues = [(run(ModRing(p)).value, p) for p in crt_primes(bound)]
    return crt_combine(residues)


def count_pm_bruteforce(g: Graph, cap: int = 16) -> int:
    """Match the lowest unmatched vertex with each free neighbour, recurse."""
    if g.vertex_count > cap:
        raise CapExceeded(f"brute-force matcher limited to {cap} vertices, got {g.vertex_count}")
    if g.vertex_count % 2:
        return 0
    adj = g.neighbors()

    def rec(free: int) -> int:
        if not free:
            return 1
        v = (free & -free).bit_length() - 1
        rest = free & ~(1 << v)
        cand = adj[v] & rest
        total = 0
        while cand:
            low = cand & -cand
            total += rec(rest & ~low)
            cand ^= low
        return total

    return rec((1 << g.vertex_count) - 1)


# Graph families.


def complete_graph(v: int) -> Graph:
    return Graph(v, frozenset((a, b) for a in range(v) for b in range(a + 1, v)))


def random_graph(v: int, p: float = 0.5, seed: int = 0) -> Graph:
    rnd = random.Random(seed)
    edges = [(a, b) for a in range(v) for b in range(a + 1, v) if rnd.random() < p]
    return Graph(v, frozenset(edges))


def bipartite_graph(biadjacency: list[list[int]]) -> Graph:
    """Rows become vertices 0..k-1, columns k..2k-1."""
    k = len(biadjacency)
    edges = [(i, k + j) for i in range(k) for j in range(k) if biadjacency[i][j]]
    return Graph(2 * k, frozenset(edges))
