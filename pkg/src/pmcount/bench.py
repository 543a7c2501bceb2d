"""Timing sweeps of perfect matching counts over growing graphs."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import CapExceeded
from .matching import MAX_VERTICES, complete_graph, count_perfect_matchings, random_graph


@dataclass
class BenchRow:
    size: int
    result: int
    seconds: float

    def csv(self) -> str:
        return f"{self.size},{self.result},{self.seconds:.6f}"


def family_graph(family: str, size: int, seed: int = 0):
    if family == "complete":
        return complete_graph(size)
    if family == "random":
        return random_graph(size, 0.5, seed=seed * 1_000_003 + size)
    raise ValueError(f"unknown graph family {family!r}")


def run_bench(
    family: str,
    min_n: int,
    max_n: int,
    algo: str = "polyspace",
    workers: int = 1,
    seed: int = 0,
    repeat: int = 1,
    max_vertices: int | None = None,
) -> list[BenchRow]:
    """Count matchings for every even size in ``min_n..max_n``.

    The time per size is the best of ``repeat`` runs.
    """
    limit = MAX_VERTICES[algo] if max_vertices is None else max_vertices
    if max_n > limit:
        raise CapExceeded(f"{algo} limited to {limit} vertices, got {max_n}")
    start = min_n + (min_n % 2)
    rows = []
    for size in range(start, max_n + 1, 2):
        g = family_graph(family, size, seed)
        best, result = float("inf"), None
        for _ in range(max(1, repeat)):
            t0 = time.perf_counter()
            result = count_perfect_matchings(g, algo, workers=workers, max_vertices=limit)
            best = min(best, time.perf_counter() - t0)
        rows.append(BenchRow(size, result, best))
    return rows


def growth_ratios(rows: list[BenchRow]) -> list[float]:
    """t(size + 2) / t(size) for consecutive rows."""
    return [b.seconds / a.seconds if a.seconds > 0 else float("inf") for a, b in zip(rows, rows[1:])]


def format_table(rows: list[BenchRow]) -> str:
    ratios = [None] + growth_ratios(rows)
    out = [f"{'size':>6} {'result':>22} {'seconds':>12} {'ratio':>7}"]
    for row, r in zip(rows, ratios):
        rs = "" if r is None else f"{r:7.2f}"
        out.append(f"{row.size:>6} {row.result:>22} {row.seconds:>12.6f} {rs:>7}")
    return "\n".join(out)
