from contextlib import contextmanager


class SpaceMeter:
    """Counts ring elements held by an algorithm and remembers the peak.

    Algorithms call :meth:`alloc` when they materialize a batch of ring
    elements and :meth:`free` when the batch is dropped.  The count is an
    explicit bookkeeping estimate, not a measurement of process memory.
    """

    def __init__(self):
        self.live = 0
        self.peak = 0

    def alloc(self, count: int) -> None:
        self.live += count
        if self.live > self.peak:
            self.peak = self.live

    def free(self, count: int) -> None:
        self.live -= count

    @contextmanager
    def hold(self, count: int):
        self.alloc(count)
        try:
            yield
        finally:
            self.free(count)

    def __repr__(self) -> str:
        return f"SpaceMeter(live={self.live}, peak={self.peak})"


class _NullMeter:
    live = peak = 0

    def alloc(self, count):
        pass

    def free(self, count):
        pass

    @contextmanager
    def hold(self, count):
        yield


NULL_METER = _NullMeter()
