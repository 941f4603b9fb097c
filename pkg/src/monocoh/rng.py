"""Counter-based deterministic random stream (splitmix64 finalizer).

Reports and randomized suites must reproduce byte-for-byte across runs and
platforms, so no platform RNG is used: the k-th value is a pure function of
(seed, k).
"""

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(x: int) -> int:
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class CounterRng:
    """Deterministic stream: value k is mix64(seed + k*golden)."""

    def __init__(self, seed: int) -> None:
        self.seed = seed & _MASK
        self.counter = 0

    def next64(self) -> int:
        v = _mix64(self.seed + _GOLDEN * self.counter)
        self.counter += 1
        return v

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("need a positive bound")
        return self.next64() % n

    def int_in(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)
