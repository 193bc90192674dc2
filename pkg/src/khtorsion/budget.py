"""Memory accounting for complex construction."""

from __future__ import annotations

import random
import threading

# rough resident cost of one generator: basis object, index entry and ~n differential entries
BYTES_PER_GENERATOR = 600


class BudgetExceeded(MemoryError):
    def __init__(self, bigrading, size: int, limit_bytes: int):
        self.bigrading = bigrading
        self.size = size
        self.limit_bytes = limit_bytes
        super().__init__(
            f"memory budget of {limit_bytes // 2**20} MB exceeded while filling "
            f"C_{bigrading} (size {size})")


class MemoryBudget:
    """Shared byte counter; every charge goes through one lock."""

    def __init__(self, limit_mb: float):
        if limit_mb <= 0:
            raise ValueError("memory budget must be positive")
        self.limit_bytes = int(limit_mb * 2**20)
        self.used = 0
        self._lock = threading.Lock()

    def charge(self, generators: int, bigrading=None, bucket_size: int = 0):
        with self._lock:
            self.used += generators * BYTES_PER_GENERATOR
            if self.used > self.limit_bytes:
                raise BudgetExceeded(bigrading, bucket_size, self.limit_bytes)

    def release(self, generators: int):
        with self._lock:
            self.used = max(0, self.used - generators * BYTES_PER_GENERATOR)

    def scoped(self) -> "MemoryBudget":
        """Reset-able view used per quantum slice: charges are released on exit."""
        return _Scope(self)


class _Scope:
    def __init__(self, budget: MemoryBudget):
        self.budget = budget
        self.charged = 0

    def charge(self, generators: int, bigrading=None, bucket_size: int = 0):
        self.charged += generators
        self.budget.charge(generators, bigrading, bucket_size)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.budget.release(self.charged)
        return False


def estimate_generators(diagram, samples: int = 1024, exact_below: int = 16,
                        seed: int = 0) -> int:
    """Sum over states of 2^circles; exact for small diagrams, sampled otherwise."""
    n = diagram.n
    if n <= exact_below:
        return sum(1 << diagram.circle_labels(bits)[1] for bits in range(1 << n))
    rng = random.Random(seed)
    total = 0
    for _ in range(samples):
        total += 1 << diagram.circle_labels(rng.getrandbits(n))[1]
    return (total << n) // samples


def estimate_bytes(diagram, **kw) -> int:
    return estimate_generators(diagram, **kw) * BYTES_PER_GENERATOR
