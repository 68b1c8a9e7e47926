from dataclasses import dataclass

from src.utils.errors import DomainError

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SimConfig:
    samples: int
    seed: int
    # Replicates per deterministic substream; chunk i is seeded by (seed, i).
    chunk_size: int = 65536
    # Threads used to evaluate chunks; results do not depend on it.
    workers: int = 1

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise DomainError(f"samples must be at least 1, got {self.samples}")
        if not 0 <= self.seed <= MAX_SEED:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.chunk_size < 1:
            raise DomainError(f"chunk_size must be at least 1, got {self.chunk_size}")
        if self.workers < 1:
            raise DomainError(f"workers must be at least 1, got {self.workers}")
        if self.chunk_size > self.samples:
            # A single chunk covers everything.
            object.__setattr__(self, "chunk_size", self.samples)

    @property
    def n_chunks(self) -> int:
        return -(-self.samples // self.chunk_size)

    def chunk_bounds(self, chunk_index: int) -> tuple[int, int]:
        start = chunk_index * self.chunk_size
        return start, min(start + self.chunk_size, self.samples)


@dataclass(frozen=True)
class Estimate:
    p_hat: float
    samples: int
    stderr: float
    ci_low: float
    ci_high: float
    hits: int
