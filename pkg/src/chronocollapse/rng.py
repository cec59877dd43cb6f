"""Counter-based, explicitly seeded random streams.

Sample index ``i`` of a named stream always comes from block
``i // BLOCK_ROWS`` of a Philox generator whose key is derived from
``(seed, stream)`` and whose counter starts at ``block << 192``. A block
is therefore reproducible on its own, which is what lets work be sharded
across threads without changing a single bit of the result.
"""

from __future__ import annotations

import os
import zlib
from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK_ROWS = 1 << 16


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    return int(seed)


def default_seed() -> int:
    """Seed from the CHRONO_SEED environment variable, else 0."""
    raw = os.environ.get("CHRONO_SEED")
    if raw is None or raw.strip() == "":
        return 0
    try:
        return check_seed(int(raw))
    except ValueError:
        raise ValueError(f"CHRONO_SEED must be a non-negative integer, got {raw!r}") from None


def _key(seed: int, stream: str) -> np.ndarray:
    tag = zlib.crc32(stream.encode("utf-8"))
    return np.random.SeedSequence([check_seed(seed), tag]).generate_state(2, dtype=np.uint64)


def block_generator(seed: int, stream: str, block: int) -> np.random.Generator:
    counter = np.array([0, 0, 0, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=_key(seed, stream)))


def blocks(start: int, stop: int):
    """Yield ``(block, lo, hi)`` with row offsets local to each block."""
    b = start // BLOCK_ROWS
    while b * BLOCK_ROWS < stop:
        base = b * BLOCK_ROWS
        yield b, max(start - base, 0), min(stop - base, BLOCK_ROWS)
        b += 1


def _rows(kind: str, seed: int, stream: str, start: int, stop: int, width: int) -> np.ndarray:
    if not 0 <= start <= stop:
        raise ValueError("need 0 <= start <= stop")
    parts = []
    for b, lo, hi in blocks(start, stop):
        gen = block_generator(seed, stream, b)
        # Draws are consumed sequentially, so the first hi rows of a block
        # do not depend on how many rows are requested.
        if kind == "uniform":
            chunk = gen.random((hi, width))
        else:
            chunk = gen.standard_normal((hi, width))
        parts.append(chunk[lo:])
    if not parts:
        return np.empty((0, width))
    return np.concatenate(parts, axis=0)


def uniform_rows(seed: int, stream: str, start: int, stop: int, width: int) -> np.ndarray:
    """Rows ``start:stop`` of an (infinite, width) array of U[0, 1) draws."""
    return _rows("uniform", seed, stream, start, stop, width)


def normal_rows(seed: int, stream: str, start: int, stop: int, width: int) -> np.ndarray:
    """Rows ``start:stop`` of an (infinite, width) array of N(0, 1) draws."""
    return _rows("normal", seed, stream, start, stop, width)


def map_blocks(func, n: int, workers: int | None = None) -> list:
    """Apply ``func(block, lo, hi)`` over the blocks covering ``range(n)``.

    Results come back in block order whatever ``workers`` is.
    """
    spans = list(blocks(0, n))
    if workers is None or workers <= 1 or len(spans) <= 1:
        return [func(*span) for span in spans]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda span: func(*span), spans))
