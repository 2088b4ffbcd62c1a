"""Segmented odd-only sieve of Eratosthenes with an optional on-disk cache.

Memory use is O(segment_size + pi(sqrt(limit))). Segments are sieved
independently, so they may be farmed out to a thread pool; the stream
facade always delivers them in order.

Cache layout (all integers little-endian)::

    b"PRIM" | version: u8 | limit: u64 | gaps: unsigned LEB128 ...

The first gap is measured from 0, so the first encoded value is 2.
"""

from __future__ import annotations

import math
import os
import struct
import threading
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CacheFormatError, DomainError, RangeError, ResourceError

CACHE_MAGIC = b"PRIM"
CACHE_VERSION = 1
DEFAULT_SEGMENT_SIZE = 1 << 19
MIN_SEGMENT_SIZE = 1024
DEFAULT_HARD_CAP = 2**31

_hard_cap = DEFAULT_HARD_CAP
_default_cache: Path | None = None


_UNSET = object()


def configure(*, hard_cap: int | None = None, cache_path=_UNSET) -> None:
    """Set the process-wide hard cap and default cache file (None clears it)."""
    global _hard_cap, _default_cache
    if hard_cap is not None:
        if hard_cap < 2:
            raise DomainError("hard cap must be >= 2")
        _hard_cap = int(hard_cap)
    if cache_path is not _UNSET:
        _default_cache = None if cache_path is None else Path(cache_path)


def hard_cap() -> int:
    return _hard_cap


def default_cache() -> Path | None:
    return _default_cache


@dataclass(frozen=True)
class SieveConfig:
    limit: int
    segment_size: int = DEFAULT_SEGMENT_SIZE
    cache_path: Path | None = None

    def __post_init__(self):
        if self.limit < 2:
            raise DomainError(f"sieve limit must be >= 2, got {self.limit}")
        if self.segment_size < MIN_SEGMENT_SIZE:
            raise DomainError(f"segment_size must be >= {MIN_SEGMENT_SIZE}, got {self.segment_size}")
        if self.limit > _hard_cap:
            raise ResourceError(f"limit {self.limit} exceeds hard cap {_hard_cap}")


def simple_sieve(n: int) -> np.ndarray:
    """All primes <= n by a plain (non-segmented) sieve; used for base primes."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for q in range(3, math.isqrt(n) + 1, 2):
        if flags[q]:
            flags[q * q :: 2 * q] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieve_segment(lo: int, count: int, limit: int, base: np.ndarray) -> np.ndarray:
    # Odd candidates lo, lo+2, ..., lo+2(count-1), truncated at limit; lo is odd.
    hi = min(lo + 2 * count, limit + 1)
    n = (hi - lo + 1) // 2
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n, dtype=bool)
    for q in base:
        q = int(q)
        qq = q * q
        if qq >= hi:
            break
        start = max(qq, ((lo + q - 1) // q) * q)
        if start % 2 == 0:
            start += q
        flags[(start - lo) // 2 :: q] = False
    out = lo + 2 * np.flatnonzero(flags).astype(np.int64)
    if lo == 1:
        out = out[1:]  # drop 1
    return out


class PrimeStream:
    """Ordered, gap-free supply of the primes <= limit.

    Iterating yields Python ints; :meth:`segments` yields numpy arrays
    (one per sieve segment) for vectorised consumers.
    """

    def __init__(self, config: SieveConfig, threads: int = 1):
        self.config = config
        self.limit = config.limit
        self.threads = max(1, int(threads))
        self.position = 0
        self.source = "sieve"
        self._cached: np.ndarray | None = None
        if config.cache_path is not None and Path(config.cache_path).exists():
            try:
                cached_limit, arr = read_cache(config.cache_path)
            except CacheFormatError:
                cached_limit, arr = -1, None
            if arr is not None and cached_limit >= self.limit:
                self._cached = arr[: np.searchsorted(arr, self.limit, side="right")]
                self.source = "cache"

    def segments(self) -> Iterator[np.ndarray]:
        if self._cached is not None:
            step = self.config.segment_size
            for i in range(0, len(self._cached), step):
                yield self._cached[i : i + step]
            return
        limit = self.limit
        base = simple_sieve(math.isqrt(limit))[1:]  # odd base primes
        seg = self.config.segment_size
        starts = list(range(1, limit + 1, 2 * seg))
        yield np.array([2], dtype=np.int64)
        if self.threads == 1:
            for lo in starts:
                yield _sieve_segment(lo, seg, limit, base)
        else:
            with ThreadPoolExecutor(self.threads) as pool:
                # map preserves order: this is the sequence point.
                yield from pool.map(lambda lo: _sieve_segment(lo, seg, limit, base), starts)

    def __iter__(self) -> Iterator[int]:
        for arr in self.segments():
            for p in arr.tolist():
                self.position += 1
                yield p

    def to_array(self) -> np.ndarray:
        parts = list(self.segments())
        arr = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
        self.position = len(arr)
        return arr


def primes_up_to(limit: int, *, segment_size: int = DEFAULT_SEGMENT_SIZE,
                 cache_path: str | os.PathLike | None = None, threads: int = 1) -> PrimeStream:
    """Stream of all primes <= limit."""
    if limit < 2:
        raise DomainError(f"limit must be >= 2, got {limit}")
    path = Path(cache_path) if cache_path is not None else _default_cache
    return PrimeStream(SieveConfig(int(limit), segment_size, path), threads=threads)


# --------------------------------------------------------------------------
# Cache file
# --------------------------------------------------------------------------

def _leb128_encode(values: np.ndarray) -> bytes:
    values = np.asarray(values, dtype=np.uint64)
    if len(values) == 0:
        return b""
    nbytes = np.ones(len(values), dtype=np.int64)
    v = values >> np.uint64(7)
    while v.any():
        nbytes += v > 0
        v = v >> np.uint64(7)
    ends = np.cumsum(nbytes)
    out = np.zeros(int(ends[-1]), dtype=np.uint8)
    starts = ends - nbytes
    rem = values.copy()
    for k in range(int(nbytes.max())):
        live = nbytes > k
        byte = (rem[live] & np.uint64(0x7F)).astype(np.uint8)
        more = nbytes[live] > k + 1
        byte[more] |= 0x80
        out[starts[live] + k] = byte
        rem[live] = rem[live] >> np.uint64(7)
    return out.tobytes()


def _leb128_decode(data: bytes) -> np.ndarray:
    buf = np.frombuffer(data, dtype=np.uint8)
    if len(buf) == 0:
        return np.zeros(0, dtype=np.uint64)
    if buf[-1] & 0x80:
        raise CacheFormatError("truncated LEB128 stream")
    ends = np.flatnonzero((buf & 0x80) == 0)
    starts = np.concatenate(([0], ends[:-1] + 1))
    lengths = ends - starts + 1
    if lengths.max() > 10:
        raise CacheFormatError("LEB128 value wider than 64 bits")
    out = np.zeros(len(ends), dtype=np.uint64)
    for k in range(int(lengths.max())):
        live = lengths > k
        chunk = (buf[starts[live] + k] & 0x7F).astype(np.uint64)
        out[live] |= chunk << np.uint64(7 * k)
    return out


def write_cache(path: str | os.PathLike, limit: int, primes: np.ndarray) -> None:
    primes = np.asarray(primes, dtype=np.int64)
    gaps = np.diff(primes, prepend=0)
    payload = CACHE_MAGIC + bytes([CACHE_VERSION]) + struct.pack("<Q", int(limit)) + _leb128_encode(gaps)
    tmp = Path(str(path) + f".tmp{os.getpid()}")
    tmp.write_bytes(payload)
    os.replace(tmp, path)


def read_cache(path: str | os.PathLike) -> tuple[int, np.ndarray]:
    data = Path(path).read_bytes()
    if len(data) < 13 or data[:4] != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic")
    if data[4] != CACHE_VERSION:
        raise CacheFormatError(f"{path}: unsupported version {data[4]}")
    (limit,) = struct.unpack("<Q", data[5:13])
    primes = np.cumsum(_leb128_decode(data[13:])).astype(np.int64)
    return int(limit), primes


# --------------------------------------------------------------------------
# Shared prime table
# --------------------------------------------------------------------------

_table_lock = threading.Lock()
_table: np.ndarray = np.zeros(0, dtype=np.int64)
_table_limit = 1


def prime_table(limit: int, threads: int = 1) -> np.ndarray:
    """numpy array of all primes <= limit, memoised process-wide.

    The largest table sieved so far is kept; smaller requests are slices.
    """
    global _table, _table_limit
    limit = int(limit)
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    if limit > _hard_cap:
        raise ResourceError(f"limit {limit} exceeds hard cap {_hard_cap}")
    with _table_lock:
        if limit > _table_limit:
            stream = primes_up_to(limit, threads=threads)
            arr = stream.to_array()
            if stream.source == "sieve" and stream.config.cache_path is not None:
                try:
                    write_cache(stream.config.cache_path, limit, arr)
                except OSError:
                    pass
            _table, _table_limit = arr, limit
        table = _table
    return table[: np.searchsorted(table, limit, side="right")]


def prime_count(x: float) -> int:
    """pi(x): number of primes <= x."""
    if x < 2:
        return 0
    return len(prime_table(math.floor(x)))


def _nth_prime_bound(j: int) -> int:
    if j < 6:
        return 13
    lj = math.log(j)
    return int(j * (lj + math.log(lj))) + 1


def nth_prime(j: int) -> int:
    """The j-th prime, 1-indexed (nth_prime(1) == 2)."""
    if j < 1:
        raise DomainError(f"prime index must be >= 1, got {j}")
    bound = _nth_prime_bound(j)
    if bound > _hard_cap:
        raise RangeError(f"p_{j} lies beyond the sieve cap {_hard_cap}")
    table = prime_table(bound)
    if j > len(table):
        raise RangeError(f"p_{j} not within sieved range")
    return int(table[j - 1])
