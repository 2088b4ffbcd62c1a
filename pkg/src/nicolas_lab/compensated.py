"""Neumaier-compensated accumulation, scalar and blocked-prefix forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PREFIX_BLOCK = 1024


@dataclass
class CompensatedSum:
    """Running sum with a Neumaier correction term.

    After adding any finite sequence of terms t_i the result differs from
    the exact sum by at most 2 * eps * sum |t_i|.
    """

    primary: float = 0.0
    compensation: float = 0.0

    def add(self, term: float) -> "CompensatedSum":
        s = self.primary
        t = s + term
        if abs(s) >= abs(term):
            self.compensation += (s - t) + term
        else:
            self.compensation += (term - t) + s
        self.primary = t
        return self

    def extend(self, terms) -> "CompensatedSum":
        # Each block is first reduced with an exactly rounded fsum.
        arr = np.asarray(terms, dtype=np.float64).ravel()
        for i in range(0, len(arr), 4096):
            self.add(math.fsum(arr[i : i + 4096].tolist()))
        return self

    def merge(self, other: "CompensatedSum") -> "CompensatedSum":
        self.add(other.primary)
        self.add(other.compensation)
        return self

    def copy(self) -> "CompensatedSum":
        return CompensatedSum(self.primary, self.compensation)

    @property
    def value(self) -> float:
        return self.primary + self.compensation

    def __float__(self) -> float:
        return self.value


def compensated_total(terms) -> float:
    return CompensatedSum().extend(terms).value


@dataclass
class PrefixCarry:
    """State of a blocked prefix sum: the accumulator at the last block
    boundary plus the terms of the unfinished block.

    Continuing from a carry reproduces the sequential block partition, so
    a split pass gives bit-identical prefixes.
    """

    acc: CompensatedSum
    pending: np.ndarray

    @property
    def value(self) -> float:
        if len(self.pending) == 0:
            return self.acc.value
        return self.acc.primary + (self.acc.compensation + float(np.cumsum(self.pending)[-1]))


def compensated_prefix(terms, start: CompensatedSum | PrefixCarry | None = None,
                       block: int = PREFIX_BLOCK) -> tuple[np.ndarray, PrefixCarry]:
    """Prefix sums of ``terms``, with ``out[0]`` equal to the starting value.

    Inside a block the running sum is a plain cumsum; block totals are
    exactly rounded with fsum and carried by a CompensatedSum, so the
    naive error is confined to at most ``block`` terms. Block boundaries
    are counted from the first term of the whole (possibly carried) pass.

    Returns the prefix array (len(terms) + 1) and the carry for a
    continuation.
    """
    if start is None:
        carry = PrefixCarry(CompensatedSum(), np.zeros(0))
    elif isinstance(start, CompensatedSum):
        carry = PrefixCarry(start.copy(), np.zeros(0))
    else:
        carry = PrefixCarry(start.acc.copy(), start.pending)
    arr = np.asarray(terms, dtype=np.float64)
    skip = len(carry.pending)
    if skip:
        arr = np.concatenate([carry.pending, arr])
    n = len(arr)
    acc = carry.acc
    out = np.empty(n + 1, dtype=np.float64)
    out[0] = acc.value
    last = 0
    for i in range(0, n, block):
        chunk = arr[i : i + block]
        within = np.cumsum(chunk)
        out[i + 1 : i + 1 + len(chunk)] = acc.primary + (acc.compensation + within)
        if len(chunk) == block:
            acc.add(math.fsum(chunk.tolist()))
            last = i + block
    return out[skip:], PrefixCarry(acc, arr[last:].copy())


def compensated_suffix(terms, block: int = PREFIX_BLOCK) -> np.ndarray:
    """``out[k] = sum(terms[k:])`` with ``out[len] = 0``, compensated."""
    arr = np.asarray(terms, dtype=np.float64)
    rev, _ = compensated_prefix(arr[::-1], block=block)
    return rev[::-1].copy()
