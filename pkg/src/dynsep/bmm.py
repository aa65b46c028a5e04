"""Word-packed Boolean matrix products and per-edge triangle witnesses."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import Edge, Graph, iter_bits, lowest_bit

WORD = 64


@dataclass
class BoolMatrix:
    """Row-major 0/1 matrix packed into uint64 words, bit ``j`` of a row in word ``j // 64``."""

    rows: int
    cols: int
    bits: np.ndarray

    def __post_init__(self) -> None:
        words = (self.cols + WORD - 1) // WORD
        if self.bits.shape != (self.rows, words) or self.bits.dtype != np.uint64:
            raise ValueError(f"bits must be uint64 of shape ({self.rows}, {words})")
        pad = words * WORD - self.cols
        if pad and self.rows and np.any(self.bits[:, -1] >> np.uint64(WORD - pad)):
            raise ValueError("padding bits must be zero")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BoolMatrix:
        words = (cols + WORD - 1) // WORD
        return cls(rows, cols, np.zeros((rows, words), dtype=np.uint64))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]] | np.ndarray) -> BoolMatrix:
        arr = np.asarray(dense, dtype=bool)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows, cols = arr.shape
        words = (cols + WORD - 1) // WORD
        padded = np.zeros((rows, words * WORD), dtype=bool)
        padded[:, :cols] = arr
        packed = np.packbits(padded, axis=1, bitorder="little")
        bits = packed.view("<u8").astype(np.uint64).reshape(rows, words)
        return cls(rows, cols, bits)

    @classmethod
    def identity(cls, n: int) -> BoolMatrix:
        return cls.from_dense(np.eye(n, dtype=bool))

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=bool)
        raw = self.bits.astype("<u8").view(np.uint8).reshape(self.rows, -1)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.cols].astype(bool)

    def get(self, i: int, j: int) -> bool:
        return bool((self.bits[i, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))

    def row_int(self, i: int) -> int:
        """Row ``i`` as a Python int bitset."""
        return int.from_bytes(self.bits[i].astype("<u8").tobytes(), "little")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoolMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(self.bits, other.bits)


def bool_matmul(a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    """Boolean product: row ``i`` of the result is the OR of the rows of ``b`` selected by row ``i`` of ``a``."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    out = BoolMatrix.zeros(a.rows, b.cols)
    if b.rows == 0:
        return out
    for i in range(a.rows):
        ks = list(iter_bits(a.row_int(i)))
        if ks:
            out.bits[i] = np.bitwise_or.reduce(b.bits[ks], axis=0)
    return out


def triangle_witness_all_edges(g: Graph) -> dict[Edge, Optional[int]]:
    """For every edge, the smallest common neighbour of its endpoints, or ``None``."""
    rows = g.rows
    out: dict[Edge, Optional[int]] = {}
    for u, v in g.edges():
        common = rows[u] & rows[v]
        out[(u, v)] = lowest_bit(common) if common else None
    return out


def prune_triangle_free_edges(g: Graph) -> list[Edge]:
    """Delete, in place, every edge of ``g`` that lies in no triangle; return them."""
    dead = [e for e, w in triangle_witness_all_edges(g).items() if w is None]
    for u, v in dead:
        g.delete_edge(u, v)
    return dead
