"""
Sparse linear algebra over the two-element field.

Matrices are stored column-compressed with sorted row indices. Ranks are
computed by column reduction: each column is cleared against previously
stored columns keyed by their lowest row index, so the result never depends
on scheduling. Blocks smaller than 64x64 go through a bit-packed dense
elimination instead.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Hashable, Iterable, Mapping

import numba
import numpy as np
from numba.typed import List

DENSE_CUTOFF = 64


class ComplexError(ValueError):
    """Raised when a graded complex is malformed or has nonzero ``d o d``."""


class SparseBoolMatrix:
    """An immutable ``rows x cols`` matrix with entries in GF(2).

    Only the positions holding a 1 are stored, in compressed-column form.
    Build instances with :meth:`from_entries` or :meth:`from_coo`; the raw
    constructor trusts its arguments.
    """

    __slots__ = ("rows", "cols", "indptr", "indices")

    def __init__(self, rows: int, cols: int, indptr: np.ndarray, indices: np.ndarray):
        self.rows = int(rows)
        self.cols = int(cols)
        self.indptr = indptr
        self.indices = indices
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False

    @classmethod
    def from_coo(cls, rows: int, cols: int, r, c, *, reduce: bool = True) -> "SparseBoolMatrix":
        """Assemble from coordinate arrays.

        With ``reduce=True`` repeated positions are summed mod 2 (pairs
        cancel). With ``reduce=False`` repeats are an error.
        """
        r = np.asarray(r, dtype=np.int64).ravel()
        c = np.asarray(c, dtype=np.int64).ravel()
        if r.shape != c.shape:
            raise ValueError("row and column index arrays differ in length")
        if r.size and (r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols):
            raise ValueError(f"entry out of bounds for a {rows}x{cols} matrix")
        key = c * max(rows, 1) + r
        key, counts = np.unique(key, return_counts=True)
        if reduce:
            key = key[counts % 2 == 1]
        elif np.any(counts > 1):
            raise ValueError("duplicate entry positions")
        cc = key // max(rows, 1)
        rr = key - cc * max(rows, 1)
        indptr = np.zeros(cols + 1, dtype=np.int64)
        np.add.at(indptr, cc + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(rows, cols, indptr, rr.astype(np.int32))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int]]) -> "SparseBoolMatrix":
        entries = list(entries)
        if not entries:
            return cls.zeros(rows, cols)
        r, c = zip(*entries)
        return cls.from_coo(rows, cols, r, c, reduce=False)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseBoolMatrix":
        return cls(rows, cols, np.zeros(cols + 1, dtype=np.int64), np.zeros(0, dtype=np.int32))

    @classmethod
    def identity(cls, n: int) -> "SparseBoolMatrix":
        return cls.from_coo(n, n, np.arange(n), np.arange(n))

    @classmethod
    def from_dense(cls, a) -> "SparseBoolMatrix":
        a = np.asarray(a) % 2
        r, c = np.nonzero(a)
        return cls.from_coo(a.shape[0], a.shape[1], r, c, reduce=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    def coo(self) -> tuple[np.ndarray, np.ndarray]:
        c = np.repeat(np.arange(self.cols, dtype=np.int64), np.diff(self.indptr))
        return self.indices.astype(np.int64), c

    def entries(self) -> set[tuple[int, int]]:
        r, c = self.coo()
        return set(zip(r.tolist(), c.tolist()))

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        r, c = self.coo()
        out[r, c] = 1
        return out

    def transpose(self) -> "SparseBoolMatrix":
        r, c = self.coo()
        return SparseBoolMatrix.from_coo(self.cols, self.rows, c, r, reduce=False)

    T = property(transpose)

    def permute(self, row_perm, col_perm) -> "SparseBoolMatrix":
        """Move row ``i`` to ``row_perm[i]`` and column ``j`` to ``col_perm[j]``."""
        r, c = self.coo()
        return SparseBoolMatrix.from_coo(
            self.rows, self.cols, np.asarray(row_perm)[r], np.asarray(col_perm)[c], reduce=False
        )

    def __matmul__(self, other: "SparseBoolMatrix") -> "SparseBoolMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a = self._scipy()
        b = other._scipy()
        prod = (a @ b).tocoo()
        odd = (prod.data % 2) == 1
        return SparseBoolMatrix.from_coo(
            self.rows, other.cols, prod.row[odd], prod.col[odd], reduce=False
        )

    def _scipy(self):
        import scipy.sparse as sp

        data = np.ones(self.nnz, dtype=np.int64)
        return sp.csc_matrix((data, self.indices, self.indptr), shape=self.shape)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBoolMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.shape, self.indices.tobytes(), self.indptr.tobytes()))

    def __repr__(self) -> str:
        return f"SparseBoolMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def rank(self) -> int:
        return rank(self)


@numba.njit(cache=True)
def _symdiff(a, b):
    out = np.empty(a.size + b.size, dtype=np.int32)
    i = j = k = 0
    while i < a.size and j < b.size:
        if a[i] < b[j]:
            out[k] = a[i]
            i += 1
            k += 1
        elif b[j] < a[i]:
            out[k] = b[j]
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < a.size:
        out[k] = a[i]
        i += 1
        k += 1
    while j < b.size:
        out[k] = b[j]
        j += 1
        k += 1
    return out[:k].copy()


@numba.njit(cache=True, nogil=True)
def _column_reduce_rank(indptr, indices, nrows, order):
    owner = np.full(nrows, -1, dtype=np.int64)
    stored = List()
    stored.append(np.zeros(0, dtype=np.int32))
    stored.pop()
    for j in order:
        col = indices[indptr[j]:indptr[j + 1]].copy()
        while col.size > 0:
            o = owner[col[0]]
            if o < 0:
                owner[col[0]] = len(stored)
                stored.append(col)
                break
            col = _symdiff(col, stored[o])
    return len(stored)


def _dense_rank(m: SparseBoolMatrix) -> int:
    # rows as python-int bitsets; xor-eliminate on the lowest set bit
    vecs = [0] * m.cols
    r, c = m.coo()
    for i, j in zip(r.tolist(), c.tolist()):
        vecs[j] |= 1 << i
    pivots: dict[int, int] = {}
    for v in vecs:
        while v:
            low = (v & -v).bit_length() - 1
            p = pivots.get(low)
            if p is None:
                pivots[low] = v
                break
            v ^= p
    return len(pivots)


def rank(m: SparseBoolMatrix) -> int:
    """Rank of ``m`` over GF(2)."""
    if m.nnz == 0:
        return 0
    if m.rows < DENSE_CUTOFF and m.cols < DENSE_CUTOFF:
        return _dense_rank(m)
    # sparse columns first keeps fill-in low; the stable sort keeps it deterministic
    order = np.argsort(np.diff(m.indptr), kind="stable").astype(np.int64)
    return int(_column_reduce_rank(m.indptr, m.indices, m.rows, order))


class GradedComplex:
    """A finite chain complex over GF(2) split into labelled blocks.

    ``dims`` maps a grading label to the number of generators in that block.
    ``differentials`` maps ``(source, target)`` label pairs to the boundary
    matrix, of shape ``(dims[target], dims[source])``. Each block has at most
    one outgoing differential.
    """

    def __init__(
        self,
        dims: Mapping[Hashable, int],
        differentials: Mapping[tuple[Hashable, Hashable], SparseBoolMatrix],
        *,
        check: bool = True,
    ):
        self.dims = dict(dims)
        self.differentials = dict(differentials)
        self._out: dict[Hashable, Hashable] = {}
        self._in: dict[Hashable, Hashable] = {}
        self.checked = False
        for (src, dst), d in self.differentials.items():
            if src not in self.dims or dst not in self.dims:
                raise ComplexError(f"differential {src}->{dst} references an unknown block")
            if d.shape != (self.dims[dst], self.dims[src]):
                raise ComplexError(
                    f"differential {src}->{dst} has shape {d.shape}, "
                    f"expected {(self.dims[dst], self.dims[src])}"
                )
            if src in self._out or dst in self._in:
                raise ComplexError(f"block {src} or {dst} has two differentials")
            self._out[src] = dst
            self._in[dst] = src
        if check:
            self.check_square_zero()

    def outgoing(self, label):
        dst = self._out.get(label)
        return None if dst is None else self.differentials[(label, dst)]

    def incoming(self, label):
        src = self._in.get(label)
        return None if src is None else self.differentials[(src, label)]

    def check_square_zero(self) -> None:
        for (src, mid), d1 in self.differentials.items():
            dst = self._out.get(mid)
            if dst is None:
                continue
            d2 = self.differentials[(mid, dst)]
            if d1.nnz and d2.nnz and not (d2 @ d1).is_zero():
                raise ComplexError(f"d o d != 0 on {src} -> {mid} -> {dst}")
        self.checked = True

    def euler_characteristic(self, parity) -> int:
        """Alternating sum of block dimensions; ``parity(label)`` gives the sign exponent."""
        return sum((-1) ** (parity(k) % 2) * v for k, v in self.dims.items())


def homology_ranks(c: GradedComplex, *, threads: int = 1, check: bool = True) -> dict:
    """Homology rank of every block: ``dim - rank(d out) - rank(d in)``.

    Matrix ranks are independent of each other, so with ``threads > 1`` they
    are computed on a pool; the result is the same mapping either way.
    Unless ``check`` is off, ``d o d = 0`` is verified first.
    """
    if check and not c.checked:
        c.check_square_zero()
    keys = list(c.differentials)
    mats = [c.differentials[k] for k in keys]
    if threads > 1 and len(mats) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            ranks = list(pool.map(rank, mats))
    else:
        ranks = [rank(m) for m in mats]
    rk = dict(zip(keys, ranks))
    out = {}
    for label, dim in c.dims.items():
        h = dim
        dst = c._out.get(label)
        if dst is not None:
            h -= rk[(label, dst)]
        src = c._in.get(label)
        if src is not None:
            h -= rk[(src, label)]
        if h < 0:
            raise ComplexError(f"negative homology rank at {label}; d o d is not zero")
        out[label] = h
    return out
