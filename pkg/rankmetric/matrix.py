"""
Linear algebra over GF(2) on dense bit matrices.

Matrices are stored as ``numpy.uint8`` arrays of zeros and ones. A vector of field elements
is expanded row-wise: element ``i`` becomes row ``i`` and its bit ``j`` column ``j``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy

from rankmetric.field import GaloisField, xor_rank
from rankmetric.linearized import LinearizedPoly

log = logging.getLogger("rankLogger")


class MatrixError(ValueError):
    """Dimension mismatch or a received matrix without full row rank."""


class BitMatrix:
    """
    Dense matrix over GF(2).

    Args:
        data: array-like of 0/1 values with two dimensions.
    """

    def __init__(self, data) -> None:
        array = numpy.array(data, dtype=numpy.uint8) % 2
        if array.ndim != 2:
            if array.size == 0:
                array = array.reshape(0, 0)
            else:
                raise MatrixError(f"Bit matrix must be two-dimensional, got {array.ndim}")
        self.data = array

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(numpy.zeros((rows, cols), dtype=numpy.uint8))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(numpy.eye(n, dtype=numpy.uint8))

    @classmethod
    def from_ints(cls, values: Sequence[int], width: int) -> "BitMatrix":
        """Row ``i`` holds the bits of ``values[i]``, least significant bit in column 0."""
        if width > 64:
            rows = [[v >> j & 1 for j in range(width)] for v in values]
            return cls(rows) if rows else cls.zeros(0, width)
        shifts = numpy.arange(width, dtype=numpy.uint64)
        array = (numpy.array(list(values), dtype=numpy.uint64).reshape(-1, 1) >> shifts) & 1
        return cls(array.reshape(len(values), width))

    def to_ints(self) -> List[int]:
        out = []
        for row in self.data:
            value = 0
            for j in numpy.nonzero(row)[0]:
                value |= 1 << int(j)
            out.append(value)
        return out

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.data.copy())

    def columns(self, start: int, stop: int = None) -> "BitMatrix":
        return BitMatrix(self.data[:, start:stop])

    def select_rows(self, indices: Sequence[int]) -> "BitMatrix":
        return BitMatrix(self.data[list(indices), :].reshape(len(indices), self.cols))

    def hstack(self, *others: "BitMatrix") -> "BitMatrix":
        return BitMatrix(numpy.hstack([self.data] + [o.data for o in others]))

    def vstack(self, *others: "BitMatrix") -> "BitMatrix":
        blocks = [self] + list(others)
        cols = {b.cols for b in blocks if b.rows}
        if len(cols) > 1:
            raise MatrixError(f"Cannot stack matrices with column counts {sorted(cols)}")
        width = cols.pop() if cols else self.cols
        return BitMatrix(
            numpy.vstack([b.data.reshape(b.rows, width) for b in blocks])
            if any(b.rows for b in blocks)
            else numpy.zeros((0, width))
        )

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise MatrixError(f"Shapes {self.shape} and {other.shape} differ")
        return BitMatrix(self.data ^ other.data)

    __sub__ = __add__

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise MatrixError(f"Cannot multiply {self.shape} by {other.shape}")
        return BitMatrix((self.data.astype(numpy.int64) @ other.data.astype(numpy.int64)) % 2)

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix(self.data.T)

    def __eq__(self, other) -> bool:
        return isinstance(other, BitMatrix) and numpy.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def row_echelon(
    matrix: BitMatrix, pivot_cols: int = None, reduced: bool = True
) -> Tuple[BitMatrix, List[int]]:
    """
    Gaussian elimination over GF(2).

    Args:
        matrix: input matrix, left untouched
        pivot_cols: pivots are only searched in the first ``pivot_cols`` columns; row
            operations still act on full rows. Defaults to all columns.
        reduced: clear pivot columns above the pivot as well as below.

    Returns:
        The echelon form and the list of pivot columns (its length is the rank of the
        searched block).
    """
    r = matrix.data.copy()
    n_rows, n_cols = r.shape
    limit = n_cols if pivot_cols is None else pivot_cols
    pivots = []
    row = 0
    for col in range(limit):
        if row == n_rows:
            break
        candidates = numpy.nonzero(r[row:, col])[0]
        if candidates.size == 0:
            continue
        found = row + int(candidates[0])
        if found != row:
            r[[row, found]] = r[[found, row]]
        targets = numpy.nonzero(r[:, col])[0] if reduced else row + numpy.nonzero(r[row:, col])[0]
        targets = targets[targets != row]
        if targets.size:
            r[targets] ^= r[row]
        pivots.append(col)
        row += 1
    return BitMatrix(r), pivots


def rre(matrix: BitMatrix) -> Tuple[BitMatrix, int]:
    """Reduced row echelon form and rank."""
    reduced, pivots = row_echelon(matrix)
    return reduced, len(pivots)


def rank(matrix: BitMatrix) -> int:
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    return len(row_echelon(matrix, reduced=False)[1])


def left_null_space(matrix: BitMatrix) -> BitMatrix:
    """RRE basis of {z : z · matrix = 0}."""
    n = matrix.rows
    augmented = matrix.hstack(BitMatrix.identity(n))
    echelon, pivots = row_echelon(augmented, pivot_cols=matrix.cols)
    null = echelon.data[len(pivots):, matrix.cols:]
    return rre(BitMatrix(null.reshape(-1, n)))[0].select_rows(range(n - len(pivots)))


def subspace_distance(a: BitMatrix, b: BitMatrix) -> int:
    """
    Subspace distance of the row spaces: 2·rank[A; B] - rank A - rank B.

    Raises:
        MatrixError: if the column counts differ.
    """
    if a.cols != b.cols:
        raise MatrixError(f"Column counts {a.cols} and {b.cols} differ")
    return 2 * rank(a.vstack(b)) - rank(a) - rank(b)


def root_space(sigma: LinearizedPoly) -> List[int]:
    """
    Basis of the root space of ``sigma``.

    ``sigma`` is evaluated on the representation basis and the null space of the resulting
    bit matrix is extracted by elimination. The basis is returned in reduced row echelon
    form (bit 0 leftmost), so it is unique for a given root space.
    """
    if sigma.is_zero():
        raise ValueError("The zero polynomial vanishes everywhere")
    field: GaloisField = sigma.field
    evaluations = BitMatrix.from_ints([sigma(b) for b in field.basis_elements()], field.m)
    roots = left_null_space(evaluations).to_ints()
    log.debug(f"Root space of q-degree {sigma.qdeg} polynomial has dimension {len(roots)}")
    return roots


@dataclass(frozen=True)
class Reduction:
    """
    Decoder view of a received matrix in n-RRE form.

    Attributes:
        r_prime: n × w received word (row expansion), zero at erased positions
        L_hat: n × μ erasure locations, one column per erased position
        E_hat: δ × w deviations
        mu: number of erasures
        delta: number of deviations
        u_set: erased positions, sorted
    """

    r_prime: BitMatrix
    L_hat: BitMatrix
    E_hat: BitMatrix
    mu: int
    delta: int
    u_set: Tuple[int, ...]

    @property
    def n(self) -> int:
        return self.r_prime.rows

    def erasure_block(self) -> BitMatrix:
        """I + L̂ I_Uᵀ"""
        block = numpy.eye(self.n, dtype=numpy.uint8)
        for idx, u in enumerate(self.u_set):
            block[:, u] ^= self.L_hat.data[:, idx]
        return BitMatrix(block)

    def block_matrix(self) -> BitMatrix:
        """[I + L̂ I_Uᵀ, r′; 0, Ê′], whose row space equals the received one."""
        top = self.erasure_block().hstack(self.r_prime)
        bottom = BitMatrix.zeros(self.delta, self.n).hstack(self.E_hat)
        return top.vstack(bottom)

    def distance_to(self, x: BitMatrix) -> int:
        """
        Subspace distance between the lifting of ``x`` and the received space,
        2·rank[L̂, r′ - x; 0, Ê′] - μ - δ.
        """
        top = self.L_hat.hstack(self.r_prime - x)
        bottom = BitMatrix.zeros(self.delta, self.mu).hstack(self.E_hat)
        return 2 * rank(top.vstack(bottom)) - self.mu - self.delta

    def split(self, width: int) -> List["Reduction"]:
        """
        Splits a reduction of a wide matrix into per-block reductions of ``width`` columns.

        The erasure part is shared; each block keeps the independent part of its deviations.
        """
        if self.r_prime.cols % width:
            raise MatrixError(f"Width {self.r_prime.cols} is not a multiple of {width}")
        blocks = []
        for start in range(0, self.r_prime.cols, width):
            stop = start + width
            deviations, delta = rre(self.E_hat.columns(start, stop))
            blocks.append(
                Reduction(
                    r_prime=self.r_prime.columns(start, stop),
                    L_hat=self.L_hat,
                    E_hat=deviations.select_rows(range(delta)),
                    mu=self.mu,
                    delta=delta,
                    u_set=self.u_set,
                )
            )
        return blocks


def n_rre_reduce(received: BitMatrix, n: int) -> Reduction:
    """
    Reduces a received matrix to n-RRE form and extracts erasures and deviations.

    Only the leftmost ``n`` columns are brought to reduced row echelon form; rows left
    with a zero identity part carry the deviations.

    Raises:
        MatrixError: if the matrix is narrower than ``n`` columns or not of full row rank.
    """
    n_rows, n_cols = received.shape
    if n_cols <= n:
        raise MatrixError(f"Received matrix has {n_cols} columns, expected more than {n}")
    if rank(received) != n_rows:
        raise MatrixError("Received matrix is not of full row rank")

    echelon, pivots = row_echelon(received, pivot_cols=n)
    data = echelon.data
    width = n_cols - n
    rank_a = len(pivots)

    r_prime = numpy.zeros((n, width), dtype=numpy.uint8)
    a_hat = numpy.zeros((n, n), dtype=numpy.uint8)
    for row, col in enumerate(pivots):
        r_prime[col] = data[row, n:]
        a_hat[col] = data[row, :n]

    u_set = tuple(sorted(set(range(n)) - set(pivots)))
    l_hat = numpy.zeros((n, len(u_set)), dtype=numpy.uint8)
    for idx, u in enumerate(u_set):
        l_hat[:, idx] = a_hat[:, u]
        l_hat[u, idx] = 1

    e_hat = data[rank_a:, n:]
    log.debug(f"n-RRE reduction: mu={len(u_set)}, delta={n_rows - rank_a}")
    return Reduction(
        r_prime=BitMatrix(r_prime),
        L_hat=BitMatrix(l_hat.reshape(n, len(u_set))),
        E_hat=BitMatrix(e_hat.reshape(n_rows - rank_a, width)),
        mu=len(u_set),
        delta=n_rows - rank_a,
        u_set=u_set,
    )


class SpanBasis:
    """
    Incremental GF(2) basis of bit-packed vectors that remembers how each basis vector was
    combined from the inserted ones.
    """

    def __init__(self) -> None:
        self._rows: List[Tuple[int, int, int]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def _reduce(self, vector: int) -> Tuple[int, int]:
        combination = 0
        for pivot, row, tag in self._rows:
            if vector >> pivot & 1:
                vector ^= row
                combination ^= tag
        return vector, combination

    def add(self, vector: int, tag: int = 0) -> bool:
        """Inserts ``vector`` labelled by the bit mask ``tag``; False if it is dependent."""
        reduced, combination = self._reduce(vector)
        if not reduced:
            return False
        self._rows.append((reduced.bit_length() - 1, reduced, combination ^ tag))
        return True

    def express(self, vector: int) -> Optional[int]:
        """XOR of the tags whose vectors sum to ``vector``, or None outside the span."""
        reduced, combination = self._reduce(vector)
        return None if reduced else combination


def rank_of(values: Sequence[int]) -> int:
    """Rank over GF(2) of a vector of field elements."""
    return xor_rank(values)


def rank_distance(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise MatrixError(f"Lengths {len(a)} and {len(b)} differ")
    return xor_rank([x ^ y for x, y in zip(a, b)])
