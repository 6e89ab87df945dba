"""GF(2) linear algebra on int bitmasks.

Matrices store one int per row; bit c of row r is the (r, c) entry. Vectors
are plain ints with bit k = entry k.
"""

from __future__ import annotations

from dataclasses import dataclass


def mask_to_bits(mask: int, length: int) -> tuple[int, ...]:
    return tuple((mask >> k) & 1 for k in range(length))


def bits_to_mask(bits) -> int:
    mask = 0
    for k, b in enumerate(bits):
        mask |= (b & 1) << k
    return mask


@dataclass(frozen=True)
class BinaryMatrix:
    rows: int
    cols: int
    data: tuple[int, ...]  # row bitmasks

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count mismatch")
        full = (1 << self.cols) - 1
        if any(row & ~full for row in self.data):
            raise ValueError("row bits exceed the column count")

    @classmethod
    def identity(cls, k: int) -> BinaryMatrix:
        return cls(k, k, tuple(1 << i for i in range(k)))

    @classmethod
    def from_rows(cls, rows: list, cols: int) -> BinaryMatrix:
        masks = tuple(r if isinstance(r, int) else bits_to_mask(r) for r in rows)
        return cls(len(masks), cols, masks)

    @classmethod
    def from_columns(cls, columns: list, rows: int) -> BinaryMatrix:
        masks = [c if isinstance(c, int) else bits_to_mask(c) for c in columns]
        out = [0] * rows
        for c, col in enumerate(masks):
            for r in range(rows):
                out[r] |= ((col >> r) & 1) << c
        return cls(rows, len(masks), tuple(out))

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return (self.data[r] >> c) & 1

    def column(self, c: int) -> int:
        mask = 0
        for r in range(self.rows):
            mask |= ((self.data[r] >> c) & 1) << r
        return mask

    def matvec(self, vec: int) -> int:
        out = 0
        for r, row in enumerate(self.data):
            out |= ((row & vec).bit_count() & 1) << r
        return out

    def matmul(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        rows = []
        for row in self.data:
            acc = 0
            rr = row
            while rr:
                k = (rr & -rr).bit_length() - 1
                acc ^= other.data[k]
                rr &= rr - 1
            rows.append(acc)
        return BinaryMatrix(self.rows, other.cols, tuple(rows))

    def is_unit_lower_triangular(self) -> bool:
        if self.rows != self.cols:
            return False
        above = 0
        for r in range(self.rows):
            if (self.data[r] >> r) & 1 == 0:
                return False
            if self.data[r] >> (r + 1):
                return False
            above |= self.data[r]
        return True

    def invert(self) -> BinaryMatrix:
        """Gauss-Jordan inverse; raises ValueError on a singular matrix."""
        if self.rows != self.cols:
            raise ValueError("only square matrices can be inverted")
        k = self.rows
        work = list(self.data)
        aug = [1 << i for i in range(k)]
        row = 0
        for col in range(k):
            piv = next((r for r in range(row, k) if (work[r] >> col) & 1), None)
            if piv is None:
                raise ValueError("singular matrix over GF(2)")
            work[row], work[piv] = work[piv], work[row]
            aug[row], aug[piv] = aug[piv], aug[row]
            for r in range(k):
                if r != row and (work[r] >> col) & 1:
                    work[r] ^= work[row]
                    aug[r] ^= aug[row]
            row += 1
        return BinaryMatrix(k, k, tuple(aug))


def solve_linear(rows: list[int], rhs: list[int], ncols: int) -> int | None:
    """Particular solution of a GF(2) system, free variables set to zero.

    ``rows`` are coefficient bitmasks, ``rhs`` the matching right-hand bits.
    Returns the solution as a bitmask, or None when inconsistent.
    """
    work = [(row, b & 1) for row, b in zip(rows, rhs)]
    pivots: list[tuple[int, int, int]] = []  # (col, row, rhs)
    for row, b in work:
        for col, prow, pb in pivots:
            if (row >> col) & 1:
                row ^= prow
                b ^= pb
        if row == 0:
            if b:
                return None
            continue
        col = (row & -row).bit_length() - 1
        # reduce earlier pivots so back-substitution is immediate
        reduced = []
        for pcol, prow, pb in pivots:
            if (prow >> col) & 1:
                prow ^= row
                pb ^= b
            reduced.append((pcol, prow, pb))
        pivots = reduced
        pivots.append((col, row, b))
    sol = 0
    for col, _, b in pivots:
        sol |= b << col
    return sol


def solve_columns(columns: list[int], target: int, nrows: int) -> int | None:
    """Solve M r = target where M has the given columns (bitmask per column)."""
    rows = []
    for r in range(nrows):
        mask = 0
        for c, col in enumerate(columns):
            mask |= ((col >> r) & 1) << c
        rows.append(mask)
    rhs = [(target >> r) & 1 for r in range(nrows)]
    return solve_linear(rows, rhs, len(columns))
