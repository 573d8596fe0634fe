"""Dense exact linear algebra over K.

Matrices are small (at most about 10 x 10), so plain Gaussian elimination on
lists of :class:`~greenops.constants.ExpConstant` is enough.  Pivoting is
deterministic: in each column the first nonzero entry at or below the
current pivot row is rotated up (a cyclic shift of the rows in between, not
a swap), so the transform matrices are reproducible.
"""

from .constants import ExpConstant, ONE, ZERO
from .errors import Inconsistent, RankDeficient

_K = ExpConstant.coerce


class KMatrix:
    """Immutable rectangular matrix over K."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows, ncols=None):
        self.rows = tuple(tuple(_K(v) for v in row) for row in rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.ncols = ncols

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m, n):
        return cls([[ZERO] * n for _ in range(m)], n)

    @property
    def shape(self):
        return len(self.rows), self.ncols

    @property
    def nrows(self):
        return len(self.rows)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def column(self, j):
        return [r[j] for r in self.rows]

    def transpose(self):
        return KMatrix([list(col) for col in zip(*self.rows)] if self.rows else [], self.nrows)

    def __matmul__(self, other):
        if isinstance(other, KMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = [other.column(j) for j in range(other.ncols)]
            return KMatrix(
                [[_dot(r, c) for c in cols] for r in self.rows], other.ncols
            )
        vec = list(other)
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return [_dot(r, vec) for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, KMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    __hash__ = None

    def is_zero(self):
        return all(not v for r in self.rows for v in r)

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows) + "]"

    def __repr__(self):
        return f"KMatrix({self})"


def _dot(a, b):
    total = ZERO
    for x, y in zip(a, b):
        if x and y:
            total = total + x * y
    return total


def _as_matrix(M):
    return M if isinstance(M, KMatrix) else KMatrix(M)


def _eliminate(M):
    """Reduce to rref; returns (R rows, S rows, pivot columns)."""
    M = _as_matrix(M)
    m, n = M.shape
    R = [list(r) for r in M.rows]
    S = [[ONE if i == j else ZERO for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        hit = next((i for i in range(r, m) if R[i][c]), None)
        if hit is None:
            continue
        if hit != r:
            R.insert(r, R.pop(hit))
            S.insert(r, S.pop(hit))
        p = R[r][c]
        if p != 1:
            inv = ONE / p
            R[r] = [v * inv for v in R[r]]
            S[r] = [v * inv for v in S[r]]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [a - f * b if b else a for a, b in zip(R[i], R[r])]
                S[i] = [a - f * b if b else a for a, b in zip(S[i], S[r])]
        pivots.append(c)
        r += 1
    return R, S, pivots


def rref_with_transform(M):
    """Return ``(R, S)`` with ``S`` invertible and ``R = S M`` in reduced row echelon form."""
    M = _as_matrix(M)
    R, S, _ = _eliminate(M)
    return KMatrix(R, M.ncols), KMatrix(S, M.nrows)


def pivot_columns(M):
    return _eliminate(M)[2]


def rank(M):
    return len(_eliminate(M)[2])


def is_invertible(M):
    M = _as_matrix(M)
    return M.nrows == M.ncols and rank(M) == M.nrows


def kernel_basis(M):
    """Basis of the right null space, one vector per free column."""
    M = _as_matrix(M)
    R, _, pivots = _eliminate(M)
    free = [j for j in range(M.ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * M.ncols
        v[f] = ONE
        for row, pc in enumerate(pivots):
            if R[row][f]:
                v[pc] = -R[row][f]
        basis.append(v)
    return basis


def solve(M, b):
    """One solution of ``M v = b`` (free variables set to zero)."""
    M = _as_matrix(M)
    b = [_K(v) for v in b]
    if len(b) != M.nrows:
        raise ValueError("shape mismatch")
    R, S, pivots = _eliminate(M)
    Sb = [_dot(row, b) for row in S]
    if any(Sb[i] for i in range(len(pivots), M.nrows)):
        raise Inconsistent("linear system has no solution")
    v = [ZERO] * M.ncols
    for row, pc in enumerate(pivots):
        v[pc] = Sb[row]
    return v


def left_inverse(M):
    """The first ``rank`` rows of the rref transform; ``L M = I``."""
    M = _as_matrix(M)
    R, S, pivots = _eliminate(M)
    if len(pivots) != M.ncols:
        raise RankDeficient("matrix does not have full column rank")
    return KMatrix(S[: M.ncols], M.nrows)


def inverse(M):
    M = _as_matrix(M)
    if M.nrows != M.ncols:
        raise RankDeficient("non-square matrix has no inverse")
    return left_inverse(M)
