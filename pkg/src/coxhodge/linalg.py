"""Dense exact linear algebra over an arbitrary field.

Entries only need +, -, *, /, truthiness as a zero test, and ==; both
FieldElement and Fraction qualify.  Matrices are small (desk scale), so plain
Gaussian elimination with the first nonzero pivot is used throughout.
"""

from __future__ import annotations

from .errors import InternalInvariantError


class Mat:
    """An immutable-by-convention dense matrix with explicit shape.

    The explicit shape matters because degree components of graded modules
    are frequently zero-dimensional.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise InternalInvariantError("matrix shape mismatch")

    @staticmethod
    def from_rows(rows):
        return Mat(len(rows), len(rows[0]) if rows else 0, [list(r) for r in rows])

    @staticmethod
    def zeros(nrows, ncols, zero):
        return Mat(nrows, ncols, [[zero] * ncols for _ in range(nrows)])

    @staticmethod
    def identity(n, one, zero):
        rows = [[zero] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = one
        return Mat(n, n, rows)

    @staticmethod
    def hstack(mats, nrows):
        rows = [[] for _ in range(nrows)]
        for m in mats:
            if m.nrows != nrows:
                raise InternalInvariantError("hstack row mismatch")
            for i in range(nrows):
                rows[i].extend(m.rows[i])
        return Mat(nrows, sum(m.ncols for m in mats), rows)

    def copy(self):
        return Mat(self.nrows, self.ncols, [list(r) for r in self.rows])

    def transpose(self):
        return Mat(self.ncols, self.nrows,
                   [[self.rows[i][j] for i in range(self.nrows)]
                    for j in range(self.ncols)])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise InternalInvariantError(
                f"matmul shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        out = []
        bt = other.transpose().rows
        for row in self.rows:
            out_row = []
            for col in bt:
                acc = None
                for a, b in zip(row, col):
                    if a and b:
                        acc = a * b if acc is None else acc + a * b
                if acc is None:
                    acc = _zero_like(self, other)
                out_row.append(acc)
            out.append(out_row)
        return Mat(self.nrows, other.ncols, out)

    def __add__(self, other):
        return Mat(self.nrows, self.ncols,
                   [[a + b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Mat(self.nrows, self.ncols,
                   [[a - b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.rows, other.rows)])

    def scaled(self, f):
        return Mat(self.nrows, self.ncols, [[a * f for a in r] for r in self.rows])

    def col(self, j):
        return [r[j] for r in self.rows]

    def is_zero(self):
        return not any(any(r) for r in self.rows)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols})"


def _zero_like(a: Mat, b: Mat):
    for m in (a, b):
        for row in m.rows:
            for x in row:
                return x - x
    raise InternalInvariantError("cannot infer zero from empty matrices")


def mat_mul(a: Mat, b: Mat, zero) -> Mat:
    """Matrix product that survives zero inner dimensions."""
    if a.ncols != b.nrows:
        raise InternalInvariantError("matmul shape mismatch")
    if a.ncols == 0 or a.nrows == 0 or b.ncols == 0:
        return Mat.zeros(a.nrows, b.ncols, zero)
    return a @ b


def mat_apply(m: Mat, vec):
    out = []
    for row in m.rows:
        acc = None
        for a, v in zip(row, vec):
            if a and v:
                acc = a * v if acc is None else acc + a * v
        if acc is None:
            acc = row[0] - row[0] if row else vec[0] - vec[0]
        out.append(acc)
    return out


def rref(m: Mat):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    a = [list(r) for r in m.rows]
    pivots = []
    r = 0
    for c in range(m.ncols):
        pr = None
        for i in range(r, m.nrows):
            if a[i][c]:
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(m.nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.nrows:
            break
    return Mat(m.nrows, m.ncols, a), pivots


def rank(m: Mat) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return len(rref(m)[1])


def nullspace(m: Mat, one, zero):
    """Basis of the right null space {v : m v = 0}, as column vectors."""
    if m.ncols == 0:
        return []
    if m.nrows == 0:
        return [[one if i == j else zero for i in range(m.ncols)]
                for j in range(m.ncols)]
    red, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * m.ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -red.rows[r][fc]
        basis.append(v)
    return basis


def solve(a: Mat, b: Mat, zero):
    """X with a @ X = b, or None when inconsistent (free coordinates zero)."""
    if a.ncols == 0:
        return None if any(any(r) for r in b.rows) else Mat.zeros(0, b.ncols, zero)
    aug = Mat.hstack([a, b], a.nrows)
    red, pivots = rref(aug)
    pivots_a = [p for p in pivots if p < a.ncols]
    if len(pivots_a) != len(pivots):
        return None
    x = [[zero] * b.ncols for _ in range(a.ncols)]
    for r, pc in enumerate(pivots_a):
        for j in range(b.ncols):
            x[pc][j] = red.rows[r][a.ncols + j]
    return Mat(a.ncols, b.ncols, x)


def inverse(m: Mat, one, zero):
    if m.nrows != m.ncols:
        raise InternalInvariantError("inverse of a non-square matrix")
    x = solve(m, Mat.identity(m.nrows, one, zero), zero)
    if x is None or rank(m) != m.nrows:
        raise InternalInvariantError("matrix is singular")
    return x


def det(m: Mat, one):
    if m.nrows != m.ncols:
        raise InternalInvariantError("determinant of a non-square matrix")
    n = m.nrows
    if n == 0:
        return one
    a = [list(r) for r in m.rows]
    result = one
    sign_flip = False
    for c in range(n):
        pr = None
        for i in range(c, n):
            if a[i][c]:
                pr = i
                break
        if pr is None:
            return one - one
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            sign_flip = not sign_flip
        result = result * a[c][c]
        inv = a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return -result if sign_flip else result


def inertia(gram: Mat, sign_fn, one, zero):
    """Sylvester inertia (positive, negative, zero) of a symmetric matrix.

    Symmetric congruence elimination: pivot on a nonzero diagonal entry when
    one exists, otherwise turn a nonzero off-diagonal pair into a hyperbolic
    +1/-1 contribution.  Only the sign oracle is applied to pivots.
    """
    n = gram.nrows
    if gram.ncols != n:
        raise InternalInvariantError("inertia of a non-square matrix")
    for i in range(n):
        for j in range(i + 1, n):
            if gram.rows[i][j] != gram.rows[j][i]:
                raise InternalInvariantError("inertia of a non-symmetric matrix")
    a = [list(r) for r in gram.rows]
    alive = list(range(n))
    pos = neg = zero_count = 0
    while alive:
        piv = None
        for i in alive:
            if a[i][i]:
                piv = i
                break
        if piv is not None:
            s = sign_fn(a[piv][piv])
            if s > 0:
                pos += 1
            else:
                neg += 1
            d = a[piv][piv]
            alive.remove(piv)
            for i in alive:
                f = a[i][piv] / d
                if f:
                    for j in alive:
                        a[i][j] = a[i][j] - f * a[piv][j]
            # keep symmetry exactly
            for i in alive:
                a[piv][i] = zero
                a[i][piv] = zero
            continue
        pair = None
        for i in alive:
            for j in alive:
                if i < j and a[i][j]:
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            zero_count += len(alive)
            break
        i, j = pair
        # rows/cols i+j and i-j diagonalise the hyperbolic block
        b = a[i][j]
        for k in alive:
            if k in (i, j):
                continue
            u = a[i][k] + a[j][k]
            v = a[i][k] - a[j][k]
            a[i][k] = u
            a[k][i] = u
            a[j][k] = v
            a[k][j] = v
        a[i][i] = b + b
        a[j][j] = -(b + b)
        a[i][j] = zero
        a[j][i] = zero
    return (pos, neg, zero_count)
