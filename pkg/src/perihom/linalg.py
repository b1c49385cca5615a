"""Exact dense matrices, canonical subspaces and endomorphism analysis.

Everything here is immutable and deterministic: subspaces are kept in
reduced column-echelon form so equal subspaces compare equal, and the
generalized image/kernel of a square matrix is found by repeated squaring.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .field import Field


class LinAlgError(Exception):
    pass


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: int
    cols: int
    data: tuple  # row-major tuple of row tuples

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_rows(field: Field, rows) -> "Matrix":
        data = tuple(tuple(field.of(x) for x in r) for r in rows)
        n = len(data[0]) if data else 0
        for r in data:
            if len(r) != n:
                raise LinAlgError("ragged rows")
        return Matrix(field, len(data), n, data)

    @staticmethod
    def zero(field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return Matrix(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return Matrix(
            field, n, n,
            tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)),
        )

    @staticmethod
    def from_columns(field: Field, cols, nrows: int | None = None) -> "Matrix":
        cols = [list(c) for c in cols]
        if nrows is None:
            if not cols:
                raise LinAlgError("need nrows for an empty column list")
            nrows = len(cols[0])
        for c in cols:
            if len(c) != nrows:
                raise LinAlgError("ragged columns")
        if nrows == 0:
            return Matrix(field, 0, len(cols), ())
        return Matrix.from_rows(
            field, [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        )

    # -- access --------------------------------------------------------------

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def row(self, i):
        return self.data[i]

    def col(self, j):
        return tuple(self.data[i][j] for i in range(self.rows))

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def to_lists(self):
        return [list(r) for r in self.data]

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.data for x in r)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        F = self.field
        return Matrix(
            F, self.rows, self.cols,
            tuple(
                tuple(F.add(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.data, other.data)
            ),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        F = self.field
        return Matrix(
            F, self.rows, self.cols,
            tuple(
                tuple(F.sub(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.data, other.data)
            ),
        )

    def __neg__(self) -> "Matrix":
        F = self.field
        return Matrix(
            F, self.rows, self.cols,
            tuple(tuple(F.neg(a) for a in r) for r in self.data),
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        z = F.zero
        ot = other.transpose().data
        out = []
        for r in self.data:
            out_row = []
            for c in ot:
                acc = z
                for a, b in zip(r, c):
                    if a != z and b != z:
                        acc = F.add(acc, F.mul(a, b))
                out_row.append(acc)
            out.append(tuple(out_row))
        return Matrix(F, self.rows, other.cols, tuple(out))

    def mul_vec(self, v):
        F = self.field
        z = F.zero
        out = []
        for r in self.data:
            acc = z
            for a, b in zip(r, v):
                if a != z and b != z:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field, self.cols, self.rows,
            tuple(
                tuple(self.data[i][j] for i in range(self.rows))
                for j in range(self.cols)
            ),
        )

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise LinAlgError("row count mismatch in hstack")
        return Matrix(
            self.field, self.rows, self.cols + other.cols,
            tuple(ra + rb for ra, rb in zip(self.data, other.data)),
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise LinAlgError("column count mismatch in vstack")
        return Matrix(self.field, self.rows + other.rows, self.cols,
                      self.data + other.data)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def to_json(self):
        F = self.field
        return [[F.scalar_to_json(x) for x in r] for r in self.data]

    def _check_same_shape(self, other):
        if self.shape != other.shape or self.field != other.field:
            raise LinAlgError("shape or field mismatch")


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------

def rref(m: Matrix):
    """Reduced row-echelon form.

    Returns (R, rank, pivot_columns).  The RREF is the unique canonical
    form, so the pivot set is the lexicographically smallest possible.
    """
    F = m.field
    z = F.zero
    R = [list(r) for r in m.data]
    nr, nc = m.rows, m.cols
    pivots = []
    pr = 0
    for col in range(nc):
        piv = None
        for r in range(pr, nr):
            if R[r][col] != z:
                piv = r
                break
        if piv is None:
            continue
        R[pr], R[piv] = R[piv], R[pr]
        inv = F.inv(R[pr][col])
        R[pr] = [F.mul(inv, x) for x in R[pr]]
        for r in range(nr):
            if r != pr and R[r][col] != z:
                f = R[r][col]
                R[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(R[r], R[pr])]
        pivots.append(col)
        pr += 1
        if pr == nr:
            break
    return Matrix(F, nr, nc, tuple(tuple(r) for r in R)), len(pivots), pivots


def rank(m: Matrix) -> int:
    return rref(m)[1]


def kernel(m: Matrix) -> "Subspace":
    """Kernel of m as a canonical subspace of F^cols."""
    F = m.field
    z, o = F.zero, F.one
    R, _, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for fj in free:
        v = [z] * m.cols
        v[fj] = o
        for pi, pj in enumerate(pivots):
            v[pj] = F.neg(R.data[pi][fj])
        basis.append(v)
    return Subspace.from_columns(F, m.cols, basis)


def image(m: Matrix) -> "Subspace":
    """Column space of m as a canonical subspace of F^rows."""
    return Subspace.from_columns(m.field, m.rows, m.columns())


def solve(m: Matrix, b):
    """One solution of m x = b, or None if the system is inconsistent."""
    F = m.field
    z = F.zero
    aug = m.hstack(Matrix.from_columns(F, [list(b)], m.rows))
    R, _, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [z] * m.cols
    for pi, pj in enumerate(pivots):
        x[pj] = R.data[pi][m.cols]
    return tuple(x)


# ---------------------------------------------------------------------------
# Canonical subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of F^ambient_dim in canonical reduced column-echelon form.

    Two equal subspaces are equal as values: the basis is the transpose of
    the RREF of any spanning set laid out as rows.
    """

    field: Field
    ambient_dim: int
    basis: Matrix  # ambient_dim x dim, canonical

    @staticmethod
    def from_columns(field: Field, ambient_dim: int, columns) -> "Subspace":
        columns = [tuple(c) for c in columns]
        if not columns:
            return Subspace(field, ambient_dim,
                            Matrix.zero(field, ambient_dim, 0))
        rows_m = Matrix.from_rows(field, [list(c) for c in columns])
        if rows_m.cols != ambient_dim:
            raise LinAlgError("column length does not match ambient dimension")
        R, rk, _ = rref(rows_m)
        return Subspace(field, ambient_dim,
                        Matrix(field, rk, ambient_dim, R.data[:rk]).transpose())

    @staticmethod
    def zero_space(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, Matrix.zero(field, ambient_dim, 0))

    @staticmethod
    def full_space(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, Matrix.identity(field, ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains(self, v) -> bool:
        if self.dim == 0:
            return all(x == self.field.zero for x in v)
        return solve(self.basis, v) is not None

    def coords(self, v):
        """Coordinates of v in the canonical basis, or None if v is outside."""
        if self.dim == 0:
            z = self.field.zero
            return () if all(x == z for x in v) else None
        return solve(self.basis, v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(c) for c in other.basis.columns())

    def add(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_columns(
            self.field, self.ambient_dim,
            self.basis.columns() + other.basis.columns())

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero_space(self.field, self.ambient_dim)
        stacked = self.basis.hstack(-other.basis)
        ker = kernel(stacked)
        cols = []
        for kcol in ker.basis.columns():
            cols.append(self.basis.mul_vec(kcol[: self.dim]))
        return Subspace.from_columns(self.field, self.ambient_dim, cols)

    def perp(self) -> "Subspace":
        """Orthogonal complement under the coordinate dot product."""
        return kernel(self.basis.transpose())

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.field != other.field:
            raise LinAlgError("ambient mismatch")


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """{x : m x in s} as a canonical subspace of the domain."""
    if s.ambient_dim != m.rows:
        raise LinAlgError("subspace does not live in the codomain")
    # m x in col(A)  iff  L m x = 0 for L the left annihilator of A.
    ann = kernel(s.basis.transpose())  # {y : A^T y = 0}
    if ann.dim == 0:
        return Subspace.full_space(m.field, m.cols)
    L = ann.basis.transpose()
    return kernel(L @ m)


def map_subspace(m: Matrix, s: Subspace) -> Subspace:
    """Image of s under m."""
    return Subspace.from_columns(
        m.field, m.rows, [m.mul_vec(c) for c in s.basis.columns()])


def complement_within(inner: Subspace, outer: Subspace,
                      policy: str = "orthogonal-first"):
    """A complement C with inner (+) C = outer.

    The "orthogonal-first" policy tries C = inner^perp /\\ outer under the
    coordinate dot product; if the form is degenerate on the relevant
    subspace (possible over F_p) it falls back to a greedy echelon
    extension of inner's basis by outer's canonical basis columns.

    Returns (C, degenerate) where degenerate records that the fallback ran.
    """
    inner._check(outer)
    if not outer.contains_subspace(inner):
        raise LinAlgError("complement_within: inner is not contained in outer")
    want = outer.dim - inner.dim
    if policy == "orthogonal-first":
        cand = inner.perp().intersect(outer)
        if cand.dim == want and inner.intersect(cand).dim == 0:
            return cand, False
        degenerate = True
    elif policy == "echelon":
        degenerate = False
    else:
        raise LinAlgError(f"unknown complement policy {policy!r}")
    # Greedy echelon extension.
    F = inner.field
    cur = inner.basis.columns()
    cur_rank = inner.dim
    added = []
    for c in outer.basis.columns():
        trial = Matrix.from_columns(F, cur + [c], inner.ambient_dim)
        if rank(trial) > cur_rank:
            cur = cur + [c]
            cur_rank += 1
            added.append(c)
        if cur_rank == outer.dim:
            break
    comp = Subspace.from_columns(F, inner.ambient_dim, added)
    if comp.dim != want:
        raise LinAlgError("complement extension failed (bug)")
    return comp, degenerate


# ---------------------------------------------------------------------------
# Generalized image / kernel
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EndoAnalysis:
    """Fitting-style decomposition of a square matrix E.

    gim = im(E^N) and gker = ker(E^N) for a stabilization exponent N <= d;
    E restricted to gim is a bijection and restricted_inverse is its
    inverse written in gim coordinates.
    """

    map: Matrix
    stabilization_exponent: int
    gim: Subspace
    gker: Subspace
    restricted_inverse: Matrix
    multiplications: int = dc_field(default=0, compare=False)

    def gim_component(self, v):
        """gim-part of v under the gker (+) gim splitting."""
        gk, gi = self.gker, self.gim
        if gi.dim == 0:
            return tuple(self.map.field.zero for _ in v)
        combined = gk.basis.hstack(gi.basis)
        c = solve(combined, v)
        if c is None:
            raise LinAlgError("decomposition failed (bug)")
        return gi.basis.mul_vec(c[gk.dim:])


def analyze_endo(m: Matrix) -> EndoAnalysis:
    """Generalized image/kernel of a square matrix by repeated squaring."""
    if m.rows != m.cols:
        raise LinAlgError("analyze_endo needs a square matrix")
    F = m.field
    d = m.rows
    if d == 0:
        e = Matrix.zero(F, 0, 0)
        return EndoAnalysis(m, 0, Subspace.zero_space(F, 0),
                            Subspace.zero_space(F, 0), e, 0)
    mults = 0
    powers = [m]          # powers[j] = m^(2^j)
    ranks = [rank(m)]
    while True:
        sq = powers[-1] @ powers[-1]
        mults += 1
        r = rank(sq)
        if r == ranks[-1]:
            stable_k = len(powers) - 1  # rank(m^(2^k)) already stable
            break
        powers.append(sq)
        ranks.append(r)
    N = min(2 ** stable_k, d)
    if N == 2 ** stable_k:
        EN = powers[stable_k]
    else:
        # Assemble E^N from the stored squares via the binary expansion.
        factors = [powers[j] for j in range(N.bit_length()) if (N >> j) & 1]
        EN = factors[0]
        for f in factors[1:]:
            EN = EN @ f
            mults += 1
    gim = image(EN)
    gker = kernel(EN)
    rinv_cols = []
    if gim.dim:
        G = gim.basis
        MG = m @ G
        for b in G.columns():
            c = solve(MG, b)  # unique: m is a bijection on gim
            if c is None:
                raise LinAlgError("restricted inverse failed (bug)")
            rinv_cols.append(c)
    rinv = (Matrix.from_columns(F, rinv_cols, gim.dim)
            if rinv_cols else Matrix.zero(F, 0, 0))
    return EndoAnalysis(m, N, gim, gker, rinv, mults)


def gim_naive(m: Matrix) -> Subspace:
    """Independent oracle: iterate im(m) >= im(m^2) >= ... one power at a time."""
    cur = m
    prev_img = image(m)
    while True:
        cur = cur @ m
        img = image(cur)
        if img == prev_img:
            return img
        prev_img = img


def gker_naive(m: Matrix) -> Subspace:
    cur = m
    prev = kernel(m)
    while True:
        cur = cur @ m
        ker = kernel(cur)
        if ker == prev:
            return ker
        prev = ker
