"""Finite cell complexes with exact boundary matrices and chain maps.

Homology is carried by explicit chain representatives so induced maps and
inner products on homology are concrete: harmonic representatives over Q,
echelon-selected cycle representatives over F_p.  All matrix layouts are
fixed by the input cell order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .field import Field
from .linalg import (
    LinAlgError, Matrix, Subspace, image, kernel, rank, rref, solve,
)


class ContractError(Exception):
    pass


@dataclass(frozen=True)
class CellComplex:
    field: Field
    cells: tuple          # cells[k] = tuple of cell ids of degree k
    boundary: tuple       # boundary[k]: Matrix C_k -> C_{k-1}; boundary[0] is 0x n0
    filtration: dict | None = dc_field(default=None, compare=False)

    @staticmethod
    def build(field: Field, cells, boundaries: dict, filtration=None) -> "CellComplex":
        """cells: list per degree of id lists; boundaries: {deg k>=1: Matrix}."""
        cells = tuple(tuple(c) for c in cells)
        while cells and not cells[-1]:
            cells = cells[:-1]
        bnd = [Matrix.zero(field, 0, len(cells[0]) if cells else 0)]
        for k in range(1, len(cells)):
            m = boundaries.get(k)
            if m is None:
                m = Matrix.zero(field, len(cells[k - 1]), len(cells[k]))
            if m.shape != (len(cells[k - 1]), len(cells[k])):
                raise ContractError(
                    f"boundary {k} has shape {m.shape}, expected "
                    f"({len(cells[k-1])}, {len(cells[k])})")
            bnd.append(m)
        return CellComplex(field, cells, tuple(bnd), filtration)

    @property
    def max_degree(self) -> int:
        return len(self.cells) - 1

    def n_cells(self, k: int) -> int:
        if 0 <= k < len(self.cells):
            return len(self.cells[k])
        return 0

    def cell_index(self, k: int):
        return {c: i for i, c in enumerate(self.cells[k])}

    def boundary_of(self, k: int) -> Matrix:
        if 1 <= k < len(self.cells):
            return self.boundary[k]
        lower = self.n_cells(k - 1)
        return Matrix.zero(self.field, lower, self.n_cells(k))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(cs) for k, cs in enumerate(self.cells))

    def degree_of(self, cell_id: str) -> int:
        for k, cs in enumerate(self.cells):
            if cell_id in cs:
                return k
        raise KeyError(cell_id)


def validate(c: CellComplex) -> list:
    """Structural diagnostics; empty list means the complex is valid."""
    diags = []
    seen = {}
    for k, cs in enumerate(c.cells):
        for cid in cs:
            if cid in seen:
                diags.append(f"duplicate cell id {cid!r} "
                             f"(degrees {seen[cid]} and {k})")
            seen[cid] = k
    for k in range(2, len(c.cells)):
        prod = c.boundary[k - 1] @ c.boundary[k]
        if not prod.is_zero():
            bad = next(j for j in range(prod.cols)
                       if any(x != c.field.zero for x in prod.col(j)))
            diags.append(f"dd != 0 at degree {k}, first offending cell "
                         f"{c.cells[k][bad]!r}")
            break
    if c.filtration is not None:
        for k, cs in enumerate(c.cells):
            for cid in cs:
                if cid not in c.filtration:
                    diags.append(f"cell {cid!r} missing a filtration value")
        z = c.field.zero
        for k in range(1, len(c.cells)):
            b = c.boundary[k]
            for j, cid in enumerate(c.cells[k]):
                for i, fid in enumerate(c.cells[k - 1]):
                    if b[i, j] != z and \
                            c.filtration.get(fid, 0) > c.filtration.get(cid, 0):
                        diags.append(
                            f"filtration not monotone: face {fid!r} of "
                            f"{cid!r} is born later")
    return diags


@dataclass(frozen=True)
class ChainMap:
    source: CellComplex
    target: CellComplex
    maps: tuple  # maps[k]: Matrix C_k(source) -> C_k(target)

    @staticmethod
    def build(source: CellComplex, target: CellComplex, maps: dict,
              check: bool = True) -> "ChainMap":
        ms = []
        top = max(source.max_degree, target.max_degree)
        for k in range(top + 1):
            m = maps.get(k)
            if m is None:
                m = Matrix.zero(source.field, target.n_cells(k),
                                source.n_cells(k))
            ms.append(m)
        cm = ChainMap(source, target, tuple(ms))
        if check:
            cm.check_commutation()
        return cm

    @staticmethod
    def from_cells(source: CellComplex, target: CellComplex, rename=None,
                   check: bool = True) -> "ChainMap":
        """Cell-wise inclusion; rename maps source ids to target ids."""
        F = source.field
        maps = {}
        for k in range(source.max_degree + 1):
            idx = target.cell_index(k) if k <= target.max_degree else {}
            m = [[F.zero] * source.n_cells(k)
                 for _ in range(target.n_cells(k))]
            for j, cid in enumerate(source.cells[k]):
                tid = rename(cid) if rename else cid
                if tid not in idx:
                    raise ContractError(f"cell {cid!r} has no image {tid!r}")
                m[idx[tid]][j] = F.one
            maps[k] = Matrix(F, target.n_cells(k), source.n_cells(k),
                             tuple(tuple(r) for r in m))
        return ChainMap.build(source, target, maps, check=check)

    def map_of(self, k: int) -> Matrix:
        if k < len(self.maps):
            return self.maps[k]
        return Matrix.zero(self.source.field, self.target.n_cells(k),
                           self.source.n_cells(k))

    def check_commutation(self):
        for k in range(1, len(self.maps)):
            lhs = self.map_of(k - 1) @ self.source.boundary_of(k)
            rhs = self.target.boundary_of(k) @ self.map_of(k)
            if lhs.data != rhs.data:
                raise ContractError(f"chain map does not commute at degree {k}")

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """self o inner."""
        top = max(len(self.maps), len(inner.maps))
        maps = {k: self.map_of(k) @ inner.map_of(k) for k in range(top)}
        return ChainMap.build(inner.source, self.target, maps, check=False)


@dataclass(frozen=True)
class HomologyBasis:
    complex: CellComplex
    representatives: tuple   # reps[k]: Matrix n_cells(k) x betti_k, cycle columns
    boundaries: tuple        # boundaries[k]: Subspace im(d_{k+1})

    def betti(self, k: int) -> int:
        if 0 <= k < len(self.representatives):
            return self.representatives[k].cols
        return 0

    @property
    def betti_vector(self):
        return tuple(self.betti(k)
                     for k in range(self.complex.max_degree + 1))

    def boundary_space(self, k: int) -> Subspace:
        if 0 <= k < len(self.boundaries):
            return self.boundaries[k]
        return Subspace.zero_space(self.complex.field,
                                   self.complex.n_cells(k))

    def rep(self, k: int) -> Matrix:
        if 0 <= k < len(self.representatives):
            return self.representatives[k]
        return Matrix.zero(self.complex.field, self.complex.n_cells(k), 0)

    def class_of(self, k: int, chain):
        """Class vector of a cycle chain, in the representative basis."""
        c = self.complex
        z = c.field.zero
        bd = c.boundary_of(k)
        if any(x != z for x in bd.mul_vec(chain)):
            raise ContractError("chain is not a cycle")
        combined = self.rep(k).hstack(self.boundary_space(k).basis)
        sol = solve(combined, chain)
        if sol is None:
            raise ContractError("cycle not expressible (bug)")
        return tuple(sol[: self.betti(k)])

    def chain_of(self, k: int, class_vec):
        """Representative chain of a class vector."""
        return self.rep(k).mul_vec(class_vec)


def homology(c: CellComplex) -> HomologyBasis:
    """Homology with explicit chain representatives.

    Over Q: harmonic representatives (cycles orthogonal to boundaries).
    Over F_p: echelon-selected cycles extending a basis of the boundaries.
    """
    F = c.field
    reps = []
    bnds = []
    for k in range(c.max_degree + 1):
        n = c.n_cells(k)
        Z = kernel(c.boundary_of(k))              # cycle space
        B = image(c.boundary_of(k + 1))           # boundary space
        bnds.append(B)
        betti = Z.dim - B.dim
        if betti == 0:
            reps.append(Matrix.zero(F, n, 0))
            continue
        if F.kind == "Q":
            H = Z.intersect(B.perp())
            if H.dim != betti:
                raise LinAlgError("harmonic space has wrong dimension (bug)")
            reps.append(H.basis)
        else:
            chosen = []
            cur = B.basis.columns()
            cur_rank = B.dim
            for col in Z.basis.columns():
                trial = Matrix.from_columns(F, cur + [col], n)
                if rank(trial) > cur_rank:
                    cur = cur + [col]
                    cur_rank += 1
                    chosen.append(col)
                if len(chosen) == betti:
                    break
            reps.append(Matrix.from_columns(F, chosen, n))
    return HomologyBasis(c, tuple(reps), tuple(bnds))


def induced_map(f: ChainMap, hs: HomologyBasis, ht: HomologyBasis) -> dict:
    """Per-degree matrices of the map induced on homology by f."""
    if hs.complex is not f.source and hs.complex != f.source:
        raise ContractError("source basis mismatch")
    out = {}
    top = max(f.source.max_degree, f.target.max_degree)
    for k in range(top + 1):
        bs, bt = hs.betti(k), ht.betti(k)
        if bs == 0 or bt == 0:
            out[k] = Matrix.zero(f.source.field, bt, bs)
            continue
        cols = []
        for r in range(bs):
            img = f.map_of(k).mul_vec(hs.rep(k).col(r))
            cols.append(ht.class_of(k, img))
        out[k] = Matrix.from_columns(f.source.field, cols, bt)
    return out


def subcomplex_at_step(c: CellComplex, step: int):
    """Sublevel complex of cells born at or before `step`, with inclusion."""
    if c.filtration is None:
        raise ContractError("complex has no filtration")
    keep = [tuple(cid for cid in cs if c.filtration[cid] <= step)
            for cs in c.cells]
    F = c.field
    bmaps = {}
    for k in range(1, len(c.cells)):
        src_idx = c.cell_index(k)
        tgt_idx = c.cell_index(k - 1)
        b = c.boundary[k]
        rows = []
        for fid in keep[k - 1]:
            i = tgt_idx[fid]
            rows.append(tuple(b[i, src_idx[cid]] for cid in keep[k]))
        bmaps[k] = Matrix(F, len(keep[k - 1]), len(keep[k]),
                          tuple(rows))
    sub = CellComplex.build(F, keep, bmaps,
                            {cid: c.filtration[cid]
                             for cs in keep for cid in cs})
    incl = ChainMap.from_cells(sub, c)
    return sub, incl
