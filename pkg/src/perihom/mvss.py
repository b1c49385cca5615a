"""Blow-up bicomplex of the window cover of G_n, used as a homology oracle.

The cover of G_n by the n translated copies of U has pairwise
intersections equal to translated copies of V and no deeper overlaps, so
the bicomplex has two columns: p = 0 spanned by chains of the copies of U,
p = 1 spanned by chains of the copies of V indexed by ordered adjacency
pairs (l, l+1 mod n).  The total complex computes the homology of G_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import Matrix, Subspace, image, kernel, solve
from .complexes import (
    CellComplex, ChainMap, ContractError, HomologyBasis, homology,
    induced_map,
)
from .periodic import (
    NormalizedPeriodic, QuotientComplex, WindowPair, build_quotient,
    build_window,
)


@dataclass(frozen=True)
class BlowUpComplex:
    n: int
    quotient: QuotientComplex
    window: WindowPair
    d0_u: tuple        # per degree k: block-diagonal boundary on +(n copies of U)
    d0_v: tuple        # per degree k: sign-flipped boundary on the p = 1 column
    d1: tuple          # per degree k: nerve differential, pairs -> copies
    total: CellComplex
    u_dims: tuple      # per degree: cells of U
    v_dims: tuple

    def total_degree_dims(self):
        return tuple(self.n * (self.u_dims[k] if k < len(self.u_dims) else 0)
                     + self.n * (self.v_dims[k - 1] if 1 <= k <= len(self.v_dims) else 0)
                     for k in range(len(self.u_dims) + 1))


def _u_block_index(n, u_dims, k):
    return n * (u_dims[k] if k < len(u_dims) else 0)


def build_blowup(np_: NormalizedPeriodic, n: int) -> BlowUpComplex:
    """Assemble the bicomplex and its total complex, checking the identities."""
    g = build_quotient(np_, n)
    w = build_window(np_)
    F = w.U.field
    u_dims = tuple(w.U.n_cells(k) for k in range(w.U.max_degree + 1))
    v_dims = tuple(w.V.n_cells(k) for k in range(w.U.max_degree + 1))
    top = len(u_dims)  # total degrees run 0..top
    d0_u, d0_v, d1 = [], [], []
    for k in range(top):
        bU = w.U.boundary_of(k)
        bV = w.V.boundary_of(k)
        d0_u.append(_block_diag(F, bU, n))
        d0_v.append(-_block_diag(F, bV, n))
        # d1 at degree k maps pair (l, l+1) tensor V-chain to
        #   copy l+1 via the j-side inclusion minus copy l via the i-side.
        iU = w.i_chain.map_of(k)
        jU = w.j_chain.map_of(k)
        rows = n * (u_dims[k] if k < len(u_dims) else 0)
        cols = n * (v_dims[k] if k < len(v_dims) else 0)
        m = [[F.zero] * cols for _ in range(rows)]
        nu = u_dims[k] if k < len(u_dims) else 0
        nv = v_dims[k] if k < len(v_dims) else 0
        for l in range(n):
            for c in range(nv):
                col = l * nv + c
                for r in range(nu):
                    if jU[r, c] != F.zero:
                        rr = ((l + 1) % n) * nu + r
                        m[rr][col] = F.add(m[rr][col], jU[r, c])
                    if iU[r, c] != F.zero:
                        rr = l * nu + r
                        m[rr][col] = F.sub(m[rr][col], iU[r, c])
        d1.append(Matrix(F, rows, cols, tuple(tuple(r) for r in m)))
    # Identity checks: (d0)^2 = 0 on each column, d0 d1 + d1 d0 = 0.
    for k in range(2, top):
        if not (d0_u[k - 1] @ d0_u[k]).is_zero():
            raise ContractError("(d0)^2 != 0 on the p = 0 column (sign bug)")
        if not (d0_v[k - 1] @ d0_v[k]).is_zero():
            raise ContractError("(d0)^2 != 0 on the p = 1 column (sign bug)")
    for k in range(1, top):
        anti = (d0_u[k] @ d1[k]) + (d1[k - 1] @ d0_v[k])
        if not anti.is_zero():
            raise ContractError("d0 d1 + d1 d0 != 0 (sign bug)")
    # Total complex as a CellComplex: degree k holds the n copies of U's
    # k-cells and the n pair-indexed copies of V's (k-1)-cells.
    cells = []
    for k in range(top + 1):
        layer = []
        if k < len(u_dims):
            for l in range(n):
                layer += [f"u{l}:{c}" for c in w.U.cells[k]]
        if 1 <= k and (k - 1) < len(v_dims) and k - 1 <= w.V.max_degree:
            for l in range(n):
                layer += [f"w{l}:{c}" for c in w.V.cells[k - 1]]
        cells.append(layer)
    bmaps = {}
    for k in range(1, top + 1):
        nu_k = n * (u_dims[k] if k < len(u_dims) else 0)
        nv_k = n * (v_dims[k - 1] if k - 1 < len(v_dims) else 0)
        nu_k1 = n * (u_dims[k - 1] if k - 1 < len(u_dims) else 0)
        nv_k1 = n * (v_dims[k - 2] if 0 <= k - 2 < len(v_dims) else 0)
        blk_u = d0_u[k] if k < len(d0_u) else Matrix.zero(F, nu_k1, nu_k)
        blk_1 = d1[k - 1] if k - 1 < len(d1) else Matrix.zero(F, nu_k1, nv_k)
        blk_v = d0_v[k - 1] if k - 1 < len(d0_v) else Matrix.zero(F, nv_k1, nv_k)
        topm = blk_u.hstack(blk_1)
        botm = Matrix.zero(F, nv_k1, nu_k).hstack(blk_v)
        bmaps[k] = topm.vstack(botm)
    total = CellComplex.build(F, cells, bmaps)
    return BlowUpComplex(n, g, w, tuple(d0_u), tuple(d0_v), tuple(d1),
                         total, u_dims, v_dims)


def _block_diag(F, m: Matrix, n: int) -> Matrix:
    rows = []
    for b in range(n):
        for r in m.data:
            row = [F.zero] * (m.cols * n)
            row[b * m.cols:(b + 1) * m.cols] = list(r)
            rows.append(tuple(row))
    return Matrix(F, m.rows * n, m.cols * n, tuple(rows))


def total_homology(b: BlowUpComplex) -> HomologyBasis:
    return homology(b.total)


def collapse_map(b: BlowUpComplex) -> ChainMap:
    """Chain map total complex -> G_n: u-cells map to their copy, pairs to 0."""
    F = b.total.field
    g = b.quotient
    w = b.window
    maps = {}
    for k in range(b.total.max_degree + 1):
        tgt_idx = g.complex.cell_index(k) if k <= g.complex.max_degree else {}
        m = [[F.zero] * b.total.n_cells(k)
             for _ in range(g.complex.n_cells(k))]
        for j, cid in enumerate(b.total.cells[k]):
            tag, wc = cid.split(":", 1)
            if tag.startswith("w"):
                continue
            l = int(tag[1:])
            orbit, shift = w.cell_origin[wc]
            gi = tgt_idx[g.cell_id(orbit, l + shift)]
            m[gi][j] = F.one
        maps[k] = Matrix(F, g.complex.n_cells(k), b.total.n_cells(k),
                         tuple(tuple(r) for r in m))
    return ChainMap.build(b.total, g.complex, maps)


def total_representative(b: BlowUpComplex, hg: HomologyBasis,
                         ht: HomologyBasis, degree: int, class_vec):
    """A total-complex cycle whose collapse is homologous to the given class."""
    phi = collapse_map(b)
    ind = induced_map(phi, ht, hg)[degree]
    c = solve(ind, class_vec)
    if c is None:
        raise ContractError("collapse map is not surjective on homology (bug)")
    return ht.chain_of(degree, c)


def vtrace(b: BlowUpComplex, degree: int, total_cycle):
    """Per-pair classes [theta_l] in H_{degree-1}(V) of a total cycle."""
    F = b.total.field
    z = F.zero
    bd = b.total.boundary_of(degree)
    if any(x != z for x in bd.mul_vec(total_cycle)):
        raise ContractError("not a total-complex cycle")
    q = degree - 1
    nv = b.v_dims[q] if 0 <= q < len(b.v_dims) else 0
    nu_part = b.n * (b.u_dims[degree] if degree < len(b.u_dims) else 0)
    hv = homology(b.window.V)
    out = []
    for l in range(b.n):
        seg = tuple(total_cycle[nu_part + l * nv: nu_part + (l + 1) * nv])
        out.append(hv.class_of(q, seg) if nv else ())
    return out


def class_vtrace(b: BlowUpComplex, hg: HomologyBasis, degree: int, class_vec):
    """vtrace of a homology class of G_n via a total-complex representative."""
    ht = total_homology(b)
    rep = total_representative(b, hg, ht, degree, class_vec)
    return vtrace(b, degree, rep)
