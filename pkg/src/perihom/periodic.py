"""Finite descriptions of infinite 1-periodic cell complexes.

A periodic complex is stored as its orbit cells with shift-annotated
boundary entries.  Normalization re-chooses orbit representatives (and
coarsens the period when necessary) so that every shift lies in {0, 1} and
the closure of a unit copy meets at most the next translate.  From the
normalized data we derive the window pair (U, V), the finite quotients
G_n and truncated strips.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .field import Field
from .linalg import Matrix
from .complexes import CellComplex, ChainMap, ContractError


@dataclass(frozen=True)
class PeriodicComplex:
    field: Field
    cells: tuple                 # cells[k] = tuple of orbit cell ids
    entries: dict = dc_field(compare=False)  # id -> tuple of (face id, shift, coeff)
    filtration: dict | None = dc_field(default=None, compare=False)

    @staticmethod
    def build(field: Field, cells, entries: dict,
              filtration=None) -> "PeriodicComplex":
        cells = tuple(tuple(c) for c in cells)
        norm_entries = {}
        declared = {cid for cs in cells for cid in cs}
        for cs in cells:
            for cid in cs:
                es = []
                for face, shift, coeff in entries.get(cid, ()):
                    if face not in declared:
                        raise ContractError(
                            f"boundary of {cid!r} references unknown cell "
                            f"{face!r}")
                    es.append((face, int(shift), field.of(coeff)))
                norm_entries[cid] = tuple(es)
        return PeriodicComplex(field, cells, norm_entries, filtration)

    @property
    def max_degree(self) -> int:
        return len(self.cells) - 1

    def degree_of(self, cid: str) -> int:
        for k, cs in enumerate(self.cells):
            if cid in cs:
                return k
        raise KeyError(cid)

    # -- twisted boundary over F[t, t^-1] ------------------------------------

    def _poly_boundary(self, k: int) -> dict:
        """{(face, cell): {shift: coeff}} for degree-k cells."""
        out = {}
        for cid in self.cells[k]:
            for face, shift, coeff in self.entries[cid]:
                d = out.setdefault((face, cid), {})
                d[shift] = self.field.add(d.get(shift, self.field.zero), coeff)
        return out

    def check_dd_zero(self) -> list:
        """Diagnostics for the shift-twisted dd = 0 condition."""
        F = self.field
        diags = []
        for k in range(2, len(self.cells)):
            for cid in self.cells[k]:
                acc = {}  # (face-of-face, total shift) -> coeff
                for face, s1, c1 in self.entries[cid]:
                    for ff, s2, c2 in self.entries[face]:
                        key = (ff, s1 + s2)
                        acc[key] = F.add(acc.get(key, F.zero), F.mul(c1, c2))
                bad = [k2 for k2, v in acc.items() if v != F.zero]
                if bad:
                    diags.append(f"twisted dd != 0 for cell {cid!r} at {bad[0]}")
        return diags


def validate_periodic(p: PeriodicComplex) -> list:
    """Structural diagnostics; empty list means the data is usable."""
    diags = list(p.check_dd_zero())
    if p.filtration is not None:
        for cs in p.cells:
            for cid in cs:
                if cid not in p.filtration:
                    diags.append(f"cell {cid!r} missing a filtration value")
                    continue
                for face, _, coeff in p.entries.get(cid, ()):
                    if coeff != p.field.zero and \
                            p.filtration.get(face, 0) > p.filtration[cid]:
                        diags.append(
                            f"filtration not monotone: face {face!r} of "
                            f"{cid!r} is born later")
    return diags


@dataclass(frozen=True)
class NormalizedPeriodic:
    complex: PeriodicComplex
    coarsening: int              # period factor r applied during normalization
    offsets: dict = dc_field(compare=False)  # original id -> chosen shift offset


def _accumulated_shift_bound(p: PeriodicComplex) -> int:
    """Max total shift along any face chain starting from a shift-0 copy."""
    best = {cid: 0 for cs in p.cells for cid in cs}
    # Process top-down: a cell's faces inherit its accumulated shift.
    for k in range(len(p.cells) - 1, 0, -1):
        for cid in p.cells[k]:
            for face, shift, coeff in p.entries[cid]:
                if coeff != p.field.zero:
                    cand = best[cid] + shift
                    if cand > best[face]:
                        best[face] = cand
    return max(best.values(), default=0)


def normalize(p: PeriodicComplex) -> NormalizedPeriodic:
    """Re-choose orbit representatives, coarsening the period if needed.

    After normalization every boundary shift is in {0, 1} and the closure
    of the shift-0 window only reaches shift-1 copies.
    """
    diags = p.check_dd_zero()
    if diags:
        raise ContractError("; ".join(diags))
    F = p.field
    # Bottom-up offset choice: make each cell's minimum entry shift zero.
    offsets = {cid: 0 for cs in p.cells for cid in cs}
    entries = {cid: list(es) for cid, es in p.entries.items()}
    for k in range(1, len(p.cells)):
        for cid in p.cells[k]:
            es = [(f, s + offsets[f], c) for f, s, c in entries[cid]
                  if c != F.zero]
            if es:
                off = -min(s for _, s, _ in es)
                offsets[cid] = off
                es = [(f, s + off, c) for f, s, c in es]
            entries[cid] = es
    shifted = PeriodicComplex(F, p.cells,
                              {cid: tuple(es) for cid, es in entries.items()},
                              p.filtration)
    r = max(1, _accumulated_shift_bound(shifted))
    if r == 1:
        return NormalizedPeriodic(shifted, 1, offsets)
    # Coarsen: replace t by t^r; each orbit cell becomes r labelled copies.
    cells = tuple(
        tuple(f"{cid}@{a}" for cid in cs for a in range(r))
        for cs in shifted.cells)
    new_entries = {}
    for cs in shifted.cells:
        for cid in cs:
            for a in range(r):
                es = []
                for face, s, coeff in shifted.entries[cid]:
                    total = a + s
                    es.append((f"{face}@{total % r}", total // r, coeff))
                new_entries[f"{cid}@{a}"] = tuple(es)
    filt = None
    if shifted.filtration is not None:
        filt = {f"{cid}@{a}": shifted.filtration[cid]
                for cs in shifted.cells for cid in cs for a in range(r)}
    coarse = PeriodicComplex(F, cells, new_entries, filt)
    diags = coarse.check_dd_zero()
    if diags:
        raise ContractError("coarsening broke dd = 0 (bug): " + diags[0])
    if _accumulated_shift_bound(coarse) > 1:
        raise ContractError("coarsening failed to bound shifts (bug)")
    return NormalizedPeriodic(coarse, r, offsets)


# ---------------------------------------------------------------------------
# Window pair
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowPair:
    U: CellComplex
    V: CellComplex
    i_chain: ChainMap            # V -> U, identity inclusion
    j_chain: ChainMap            # V -> t(U) ~ U, the translation identification
    cell_origin: dict = dc_field(compare=False)  # window cell -> (orbit cell, shift)


def _window_cell(cid: str, shift: int) -> str:
    return f"{cid}|{shift}"


def build_window(np_: NormalizedPeriodic) -> WindowPair:
    """U = closure of all shift-0 orbit copies; V = U /\\ t(U)."""
    p = np_.complex
    F = p.field
    # Cells of U: all (c, 0); plus (c, 1) for faces reached with shift 1.
    fringe = [set() for _ in p.cells]
    for k in range(len(p.cells) - 1, 0, -1):
        for cid in p.cells[k]:
            sources = [(cid, 0)]
            if k < len(fringe) and cid in fringe[k]:
                sources.append((cid, 1))
            for _, base in sources:
                for face, s, coeff in p.entries[cid]:
                    if coeff == F.zero:
                        continue
                    tot = base + s
                    if tot >= 2:
                        raise ContractError(
                            "window closure exceeds one translate (bug: "
                            "normalization should prevent this)")
                    if tot == 1:
                        fringe[p.degree_of(face)].add(face)
    u_cells = []
    origin = {}
    for k, cs in enumerate(p.cells):
        layer = [_window_cell(c, 0) for c in cs] + \
                [_window_cell(c, 1) for c in cs if c in fringe[k]]
        for c in cs:
            origin[_window_cell(c, 0)] = (c, 0)
            if c in fringe[k]:
                origin[_window_cell(c, 1)] = (c, 1)
        u_cells.append(layer)
    u_index = [ {c: i for i, c in enumerate(layer)} for layer in u_cells ]
    bmaps = {}
    for k in range(1, len(u_cells)):
        m = [[F.zero] * len(u_cells[k]) for _ in range(len(u_cells[k - 1]))]
        for j, wc in enumerate(u_cells[k]):
            oc, base = origin[wc]
            for face, s, coeff in p.entries[oc]:
                if coeff == F.zero:
                    continue
                fc = _window_cell(face, base + s)
                i = u_index[k - 1][fc]
                m[i][j] = F.add(m[i][j], coeff)
        bmaps[k] = Matrix(F, len(u_cells[k - 1]), len(u_cells[k]),
                          tuple(tuple(r) for r in m))
    filt = None
    if p.filtration is not None:
        filt = {wc: p.filtration[origin[wc][0]]
                for layer in u_cells for wc in layer}
    U = CellComplex.build(F, u_cells, bmaps, filt)
    # V: the shift-1 cells of U.
    v_cells = [[_window_cell(c, 1) for c in cs if c in fringe[k]]
               for k, cs in enumerate(p.cells)]
    v_bmaps = {}
    for k in range(1, len(v_cells)):
        v_idx = {c: i for i, c in enumerate(v_cells[k - 1])}
        m = [[F.zero] * len(v_cells[k]) for _ in range(len(v_cells[k - 1]))]
        for j, wc in enumerate(v_cells[k]):
            oc, _ = origin[wc]
            for face, s, coeff in p.entries[oc]:
                if coeff == F.zero:
                    continue
                if s != 0:
                    raise ContractError("V is not closed (bug)")
                m[v_idx[_window_cell(face, 1)]][j] = \
                    F.add(m[v_idx[_window_cell(face, 1)]][j], coeff)
        v_bmaps[k] = Matrix(F, len(v_cells[k - 1]), len(v_cells[k]),
                            tuple(tuple(r) for r in m))
    v_filt = None
    if filt is not None:
        v_filt = {c: filt[c] for layer in v_cells for c in layer}
    V = CellComplex.build(F, v_cells, v_bmaps, v_filt)
    i_chain = ChainMap.from_cells(V, U)
    j_chain = ChainMap.from_cells(
        V, U, rename=lambda wc: _window_cell(origin[wc][0], 0))
    v_origin = {wc: origin[wc] for layer in v_cells for wc in layer}
    return WindowPair(U, V, i_chain, j_chain, {**origin, **v_origin})


# ---------------------------------------------------------------------------
# Quotients and strips
# ---------------------------------------------------------------------------

def _quotient_cell(cid: str, copy: int) -> str:
    return f"{cid}#{copy}"


@dataclass(frozen=True)
class QuotientComplex:
    n: int
    complex: CellComplex
    orbit_cells: tuple           # same layout as the periodic complex

    def cell_id(self, orbit_id: str, copy: int) -> str:
        return _quotient_cell(orbit_id, copy % self.n)

    def deck_transformation(self) -> ChainMap:
        """The chain automorphism induced by copy -> copy + 1 mod n."""
        def shift(cid):
            oc, cp = cid.rsplit("#", 1)
            return _quotient_cell(oc, (int(cp) + 1) % self.n)
        return ChainMap.from_cells(self.complex, self.complex, rename=shift)


def build_quotient(np_: NormalizedPeriodic, n: int) -> QuotientComplex:
    if n < 1:
        raise ContractError(f"quotient order must be >= 1, got {n}")
    p = np_.complex
    F = p.field
    cells = [[_quotient_cell(c, l) for l in range(n) for c in cs]
             for cs in p.cells]
    bmaps = {}
    for k in range(1, len(cells)):
        idx = {c: i for i, c in enumerate(cells[k - 1])}
        m = [[F.zero] * len(cells[k]) for _ in range(len(cells[k - 1]))]
        for j, qc in enumerate(cells[k]):
            oc, cp = qc.rsplit("#", 1)
            cp = int(cp)
            for face, s, coeff in p.entries[oc]:
                if coeff == F.zero:
                    continue
                i = idx[_quotient_cell(face, (cp + s) % n)]
                m[i][j] = F.add(m[i][j], coeff)
        bmaps[k] = Matrix(F, len(cells[k - 1]), len(cells[k]),
                          tuple(tuple(r) for r in m))
    filt = None
    if p.filtration is not None:
        filt = {_quotient_cell(c, l): p.filtration[c]
                for cs in p.cells for c in cs for l in range(n)}
    cc = CellComplex.build(F, cells, bmaps, filt)
    return QuotientComplex(n, cc, p.cells)


def _strip_cell(cid: str, copy: int) -> str:
    return f"{cid}~{copy}"


@dataclass(frozen=True)
class Strip:
    L: int
    complex: CellComplex
    fringe: tuple                # orbit cells present at layer L, per degree

    def cell_id(self, orbit_id: str, layer: int) -> str:
        return _strip_cell(orbit_id, layer)


def build_strip(np_: NormalizedPeriodic, L: int) -> Strip:
    """K^(L): the union of L consecutive translates of U, glued along V."""
    if L < 1:
        raise ContractError(f"strip length must be >= 1, got {L}")
    p = np_.complex
    F = p.field
    window = build_window(np_)
    fringe = tuple(
        tuple(window.cell_origin[c][0] for c in layer)
        for layer in window.V.cells) + tuple(
        () for _ in range(len(p.cells) - len(window.V.cells)))
    cells = []
    for k, cs in enumerate(p.cells):
        layer = [_strip_cell(c, l) for l in range(L) for c in cs]
        layer += [_strip_cell(c, L) for c in fringe[k]]
        cells.append(layer)
    bmaps = {}
    for k in range(1, len(cells)):
        idx = {c: i for i, c in enumerate(cells[k - 1])}
        m = [[F.zero] * len(cells[k]) for _ in range(len(cells[k - 1]))]
        for j, sc in enumerate(cells[k]):
            oc, l = sc.rsplit("~", 1)
            l = int(l)
            for face, s, coeff in p.entries[oc]:
                if coeff == F.zero:
                    continue
                i = idx[_strip_cell(face, l + s)]
                m[i][j] = F.add(m[i][j], coeff)
        bmaps[k] = Matrix(F, len(cells[k - 1]), len(cells[k]),
                          tuple(tuple(r) for r in m))
    cc = CellComplex.build(F, cells, bmaps)
    return Strip(L, cc, fringe)


def strip_projection(strip: Strip, g: QuotientComplex) -> ChainMap:
    """The chain map K^(L) -> G_n sending layer l to copy l mod n."""
    def proj(cid):
        oc, l = cid.rsplit("~", 1)
        return g.cell_id(oc, int(l))
    return ChainMap.from_cells(strip.complex, g.complex, rename=proj)


def strip_inclusion(smaller: Strip, larger: Strip) -> ChainMap:
    if smaller.L > larger.L:
        raise ContractError("strip inclusion needs L <= L'")
    return ChainMap.from_cells(smaller.complex, larger.complex)


def sub_periodic_at_step(p: PeriodicComplex, step: int) -> PeriodicComplex:
    """Orbit cells born at or before `step` (t-invariant sublevel set)."""
    if p.filtration is None:
        raise ContractError("periodic complex has no filtration")
    keep = [tuple(c for c in cs if p.filtration[c] <= step)
            for cs in p.cells]
    kept = {c for cs in keep for c in cs}
    entries = {c: tuple(e for e in p.entries[c] if e[0] in kept)
               for cs in keep for c in cs}
    for c in kept:
        for face, _, coeff in p.entries[c]:
            if coeff != p.field.zero and face not in kept:
                raise ContractError(
                    f"sublevel set at step {step} is not closed: {c!r} "
                    f"has unborn face {face!r}")
    return PeriodicComplex(p.field, tuple(keep), entries,
                           {c: p.filtration[c] for c in kept})
