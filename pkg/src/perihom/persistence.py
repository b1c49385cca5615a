"""Toroidal features of a filtered periodic complex across the filtration.

The window pair is built once from the full complex; each filtration step
restricts U and V (and the inclusions i, j) to the cells born by that
step.  The per-step translation maps are connected by the
inclusion-induced persistence maps, and the lifetime of a toroidal
feature is checked to be unimodal: once its pushforward falls into the
generalized kernel it stays there.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import Matrix, Subspace, preimage
from .complexes import ChainMap, ContractError, induced_map, subcomplex_at_step
from .periodic import NormalizedPeriodic, WindowPair, build_window
from .monodromy import MonodromySet, build_monodromy


@dataclass(frozen=True)
class FiltrationStep:
    step: int
    window: WindowPair
    monodromy: MonodromySet


@dataclass(frozen=True)
class FiltrationAnalysis:
    steps: tuple                  # FiltrationStep, in filtration order
    iota: dict = dc_field(compare=False)    # (k_idx, l_idx) -> {deg: Matrix on H(V)}
    iota_u: dict = dc_field(compare=False)  # same for H(U)
    commutation_log: tuple = ()   # (step_k, step_l, degree, holds)

    def step_values(self):
        return tuple(s.step for s in self.steps)

    def iota_map(self, k_idx: int, l_idx: int, degree: int) -> Matrix:
        maps = self.iota[(k_idx, l_idx)]
        if degree in maps:
            return maps[degree]
        F = self.steps[0].window.U.field
        return Matrix.zero(
            F, self.steps[l_idx].monodromy.hV.betti(degree),
            self.steps[k_idx].monodromy.hV.betti(degree))


def analyze_filtration(np_: NormalizedPeriodic,
                       strict: bool = False) -> FiltrationAnalysis:
    """Per-step window pairs, translation maps and persistence maps.

    The step windows are sublevel sets of the one fixed window pair, so
    V_k is a subcomplex of V_l for k <= l with identical cell ids, and i
    and j restrict cell-by-cell (they preserve the underlying orbit cell
    and hence the birth step).
    """
    p = np_.complex
    if p.filtration is None:
        raise ContractError("periodic complex has no filtration")
    w = build_window(np_)
    diags = []
    values = sorted(set(p.filtration.values()))
    steps = []
    for s in values:
        U_s, _ = subcomplex_at_step(w.U, s)
        V_s, _ = subcomplex_at_step(w.V, s)
        i_s = ChainMap.from_cells(V_s, U_s)
        j_s = ChainMap.from_cells(
            V_s, U_s, rename=lambda c: f"{w.cell_origin[c][0]}|0")
        origin = {c: w.cell_origin[c]
                  for layer in U_s.cells for c in layer}
        w_s = WindowPair(U_s, V_s, i_s, j_s, origin)
        steps.append(FiltrationStep(s, w_s,
                                    build_monodromy(w_s, strict=strict)))
    iota = {}
    iota_u = {}
    log = []
    for ki in range(len(steps)):
        for li in range(ki, len(steps)):
            src = steps[ki].monodromy
            tgt = steps[li].monodromy
            incl_v = ChainMap.from_cells(src.hV.complex, tgt.hV.complex)
            incl_u = ChainMap.from_cells(src.hU.complex, tgt.hU.complex)
            maps = induced_map(incl_v, src.hV, tgt.hV)
            iota[(ki, li)] = maps
            iota_u[(ki, li)] = induced_map(incl_u, src.hU, tgt.hU)
            if li == ki:
                continue
            for q, m in maps.items():
                dk = src.degrees.get(q)
                dl = tgt.degrees.get(q)
                if dk is None or dl is None:
                    continue
                holds = (m @ dk.M_V).data == (dl.M_V @ m).data
                log.append((steps[ki].step, steps[li].step, q, holds))
    return FiltrationAnalysis(tuple(steps), iota, iota_u, tuple(log))


def _dying_locus(fa: FiltrationAnalysis, k_idx: int, l_idx: int,
                 degree: int, side: str = "V") -> Subspace:
    """Generalized-image classes at step k killed by step l.

    The comparison crosses homology groups of different complexes, so
    gker downstream is pulled back along the persistence map and
    intersected inside H(V_k) (or H(U_k)).
    """
    src = fa.steps[k_idx].monodromy.degrees.get(degree)
    tgt = fa.steps[l_idx].monodromy.degrees.get(degree)
    F = fa.steps[0].window.U.field
    if src is None:
        return Subspace.zero_space(F, 0)
    if side == "V":
        gim_k = src.analysis_V.gim
        gker_l = tgt.analysis_V.gker if tgt else None
        m = fa.iota[(k_idx, l_idx)].get(degree)
    else:
        gim_k = src.analysis_U.gim
        gker_l = tgt.analysis_U.gker if tgt else None
        m = fa.iota_u[(k_idx, l_idx)].get(degree)
    if gker_l is None or m is None:
        return gim_k
    return preimage(m, gker_l).intersect(gim_k)


@dataclass(frozen=True)
class UnimodalityReport:
    unimodal: bool
    violations: tuple   # (side, degree, step_k, step_l, step_m, dim_l, dim_m)
    loci: dict = dc_field(compare=False)  # (side, degree, k_idx, l_idx) -> Subspace


def check_unimodality(fa: FiltrationAnalysis) -> UnimodalityReport:
    """Once a feature of step k is dead at step l it stays dead after l.

    Checked exhaustively for every degree and every triple k <= l <= m,
    on the V side and the U side.  A violation on valid input means an
    implementation bug or an interpretation gap and is reported loudly.
    """
    degs = sorted({q for s in fa.steps for q in s.monodromy.degrees})
    loci = {}
    violations = []
    for side in ("V", "U"):
        for q in degs:
            for ki in range(len(fa.steps)):
                for li in range(ki, len(fa.steps)):
                    loci[(side, q, ki, li)] = _dying_locus(fa, ki, li, q, side)
            for ki in range(len(fa.steps)):
                for li in range(ki, len(fa.steps)):
                    for mi in range(li, len(fa.steps)):
                        a = loci[(side, q, ki, li)]
                        b = loci[(side, q, ki, mi)]
                        if not b.contains_subspace(a):
                            violations.append(
                                (side, q, fa.steps[ki].step,
                                 fa.steps[li].step, fa.steps[mi].step,
                                 a.dim, b.dim))
    return UnimodalityReport(not violations, tuple(violations), loci)


@dataclass(frozen=True)
class TimelineEntry:
    degree: int
    step: int            # birth step of the class (where it sits in gim)
    class_vector: tuple  # gim basis vector in H(V_step)
    death_step: int | None  # first step whose pushforward is in gker; None = survives


def toroidal_timeline(fa: FiltrationAnalysis) -> tuple:
    """Death step of every generalized-image basis class at every step.

    Unimodality guarantees that past the reported death step the class
    never re-enters the generalized image.
    """
    out = []
    degs = sorted({q for s in fa.steps for q in s.monodromy.degrees})
    for ki, st in enumerate(fa.steps):
        for q in degs:
            dm = st.monodromy.degrees.get(q)
            if dm is None or dm.analysis_V.gim.dim == 0:
                continue
            for v in dm.analysis_V.gim.basis.columns():
                death = None
                for li in range(ki, len(fa.steps)):
                    tgt = fa.steps[li].monodromy.degrees.get(q)
                    img = fa.iota_map(ki, li, q).mul_vec(v)
                    if tgt is None or tgt.analysis_V.gker.contains(img):
                        death = fa.steps[li].step
                        break
                out.append(TimelineEntry(q, st.step, tuple(v), death))
    return tuple(out)
