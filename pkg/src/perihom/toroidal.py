"""Classification and recovery of toroidal cycles in the finite quotients.

A cycle of G_n is non-toroidal when its class lifts to the infinite
complex; the subspace of such classes is computed exactly by pushing strip
homology into G_n until the image stabilizes.  Toroidal classes are
classified against gim(M_V) one degree down and recovered as explicit
chains from the monodromy orbit of a generalized-image class.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import Matrix, Subspace, solve
from .complexes import ContractError, HomologyBasis, homology, induced_map
from .periodic import (
    NormalizedPeriodic, QuotientComplex, build_quotient, build_strip,
    build_window, strip_projection,
)
from .monodromy import MonodromySet, bounding_chain, build_monodromy
from . import mvss


@dataclass(frozen=True)
class StripImage:
    n: int
    subspaces: dict = dc_field(compare=False)  # degree -> Subspace of H_k(G_n)
    stabilized_at: int = 0                     # strip length where stable

    def subspace(self, k: int, hg: HomologyBasis) -> Subspace:
        if k in self.subspaces:
            return self.subspaces[k]
        return Subspace.zero_space(hg.complex.field, hg.betti(k))


def nontoroidal_image(np_: NormalizedPeriodic, n: int,
                      hg: HomologyBasis | None = None,
                      g: QuotientComplex | None = None,
                      max_strips: int = 64) -> StripImage:
    """I^n per degree: the stable image of strip homology in H(G_n).

    The image is monotone non-decreasing in the strip length and bounded
    by dim H(G_n).  Equality for two consecutive multiples of n certifies
    stabilization only once the strips are long enough to carry every
    class with finite support: a class that is born and dies along the
    window zigzag survives at most dim H(V) + dim H(U) translation steps,
    so strips shorter than n plus that bound can plateau spuriously (a
    length-2 strip has no room for a cycle spanning three windows).
    """
    if g is None:
        g = build_quotient(np_, n)
    if hg is None:
        hg = homology(g.complex)
    w = build_window(np_)
    floor_L = n + sum(homology(w.U).betti_vector) + \
        sum(homology(w.V).betti_vector) + 1
    top = g.complex.max_degree
    prev = None
    L = n
    while True:
        strip = build_strip(np_, L)
        hs = homology(strip.complex)
        proj = strip_projection(strip, g)
        ind = induced_map(proj, hs, hg)
        cur = {k: Subspace.from_columns(g.complex.field, hg.betti(k),
                                        ind[k].columns())
               for k in range(top + 1)}
        if prev is not None and L >= floor_L and \
                all(cur[k] == prev[k] for k in cur):
            return StripImage(n, cur, L)
        prev = cur
        L += n
        if L > max_strips * n:
            raise ContractError("strip image failed to stabilize (bug)")


@dataclass(frozen=True)
class DegreeClassification:
    degree: int
    h_dim: int
    nontoroidal_dim: int
    toroidal_dim: int
    gim_V_dim: int            # at degree - 1
    gim_U_dim: int
    phi1_iso: bool
    phi3: Matrix | None       # j restricted to gim(M_V), in gim bases
    phi4: Matrix | None       # i restricted to gim(Mt_V)


@dataclass(frozen=True)
class ToroidalReport:
    n: int
    degrees: tuple            # DegreeClassification per degree
    strip_image: StripImage
    representatives: dict = dc_field(default_factory=dict, compare=False)
    winding: dict = dc_field(default_factory=dict, compare=False)


def classify(np_: NormalizedPeriodic, n: int,
             ms: MonodromySet | None = None,
             recover_representatives: bool = False) -> ToroidalReport:
    if ms is None:
        ms = build_monodromy(build_window(np_))
    g = build_quotient(np_, n)
    hg = homology(g.complex)
    simg = nontoroidal_image(np_, n, hg, g)
    degrees = []
    for k in range(g.complex.max_degree + 1):
        hd = hg.betti(k)
        nt = simg.subspace(k, hg).dim
        tor = hd - nt
        dm = ms.degrees.get(k - 1)
        gim_v = dm.analysis_V.gim.dim if dm else 0
        gim_u = dm.analysis_U.gim.dim if dm else 0
        phi3 = phi4 = None
        if dm and gim_v:
            jg = dm.j @ dm.analysis_V.gim.basis
            phi3 = _in_basis(jg, dm.analysis_U.gim.basis)
            ig = dm.i @ dm.analysis_Vt.gim.basis
            phi4 = _in_basis(ig, dm.analysis_Ut.gim.basis)
        degrees.append(DegreeClassification(
            degree=k, h_dim=hd, nontoroidal_dim=nt, toroidal_dim=tor,
            gim_V_dim=gim_v, gim_U_dim=gim_u,
            phi1_iso=(k >= 1 and tor == gim_v), phi3=phi3, phi4=phi4))
    report = ToroidalReport(n, tuple(degrees), simg)
    if recover_representatives:
        for k in range(1, g.complex.max_degree + 1):
            dm = ms.degrees.get(k - 1)
            if not dm or dm.analysis_V.gim.dim == 0:
                continue
            reps = []
            winds = []
            for theta in dm.analysis_V.gim.basis.columns():
                chain, m_theta = recover(np_, n, k - 1, theta, ms=ms,
                                         g=g, hg=hg, strip_image=simg)
                reps.append(chain)
                winds.append(m_theta)
            report.representatives[k] = reps
            report.winding[k] = winds
    return report


def _in_basis(cols_matrix: Matrix, basis: Matrix) -> Matrix:
    out = []
    for c in cols_matrix.columns():
        sol = solve(basis, c)
        if sol is None:
            raise ContractError("image leaves the expected subspace")
        out.append(sol)
    return Matrix.from_columns(cols_matrix.field, out, basis.cols)


def winding_number(ms: MonodromySet, degree: int, theta, n: int,
                   max_m: int = 4096) -> int:
    """m_theta: least m >= 1 with (M_V)^(n m) theta = theta."""
    dm = ms.degrees[degree]
    Mn = _matrix_power(dm.M_V, n)
    cur = tuple(theta)
    for m in range(1, max_m + 1):
        cur = Mn.mul_vec(cur)
        if cur == tuple(theta):
            return m
    raise ContractError(
        "monodromy orbit does not close: no finite winding number found")


def _matrix_power(m: Matrix, k: int) -> Matrix:
    out = Matrix.identity(m.field, m.rows)
    base = m
    while k:
        if k & 1:
            out = out @ base
        base = base @ base
        k >>= 1
    return out


def recover(np_: NormalizedPeriodic, n: int, degree: int, theta,
            ms: MonodromySet | None = None, g: QuotientComplex | None = None,
            hg: HomologyBasis | None = None,
            strip_image: StripImage | None = None):
    """An explicit toroidal (degree+1)-cycle of G_n from theta in gim(M_V).

    Walks the monodromy orbit of theta for n * m_theta steps, solves a
    bounding chain in C_{degree+1}(U) for each step, places step k at copy
    k mod n and sums.  The result is verified to be a cycle and to lie
    outside I^n before it is returned.

    Returns (chain in C_{degree+1}(G_n), m_theta).
    """
    if ms is None:
        ms = build_monodromy(build_window(np_))
    if g is None:
        g = build_quotient(np_, n)
    if hg is None:
        hg = homology(g.complex)
    dm = ms.degrees.get(degree)
    if dm is None or not dm.analysis_V.gim.contains(theta):
        raise ContractError("class is not in gim(M_V)")
    F = g.complex.field
    m_theta = winding_number(ms, degree, theta, n)
    w = ms.window
    total_steps = n * m_theta
    q1 = degree + 1
    out = [F.zero] * g.complex.n_cells(q1)
    idx = g.complex.cell_index(q1)
    theta_k = tuple(theta)
    for k in range(total_steps):
        theta_next = dm.M_V.mul_vec(theta_k)
        c = bounding_chain(ms, degree, theta_k, theta_next)
        for j, coeff in enumerate(c):
            if coeff == F.zero:
                continue
            wc = w.U.cells[q1][j]
            orbit, shift = w.cell_origin[wc]
            gi = idx[g.cell_id(orbit, k + shift)]
            out[gi] = F.add(out[gi], coeff)
        theta_k = theta_next
    chain = tuple(out)
    # Verification: cycle, and not in the non-toroidal image.
    bd = g.complex.boundary_of(q1)
    if any(x != F.zero for x in bd.mul_vec(chain)):
        raise ContractError("recovery verification failed: not a cycle")
    cls = hg.class_of(q1, chain)
    if strip_image is None:
        strip_image = nontoroidal_image(np_, n, hg, g)
    if strip_image.subspace(q1, hg).contains(cls):
        raise ContractError("recovery verification failed: class lifts")
    return chain, m_theta


@dataclass(frozen=True)
class ToroidalVerdict:
    toroidal: bool
    class_vector: tuple
    in_strip_image: bool
    vtrace_gim: tuple          # gim-component of the psi_0 trace
    agree: bool


def is_toroidal(np_: NormalizedPeriodic, n: int, degree: int, chain,
                ms: MonodromySet | None = None) -> ToroidalVerdict:
    """Membership verdict with two independent certificates.

    The primary test checks the class against the strip image I^n; the
    diagnostic computes the blow-up trace in H(V) and reports its
    gim(M_V)-component, nonzero exactly for toroidal classes.
    """
    if ms is None:
        ms = build_monodromy(build_window(np_))
    g = build_quotient(np_, n)
    hg = homology(g.complex)
    F = g.complex.field
    bd = g.complex.boundary_of(degree)
    if any(x != F.zero for x in bd.mul_vec(chain)):
        raise ContractError("input chain is not a cycle")
    cls = hg.class_of(degree, chain)
    simg = nontoroidal_image(np_, n, hg, g)
    in_img = simg.subspace(degree, hg).contains(cls)
    dm = ms.degrees.get(degree - 1)
    if dm is not None and degree >= 1:
        b = mvss.build_blowup(np_, n)
        trace = mvss.class_vtrace(b, hg, degree, cls)
        gim_comp = dm.analysis_V.gim_component(trace[0]) if trace else ()
    else:
        gim_comp = ()
    nonzero = any(x != F.zero for x in gim_comp)
    return ToroidalVerdict(
        toroidal=not in_img, class_vector=cls, in_strip_image=in_img,
        vtrace_gim=tuple(gim_comp), agree=(nonzero == (not in_img)))
