"""The four translation endomorphisms on window homology.

M_V and its tilde partner act on H(V), M_U and its partner on H(U).  They
are assembled from the induced maps i and j with every direct-sum choice
made by the orthogonal-first complement policy, and every structural
identity they are supposed to satisfy is asserted at build time with a
structured diagnostic on failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import (
    EndoAnalysis, Matrix, Subspace, analyze_endo, complement_within, image,
    kernel, map_subspace, preimage, rank, solve,
)
from .complexes import ContractError, HomologyBasis, homology, induced_map
from .periodic import WindowPair


@dataclass(frozen=True)
class DegreeMonodromy:
    degree: int
    i: Matrix
    j: Matrix
    M_V: Matrix
    Mt_V: Matrix
    M_U: Matrix
    Mt_U: Matrix
    ker_j: Subspace
    ker_i: Subspace
    W: Subspace               # j^-1(im i)
    Wt: Subspace              # i^-1(im j)
    J: Subspace               # complement of W in H(V)
    Jt: Subspace              # zero block of M_U inside H(U)
    P: Subspace               # complement of ker j inside W
    graph_pairs: tuple        # (x, M_V x) for the chosen basis of P
    analysis_V: EndoAnalysis
    analysis_Vt: EndoAnalysis
    analysis_U: EndoAnalysis
    analysis_Ut: EndoAnalysis
    degenerate_complements: bool
    diagnostics: tuple = ()
    policy: str = "plain"


@dataclass(frozen=True)
class MonodromySet:
    window: WindowPair
    hU: HomologyBasis
    hV: HomologyBasis
    degrees: dict = dc_field(compare=False)  # degree -> DegreeMonodromy

    def diagnostics(self):
        return [d for dm in self.degrees.values() for d in dm.diagnostics]

    def gim_V(self, q: int) -> Subspace:
        dm = self.degrees.get(q)
        if dm is None:
            from .field import Field
            return Subspace.zero_space(self.hV.complex.field, 0)
        return dm.analysis_V.gim


class DecompositionIncompatible(ContractError):
    """A complement choice violated one of the structural identities."""

    def __init__(self, degree, identity, witness):
        self.degree = degree
        self.identity = identity
        self.witness = witness
        super().__init__(
            f"decomposition incompatible at degree {degree}: {identity} "
            f"(witness {witness})")


def _zero_extended(cols_on, zero_spaces, ambient, field):
    """Matrix acting as given on the spans and zero on the listed spaces."""
    basis_cols = []
    image_cols = []
    for x, y in cols_on:
        basis_cols.append(x)
        image_cols.append(y)
    for sp in zero_spaces:
        for c in sp.basis.columns():
            basis_cols.append(c)
            image_cols.append(tuple(field.zero for _ in range(ambient)))
    if not basis_cols:
        return Matrix.zero(field, ambient, ambient)
    T = Matrix.from_columns(field, basis_cols, ambient)
    if rank(T) != ambient:
        raise ContractError("decomposition does not span (bug)")
    Y = Matrix.from_columns(field, image_cols, ambient)
    # M T = Y  =>  columns of M are solved from T^T M^T = Y^T.
    cols = []
    Tt = T.transpose()
    for r in range(ambient):
        row = solve(Tt, tuple(Y.data[r]))
        cols.append(row)
    return Matrix.from_rows(field, cols)


def _stable_flag(start: Subspace, step) -> list:
    """Decreasing chain [start, step(start), ...] up to its fixed point."""
    ds = [start]
    while True:
        nxt = step(ds[-1])
        if nxt == ds[-1]:
            return ds
        ds.append(nxt)


def _increasing_flag(start: Subspace, step) -> list:
    """Increasing chain [start, step(start), ...] up to its fixed point."""
    ds = [start]
    while True:
        nxt = step(ds[-1])
        if nxt == ds[-1]:
            return ds
        ds.append(nxt)


def _coset_rep(y0, target: Subspace, mult: Subspace, ambient, field):
    """Canonical element of (y0 + mult) /\\ target, assumed non-empty.

    Reduced modulo mult /\\ target against its complement inside target,
    so the result does not depend on the incoming representative y0.
    Returns (y, degenerate).
    """
    if target.dim == 0:
        return tuple(field.zero for _ in range(ambient)), False
    c = solve(target.basis.hstack(mult.basis), y0)
    if c is None:
        raise ContractError("successor coset misses its target (bug)")
    y1 = target.basis.mul_vec(c[: target.dim])
    mt = mult.intersect(target)
    if mt.dim == 0:
        return tuple(y1), False
    Cm, deg = complement_within(mt, target)
    c = solve(mt.basis.hstack(Cm.basis), y1)
    if c is None:
        raise ContractError("target decomposition failed (bug)")
    return tuple(Cm.basis.mul_vec(c[mt.dim:])), deg


def _relation_endo(step, istep, ker_part, mult, succ0, ambient, field,
                   policy="plain", zone=None):
    """Endomorphism from a linear relation on F^ambient.

    The relation is presented through its two subspace operators:
    step(S) = preimages of S under the relation (step of the full space
    is the domain W, iterating step from zero gives the dying elements)
    and istep(S) = relation image of S.  ker_part = elements related to
    zero (sent to zero); mult = successor ambiguity (successors of a
    fixed element form a coset of mult); succ0(x) = one successor of x.

    policy "plain" resolves every choice by the orthogonal-first
    complement policy alone.  policy "adapted" follows the eventual
    structure of the relation instead: dying elements get successors one
    step closer to zero so transient chains stay nilpotent, elements of
    the designated recurrent zone get successors steered back into the
    zone so the generalized image matches the part of the relation that
    translates forever, and everything else falls back to the deepest
    available iterated domain.  The plain choices can leak transient
    directions into eigenspaces on degenerate inputs, which is what the
    adapted policy repairs.
    Returns (M, P, pairs, J, degenerate).
    """
    full = Subspace.full_space(field, ambient)
    zero = Subspace.zero_space(field, ambient)
    W = step(full)
    deg = False
    basis = []  # (x, steering kind)
    P = Subspace.zero_space(field, ambient)
    if policy == "plain":
        P, deg = complement_within(ker_part, W)
        basis = [(tuple(x), "plain") for x in P.basis.columns()]
        deaths = [zero, ker_part]
        chain = [W]
        domains = [full, W]
    else:
        domains = _stable_flag(full, step)       # full > W = D_1 > ...
        deaths = _increasing_flag(zero, step)    # 0 < ker_part < ...
        images = _stable_flag(full, istep)       # full > im > ...
        junks = _increasing_flag(zero, istep)    # 0 < mult < ...
        chain = domains[1:] if len(domains) > 1 else domains[:1]
        rec = images[-1].intersect(domains[-1])
        junk = junks[-1].add(deaths[-1])
        if zone is None:
            zone, d = complement_within(junk.intersect(rec), rec)
            deg = deg or d
        strata = [(zone, "rec")] + \
            [(K, "death") for K in deaths[2:]] + \
            [(D, "domain") for D in reversed(chain)]
        for S, kind in strata:
            if kind == "rec":
                ext = S
            else:
                ext, d = complement_within(
                    S.intersect(ker_part.add(P)), S)
                deg = deg or d
            for x in ext.basis.columns():
                basis.append((tuple(x), kind))
            P = P.add(ext)
    J, d = complement_within(W, full)
    deg = deg or d

    pairs = []
    for x, kind in basis:
        y0 = succ0(x)
        target = None
        if kind == "plain":
            target = full
        elif kind == "rec" and zone.add(mult).contains(y0):
            target = zone
        else:
            for m in range(2, len(deaths)):
                if deaths[m].contains(x):
                    target = deaths[m - 1]
                    break
            if target is None and deaths[-1].add(mult).contains(y0):
                target = deaths[-1]
            if target is None and J.dim and J.add(mult).contains(y0):
                target = J
        if target is None:
            target = domains[0]
            for D in reversed(chain):
                if D.add(mult).contains(y0):
                    target = D
                    break
        y, d = _coset_rep(y0, target, mult, ambient, field)
        deg = deg or d
        pairs.append((tuple(x), tuple(y)))
    M = _zero_extended(pairs, [ker_part, J], ambient, field)
    return M, P, tuple(pairs), J, deg


def _domain_monodromy(fwd: Matrix, bwd: Matrix, ambient: int, field,
                      policy="plain", zone=None):
    """M on the source homology with fwd(x) = bwd(M x) on the graph part.

    With fwd = j and bwd = i this is M_V; swapping gives the tilde map.
    Returns (M, data dict, degenerate flag).
    """
    ker_fwd = kernel(fwd)
    ker_bwd = kernel(bwd)

    def step(D):
        return preimage(fwd, map_subspace(bwd, D))

    def istep(S):
        return preimage(bwd, map_subspace(fwd, S))

    def succ0(x):
        y0 = solve(bwd, fwd.mul_vec(x))
        if y0 is None:
            raise ContractError("graph element has no successor (bug)")
        return y0

    M, P, pairs, J, deg = _relation_endo(
        step, istep, ker_fwd, ker_bwd, succ0, ambient, field,
        policy=policy, zone=zone)
    W = preimage(fwd, image(bwd))
    data = {"ker_fwd": ker_fwd, "ker_bwd": ker_bwd, "W": W, "J": J, "P": P,
            "pairs": pairs}
    return M, data, deg


def _codomain_monodromy(fwd: Matrix, bwd: Matrix, ambient_U: int, field,
                        policy="plain", zone=None):
    """M_U-style map on the target homology (fwd = j, bwd = i).

    The relation pairs bwd(v) with fwd(v); the map is zero on bwd(ker fwd)
    and on a complement of im(bwd).  Swap fwd and bwd for the tilde map.
    Returns (M, data dict, degenerate flag).
    """
    bker = map_subspace(bwd, kernel(fwd))
    mult = map_subspace(fwd, kernel(bwd))

    def step(D):
        return map_subspace(bwd, preimage(fwd, D))

    def istep(S):
        return map_subspace(fwd, preimage(bwd, S))

    def succ0(u):
        x0 = solve(bwd, u)
        if x0 is None:
            raise ContractError("graph element outside im(bwd) (bug)")
        return fwd.mul_vec(x0)

    M, P, pairs, Jt, deg = _relation_endo(
        step, istep, bker, mult, succ0, ambient_U, field,
        policy=policy, zone=zone)
    data = {"Jt": Jt, "bker": bker, "P": P, "pairs": pairs}
    return M, data, deg


def _jordan_zone(fwd: Matrix, bwd: Matrix, ambient: int, field):
    """Recurrent zone C with fwd(C) = bwd(C), shared by all four maps.

    C complements the eventual junk (directions that eventually die or
    acquire successor ambiguity) inside the recurrent part of the
    relation fwd(x) = bwd(y) on F^ambient.  The balance condition
    fwd(C) = bwd(C) makes C successor-closed for the relation, for its
    transpose, and for both pushed-forward relations on the target, so
    steering into C realizes the same translating zone everywhere.

    C is sought as a graph over an initial complement C0: each basis
    vector is corrected by an element of the junk part, and the
    corrections solve the linear system expressing fwd(C) <= bwd(C).
    Returns None when the relation leaves the recurrent part or the
    system has no solution.
    """
    def step(D):
        return preimage(fwd, map_subspace(bwd, D))

    def istep(S):
        return preimage(bwd, map_subspace(fwd, S))

    full = Subspace.full_space(field, ambient)
    zero = Subspace.zero_space(field, ambient)
    rec = _stable_flag(full, istep)[-1].intersect(_stable_flag(full, step)[-1])
    junkrec = _increasing_flag(zero, istep)[-1].add(
        _increasing_flag(zero, step)[-1]).intersect(rec)
    C0, _ = complement_within(junkrec, rec)
    qd = C0.dim
    if qd == 0:
        return C0
    mult = kernel(bwd)
    s = junkrec.dim
    # quotient translation: C0-coordinates of a successor of each C0 vector
    That = []
    split = junkrec.basis.hstack(C0.basis)
    for x in C0.basis.columns():
        y0 = solve(bwd, fwd.mul_vec(x))
        if y0 is None or not rec.add(mult).contains(y0):
            return None
        y, _ = _coset_rep(y0, rec, mult, ambient, field)
        c = solve(split, y)
        if c is None:
            return None
        That.append(tuple(c[s:]))
    if s == 0:
        if map_subspace(fwd, C0) == map_subspace(bwd, C0):
            return C0
        return None
    Jb = junkrec.basis
    fJb = fwd @ Jb
    bJb = bwd @ Jb
    m = fwd.rows
    rows = []
    rhs = []
    for e in range(qd):
        lhs = bwd.mul_vec(C0.basis.mul_vec(That[e]))
        base = fwd.mul_vec(C0.basis.col(e))
        for r in range(m):
            row = []
            for f in range(qd):
                for t in range(s):
                    v = fJb[r, t] if f == e else field.zero
                    row.append(field.sub(v, field.mul(That[e][f], bJb[r, t])))
            rows.append(tuple(row))
            rhs.append(field.sub(lhs[r], base[r]))
    sol = solve(Matrix.from_rows(field, rows), tuple(rhs))
    if sol is None:
        return None
    cols = []
    for e in range(qd):
        corr = Jb.mul_vec(sol[e * s:(e + 1) * s])
        cols.append(tuple(field.add(a, b)
                          for a, b in zip(C0.basis.col(e), corr)))
    C = Subspace.from_columns(field, ambient, cols)
    if C.dim != qd or map_subspace(fwd, C) != map_subspace(bwd, C):
        return None
    return C


def _build_degree(i_q: Matrix, j_q: Matrix, dV: int, dU: int, field, policy):
    """All four maps of one degree under one choice policy."""
    zone_V = zone_U = None
    if policy == "adapted":
        zone_V = _jordan_zone(j_q, i_q, dV, field)
        if zone_V is not None:
            zone_U = map_subspace(j_q, zone_V)
            if zone_U.dim != zone_V.dim:
                zone_U = None
    M_V, dat, g1 = _domain_monodromy(j_q, i_q, dV, field, policy, zone_V)
    Mt_V, dat_t, g2 = _domain_monodromy(i_q, j_q, dV, field, policy, zone_V)
    M_U, dat_u, g3 = _codomain_monodromy(j_q, i_q, dU, field, policy, zone_U)
    Mt_U, _, g4 = _codomain_monodromy(i_q, j_q, dU, field, policy, zone_U)
    return {"M_V": M_V, "Mt_V": Mt_V, "M_U": M_U, "Mt_U": Mt_U,
            "dat": dat, "dat_t": dat_t, "dat_u": dat_u,
            "aV": analyze_endo(M_V), "aVt": analyze_endo(Mt_V),
            "aU": analyze_endo(M_U), "aUt": analyze_endo(Mt_U),
            "degenerate": g1 or g2 or g3 or g4}


def _degree_diags(b: dict, i_q: Matrix, j_q: Matrix, q: int, field) -> list:
    """Structural identity diagnostics for one degree's four maps."""
    diags = []

    def check(cond, identity, witness):
        if not cond:
            diags.append(f"degree {q}: {identity} failed ({witness})")

    M_V, Mt_V, M_U, Mt_U = b["M_V"], b["Mt_V"], b["M_U"], b["Mt_U"]
    aV, aVt, aU, aUt = b["aV"], b["aVt"], b["aU"], b["aUt"]
    dat = b["dat"]
    # ker(M_V) = ker(j) (+) J
    check(kernel(M_V) == dat["ker_fwd"].add(dat["J"]),
          "ker(M_V) = ker(j) + J", kernel(M_V).basis.to_json())
    # graph pairs realized
    for x, y in dat["pairs"]:
        check(M_V.mul_vec(x) == tuple(y), "M_V graph action", list(x))
    # commutation
    check((M_U @ j_q).data == (j_q @ M_V).data,
          "M_U o j = j o M_V", (M_U @ j_q).to_json())
    check((Mt_U @ i_q).data == (i_q @ Mt_V).data,
          "Mt_U o i = i o Mt_V", (Mt_U @ i_q).to_json())
    # tilde equivalences
    check(aV.gim == aVt.gim, "gim(M_V) = gim(Mt_V)",
          (aV.gim.basis.to_json(), aVt.gim.basis.to_json()))
    check(aU.gim == aUt.gim, "gim(M_U) = gim(Mt_U)",
          (aU.gim.basis.to_json(), aUt.gim.basis.to_json()))
    # restricted inverses match on the shared generalized image
    if aV.gim == aVt.gim and aV.gim.dim:
        Z = aV.gim.basis
        prod = _restrict(M_V, Z) @ _restrict(Mt_V, Z)
        check(prod.data == Matrix.identity(field, Z.cols).data,
              "(M_V|Z)^-1 = Mt_V|Z", prod.to_json())
    if aU.gim == aUt.gim and aU.gim.dim:
        Z = aU.gim.basis
        prod = _restrict(M_U, Z) @ _restrict(Mt_U, Z)
        check(prod.data == Matrix.identity(field, Z.cols).data,
              "(M_U|Z)^-1 = Mt_U|Z", prod.to_json())
    # j restricted to gim(M_V) is an isomorphism onto gim(M_U)
    jg = map_subspace(j_q, aV.gim)
    check(jg.dim == aV.gim.dim and jg == aU.gim,
          "j|gim(M_V) iso onto gim(M_U)",
          (jg.basis.to_json(), aU.gim.basis.to_json()))
    check(image(i_q).contains_subspace(aU.gim),
          "gim(M_U) inside im(i)", aU.gim.basis.to_json())
    check(image(i_q).contains_subspace(jg),
          "j(gim(M_V)) inside im(i)", jg.basis.to_json())
    return diags


def build_monodromy(w: WindowPair, strict: bool = False) -> MonodromySet:
    """All four endomorphisms per homology degree, with identity checks.

    Each degree is first built with the plain orthogonal-first choices.
    If any structural identity fails, the degree is rebuilt with the
    recurrence-adapted choices and the better of the two is kept.  With
    strict=True a remaining identity failure raises
    DecompositionIncompatible; otherwise it lands in the diagnostics.
    """
    hU = homology(w.U)
    hV = homology(w.V)
    i_m = induced_map(w.i_chain, hV, hU)
    j_m = induced_map(w.j_chain, hV, hU)
    field = w.U.field
    degrees = {}
    top = max(w.U.max_degree, w.V.max_degree)
    for q in range(top + 1):
        dV = hV.betti(q)
        dU = hU.betti(q)
        i_q = i_m.get(q, Matrix.zero(field, dU, dV))
        j_q = j_m.get(q, Matrix.zero(field, dU, dV))
        b = _build_degree(i_q, j_q, dV, dU, field, "plain")
        diags = _degree_diags(b, i_q, j_q, q, field)
        policy = "plain"
        if diags:
            try:
                b2 = _build_degree(i_q, j_q, dV, dU, field, "adapted")
                diags2 = _degree_diags(b2, i_q, j_q, q, field)
            except ContractError:
                b2, diags2 = None, None
            if b2 is not None and len(diags2) < len(diags):
                b, diags, policy = b2, diags2, "adapted"
        if diags and strict:
            raise DecompositionIncompatible(q, diags[0], None)
        dat, dat_t, dat_u = b["dat"], b["dat_t"], b["dat_u"]
        degrees[q] = DegreeMonodromy(
            degree=q, i=i_q, j=j_q, M_V=b["M_V"], Mt_V=b["Mt_V"],
            M_U=b["M_U"], Mt_U=b["Mt_U"],
            ker_j=dat["ker_fwd"], ker_i=dat["ker_bwd"], W=dat["W"],
            Wt=dat_t["W"], J=dat["J"], Jt=dat_u["Jt"], P=dat["P"],
            graph_pairs=dat["pairs"], analysis_V=b["aV"],
            analysis_Vt=b["aVt"], analysis_U=b["aU"], analysis_Ut=b["aUt"],
            degenerate_complements=b["degenerate"],
            diagnostics=tuple(diags), policy=policy)
    return MonodromySet(w, hU, hV, degrees)


def _restrict(m: Matrix, Z: Matrix) -> Matrix:
    """m written in the coordinates of the m-invariant column span Z."""
    MZ = m @ Z
    cols = []
    for c in MZ.columns():
        sol = solve(Z, c)
        if sol is None:
            raise ContractError("span is not invariant (bug)")
        cols.append(sol)
    return Matrix.from_columns(m.field, cols, Z.cols)


@dataclass(frozen=True)
class TranslationWitness:
    degree: int
    start: tuple                  # class vector in H_q(V)
    end: tuple                    # (M_V)^k applied to it
    steps: tuple                  # per step: (theta_k, bounding chain in C_{q+1}(U))


def translation_witness(ms: MonodromySet, degree: int, cls, k: int
                        ) -> TranslationWitness:
    """Chain-level certificate that cls translates to (M_V)^k cls.

    For each step a bounding chain c with d(c) = j(rep theta) - i(rep theta')
    is solved exactly in C_{degree+1}(U).
    """
    dm = ms.degrees.get(degree)
    if dm is None:
        raise ContractError(f"no homology in degree {degree}")
    if not dm.analysis_V.gim.contains(cls):
        raise ContractError("class is not in gim(M_V)")
    field = ms.hV.complex.field
    theta = tuple(cls)
    steps = []
    for _ in range(k):
        nxt = dm.M_V.mul_vec(theta)
        chain = bounding_chain(ms, degree, theta, nxt)
        steps.append((theta, chain))
        theta = nxt
    return TranslationWitness(degree, tuple(cls), theta, tuple(steps))


def bounding_chain(ms: MonodromySet, degree: int, theta, theta_next):
    """c in C_{degree+1}(U) with d(c) = j(rep theta) - i(rep theta_next)."""
    F = ms.hV.complex.field
    dm = ms.degrees[degree]
    rep_t = ms.hV.chain_of(degree, theta)
    rep_n = ms.hV.chain_of(degree, theta_next)
    target = tuple(
        F.sub(a, b)
        for a, b in zip(ms.window.j_chain.map_of(degree).mul_vec(rep_t),
                        ms.window.i_chain.map_of(degree).mul_vec(rep_n)))
    bd = ms.hU.complex.boundary_of(degree + 1)
    c = solve(bd, target)
    if c is None:
        raise ContractError(
            f"no bounding chain at degree {degree}: classes do not "
            f"translate (theta outside the graph part?)")
    return c
