import pytest

from perihom.complexes import ContractError, homology
from perihom.field import F2, QQ
from perihom.periodic import (
    PeriodicComplex, build_quotient, build_strip, build_window, normalize,
    strip_projection, sub_periodic_at_step,
)


def shifted_line(F, shift):
    return PeriodicComplex.build(
        F, [["v"], ["e"]],
        {"e": (("v", 0, F.of(-1) if F.kind == "Q" else F.one),
               ("v", shift, F.one))})


def test_build_rejects_unknown_face():
    with pytest.raises(ContractError):
        PeriodicComplex.build(F2, [["v"], ["e"]], {"e": (("w", 0, 1),)})


def test_normalize_identity_when_shifts_are_small(line):
    assert line.coarsening == 1


def test_normalize_coarsens_long_shifts():
    np_ = normalize(shifted_line(QQ, 3))
    assert np_.coarsening == 3
    # the coarsened complex has 3 copies per orbit cell and shifts in {0,1}
    assert len(np_.complex.cells[0]) == 3
    for es in np_.complex.entries.values():
        assert all(s in (0, 1) for _, s, _ in es)


def test_window_cells_running(running):
    w = build_window(running)
    # U: three shift-0 vertices + three shift-1 fringe vertices, four edges
    assert len(w.U.cells[0]) == 6
    assert len(w.U.cells[1]) == 4
    # V = U /\ t(U): the three shared vertices, no edges
    assert len(w.V.cells[0]) == 3
    assert w.V.max_degree == 0
    w.i_chain.check_commutation()
    w.j_chain.check_commutation()


def test_quotient_betti_running(running):
    for n, betti1 in ((1, 2), (2, 3), (3, 4)):
        g = build_quotient(running, n)
        assert homology(g.complex).betti_vector == (1, betti1)


def test_quotient_deck_transformation(running):
    g = build_quotient(running, 3)
    t = g.deck_transformation()
    t.check_commutation()
    # t^3 = identity on cells
    m = t.map_of(0)
    cube = m @ m @ m
    assert cube.data == type(m).identity(g.complex.field, m.rows).data


def test_line_quotient_is_circle(line):
    g = build_quotient(line, 2)
    assert homology(g.complex).betti_vector == (1, 1)


def test_strip_and_projection(running):
    strip = build_strip(running, 3)
    g = build_quotient(running, 3)
    proj = strip_projection(strip, g)
    proj.check_commutation()
    # the braid strip is connected
    assert homology(strip.complex).betti(0) == 1


def test_sub_periodic_at_step(running_filtered):
    p = running_filtered.complex
    early = sub_periodic_at_step(p, 1)
    assert len(early.cells[0]) < len(p.cells[0]) or \
        len(early.cells[1]) < len(p.cells[1])
    full = sub_periodic_at_step(p, max(p.filtration.values()))
    assert full.cells == p.cells


def test_dd_zero_enforced_on_normalize():
    # a 2-cell whose boundary is a single 1-cell fails dd = 0
    p = PeriodicComplex.build(
        QQ, [["v"], ["e"], ["f"]],
        {"e": (("v", 0, QQ.of(-1)), ("v", 1, QQ.one)),
         "f": (("e", 0, QQ.one),)})
    with pytest.raises(ContractError):
        normalize(p)
