import pytest

from perihom import mvss
from perihom.complexes import ContractError, homology
from perihom.io import load_cycle
from perihom.periodic import build_quotient

from conftest import corpus_path


def assert_differential_identities(b):
    for k in range(2, len(b.d0_u)):
        assert (b.d0_u[k - 1] @ b.d0_u[k]).is_zero()
        assert (b.d0_v[k - 1] @ b.d0_v[k]).is_zero()
    for k in range(1, len(b.d1)):
        assert ((b.d0_u[k] @ b.d1[k]) + (b.d1[k - 1] @ b.d0_v[k])).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_differential_identities(running, tube, n):
    assert_differential_identities(mvss.build_blowup(running, n))
    assert_differential_identities(mvss.build_blowup(tube, n))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_total_homology_matches_quotient_running(running, n):
    b = mvss.build_blowup(running, n)
    ht = mvss.total_homology(b)
    hg = homology(build_quotient(running, n).complex)
    assert ht.betti_vector == hg.betti_vector


@pytest.mark.parametrize("n", [1, 2, 3])
def test_total_homology_matches_quotient_line(line, n):
    b = mvss.build_blowup(line, n)
    assert mvss.total_homology(b).betti_vector == \
        homology(build_quotient(line, n).complex).betti_vector


@pytest.mark.parametrize("n", [1, 2])
def test_total_homology_matches_quotient_tube(tube, n):
    b = mvss.build_blowup(tube, n)
    assert mvss.total_homology(b).betti_vector == \
        homology(build_quotient(tube, n).complex).betti_vector


def test_vtrace_red_cycle_has_gim_component(running, running_ms):
    g = build_quotient(running, 3)
    hg = homology(g.complex)
    deg, chain = load_cycle(corpus_path("red_cycle_n3.json"), g)
    cls = hg.class_of(deg, chain)
    b = mvss.build_blowup(running, 3)
    trace = mvss.class_vtrace(b, hg, deg, cls)
    dm = running_ms.degrees[deg - 1]
    F = g.complex.field
    comp = dm.analysis_V.gim_component(trace[0])
    assert any(x != F.zero for x in comp)


def test_vtrace_green_cycle_has_zero_gim_component(running, running_ms):
    g = build_quotient(running, 3)
    hg = homology(g.complex)
    deg, chain = load_cycle(corpus_path("green_cycle_n3.json"), g)
    cls = hg.class_of(deg, chain)
    b = mvss.build_blowup(running, 3)
    trace = mvss.class_vtrace(b, hg, deg, cls)
    dm = running_ms.degrees[deg - 1]
    F = g.complex.field
    comp = dm.analysis_V.gim_component(trace[0])
    assert all(x == F.zero for x in comp)


def test_vtrace_rejects_non_cycle(running):
    b = mvss.build_blowup(running, 3)
    F = b.total.field
    bad = [F.zero] * b.total.n_cells(1)
    bad[0] = F.one  # a single copied edge of U is not closed
    with pytest.raises(ContractError):
        mvss.vtrace(b, 1, tuple(bad))


def test_collapse_map_is_quasi_iso_running(running):
    b = mvss.build_blowup(running, 3)
    cm = mvss.collapse_map(b)
    cm.check_commutation()
    from perihom.complexes import induced_map
    ht = mvss.total_homology(b)
    hg = homology(cm.target)
    ind = induced_map(cm, ht, hg)
    from perihom.linalg import rank
    for k, m in ind.items():
        assert rank(m) == min(m.rows, m.cols) == hg.betti(k) == ht.betti(k)
