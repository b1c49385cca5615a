import random

import pytest

from perihom.complexes import ContractError
from perihom.field import Field
from perihom.generator import random_filtration, random_periodic_graph
from perihom.periodic import normalize
from perihom.persistence import (
    analyze_filtration, check_unimodality, toroidal_timeline,
)

FIELDS = (Field("Fp", 2), Field("Fp", 5), Field("Q"))


@pytest.fixture(scope="module")
def fa(running_filtered):
    return analyze_filtration(running_filtered)


def test_steps_in_order(fa):
    assert fa.step_values() == (1, 2, 3, 4, 5, 6, 7)


def test_iota_identity_and_functoriality(fa):
    n = len(fa.steps)
    for k in range(n):
        m = fa.iota_map(k, k, 0)
        assert m.to_json() == [[1 if a == b else 0 for b in range(m.cols)]
                               for a in range(m.rows)]
    for k in range(n):
        for l in range(k, n):
            for mm in range(l, n):
                lhs = fa.iota_map(l, mm, 0) @ fa.iota_map(k, l, 0)
                assert lhs.data == fa.iota_map(k, mm, 0).data


def test_step_monodromy_matrices(fa):
    expected = {
        1: [[0]],
        2: [[0, 0], [0, 0]],
        3: [[0, 0], [1, 0]],
        4: [[0, 0, 0], [1, 0, 0], [0, 0, 0]],
        5: [[0, 0, 0], [1, 0, 0], [0, 1, 0]],
        6: [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
        7: [[1, 0, 1], [0, 0, 0], [0, 1, 0]],
    }
    for st in fa.steps:
        assert st.monodromy.degrees[0].M_V.to_json() == expected[st.step]


def test_commutation_log(fa):
    holds = {(a, b) for a, b, q, h in fa.commutation_log if h and q == 0}
    fails = {(a, b) for a, b, q, h in fa.commutation_log if not h and q == 0}
    assert holds == {(1, 2), (3, 4)}
    assert (2, 3) in fails


def test_unimodality_running(fa):
    rep = check_unimodality(fa)
    assert rep.unimodal and rep.violations == ()


def test_timeline_running(fa):
    entries = toroidal_timeline(fa)
    # the class born at step 7 in gim survives to the end
    last = [e for e in entries if e.step == 7]
    assert last and all(e.death_step is None for e in last)


def test_single_step_filtration_trivial():
    rng = random.Random(3)
    p = random_periodic_graph(rng, FIELDS[0])
    p = type(p).build(p.field, p.cells, p.entries,
                      {c: 1 for cs in p.cells for c in cs})
    fa1 = analyze_filtration(normalize(p))
    assert len(fa1.steps) == 1
    assert fa1.commutation_log == ()
    assert check_unimodality(fa1).unimodal


def test_missing_filtration_rejected(running):
    with pytest.raises(ContractError):
        analyze_filtration(running)


def test_unimodality_random_filtered():
    rng = random.Random(915)
    for k in range(25):
        p = random_periodic_graph(rng, FIELDS[k % 3])
        p = random_filtration(rng, p, max_steps=3)
        fa_k = analyze_filtration(normalize(p))
        rep = check_unimodality(fa_k)
        assert rep.unimodal, (k, rep.violations)
