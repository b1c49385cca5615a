import pytest

from perihom.complexes import ContractError
from perihom.linalg import image, kernel, map_subspace
from perihom.monodromy import bounding_chain, translation_witness


def test_running_matrices(running_ms):
    dm = running_ms.degrees[0]
    assert dm.M_V.to_json() == [[1, 0, 1], [0, 0, 0], [0, 1, 0]]
    assert dm.M_U.to_json() == [[1, 1], [0, 0]]
    assert dm.analysis_V.gim.basis.to_json() == [[1], [0], [0]]
    assert dm.policy == "plain"
    assert not running_ms.diagnostics()


def test_running_window_decomposition(running_ms):
    dm = running_ms.degrees[0]
    # H(V) = ker(j) + P + J with the summands independent
    total = dm.ker_j.add(dm.P).add(dm.J)
    assert total.dim == 3
    assert dm.ker_j.dim + dm.P.dim + dm.J.dim == 3
    assert kernel(dm.M_V) == dm.ker_j.add(dm.J)


def test_graph_pairs_satisfy_j_equals_i_after(running_ms):
    dm = running_ms.degrees[0]
    for x, y in dm.graph_pairs:
        assert dm.j.mul_vec(x) == dm.i.mul_vec(y)
        assert dm.M_V.mul_vec(x) == y


def test_commutation_running(running_ms):
    dm = running_ms.degrees[0]
    assert (dm.M_U @ dm.j).data == (dm.j @ dm.M_V).data
    assert (dm.Mt_U @ dm.i).data == (dm.i @ dm.Mt_V).data


def test_identity_suite_random_corpus(random_corpus):
    bad = [(k, ms.diagnostics()) for k, _, ms in random_corpus
           if ms.diagnostics()]
    assert bad == []


def test_tilde_equivalences_random_corpus(random_corpus):
    for _, _, ms in random_corpus:
        for dm in ms.degrees.values():
            assert dm.analysis_V.gim == dm.analysis_Vt.gim
            assert dm.analysis_U.gim == dm.analysis_Ut.gim


def test_restricted_inverse_random_corpus(random_corpus):
    for _, _, ms in random_corpus:
        F = ms.hV.complex.field
        for dm in ms.degrees.values():
            for M, Mt in ((dm.M_V, dm.Mt_V), (dm.M_U, dm.Mt_U)):
                Z = dm.analysis_V.gim if M is dm.M_V else dm.analysis_U.gim
                if Z.dim == 0:
                    continue
                for v in Z.basis.columns():
                    assert M.mul_vec(Mt.mul_vec(v)) == tuple(v)


def test_j_iso_on_gim_random_corpus(random_corpus):
    for _, _, ms in random_corpus:
        for dm in ms.degrees.values():
            jg = map_subspace(dm.j, dm.analysis_V.gim)
            assert jg.dim == dm.analysis_V.gim.dim
            assert jg == dm.analysis_U.gim
            assert image(dm.i).contains_subspace(jg)


def test_translation_witness_chain_level(running_ms):
    dm = running_ms.degrees[0]
    theta = dm.analysis_V.gim.basis.col(0)
    wit = translation_witness(running_ms, 0, theta, 3)
    assert len(wit.steps) == 3
    F = running_ms.hV.complex.field
    w = running_ms.window
    for theta_k, chain in wit.steps:
        nxt = dm.M_V.mul_vec(theta_k)
        lhs = w.U.boundary_of(1).mul_vec(chain)
        rep_t = running_ms.hV.chain_of(0, theta_k)
        rep_n = running_ms.hV.chain_of(0, nxt)
        rhs = tuple(F.sub(a, b) for a, b in zip(
            w.j_chain.map_of(0).mul_vec(rep_t),
            w.i_chain.map_of(0).mul_vec(rep_n)))
        assert lhs == rhs


def test_translation_witness_rejects_gker_class(running_ms):
    dm = running_ms.degrees[0]
    gker_vec = dm.analysis_V.gker.basis.col(0)
    with pytest.raises(ContractError):
        translation_witness(running_ms, 0, gker_vec, 1)


def test_bounding_chain_exact(running_ms):
    dm = running_ms.degrees[0]
    theta = dm.analysis_V.gim.basis.col(0)
    nxt = dm.M_V.mul_vec(theta)
    c = bounding_chain(running_ms, 0, theta, nxt)
    assert len(c) == running_ms.window.U.n_cells(1)
