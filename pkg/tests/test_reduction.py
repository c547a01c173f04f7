import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pulsar.graph import build_johnson, build_star, johnson_star, wedge
from pulsar.reduction import (
    ArcClass,
    arc_classes,
    build_reduced_walk,
    build_T,
    class_prob,
    class_size,
    conjugate_walk,
    decompose,
    embed_classes,
    intersection_numbers,
    lumped_chain,
    m_weight,
    vertex_uniform_stationary,
    reduced_curve,
    reduced_evolve,
    reduced_initial,
    stationary,
    symmetrize,
    vertex_classes,
)
from pulsar.walk import curve, evolve, step, uniform_initial


def enumerate_classes(n, k):
    """Sizes and neighbour counts by brute force over k-subsets."""
    verts = [frozenset(s) for s in itertools.combinations(range(n), k)]
    star = verts[0]
    dist = [k - len(v & star) for v in verts]
    sizes = [dist.count(j) for j in range(k + 1)]
    a, b, c = [None] * (k + 1), [None] * (k + 1), [None] * (k + 1)
    for i, v in enumerate(verts):
        j = dist[i]
        nbrs = [dist[x] for x, u in enumerate(verts) if len(u & v) == k - 1]
        counts = (nbrs.count(j), nbrs.count(j + 1), nbrs.count(j - 1))
        for arr, val in zip((a, b, c), counts):
            assert arr[j] in (None, val)
            arr[j] = val
    return sizes, a, b, c


@pytest.mark.parametrize("n,k", [(5, 1), (5, 2), (7, 2), (7, 3), (9, 4)])
def test_intersection_numbers_match_enumeration(n, k):
    d, sizes, a, b, c = intersection_numbers(n, k)
    assert d == k * (n - k)
    assert [list(sizes), list(a), list(b), list(c)] == list(map(list, enumerate_classes(n, k)))


def test_vertex_classes_match_formula():
    w = johnson_star(9, 3, 2)
    cls = vertex_classes(w)
    dec = decompose(9, 3, 2)
    assert [int(np.sum(cls == j)) for j in range(-1, 4)] == list(dec.sizes)


def test_integer_identities():
    for n in range(3, 41):
        for k in range(1, n // 2 + 1):
            d, sizes, a, b, c = intersection_numbers(n, k)
            assert sum(sizes) == math.comb(n, k)
            for j in range(k + 1):
                assert a[j] + b[j] + c[j] == d
            for j in range(k):
                assert b[j] * sizes[j] == c[j + 1] * sizes[j + 1]


def test_decompose_rejects():
    for args in [(4, 2, 1), (6, 3, 1), (10, 0, 1), (10, 2, 0)]:
        with pytest.raises(ValueError):
            decompose(*args)


def test_T_example():
    T = build_T(decompose(15, 2, 1))
    expected = np.array([
        [0, 26 / 27, 0],
        [1 / 26, 13 / 26, 12 / 26],
        [0, 4 / 26, 22 / 26],
    ])
    assert np.allclose(T.matrix, expected, atol=1e-15)
    assert T.x == pytest.approx(26 / 27)
    assert T.p[1] + T.q[1] + T.r[1] == pytest.approx(1)


@settings(max_examples=40, deadline=None)
@given(k=st.integers(1, 6), extra=st.integers(1, 60), m=st.integers(1, 20))
def test_T_row_sums_and_detailed_balance(k, extra, m):
    dec = decompose(2 * k + extra, k, m)
    T = build_T(dec).matrix
    rows = T.sum(axis=1)
    assert rows[0] == pytest.approx(dec.d / (dec.d + m), abs=1e-13)
    assert np.allclose(rows[1:], 1.0, atol=1e-13)
    pi = stationary(dec).interior
    flow = pi[:, None] * T
    assert np.allclose(flow, flow.T, atol=1e-14)
    J = symmetrize(build_T(dec))
    assert np.allclose(J, J.T, atol=1e-14)
    assert np.allclose(np.sort(np.linalg.eigvalsh(J)), np.sort(np.linalg.eigvals(T).real), atol=1e-10)


def test_stationary_of_lumped_chain():
    for n, k, m in [(15, 2, 1), (20, 3, 5), (9, 1, 2)]:
        dec = decompose(n, k, m)
        P = lumped_chain(dec)
        assert np.allclose(P.sum(axis=1), 1.0)
        pi = stationary(dec).values
        assert pi.sum() == pytest.approx(1.0)
        assert np.allclose(pi @ P, pi, atol=1e-15)


def test_degree_measure_close_to_uniform_measure_for_large_n():
    dec = decompose(100, 2, 1)
    a, b = stationary(dec).interior, vertex_uniform_stationary(dec).interior
    assert np.allclose(a / a.sum(), b / b.sum(), rtol=1e-2)


def test_uniform_measure_breaks_balance_at_star_edge():
    dec = decompose(15, 2, 3)
    T = build_T(dec).matrix
    mu = vertex_uniform_stationary(dec)
    lhs = mu[0] * T[0, 1]
    rhs = mu[1] * T[1, 0]
    assert lhs / rhs == pytest.approx(dec.d / (dec.d + dec.m))
    assert mu[2] * T[2, 1] == pytest.approx(mu[1] * T[1, 2])


def test_arc_class_labels():
    assert [W.label for W in arc_classes(2)] == ["A1", "A2", "B0", "B1", "C1", "C2", "S+", "S-"]
    assert ArcClass.parse("B3").inverse == ArcClass("C", 4)
    assert ArcClass.parse("S+").inverse.label == "S-"
    for W in arc_classes(4):
        assert W.inverse.inverse == W
        assert (W.inverse.origin, W.inverse.terminus) == (W.terminus, W.origin)
    with pytest.raises(ValueError):
        ArcClass.parse("D1")


def test_class_prob_and_sizes():
    dec = decompose(15, 2, 1)
    assert class_prob("A1", dec) == pytest.approx(13 / 26)
    assert class_prob("B0", dec) == pytest.approx(26 / 27)
    assert class_prob("S-", dec) == pytest.approx(1 / 27)
    assert class_prob("S+", dec) == 1.0
    for bad in ("A0", "B2", "C0", "C3", "X1"):
        with pytest.raises(ValueError):
            class_prob(bad, dec)
    total = sum(class_size(W, dec) for W in arc_classes(2))
    assert total == dec.johnson_arcs + 2 * dec.m


@pytest.mark.parametrize("n,k,m", [(15, 2, 1), (20, 3, 4), (11, 1, 2)])
def test_probability_flow_identities(n, k, m):
    dec = decompose(n, k, m)
    pi = stationary(dec)
    for W in arc_classes(k):
        assert m_weight(W, pi, dec) == pytest.approx(m_weight(W.inverse, pi, dec), rel=1e-12)
    for j in range(k + 1):
        out = sum(class_prob(W, dec) for W in arc_classes(k) if W.origin == j)
        assert out == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n,k,m", [(8, 2, 2), (9, 3, 1), (7, 1, 3), (10, 2, 5)])
def test_full_walk_conjugates_to_reduced_walk(n, k, m):
    w = johnson_star(n, k, m)
    B, labels = embed_classes(w)
    assert np.abs(B.T @ B - np.eye(B.shape[1])).max() <= 1e-14
    rw = build_reduced_walk(decompose(n, k, m))
    assert labels == rw.labels
    assert np.abs(conjugate_walk(w, B) - rw.U).max() <= 1e-12


def test_subspace_is_invariant():
    w = johnson_star(8, 2, 2)
    B, _ = embed_classes(w)
    UB = np.column_stack([step(w, B[:, i].astype(complex)) for i in range(B.shape[1])])
    assert np.linalg.norm(UB - B @ (B.T @ UB), 2) <= 1e-10


def test_initial_state_lies_in_subspace():
    w = johnson_star(10, 2, 2)
    B, _ = embed_classes(w)
    psi = uniform_initial(w)
    assert np.linalg.norm(psi - B @ (B.T @ psi)) <= 1e-14
    assert np.allclose(B.T @ psi, reduced_initial(decompose(10, 2, 2)), atol=1e-14)


def test_embed_rejects_non_johnson():
    with pytest.raises(ValueError):
        embed_classes(wedge(build_johnson(6, 2), 0, build_star(1), 0))


def test_reduced_walk_structure():
    rw = build_reduced_walk(decompose(15, 3, 2))
    assert rw.dim == 3 * 3 + 2
    assert np.abs(rw.K @ rw.K.T - np.eye(4)).max() <= 1e-14
    assert np.array_equal(rw.S @ rw.S, np.eye(rw.dim))
    assert np.abs(rw.U.T @ rw.U - np.eye(rw.dim)).max() <= 1e-13


def test_full_and_reduced_curves_agree():
    full = curve(johnson_star(10, 2, 2), 500).p
    red = reduced_curve(decompose(10, 2, 2), 500).p
    assert np.abs(full - red).max() <= 1e-8


def test_state_agreement_after_many_steps():
    w = johnson_star(9, 2, 3)
    B, _ = embed_classes(w)
    dec = decompose(9, 2, 3)
    rw = build_reduced_walk(dec)
    full = evolve(w, uniform_initial(w), 300)
    red = reduced_evolve(rw, reduced_initial(dec, rw), 300)
    assert np.abs(B.T @ full - red).max() <= 1e-10


def test_leaf_reflection_in_reduced_basis():
    dec = decompose(15, 2, 1)
    rw = build_reduced_walk(dec)
    psi = reduced_initial(dec, rw)
    sp, sm = rw.index("S+"), rw.index("S-")
    for _ in range(40):
        nxt = rw.U @ psi
        assert nxt[sp] == pytest.approx(-psi[sm], abs=1e-15)
        psi = nxt


def test_reduced_curve_large_n_is_cheap():
    c = reduced_curve(decompose(1000, 2, 1), 200)
    assert len(c) == 201
    assert 0 <= c.p.min() and c.p.max() <= 1 + 1e-12
