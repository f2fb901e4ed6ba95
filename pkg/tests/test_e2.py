import pytest

from kunneth.combinatorics import cycle_type, perms
from kunneth.e2 import betti, character, chain_complex, degree_characters, e2_characters, e2_page
from kunneth.modules import circle_module, module_from_operad
from kunneth.operads import ass_operad

A4 = ass_operad(4)
R1 = module_from_operad(A4, 4)
S1 = circle_module(4, A4)
PAIRS = {"rr": (R1, R1), "sr": (S1, R1), "ss": (S1, S1)}


def totals(pair, k, d_max=None, **kw):
    return e2_page(*PAIRS[pair], k, 2 * k if d_max is None else d_max, **kw).totals()


@pytest.mark.parametrize("pair,k,expected", [
    ("rr", 0, (1,)), ("rr", 1, (1,)), ("rr", 2, (1, 1)), ("rr", 3, (1, 3, 2)),
    ("sr", 1, (1, 1)), ("sr", 2, (1, 3, 2)), ("ss", 1, (1, 2, 1)), ("ss", 0, (1,)),
])
def test_small_pages(pair, k, expected):
    assert totals(pair, k) == expected


def test_one_point_page():
    assert e2_page(R1, R1, 1, 2).entries == {(0, 0): 1}


@pytest.mark.parametrize("pair", ["rr", "sr", "ss"])
def test_normalized_matches_unnormalized(pair):
    a = e2_page(*PAIRS[pair], 2, 2, mode="sequential")
    b = e2_page(*PAIRS[pair], 2, 2, mode="sequential", normalized=False)
    c = e2_page(*PAIRS[pair], 2, 2, mode="reduced", normalized=False)
    assert a.entries == b.entries == c.entries


@pytest.mark.parametrize("pair", ["rr", "sr", "ss"])
def test_reduced_matches_sequential(pair):
    for k in (1, 2):
        assert e2_page(*PAIRS[pair], k, 3).entries == e2_page(*PAIRS[pair], k, 3, mode="sequential").entries


@pytest.mark.parametrize("pair", ["rr", "sr", "ss"])
def test_stable_in_truncation(pair):
    small = e2_page(*PAIRS[pair], 2, 2)
    big = e2_page(*PAIRS[pair], 2, 3)
    assert {pq: v for pq, v in big.entries.items() if sum(pq) <= 2} == small.entries


def test_threads_do_not_change_result():
    assert e2_page(S1, S1, 2, 3, threads=3).entries == e2_page(S1, S1, 2, 3).entries


@pytest.mark.parametrize("pair,k", [("rr", 3), ("sr", 2), ("ss", 2)])
def test_euler_identity(pair, k):
    cx = chain_complex(*PAIRS[pair], k, 4 * k)
    chain = sum((-1) ** (p + q) * cx.dim(p, q) for q in cx.degrees() for p in range(cx.top + 1))
    page = e2_page(*PAIRS[pair], k, 4 * k)
    assert sum((-1) ** (p + q) * v for (p, q), v in page.entries.items()) == chain


@pytest.mark.parametrize("pair,k", [("rr", 2), ("rr", 3), ("sr", 2), ("ss", 2)])
def test_hopf_trace_at_identity_is_dimension_table(pair, k):
    page = e2_page(*PAIRS[pair], k, 4 * k)
    per_q = {}
    for (p, q), v in page.entries.items():
        per_q[q] = per_q.get(q, 0) + (-1) ** p * v
    got = {q: v for q, v in character(*PAIRS[pair], k, tuple(range(1, k + 1))).items() if v}
    assert got == {q: v for q, v in per_q.items() if v}


def test_swap_trace_on_two_planar_points():
    # Conf_2(R^2) ~ S^1; the swap is the antipodal map, trace +1 on H_0 and H_1
    hopf = character(R1, R1, 2, (2, 1))
    assert sum((-1) ** q * v for q, v in hopf.items()) == 0
    chars = degree_characters(e2_characters(R1, R1, 2, 2))
    assert chars[(1, (2,))] == 1 and chars[(0, (2,))] == 1


def test_three_planar_points_characters():
    # H^1 = permutation module on pairs, H^2 = the standard representation
    chars = degree_characters(e2_characters(R1, R1, 3, 3))
    assert [chars[(1, mu)] for mu in ((1, 1, 1), (2, 1), (3,))] == [3, 1, 0]
    assert [chars[(2, mu)] for mu in ((1, 1, 1), (2, 1), (3,))] == [2, 0, -1]


@pytest.mark.parametrize("pair,k", [("rr", 3), ("sr", 2), ("ss", 2)])
def test_characters_match_hopf_trace(pair, k):
    page = e2_page(*PAIRS[pair], k, 4 * k)
    chars = e2_characters(*PAIRS[pair], k, 4 * k)
    ident = tuple([1] * k)
    assert {pq: c[ident] for pq, c in chars.items()} == page.entries
    for sigma in perms(k):
        mu = cycle_type(sigma)
        per_q = {}
        for (p, q), c in chars.items():
            per_q[q] = per_q.get(q, 0) + (-1) ** p * c[mu]
        hopf = character(*PAIRS[pair], k, sigma)
        assert {q: v for q, v in per_q.items() if v} == {q: v for q, v in hopf.items() if v}


def test_betti_carries_collapse_flag():
    b = betti(e2_page(R1, R1, 2, 2))
    assert b.collapse_assumed and b.betti == (1, 1) and b.euler_characteristic() == 0


def test_bad_inputs():
    with pytest.raises(ValueError):
        e2_page(R1, R1, 2, -1)
    with pytest.raises(ValueError):
        character(R1, R1, 2, (1, 1))
