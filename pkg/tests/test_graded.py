import pytest
from hypothesis import given
from hypothesis import strategies as st

from kunneth.graded import BasisElement, GradedMap, GradedSpace, koszul_sign, permute_factors, tensor
from kunneth.linalg import SparseMatrix

ODD = GradedSpace([BasisElement("t", 1)])
EVEN = GradedSpace([BasisElement("e", 0)])
CIRCLE = GradedSpace([BasisElement("e", 0), BasisElement("t", 1)])


def test_koszul_examples():
    assert koszul_sign((1, 0), (1, 1)) == -1
    assert koszul_sign((0, 1, 2), (1, 1, 1)) == 1
    assert koszul_sign((1, 0), (0, 1)) == 1


def test_tensor_examples():
    unit = tensor([])
    assert unit.dims_by_degree() == {0: 1}
    assert tensor([CIRCLE, unit]).dims_by_degree() == CIRCLE.dims_by_degree()
    assert tensor([CIRCLE, CIRCLE]).dims_by_degree() == {0: 1, 1: 2, 2: 1}


def test_permute_examples():
    t = tensor([ODD, ODD])
    swap = permute_factors(t, (1, 0))
    assert swap.image_of(("t", "t")) == {("t", "t"): -1}
    ident = permute_factors(t, (0, 1))
    assert ident.matrix == SparseMatrix.identity(1)
    # 3-cycle on (1, 1, 0): the two odd factors keep their order, sign +1;
    # the reverse order of odd factors gives -1
    t3 = tensor([ODD, ODD, EVEN])
    assert permute_factors(t3, (1, 2, 0)).image_of(("t", "t", "e")) == {("e", "t", "t"): 1}
    assert permute_factors(t3, (2, 0, 1)).image_of(("t", "t", "e")) == {("t", "e", "t"): -1}


def test_permute_requires_tensor():
    with pytest.raises(TypeError):
        permute_factors(CIRCLE, (0,))


def test_degree_preservation_enforced():
    with pytest.raises(ValueError):
        GradedMap(CIRCLE, CIRCLE, SparseMatrix(2, 2, {(0, 1): 1}))


@st.composite
def perm_pair(draw):
    n = draw(st.integers(1, 4))
    s = tuple(draw(st.permutations(range(n))))
    t = tuple(draw(st.permutations(range(n))))
    degs = tuple(draw(st.lists(st.integers(0, 3), min_size=n, max_size=n)))
    return s, t, degs


@given(perm_pair())
def test_koszul_inverse(data):
    s, _, degs = data
    inv = [0] * len(s)
    for i, p in enumerate(s):
        inv[p] = i
    moved = [0] * len(s)
    for i, p in enumerate(s):
        moved[p] = degs[i]
    assert koszul_sign(s, degs) * koszul_sign(inv, moved) == 1


@given(perm_pair())
def test_permute_factors_functorial(data):
    s, t, degs = data
    spaces = [CIRCLE if d % 2 else GradedSpace([BasisElement("e", 0), BasisElement("u", 2)]) for d in degs]
    src = tensor(spaces)
    first = permute_factors(src, s)
    second = permute_factors(first.target, t)
    ts = tuple(t[s[i]] for i in range(len(s)))
    assert second.compose(first) == permute_factors(src, ts)
