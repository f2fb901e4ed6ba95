import json
import random
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kunneth.combinatorics import block_compose, block_surjections, fibres, rotate_to_one
from kunneth.modules import (DecoratedSurjection, RightModule, check_module_axioms, circle_module, dump_module,
                             load_module, module_differences, module_from_operad)
from kunneth.operads import LoadError, ass_operad


def test_operad_module_dims(r1):
    for k in range(1, 5):
        assert r1.component(k).dims_by_degree() == {0: factorial(k)}
    assert r1.component(0).dims_by_degree() == {0: 1}


def test_circle_dims(s1):
    assert s1.component(1).dims_by_degree() == {0: 1, 1: 1}
    assert s1.component(3).dims_by_degree() == {0: 2, 1: 2}
    for k in range(1, 5):
        assert len(s1.component(k)) == 2 * factorial(k - 1)


def test_circle_insertion_example(s1):
    # "12" inserted at the only slot of a two-point circle
    assert s1.partial(2, 1, 2, {((1, 2), 0): 1}, {(1, 2): 1}) == {((1, 2, 3), 0): 1}
    # collapse [3] -> [2], fibre {1, 2} decorated "21": 1 becomes the block (2, 1)
    ds = DecoratedSurjection((1, 1, 2), ((2, 1), (1,)))
    assert s1.act({((1, 2), 1): 1}, ds) == {((1, 3, 2), 1): 1}


@pytest.mark.parametrize("name", ["r1", "s1"])
def test_unit_action(name, request):
    mod = request.getfixturevalue(name)
    for k in range(1, 5):
        ident = DecoratedSurjection.identity(k, (1,))
        for lab in mod.component(k).labels():
            assert mod.act({lab: 1}, ident) == {lab: 1}


@pytest.mark.parametrize("name", ["r1", "s1"])
def test_axioms_to_arity_4(name, request):
    rep = check_module_axioms(request.getfixturevalue(name), 4)
    assert rep.ok, str(rep)


def _oracle(mod, label, blocks):
    # direct substitution of ordered fibres into a linear or cyclic word
    if mod.name == "circle":
        c, d = label
        return {(rotate_to_one(tuple(y for x in c for y in blocks[x - 1])), d): 1}
    return {tuple(y for x in label for y in blocks[x - 1]): 1}


def _reverse_slot_assembly(mod, x, ds):
    # partial actions from the last fibre to the first, so slot numbers never shift
    k = ds.target
    sizes = ds.fibre_sizes()
    cur, ar = dict(x), k
    for j in range(k, 0, -1):
        cur = mod.partial(ar, j, sizes[j - 1], cur, {ds.decorations[j - 1]: 1})
        ar += sizes[j - 1] - 1
    order = [a for fib in fibres(ds.f, k) for a in fib]
    return mod.sigma(ds.source, cur, tuple(order))


@st.composite
def words_and_blocks(draw):
    a = draw(st.integers(1, 4))
    b = draw(st.integers(1, a))
    blocks = draw(st.sampled_from(block_surjections(a, b)))
    return b, blocks, draw(st.integers(0, 10**6))


@settings(max_examples=150, deadline=None)
@given(words_and_blocks(), st.sampled_from(["r1", "s1"]))
def test_action_independent_of_assembly(data, name):
    b, blocks, seed = data
    mod = module_from_operad(ass_operad(4), 4) if name == "r1" else circle_module(4, ass_operad(4))
    label = random.Random(seed).choice(mod.component(b).labels())
    ds = DecoratedSurjection.from_blocks(blocks)
    generic = RightModule.act(mod, {label: 1}, ds)
    assert generic == _oracle(mod, label, blocks)
    assert generic == mod.act_blocks(label, blocks)
    assert generic == _reverse_slot_assembly(mod, {label: 1}, ds)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6), st.sampled_from(["r1", "s1"]))
def test_contravariant_functoriality(a, seed, name):
    rng = random.Random(seed)
    mod = module_from_operad(ass_operad(4), 4) if name == "r1" else circle_module(4, ass_operad(4))
    b = rng.randint(1, a)
    c = rng.randint(1, b)
    first = rng.choice(block_surjections(a, b))
    second = rng.choice(block_surjections(b, c))
    label = rng.choice(mod.component(c).labels())
    step = {}
    for lab, v in mod.act_blocks(label, second).items():
        for lab2, w in mod.act_blocks(lab, first).items():
            step[lab2] = step.get(lab2, 0) + v * w
    assert step == mod.act_blocks(label, block_compose(first, second))


def test_round_trip(tmp_path):
    over = ass_operad(3)
    p = tmp_path / "circle.json"
    dump_module(circle_module(3, over), p)
    back = load_module(p, over)
    assert module_differences(back, circle_module(3, over), 3) == []
    p = tmp_path / "line.json"
    dump_module(module_from_operad(over, 3), p)
    assert module_differences(load_module(p, over), module_from_operad(over, 3), 3) == []


def _circle_json(tmp_path):
    p = tmp_path / "c.json"
    dump_module(circle_module(3, ass_operad(3)), p)
    return json.loads(p.read_text())


def _write(tmp_path, data):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    return p


def test_corrupted_action_reported(tmp_path):
    data = _circle_json(tmp_path)
    entry = next(e for e in data["partial_action"] if (e["n"], e["i"], e["m"]) == (1, 1, 2))
    entry["matrix"][0][2] = 2
    with pytest.raises(LoadError) as err:
        load_module(_write(tmp_path, data), ass_operad(3))
    assert err.value.report.violations


def test_degree_mismatch_rejected(tmp_path):
    data = _circle_json(tmp_path)
    entry = next(e for e in data["partial_action"] if (e["n"], e["i"], e["m"]) == (1, 1, 2))
    entry["matrix"].append(["[[1,2],1]", "[[[1],0],[1,2]]", 1, 1])
    with pytest.raises(LoadError):
        load_module(_write(tmp_path, data), ass_operad(3))


def test_missing_arity_rejected(tmp_path):
    data = _circle_json(tmp_path)
    del data["components"]["2"]
    with pytest.raises(LoadError):
        load_module(_write(tmp_path, data), ass_operad(3))


def test_wrong_operad_rejected(tmp_path):
    data = _circle_json(tmp_path)
    data["over"] = "ger"
    with pytest.raises(LoadError):
        load_module(_write(tmp_path, data), ass_operad(3))
