import itertools

import numpy as np
import pytest

from absorption.errors import MixedTypes, NotBasic
from absorption.orderlocal import (
    ValuationOrder,
    classify_overorder_type,
    contains,
    derived_restriction_cohomology,
    enumerate_maximal_overorders,
    fiber,
    fiber_basic_iso_to_lambda,
    has_zero_radical,
    is_bimodule_over,
    is_maximal,
    is_order,
    lattice_inclusion_ok,
    maximal_shift_vector,
    overorder_module_check,
    pushforward_ext_table,
    pushforward_functor,
    pushforward_module,
    standard_hereditary_order,
    truncated_algebra,
)
from absorption.quiveralg import build_cyclic_nakayama, verify_isomorphism
from absorption.repmod import projective, projective_cover, simple

DATA = [(1,), (1, 1), (1, 1, 1), (2, 1), (1, 1, 1, 1), (2, 2, 1), (1, 2, 1)]


def test_standard_orders():
    assert standard_hereditary_order((1,)).v.tolist() == [[0]]
    assert standard_hereditary_order((1, 1)).v.tolist() == [[0, 0], [1, 0]]
    assert standard_hereditary_order((2, 1)).v.tolist() == [[0, 0, 0], [0, 0, 0], [1, 1, 0]]
    with pytest.raises(ValueError):
        standard_hereditary_order((1, 0))


def test_order_and_maximality_examples():
    assert is_order(np.zeros((2, 2))) and is_maximal(np.zeros((2, 2)))
    G = standard_hereditary_order((1, 1)).v
    assert is_order(G) and not is_maximal(G)
    w = [[0, -1], [1, 0]]
    assert is_order(w) and is_maximal(w)
    assert maximal_shift_vector(w) == [0, 1]  # = (-1, 0) up to the normalisation d_1 = 0
    assert not is_order([[0, -1], [-1, 0]])  # v_11 > v_12 + v_21
    assert not is_order([[1, 0], [0, 0]])


def brute_force_overorders(G: ValuationOrder, box: int):
    found = []
    for tail in itertools.product(range(-box, box + 1), repeat=G.n - 1):
        d = np.array((0,) + tail)
        w = d[:, None] - d[None, :]
        if np.all(w <= G.v):
            found.append(w.tolist())
    return sorted(found)


@pytest.mark.parametrize("data", DATA)
def test_overorders(data):
    G = standard_hereditary_order(data)
    ovs = enumerate_maximal_overorders(G)
    assert len(ovs) == len(data)
    # the pruned search agrees with an unpruned brute force over a wider box
    assert sorted(B.v.tolist() for B in ovs) == brute_force_overorders(G, G.n + 1)
    types = []
    for B in ovs:
        assert is_order(B.v) and is_maximal(B.v) and contains(B.v, G.v)
        assert is_bimodule_over(B.v, G.v)
        assert overorder_module_check(B, G)["ok"]
        types.append(classify_overorder_type(B, G))
    assert sorted(types) == list(range(1, len(data) + 1))


def test_overorders_11():
    G = standard_hereditary_order((1, 1))
    got = sorted(B.v.tolist() for B in enumerate_maximal_overorders(G))
    assert got == [[[0, -1], [1, 0]], [[0, 0], [0, 0]]]


def test_mixed_types_rejected():
    G = standard_hereditary_order((1, 1, 1))
    # a valuation matrix whose rows come from different lattices
    B = ValuationOrder(np.array([[0, 0, 0], [1, 0, 0], [1, 0, 0]]), G.p, None, "mixed")
    with pytest.raises(MixedTypes):
        classify_overorder_type(B, G)


@pytest.mark.parametrize("data", DATA)
def test_fibers(data):
    G = standard_hereditary_order(data)
    n = G.n
    generic = fiber(G, 1)
    assert generic.dim == n * n and generic.is_associative() and has_zero_radical(generic)
    special = fiber(G, 0)
    assert special.dim == n * n and special.is_associative()
    if len(data) > 1:
        assert special.radical_basis.shape[0] > 0


def test_fiber_11_radical():
    F = fiber(standard_hereditary_order((1, 1)), 0)
    # E_12 and the class of t E_21 span the radical
    assert F.radical_basis.shape[0] == 2


@pytest.mark.parametrize("data", DATA)
def test_morita_identification(data):
    m = fiber_basic_iso_to_lambda(standard_hereditary_order(data))
    assert m.basic.dim == len(data) ** 2
    assert verify_isomorphism(m.phi).ok


def test_basic_fiber_21_is_lambda2():
    m = fiber_basic_iso_to_lambda(standard_hereditary_order((2, 1)))
    assert m.fiber.dim == 9 and m.basic.dim == 4


@pytest.mark.parametrize("N", [1, 2, 3])
def test_truncated_dimension(N):
    G = standard_hereditary_order((1, 2))
    T = truncated_algebra(G, N)
    assert T.dim == G.n ** 2 * N and T.is_associative() and T.is_unital()


def test_pushforward_basic_properties():
    G = standard_hereditary_order((1, 1, 1))
    push = pushforward_functor(G, 2)
    T = push.algebra
    t = sum(T.basis_vector(T.order_index[(1, a, a)]) for a in range(3))
    lam = build_cyclic_nakayama(3, G.p)
    for k in (1, 2, 3):
        M = push.simple(k)
        assert M.dim == 1 and M.is_valid()
        assert not M.act(t).any()
        P = pushforward_module(projective(lam, k), G)
        assert P.dim == 3 and not P.act(t).any()
        cover, _ = projective_cover(P)
        assert cover.dim == 6  # so P is not projective over Gamma/t^2
    with pytest.raises(NotBasic):
        pushforward_module(simple(build_cyclic_nakayama(2, G.p), 1), standard_hereditary_order((2, 1)))


@pytest.mark.parametrize("r", range(1, 7))
def test_pushforward_table(r):
    G = standard_hereditary_order((1,) * r)
    table = pushforward_ext_table(G, 2, 3)
    assert table.ok, table.summary()
    for k in range(1, r):
        assert table.hom_rows[(r, k)] == 0
    for k in range(1, r + 1):
        assert lattice_inclusion_ok(G, k)


def test_pushforward_table_r3_pattern():
    t = pushforward_ext_table(standard_hereditary_order((1, 1, 1)), 2, 3)
    ext0 = [[t.ext[(j, k, 0)] for k in (1, 2, 3)] for j in (1, 2, 3)]
    ext1 = [[t.ext[(j, k, 1)] for k in (1, 2, 3)] for j in (1, 2, 3)]
    assert ext0 == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert ext1 == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]


@pytest.mark.parametrize("r", range(1, 6))
def test_derived_restriction(r):
    G = standard_hereditary_order((1,) * r)
    for k in range(1, r + 1):
        rc = derived_restriction_cohomology(G, k)
        assert rc.ok and rc.euler == 0
