import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from absorption.errors import AlgebraMismatch, NotAutomorphism, VertexOutOfRange
from absorption.quiveralg import AlgebraMorphism, build_cyclic_nakayama, rotation_automorphism
from absorption.repmod import (
    hom_space,
    injective,
    is_isomorphic,
    is_module_map,
    is_uniserial,
    kernel,
    projective,
    projective_cover,
    radical,
    random_module,
    simple,
    socle,
    top,
    twist,
)


def test_simple_dimension_vectors():
    A = build_cyclic_nakayama(3)
    assert simple(A, 2).dim_vector == (0, 1, 0)
    assert simple(build_cyclic_nakayama(1), 1).dim == 1
    for i in (1, 2, 3):
        assert simple(A, i).dim == 1 and simple(A, i).is_valid()
    with pytest.raises(VertexOutOfRange):
        simple(A, 4)


def test_projective_and_injective_shapes():
    A = build_cyclic_nakayama(3)
    assert projective(A, 1).dim == 3
    assert projective(A, 1).dim_vector == (1, 1, 1)
    assert injective(A, 1).is_valid()
    B = build_cyclic_nakayama(2)
    assert is_isomorphic(top(projective(B, 1))[0], simple(B, 1))
    with pytest.raises(VertexOutOfRange):
        injective(A, 0)


@pytest.mark.parametrize("r", range(2, 7))
def test_injectives_are_shifted_projectives(r):
    A = build_cyclic_nakayama(r)
    for i in range(1, r + 1):
        assert is_isomorphic(injective(A, i), projective(A, i % r + 1), trials=0)


def test_hom_examples():
    A = build_cyclic_nakayama(4)
    for i in range(1, 5):
        for j in range(1, 5):
            assert hom_space(projective(A, i), simple(A, j)).dim == int(i == j)
    B = build_cyclic_nakayama(2)
    assert hom_space(simple(B, 1), projective(B, 1)).dim == 0
    assert hom_space(simple(B, 2), projective(B, 1)).dim == 1
    with pytest.raises(AlgebraMismatch):
        hom_space(simple(A, 1), simple(B, 1))


@pytest.mark.parametrize("r", range(1, 7))
def test_hom_between_projectives_is_one_dimensional(r):
    A = build_cyclic_nakayama(r)
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            H = hom_space(projective(A, i), projective(A, j))
            assert H.dim == 1
            assert all(is_module_map(f, projective(A, i), projective(A, j)) for f in H.basis)


def test_radical_top_socle():
    A = build_cyclic_nakayama(3)
    P1 = projective(A, 1)
    assert radical(simple(A, 2))[0].dim == 0
    for i in (1, 2, 3):
        assert is_isomorphic(top(projective(A, i))[0], simple(A, i))
    soc = socle(P1)[0]
    assert soc.dim_vector == (0, 0, 1)
    assert is_uniserial(P1)


def test_cover_of_radical():
    A = build_cyclic_nakayama(3)
    rad1 = radical(projective(A, 1))[0]
    P, surj = projective_cover(rad1)
    assert P.summands == [2]
    K, _ = kernel(surj, P)
    assert K.dim == 1


def test_isomorphism_examples():
    A = build_cyclic_nakayama(3)
    M = projective(A, 2)
    assert is_isomorphic(M, M)
    assert not is_isomorphic(simple(A, 1), simple(A, 2))
    C = build_cyclic_nakayama(5)
    assert is_isomorphic(injective(C, 3), projective(C, 4))


def test_twist_direction_and_period():
    A = build_cyclic_nakayama(3)
    sigma = rotation_automorphism(A)
    ident = AlgebraMorphism(A, A, np.eye(A.dim, dtype=np.int64))
    M = projective(A, 1)
    assert np.array_equal(twist(M, ident).action, M.action)
    assert is_isomorphic(twist(simple(A, 3), sigma), simple(A, 1))
    for i in (1, 2, 3):
        assert is_isomorphic(twist(simple(A, i), sigma), simple(A, i % 3 + 1))
        assert is_isomorphic(twist(projective(A, i), sigma), projective(A, i % 3 + 1))
    N = M
    for _ in range(3):
        N = twist(N, sigma)
    assert is_isomorphic(N, M)


def test_twist_rejects_non_automorphism():
    A = build_cyclic_nakayama(2)
    zero = AlgebraMorphism(A, A, np.zeros((4, 4), dtype=np.int64))
    with pytest.raises(NotAutomorphism):
        twist(simple(A, 1), zero)


@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_hom_from_projective_is_vertex_component(r, seed):
    A = build_cyclic_nakayama(r)
    M = random_module(A, random.Random(seed))
    for i in range(1, r + 1):
        assert hom_space(projective(A, i), M).dim == M.dim_vector[i - 1]


@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_cover_top_matches(r, seed):
    A = build_cyclic_nakayama(r)
    M = random_module(A, random.Random(seed))
    P, surj = projective_cover(M)
    assert is_module_map(surj, P, M)
    assert top(P)[0].dim_vector == top(M)[0].dim_vector


@given(st.integers(2, 4), st.integers(0, 10 ** 6))
def test_isomorphism_reflexive_symmetric(r, seed):
    A = build_cyclic_nakayama(r)
    rng = random.Random(seed)
    M = random_module(A, rng)
    g = np.eye(M.dim, dtype=np.int64)
    if M.dim > 1:
        g[0, 1:] = [rng.randrange(A.p) for _ in range(M.dim - 1)]
    N = M.change_basis(g)
    assert is_isomorphic(M, M)
    assert is_isomorphic(M, N) and is_isomorphic(N, M)
