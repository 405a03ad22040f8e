import numpy as np
import pytest

from absorption.cli import smallest_prime_for
from absorption.errors import NoRootOfUnity
from absorption.homalg import ext_dim, is_p_infty_object
from absorption.quiveralg import nakayama_path
from absorption.repmod import simple
from absorption.skewgroup import (
    build_skew_group,
    character_module,
    correspondence_rotation_check,
    idempotents_ok,
    iso_to_lambda,
    root_of_unity,
    simple_correspondence,
    smallest_primitive_root,
)


def test_small_case_r2_p5():
    S = build_skew_group(2, 5)
    assert S.zeta == 4
    g, t = S.g(), S.t()
    assert np.array_equal(S.mul(g, t), 4 * S.mul(t, g) % 5)
    assert S.idempotents[0].tolist() == [3, 3, 0, 0]
    assert S.idempotents[1].tolist() == [3, 2, 0, 0]
    assert idempotents_ok(S)


def test_primitive_roots():
    assert smallest_primitive_root(7) == 3
    assert smallest_primitive_root(101) == 2
    assert pow(root_of_unity(5, 101), 5, 101) == 1
    with pytest.raises(NoRootOfUnity):
        build_skew_group(3, 5)


def test_r1_is_the_field():
    S = build_skew_group(1, 101)
    assert S.dim == 1
    c = simple_correspondence(S, iso_to_lambda(S))
    assert c.mapping == {1: 1}


@pytest.mark.parametrize("r", range(2, 7))
def test_relations_and_iso(r):
    p = smallest_prime_for(r)
    S = build_skew_group(r, p)
    assert S.dim == r * r and S.is_associative() and S.is_unital()
    g, t = S.g(), S.t()
    assert np.array_equal(S.product(*[g] * r), S.one)
    assert not S.product(*[t] * r).any()
    assert idempotents_ok(S)
    iso = iso_to_lambda(S)
    lam = iso.morphism.source
    for i in range(1, r + 1):
        # longest surviving paths stay nonzero, products of r arrow images vanish
        assert iso.morphism(nakayama_path(lam, i, r - 1)).any()
        arrows = [iso.morphism(nakayama_path(lam, (i + k - 1) % r + 1, 1)) for k in range(r)]
        assert not S.product(*arrows).any()
    corr = simple_correspondence(S, iso)
    assert corr.bijective and sorted(corr.mapping.values()) == list(range(1, r + 1))
    assert correspondence_rotation_check(S, iso, corr)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_character_modules_match_simples(r):
    p = smallest_prime_for(r)
    S = build_skew_group(r, p)
    iso = iso_to_lambda(S)
    corr = simple_correspondence(S, iso)
    D = 2 * r + 4
    for i in range(1, r + 1):
        O = character_module(S, i)
        assert O.is_valid()
        assert is_p_infty_object(O, 2, D).ok
        for j in range(1, r + 1):
            for n in range(D + 1):
                assert ext_dim(O, character_module(S, j), n) == ext_dim(
                    simple(iso.morphism.source, corr.mapping[i]),
                    simple(iso.morphism.source, corr.mapping[j]), n)
