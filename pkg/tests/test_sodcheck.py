import copy
import random

import numpy as np
import pytest

from absorption.homalg import ChainMap, hom_homotopy_dim, nakayama_functor, stalk
from absorption.quiveralg import build_cyclic_nakayama, rotation_automorphism
from absorption.repmod import injective, projective, simple, zero_module
from absorption.sodcheck import (
    build_generation_certificate,
    check_exceptional,
    check_semiorthogonal_sequence,
    check_sod,
    random_perfect_complex,
    rotate_certificate,
    rotation_periodicity_check,
    serre_duality_check,
    sigma_order,
    verify_certificate,
)


def test_exceptional_examples():
    A = build_cyclic_nakayama(3)
    assert check_exceptional(projective(A, 1), 10)
    assert check_exceptional(injective(A, 2), 10)
    assert not check_exceptional(simple(A, 1), 10)
    assert not check_exceptional(zero_module(A), 4)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_simple_block_is_semiorthogonal(i):
    A = build_cyclic_nakayama(3)
    block = [simple(A, (i + k - 1) % 3 + 1) for k in range(1, 3)]
    assert check_semiorthogonal_sequence(block, 10).ok


def test_reversed_pair_is_offending():
    A = build_cyclic_nakayama(3)
    v = check_semiorthogonal_sequence([simple(A, 2), simple(A, 1)], 10)
    assert not v.ok
    # Ext^n(S_1, S_2) = k in every odd degree
    assert v.offending == [(1, 0, n) for n in range(1, 11, 2)]
    assert check_semiorthogonal_sequence([simple(A, 1)], 10).ok


def test_trivial_certificate_r1():
    A = build_cyclic_nakayama(1)
    cert = build_generation_certificate(A, 1, "proj", 6)
    assert cert.cone_count == 0
    assert verify_certificate(cert).ok


def test_certificate_r2_has_one_cone():
    A = build_cyclic_nakayama(2)
    cert = build_generation_certificate(A, 2, "proj", 8)
    v = verify_certificate(cert)
    assert v.ok and v.cones == 1 and v.projectives_reached == [1, 2]


def test_certificate_r5_reaches_everything():
    A = build_cyclic_nakayama(5)
    for side in ("proj", "inj"):
        v = verify_certificate(build_generation_certificate(A, 3, side, 14))
        assert v.ok and v.projectives_reached == [1, 2, 3, 4, 5] and v.cones == 4


def test_tampered_certificate_fails():
    A = build_cyclic_nakayama(3)
    cert = build_generation_certificate(A, 1, "proj", 10)
    k = next(n for n, s in enumerate(cert.steps) if s.kind == "cone")
    bad = copy.copy(cert)
    bad.steps = list(cert.steps)
    s = cert.steps[k]
    f = s.data
    broken = ChainMap(f.source, f.target, {n: 2 * c for n, c in f.comps.items()})
    bad.steps[k] = type(s)(s.kind, s.refs, broken, s.result, s.note)
    assert not verify_certificate(bad).ok


@pytest.mark.parametrize("r", range(2, 5))
def test_check_sod_all_indices(r):
    A = build_cyclic_nakayama(r)
    for i in range(1, r + 1):
        v = check_sod(A, i, 2 * r + 4)
        assert v.ok, v.summary()


def test_serre_examples():
    A = build_cyclic_nakayama(2)
    X = stalk(projective(A, 1))
    assert serre_duality_check(X, X, 4) == []
    assert hom_homotopy_dim(X, X, 0) == 1 == hom_homotopy_dim(X, stalk(projective(A, 2)), 0)
    B = build_cyclic_nakayama(3)
    rng = random.Random(7)
    for _ in range(10):
        X, Y = random_perfect_complex(B, rng), random_perfect_complex(B, rng)
        assert serre_duality_check(X, Y, 4) == []


def test_nakayama_functor_period():
    A = build_cyclic_nakayama(3)
    sigma = rotation_automorphism(A)
    X = random_perfect_complex(A, random.Random(1))
    Y = X
    for _ in range(3):
        Y = nakayama_functor(Y, sigma)
    for n in X.degrees:
        assert np.array_equal(Y.terms[n].action, X.terms[n].action)
        if n in X.diffs:
            assert np.array_equal(Y.diffs[n], X.diffs[n])


def test_rotation_moves_certificates():
    A = build_cyclic_nakayama(3)
    sigma = rotation_automorphism(A)
    cert = build_generation_certificate(A, 1, "proj", 10)
    rot = rotate_certificate(cert, sigma)
    assert rot.index == 2
    assert verify_certificate(rot, [simple(A, 3), simple(A, 1), projective(A, 2)]).ok


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_rotation_periodicity(r):
    A = build_cyclic_nakayama(r)
    v = rotation_periodicity_check(A, 2 * r + 4)
    assert v.ok and v.sigma_order == r
    assert v.direction == "twist(S_i, sigma) = S_(i+1)"
    assert sigma_order(rotation_automorphism(A)) == r
