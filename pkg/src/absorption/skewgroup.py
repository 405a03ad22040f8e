"""The skew group algebra k[t]/(t^r) x mu_r and its identification with Lambda_r."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactlinalg as la
from .errors import NoRootOfUnity, NotBijective, VerificationFailed
from .repmod import Module, is_isomorphic, pullback, simple, twist
from .quiveralg import (
    AlgebraMorphism,
    PathBasisAlgebra,
    StructureConstAlgebra,
    build_cyclic_nakayama,
    morphism_from_arrows,
    rotation_automorphism,
    verify_isomorphism,
)


def smallest_primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group of F_p."""
    if not la.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return 1
    m, factors, q = p - 1, set(), 2
    while q * q <= m:
        while m % q == 0:
            factors.add(q)
            m //= q
        q += 1
    if m > 1:
        factors.add(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise ValueError("no primitive root found")


def root_of_unity(r: int, p: int) -> int:
    """zeta = g^((p-1)/r) for the smallest primitive root g; needs r | p - 1."""
    if (p - 1) % r:
        raise NoRootOfUnity(f"F_{p} has no primitive {r}-th root of unity")
    return pow(smallest_primitive_root(p), (p - 1) // r, p)


class SkewGroupAlgebra(StructureConstAlgebra):
    """Basis t^a g^b (index a r + b) with g t = zeta t g, g^r = 1, t^r = 0."""

    def __init__(self, r: int, p: int):
        if r < 1:
            raise ValueError("r must be positive")
        zeta = root_of_unity(r, p)
        d = r * r
        struct = np.zeros((d, d, d), dtype=np.int64)
        for a in range(r):
            for b in range(r):
                for c in range(r):
                    if a + c >= r:
                        continue
                    for e in range(r):
                        # (t^a g^b)(t^c g^e) = zeta^{bc} t^{a+c} g^{b+e}
                        struct[a * r + b, c * r + e, (a + c) * r + (b + e) % r] = pow(zeta, b * c, p)
        one = np.zeros(d, dtype=np.int64)
        one[0] = 1
        self.r = r
        self.zeta = zeta
        inv_r = la.inv_mod(r, p)
        idem = []
        for i in range(r):
            e = np.zeros(d, dtype=np.int64)
            for b in range(r):
                e[b] = inv_r * pow(zeta, (-i * b) % r, p) % p
            idem.append(e)
        radical = np.eye(d, dtype=np.int64)[r:]
        super().__init__(struct, one, p, idempotents=idem, radical=radical,
                         labels=[f"t^{a}g^{b}" for a in range(r) for b in range(r)],
                         name=f"k[t]/(t^{r}) x mu_{r}")

    def t(self) -> np.ndarray:
        return self.basis_vector(self.r) if self.r > 1 else self.zero()

    def g(self) -> np.ndarray:
        return self.basis_vector(1 % self.r)

    def character_idempotent(self, i: int) -> np.ndarray:
        """eps_i = (1/r) sum_b zeta^{-ib} g^b, so that g eps_i = zeta^i eps_i."""
        return self.idempotents[i % self.r]


def build_skew_group(r: int, p: int) -> SkewGroupAlgebra:
    return SkewGroupAlgebra(r, p)


def idempotents_ok(S: SkewGroupAlgebra) -> bool:
    """The eps_i are orthogonal idempotents summing to 1."""
    eps = S.idempotents
    for i, e in enumerate(eps):
        for j, f in enumerate(eps):
            want = e if i == j else S.zero()
            if not np.array_equal(S.mul(e, f), want):
                return False
    return bool(np.array_equal(np.sum(eps, axis=0) % S.p, S.one))


@dataclass
class SkewIso:
    morphism: AlgebraMorphism      # Lambda_r -> S
    sign: int                      # vertex j goes to eps_{offset + sign j}
    offset: int

    def character_of_vertex(self, j: int) -> int:
        r = self.morphism.target.r
        return (self.offset + self.sign * j) % r


def _candidate(lam: PathBasisAlgebra, S: SkewGroupAlgebra, sign: int, offset: int) -> AlgebraMorphism:
    r = S.r
    eps = [S.character_idempotent(offset + sign * j) for j in range(1, r + 1)]
    t = S.t()
    arrows = [S.product(eps[j], t, eps[(j + 1) % r]) for j in range(r)]
    return morphism_from_arrows(lam, S, eps, arrows, name=f"Lambda_{r} -> skew")


def iso_to_lambda(S: SkewGroupAlgebra) -> SkewIso:
    """Verified isomorphism Lambda_r -> S sending e_j to a character idempotent.

    Arrows go to eps t eps'.  Which character each vertex takes is settled
    by trying the affine labellings j -> offset +- j and keeping the first
    that verifies.
    """
    r = S.r
    lam = build_cyclic_nakayama(r, S.p)
    for sign in (-1, 1):
        for offset in range(r):
            f = _candidate(lam, S, sign, offset)
            if verify_isomorphism(f).ok:
                return SkewIso(f, sign, offset)
    raise VerificationFailed("no character labelling gives an isomorphism")


def character_module(S: SkewGroupAlgebra, i: int) -> Module:
    """The 1-dimensional module where g acts by zeta^i and t by 0."""
    r, p = S.r, S.p
    action = np.zeros((S.dim, 1, 1), dtype=np.int64)
    for b in range(r):
        action[b, 0, 0] = pow(S.zeta, (i * b) % r, p)
    return Module(S, action, name=f"O_{i}")


@dataclass
class Correspondence:
    mapping: dict                  # character i (1..r) -> vertex j with pullback = S_j
    bijective: bool
    rotation_shift: int | None     # s with mapping[i + s] = mapping[i] + 1, if any

    def summary(self) -> dict:
        return {"mapping": {str(k): v for k, v in self.mapping.items()},
                "bijective": self.bijective, "rotation_shift": self.rotation_shift}


def simple_correspondence(S: SkewGroupAlgebra, iso: SkewIso) -> Correspondence:
    """Pull each character module back to Lambda_r and name the simple it becomes."""
    r = S.r
    f = iso.morphism
    lam = f.source
    mapping = {}
    for i in range(1, r + 1):
        M = pullback(character_module(S, i), f)
        hits = [j for j in range(1, r + 1) if is_isomorphic(M, simple(lam, j))]
        if len(hits) != 1:
            raise NotBijective(f"character {i} pulls back to {len(hits)} simples")
        mapping[i] = hits[0]
    if sorted(mapping.values()) != list(range(1, r + 1)):
        raise NotBijective(f"correspondence {mapping} is not a bijection")
    shift = None
    for s in range(r):
        if all(mapping[(i + s - 1) % r + 1] == mapping[i] % r + 1 for i in range(1, r + 1)):
            shift = s
            break
    return Correspondence(mapping, True, shift)


def correspondence_rotation_check(S: SkewGroupAlgebra, iso: SkewIso, corr: Correspondence) -> bool:
    """Twisting a pulled-back character by sigma gives the pullback of the shifted character."""
    r = S.r
    lam = iso.morphism.source
    if r == 1:
        return True
    if corr.rotation_shift is None:
        return False
    sigma = rotation_automorphism(lam)
    for i in range(1, r + 1):
        M = pullback(character_module(S, i), iso.morphism)
        nxt = (i + corr.rotation_shift - 1) % r + 1
        N = pullback(character_module(S, nxt), iso.morphism)
        if not is_isomorphic(twist(M, sigma), N):
            return False
    return True
