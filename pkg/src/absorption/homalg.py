"""Bounded complexes, minimal projective resolutions, Ext and Yoneda products.

Complexes are cohomologically graded: ``diffs[n]`` is the matrix of
d^n: X^n -> X^{n+1} acting on row vectors, so d^n followed by d^{n+1} is
``diffs[n] @ diffs[n + 1]``.

Cone convention, written for row vectors on cone^n = X^{n+1} + Y^n::

    d_cone^n = [[-d_X^{n+1}, f^{n+1}],
                [        0,  d_Y^n  ]]

which is the transpose of the familiar column-vector matrix
[[-d_X, 0], [f, d_Y]].  Shifts use X[k]^n = X^{n+k} with d multiplied by
(-1)^k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import exactlinalg as la
from .errors import (
    AlgebraMismatch,
    DegreeMismatch,
    InsufficientDepth,
    LiftingFailed,
    NotProjectiveTerms,
)
from .repmod import (
    Module,
    ProjectiveModule,
    hom_space,
    is_module_map,
    kernel,
    projective_cover,
    projective_sum,
    twist,
    zero_module,
)
from .quiveralg import AlgebraMorphism, StructureConstAlgebra


def _zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def direct_sum(M: Module, N: Module) -> Module:
    """M + N, staying projective (with generators) when both summands are."""
    if M.dim == 0:
        return N
    if N.dim == 0:
        return M
    if isinstance(M, ProjectiveModule) and isinstance(N, ProjectiveModule):
        return projective_sum([M, N])
    return Module(M.algebra, M.direct_sum(N).action)


class Complex:
    """A bounded complex of right modules; zero terms are dropped."""

    def __init__(self, algebra: StructureConstAlgebra, terms: dict, diffs: dict | None = None,
                 name: str = "", check: bool = True):
        self.algebra = algebra
        self.terms = {n: M for n, M in terms.items() if M.dim}
        for M in self.terms.values():
            if M.algebra is not algebra:
                raise AlgebraMismatch("complex terms live over different algebras")
        self.diffs = {}
        for n, d in (diffs or {}).items():
            if n in self.terms and n + 1 in self.terms:
                d = np.asarray(d, dtype=np.int64) % algebra.p
                if d.shape != (self.terms[n].dim, self.terms[n + 1].dim):
                    raise DegreeMismatch(f"differential in degree {n} has shape {d.shape}")
                self.diffs[n] = d
        self.name = name
        if check:
            self._check()

    def _check(self):
        p = self.algebra.p
        for n, d in self.diffs.items():
            if not is_module_map(d, self.terms[n], self.terms[n + 1]):
                raise ValueError(f"differential in degree {n} is not a module map")
            if n + 1 in self.diffs and (d @ self.diffs[n + 1] % p).any():
                raise ValueError(f"d o d != 0 at degree {n}")

    def __repr__(self):
        body = ", ".join(f"{n}:{self.terms[n].dim}" for n in self.degrees)
        return f"<Complex {self.name} [{body}]>"

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    @property
    def lo(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def hi(self) -> int:
        return max(self.terms) if self.terms else -1

    def term(self, n: int) -> Module:
        return self.terms.get(n) or zero_module(self.algebra)

    def dim(self, n: int) -> int:
        M = self.terms.get(n)
        return M.dim if M is not None else 0

    def diff(self, n: int) -> np.ndarray:
        d = self.diffs.get(n)
        return d if d is not None else _zeros(self.dim(n), self.dim(n + 1))

    def is_zero(self) -> bool:
        return not self.terms

    def is_perfect(self) -> bool:
        return all(isinstance(M, ProjectiveModule) for M in self.terms.values())


def stalk(M: Module, degree: int = 0) -> Complex:
    """M concentrated in one degree."""
    return Complex(M.algebra, {degree: M}, name=M.name, check=False)


def shift(X: Complex, k: int) -> Complex:
    sign = -1 if k % 2 else 1
    terms = {n - k: M for n, M in X.terms.items()}
    diffs = {n - k: sign * d for n, d in X.diffs.items()}
    return Complex(X.algebra, terms, diffs, name=f"{X.name}[{k}]", check=False)


@dataclass
class ChainMap:
    source: Complex
    target: Complex
    comps: dict = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for n, f in self.comps.items():
            f = np.asarray(f, dtype=np.int64) % self.source.algebra.p
            if f.shape != (self.source.dim(n), self.target.dim(n)):
                raise DegreeMismatch(f"component in degree {n} has shape {f.shape}")
            if f.size and f.any():
                comps[n] = f
        self.comps = comps

    def comp(self, n: int) -> np.ndarray:
        f = self.comps.get(n)
        return f if f is not None else _zeros(self.source.dim(n), self.target.dim(n))

    def is_valid(self) -> bool:
        X, Y, p = self.source, self.target, self.source.algebra.p
        for n, f in self.comps.items():
            if not is_module_map(f, X.term(n), Y.term(n)):
                return False
        lo = min(X.lo, Y.lo) - 1
        hi = max(X.hi, Y.hi) + 1
        for n in range(lo, hi + 1):
            lhs = X.diff(n) @ self.comp(n + 1) % p
            rhs = self.comp(n) @ Y.diff(n) % p
            if not np.array_equal(lhs, rhs):
                return False
        return True


def identity_map(X: Complex) -> ChainMap:
    return ChainMap(X, X, {n: np.eye(X.dim(n), dtype=np.int64) for n in X.degrees})


def cone(f: ChainMap) -> Complex:
    X, Y = f.source, f.target
    if X.algebra is not Y.algebra:
        raise AlgebraMismatch("chain map between complexes over different algebras")
    p = X.algebra.p
    lo = min(X.lo - 1, Y.lo)
    hi = max(X.hi - 1, Y.hi)
    terms, diffs = {}, {}
    for n in range(lo, hi + 1):
        terms[n] = direct_sum(X.term(n + 1), Y.term(n))
    for n in range(lo, hi):
        a, b = X.dim(n + 1), Y.dim(n)
        c, d = X.dim(n + 2), Y.dim(n + 1)
        m = _zeros(a + b, c + d)
        m[:a, :c] = -X.diff(n + 1)
        m[:a, c:] = f.comp(n + 1)
        m[a:, c:] = Y.diff(n)
        diffs[n] = m % p
    return Complex(X.algebra, terms, diffs, name=f"cone({X.name}->{Y.name})")


def _cycles_boundaries(X: Complex, n: int):
    p = X.algebra.p
    m = X.dim(n)
    d_out = X.diff(n)
    Z = la.left_kernel(d_out, p) if d_out.shape[1] else np.eye(m, dtype=np.int64)
    B = la.row_basis(X.diff(n - 1), p) if X.dim(n - 1) else _zeros(0, m)
    return Z, B


def homology_dim(X: Complex, n: int) -> int:
    p = X.algebra.p
    return X.dim(n) - la.rank_mod(X.diff(n), p) - la.rank_mod(X.diff(n - 1), p)


def homology(X: Complex, n: int) -> Module:
    """H^n(X) as a subquotient module."""
    if X.dim(n) == 0:
        return zero_module(X.algebra)
    Z, B = _cycles_boundaries(X, n)
    Zmod = X.terms[n].restrict(Z)
    if Zmod.dim == 0 or B.shape[0] == 0:
        return Zmod
    _, piv = la.rref(Z, X.algebra.p)
    H, _ = Zmod.quotient(B[:, piv])
    return H


def is_acyclic(X: Complex) -> bool:
    return all(homology_dim(X, n) == 0 for n in X.degrees)


def is_quasi_iso(f: ChainMap) -> bool:
    """f induces isomorphisms on all cohomology (equivalently, cone(f) is acyclic)."""
    if not f.is_valid():
        return False
    return is_acyclic(cone(f))


def euler_characteristic(X: Complex) -> int:
    return sum((-1) ** (n % 2) * M.dim for n, M in X.terms.items())


def twist_complex(X: Complex, sigma: AlgebraMorphism) -> Complex:
    """Termwise twist; differentials keep their matrices."""
    terms = {n: twist(M, sigma) for n, M in X.terms.items()}
    return Complex(X.algebra, terms, dict(X.diffs), name=f"{X.name}^sigma", check=False)


def nakayama_functor(X: Complex, sigma: AlgebraMorphism) -> Complex:
    """nu(X) for a complex of projectives over Lambda_r: P_i -> P_{i+1} via the sigma-twist."""
    if not X.is_perfect():
        raise NotProjectiveTerms("the Nakayama functor is applied to complexes of projectives")
    return twist_complex(X, sigma)


# ----------------------------------------------------------------------------
# resolutions


@dataclass
class Resolution:
    """Minimal projective resolution P_D -> ... -> P_0 -> M.

    ``diffs[k]`` is the map P_{k+1} -> P_k, ``augmentation`` is P_0 -> M and
    ``kernel_dims[k]`` is the dimension of ker(P_k -> P_{k-1}) (with
    P_{-1} = M).  ``complete`` means the resolution stopped because a
    kernel vanished.
    """

    module: Module
    terms: list
    diffs: list
    augmentation: np.ndarray
    kernel_dims: list
    complete: bool

    @property
    def depth(self) -> int:
        return len(self.terms) - 1

    def term(self, k: int) -> ProjectiveModule:
        if 0 <= k < len(self.terms):
            return self.terms[k]
        return zero_module(self.module.algebra)

    def diff(self, k: int) -> np.ndarray:
        """d_k: P_k -> P_{k-1} for k >= 1."""
        if 1 <= k <= len(self.diffs):
            return self.diffs[k - 1]
        return _zeros(self.term(k).dim, self.term(k - 1).dim)

    def summands(self) -> list[list[int]]:
        return [P.summands for P in self.terms]

    def to_complex(self, length: int | None = None) -> Complex:
        """Brutal truncation P_length -> ... -> P_0 placed in degrees -length..0."""
        length = self.depth if length is None else length
        A = self.module.algebra
        terms = {-k: self.term(k) for k in range(length + 1)}
        diffs = {-k: self.diff(k) for k in range(1, length + 1)}
        return Complex(A, terms, diffs, name=f"res({self.module.name})", check=False)


def minimal_projective_resolution(M: Module, depth: int) -> Resolution:
    """Resolve M by iterated projective covers, keeping P_0 .. P_depth."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    cached = M.__dict__.get("_resolution")
    if cached is not None and (cached.depth >= depth or cached.complete):
        n = min(depth, cached.depth)
        complete = cached.complete and n == cached.depth
        return Resolution(M, cached.terms[:n + 1], cached.diffs[:n], cached.augmentation,
                          cached.kernel_dims[:n + 1], complete)
    terms, diffs, kdims = [], [], []
    K, incl = M, np.eye(M.dim, dtype=np.int64)
    aug = _zeros(0, M.dim)
    complete = False
    for k in range(depth + 1):
        P, pi = projective_cover(K)
        if P.dim == 0:
            complete = True
            break
        to_prev = pi @ incl % M.p
        if k == 0:
            aug = to_prev
        else:
            diffs.append(to_prev)
        terms.append(P)
        K, incl = kernel(pi, P)
        kdims.append(K.dim)
    if not complete and K.dim == 0:
        complete = True
    res = Resolution(M, terms, diffs, aug, kdims, complete)
    M.__dict__["_resolution"] = res
    return res


def detect_periodicity(res: Resolution) -> int | None:
    """Smallest q with P_{k+q} = P_k and d_{k+q} = d_k throughout the computed range."""
    if res.complete:
        return None
    depth = res.depth
    if depth < 3:
        raise InsufficientDepth("need depth >= 3 to detect a period")
    summ = res.summands()
    for q in range(1, (depth - 1) // 2 + 1):
        if any(summ[k] != summ[k + q] for k in range(depth - q + 1)):
            continue
        if all(np.array_equal(res.diff(k), res.diff(k + q)) for k in range(1, depth - q + 1)):
            return q
    return None


# ----------------------------------------------------------------------------
# Ext via the source's resolution


def _gen_coords(P: ProjectiveModule, f: np.ndarray) -> np.ndarray:
    """Flattened generator images: coordinates of a map out of a projective."""
    return (P.gen_vectors @ f % P.p).ravel()


def _coboundary(res: Resolution, N: Module, k: int) -> tuple[list, np.ndarray]:
    """(basis of Hom(P_k, N), matrix of precomposition with d_{k+1})."""
    Pk, Pk1 = res.term(k), res.term(k + 1)
    basis = Pk.hom_basis_to(N) if Pk.dim else []
    width = len(Pk1.summands) * N.dim
    if not basis or width == 0:
        return basis, _zeros(len(basis), width)
    d = res.diff(k + 1)
    rows = [_gen_coords(Pk1, d @ f % N.p) for f in basis]
    return basis, np.array(rows, dtype=np.int64)


def _need(M: Module, n: int) -> Resolution:
    return minimal_projective_resolution(M, n + 1)


def ext_dim(M: Module, N: Module, n: int) -> int:
    """dim Ext^n(M, N) from the minimal resolution of M."""
    if M.algebra is not N.algebra:
        raise AlgebraMismatch("modules over different algebras")
    if n < 0:
        return 0
    res = _need(M, n)
    basis, delta = _coboundary(res, N, n)
    if not basis:
        return 0
    rank_out = la.rank_mod(delta, N.p)
    rank_in = la.rank_mod(_coboundary(res, N, n - 1)[1], N.p) if n >= 1 else 0
    return len(basis) - rank_out - rank_in


def ext_table(modules: list, depth: int) -> dict:
    """{(a, b, n): dim Ext^n(modules[a], modules[b])} for 0 <= n <= depth (0-based a, b)."""
    return {(a, b, n): ext_dim(M, N, n)
            for a, M in enumerate(modules) for b, N in enumerate(modules)
            for n in range(depth + 1)}


@dataclass
class ExtClass:
    """A class in Ext^degree(source, target) represented by a cocycle P_degree -> target."""

    source: Module
    target: Module
    degree: int
    cocycle: np.ndarray

    @property
    def coords(self) -> np.ndarray:
        P = minimal_projective_resolution(self.source, self.degree).term(self.degree)
        return _gen_coords(P, self.cocycle)

    def is_cocycle(self) -> bool:
        res = _need(self.source, self.degree)
        d = res.diff(self.degree + 1)
        return not (d @ self.cocycle % self.source.p).any()

    def is_zero(self) -> bool:
        return ext_class_is_zero(self)

    def scaled(self, c: int) -> "ExtClass":
        return ExtClass(self.source, self.target, self.degree, c * self.cocycle % self.source.p)


def _boundary_span(M: Module, N: Module, n: int) -> np.ndarray:
    if n == 0:
        P = minimal_projective_resolution(M, 0).term(0)
        return _zeros(0, len(P.summands) * N.dim)
    res = _need(M, n)
    return la.row_basis(_coboundary(res, N, n - 1)[1], N.p)


def ext_class_is_zero(c: ExtClass) -> bool:
    v = c.coords
    if not v.any():
        return True
    B = _boundary_span(c.source, c.target, c.degree)
    return B.shape[0] > 0 and la.in_span(B, v, c.source.p)


def ext_basis(M: Module, N: Module, n: int) -> list[ExtClass]:
    """Cocycles whose classes form a basis of Ext^n(M, N)."""
    p = M.p
    res = _need(M, n)
    basis, delta = _coboundary(res, N, n)
    if not basis:
        return []
    Pn = res.term(n)
    coeffs = la.left_kernel(delta, p) if delta.shape[1] else np.eye(len(basis), dtype=np.int64)
    span = _boundary_span(M, N, n)
    rank = span.shape[0]
    out = []
    for c in coeffs:
        f = sum(int(ci) * b for ci, b in zip(c, basis)) % p
        v = _gen_coords(Pn, f)
        trial = np.vstack([span, v]) if span.shape[0] else v.reshape(1, -1)
        new_rank = la.rank_mod(trial, p)
        if new_rank > rank:
            out.append(ExtClass(M, N, n, f))
            span, rank = trial, new_rank
    return out


def ext_identity(M: Module) -> ExtClass:
    """The unit of Ext^0(M, M): the augmentation of the resolution."""
    res = minimal_projective_resolution(M, 0)
    return ExtClass(M, M, 0, res.augmentation)


def lift_cocycle(f: ExtClass, length: int) -> list[np.ndarray]:
    """Chain map components F_k: P^X_{a+k} -> P^Y_k lifting f: P^X_a -> Y, k = 0..length."""
    X, Y, a = f.source, f.target, f.degree
    resX = minimal_projective_resolution(X, a + length)
    resY = minimal_projective_resolution(Y, length)
    p = X.p
    comps = []
    try:
        F = resX.term(a).lift(resY.augmentation, resY.term(0), f.cocycle)
        comps.append(F)
        for k in range(1, length + 1):
            want = resX.diff(a + k) @ F % p
            F = resX.term(a + k).lift(resY.diff(k), resY.term(k), want)
            comps.append(F)
    except la.NoSolution as exc:
        raise LiftingFailed(f"cannot lift a degree-{a} cocycle through the resolution") from exc
    return comps


def yoneda_product(f: ExtClass, g: ExtClass) -> ExtClass:
    """g o f in Ext^{a+b}(X, Z) for f in Ext^a(X, Y) and g in Ext^b(Y, Z)."""
    if f.target is not g.source:
        raise AlgebraMismatch("the target of f must be the source of g")
    F = lift_cocycle(f, g.degree)[-1]
    return ExtClass(f.source, g.target, f.degree + g.degree, F @ g.cocycle % f.source.p)


def theta(S: Module, q: int = 2) -> ExtClass:
    """The periodicity class in Ext^q(S, S).

    When P_q and P_0 have the same summands the representative is the
    augmentation read on P_q, i.e. the comparison map that is the identity
    on every term of the periodic part; otherwise the single basis class.
    """
    res = minimal_projective_resolution(S, q + 1)
    if not res.complete and res.term(q).summands == res.term(0).summands:
        c = ExtClass(S, S, q, res.augmentation.copy())
        if c.is_cocycle():
            return c
    basis = ext_basis(S, S, q)
    if len(basis) != 1:
        raise ValueError(f"Ext^{q}(S, S) has dimension {len(basis)}, expected 1")
    return basis[0]


@dataclass
class PInftyReport:
    q: int
    depth: int
    ext_dims: list
    pattern_ok: bool
    theta_nonzero: list
    ok: bool

    def summary(self) -> dict:
        return {"q": self.q, "depth": self.depth, "ext_dims": self.ext_dims,
                "pattern_ok": self.pattern_ok, "theta_nonzero": self.theta_nonzero}


def is_p_infty_object(S: Module, q: int, depth: int) -> PInftyReport:
    """Check Ext^*(S, S) = k[theta] with deg theta = q, up to degree ``depth``."""
    if depth < 2 * q:
        raise InsufficientDepth("depth must be at least 2q")
    dims = [ext_dim(S, S, k) for k in range(depth + 1)]
    pattern = all(d == (1 if k % q == 0 else 0) for k, d in enumerate(dims))
    nonzero = []
    if pattern:
        t = theta(S, q)
        power = t
        nonzero.append(not power.is_zero())
        for _ in range(2, depth // q + 1):
            power = yoneda_product(power, t)
            nonzero.append(not power.is_zero())
    ok = pattern and all(nonzero)
    return PInftyReport(q, depth, dims, pattern, nonzero, ok)


# ----------------------------------------------------------------------------
# morphisms in the homotopy category


@lru_cache(maxsize=8192)
def _hom_basis(M: Module, N: Module) -> tuple:
    return tuple(hom_space(M, N).basis)


def _total_hom_layout(X: Complex, Y: Complex, k: int):
    """Blocks (j, rows, cols, offset) of prod_j Hom_k(X^j, Y^{j+k}) as flattened matrices."""
    blocks, off = [], 0
    for j in X.degrees:
        if Y.dim(j + k):
            blocks.append((j, X.dim(j), Y.dim(j + k), off))
            off += X.dim(j) * Y.dim(j + k)
    return blocks, off


def total_hom_differential(X: Complex, Y: Complex, k: int) -> tuple[int, np.ndarray]:
    """(dim Hom^k, matrix of D^k: Hom^k -> Hom^{k+1}) for the total Hom complex.

    D(f)_j = f_j d_Y - (-1)^k d_X f_{j+1}, written for row-vector maps.
    Hom^k is built from genuine module-map bases (intertwining solutions).
    """
    p = X.algebra.p
    target_blocks, width = _total_hom_layout(X, Y, k + 1)
    where = {j: (r, c, o) for j, r, c, o in target_blocks}
    sign = -1 if k % 2 else 1
    rows = []
    for j in X.degrees:
        if not Y.dim(j + k):
            continue
        for h in _hom_basis(X.terms[j], Y.terms[j + k]):
            v = np.zeros(width, dtype=np.int64)
            if j in where:
                r, c, o = where[j]
                v[o:o + r * c] += (h @ Y.diff(j + k) % p).ravel()
            if j - 1 in where:
                r, c, o = where[j - 1]
                v[o:o + r * c] -= sign * (X.diff(j - 1) @ h % p).ravel()
            rows.append(v % p)
    mat = np.array(rows, dtype=np.int64).reshape(len(rows), width)
    return len(rows), mat


def hom_homotopy_dim(X: Complex, Y: Complex, n: int) -> int:
    """dim Hom_K(X, Y[n]) for a bounded complex of projectives X."""
    if not X.is_perfect():
        raise NotProjectiveTerms("the source complex must consist of projective modules")
    if X.algebra is not Y.algebra:
        raise AlgebraMismatch("complexes over different algebras")
    if X.is_zero() or Y.is_zero():
        return 0
    p = X.algebra.p
    dim_n, d_n = total_hom_differential(X, Y, n)
    if dim_n == 0:
        return 0
    _, d_prev = total_hom_differential(X, Y, n - 1)
    return dim_n - la.rank_mod(d_n, p) - la.rank_mod(d_prev, p)


def resolution_hom_ext_dim(M: Module, N: Module, n: int) -> int:
    """Ext^n(M, N) as H^n of Hom(truncated resolution, N): an independent route."""
    res = minimal_projective_resolution(M, n + 1)
    return hom_homotopy_dim(res.to_complex(n + 1), stalk(N), n)
