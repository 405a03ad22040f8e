"""Batch certification runner.

    absorption --r 3 --p 13 --depth 10 --format text

Exit status: 0 when every check passes or is skipped, 1 when some check
fails, 2 on invalid parameters.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from . import exactlinalg as la
from .errors import AbsorptionError
from .homalg import (
    detect_periodicity,
    ext_dim,
    is_p_infty_object,
    minimal_projective_resolution,
    resolution_hom_ext_dim,
)
from .repmod import injective, is_isomorphic, projective, random_module, simple
from .orderlocal import (
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
    overorder_module_check,
    pushforward_ext_table,
    standard_hereditary_order,
)
from .quiveralg import build_cyclic_nakayama, rotation_automorphism
from .skewgroup import (
    build_skew_group,
    character_module,
    correspondence_rotation_check,
    idempotents_ok,
    iso_to_lambda,
    simple_correspondence,
)
from .sodcheck import check_sod, rotation_periodicity_check, serre_duality_sample, sigma_order


@dataclass
class Params:
    r: int
    p: int
    depth: int
    data: tuple
    trunc: int = 2
    seed: int = 0
    serre_pairs: int = 100
    oracle_pairs: int = 10


@dataclass
class Check:
    id: str
    anchor: str
    status: str          # pass | fail | skipped
    expected: object
    got: object
    ms: float


@dataclass
class CertificationReport:
    params: dict
    checks: list = field(default_factory=list)
    version: str = __version__

    @property
    def failed(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_dict(self) -> dict:
        return {"params": self.params, "checks": [asdict(c) for c in self.checks],
                "version": self.version}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "CertificationReport":
        return cls(d["params"], [Check(**c) for c in d["checks"]], d["version"])

    @classmethod
    def from_json(cls, s: str) -> "CertificationReport":
        return cls.from_dict(json.loads(s))

    def canonical(self) -> dict:
        """The report without timings, for determinism comparisons."""
        d = self.to_dict()
        for c in d["checks"]:
            c.pop("ms")
        return d

    def to_text(self) -> str:
        lines = [f"absorption {self.version}  " +
                 "  ".join(f"{k}={v}" for k, v in self.params.items())]
        for c in self.checks:
            lines.append(f"[{c.status.upper():7}] {c.id:40} {c.anchor}  ({c.ms:.0f} ms)")
            if c.status == "fail":
                lines.append(f"          expected {c.expected!r}")
                lines.append(f"          got      {c.got!r}")
        counts = {s: sum(c.status == s for c in self.checks) for s in ("pass", "fail", "skipped")}
        lines.append("summary: " + ", ".join(f"{v} {k}" for k, v in counts.items()))
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


class _Runner:
    def __init__(self, report: CertificationReport):
        self.report = report

    def run(self, cid: str, anchor: str, expected, fn, skip: str | None = None):
        """Run ``fn`` returning ``got``; status is pass when got == expected.

        ``fn`` may instead return (ok, got) to decide the status itself.
        Exceptions become failures so sibling checks keep running.
        """
        t = time.perf_counter()
        if skip:
            status, got = "skipped", skip
        else:
            try:
                out = fn()
                if isinstance(out, tuple) and len(out) == 2 and isinstance(out[0], bool):
                    ok, got = out
                else:
                    got = out
                    ok = _jsonable(got) == _jsonable(expected)
                status = "pass" if ok else "fail"
            except AbsorptionError as exc:
                status, got = "fail", {"error": type(exc).__name__, "message": str(exc)}
            except Exception as exc:  # a crash is reported, never hidden
                status, got = "fail", {"error": type(exc).__name__, "message": str(exc)}
        ms = round((time.perf_counter() - t) * 1000, 3)
        self.report.checks.append(Check(cid, anchor, status, _jsonable(expected), _jsonable(got), ms))


def _rad_power_dims(A) -> list[int]:
    """dims of rad^k for k = 1, 2, ... until zero."""
    p = A.p
    rad = A.radical_basis
    cur, dims = rad, []
    while cur.shape[0]:
        dims.append(cur.shape[0])
        prods = np.array([A.mul(x, y) for x in cur for y in rad]) if rad.shape[0] else cur[:0]
        cur = la.row_basis(prods, p) if prods.size else prods
    return dims


def expected_simple_ext(r: int, j: int, k: int, n: int) -> int:
    if r == 1:
        return int(n == 0)
    return int((k == j and n % 2 == 0) or (k == j % r + 1 and n % 2 == 1))


def run_checks(params: Params) -> CertificationReport:
    r, p, D, N = params.r, params.p, params.depth, params.trunc
    report = CertificationReport({"r": r, "p": p, "depth": D, "data": list(params.data), "trunc": N,
                                  "seed": params.seed, "degenerate": r == 1})
    run = _Runner(report).run
    A = build_cyclic_nakayama(r, p)
    vertices = range(1, r + 1)

    run("lambda.dimension", "Lambda_r is r^2-dimensional", r * r, lambda: A.dim)
    run("lambda.associative", "path multiplication is associative and unital", True,
        lambda: A.is_associative() and A.is_unital())
    run("lambda.radical_series", "rad^r = 0 and rad^(r-1) != 0", list(range(r * r - r, 0, -r)),
        lambda: _rad_power_dims(A))
    run("lambda.sigma_order", "the rotation sigma has order r", r,
        lambda: sigma_order(rotation_automorphism(A)))

    def periodic(i):
        res = minimal_projective_resolution(simple(A, i), D)
        if r == 1:
            return res.complete, {"complete": res.complete, "terms": res.summands()}
        alt = [[i] if k % 2 == 0 else [i % r + 1] for k in range(D + 1)]
        q = detect_periodicity(res)
        return q == 2 and res.summands() == alt, {"period": q, "terms": res.summands()}

    for i in vertices:
        run(f"resolution.S{i}.periodic", "simples have 2-periodic projective resolutions P_i, P_(i+1)",
            "period 2" if r > 1 else "finite (S_1 is projective)", lambda i=i: periodic(i))

    def ext_table():
        bad = []
        for j in vertices:
            for k in vertices:
                for n in range(D + 1):
                    v = ext_dim(simple(A, j), simple(A, k), n)
                    if v != expected_simple_ext(r, j, k, n):
                        bad.append([j, k, n, v])
        return not bad, {"mismatches": bad}

    run("ext.simples", "Ext(S_j, S_k) vanishes unless k in {j, j+1}", {"mismatches": []}, ext_table)

    def pinfty(i):
        rep = is_p_infty_object(simple(A, i), 2, D)
        return rep.ok, rep.summary()

    for i in vertices:
        run(f"pinfty.S{i}", "S_i is a P^(infinity,2)-object: Ext(S,S) = k[theta], deg theta = 2",
            True, lambda i=i: pinfty(i), skip="r = 1 has no simple with periodic self-extensions" if r == 1 else None)

    def sod(i):
        v = check_sod(A, i, D)
        return v.ok, v.summary()

    for i in vertices:
        run(f"sod.{i}", "<S_(i+1..i-1), P_i> and <I_i, S_(i+1..i-1)> are semiorthogonal decompositions",
            True, lambda i=i: sod(i))

    for i in vertices:
        run(f"injective.I{i}", "I_i is isomorphic to P_(i+1)", True,
            lambda i=i: is_isomorphic(injective(A, i), projective(A, i % r + 1), trials=0))

    def serre():
        v = serre_duality_sample(A, params.serre_pairs, D, seed=params.seed)
        return v.ok, v.summary()

    run("serre.random_pairs", "Hom(X, Y[n]) and Hom(Y, nu X[-n]) have equal dimension",
        True, serre)

    def rotation():
        v = rotation_periodicity_check(A, D)
        return v.ok, v.summary()

    run("rotation.periodicity", "the Serre rotation returns after r steps", True, rotation)

    def oracle():
        rng = random.Random(params.seed)
        bad = []
        for k in range(params.oracle_pairs):
            M, Nm = random_module(A, rng), random_module(A, rng)
            for n in range(4):
                a, b = ext_dim(M, Nm, n), resolution_hom_ext_dim(M, Nm, n)
                if a != b:
                    bad.append([k, n, a, b])
        return not bad, {"pairs": params.oracle_pairs, "mismatches": bad}

    run("ext.cross_oracle", "Ext via resolutions equals the total Hom complex computation", True, oracle)

    # orders
    G = standard_hereditary_order(params.data, p)
    run("order.fiber_generic", "the fiber away from t = 0 is Mat_n with zero radical",
        {"dim": G.n ** 2, "radical": 0},
        lambda: {"dim": fiber(G, 1).dim, "radical": 0 if has_zero_radical(fiber(G, 1)) else "nonzero"})

    def morita():
        m = fiber_basic_iso_to_lambda(G)
        return True, {"fiber_dim": m.fiber.dim, "basic_dim": m.basic.dim}

    run("order.morita", "the basic fiber at t = 0 is isomorphic to Lambda_r", True, morita)

    def overorders():
        ovs = enumerate_maximal_overorders(G)
        info = []
        for B in ovs:
            info.append({"label": B.label, "order": is_order(B.v), "maximal": is_maximal(B.v),
                         "contains": contains(B.v, G.v), "bimodule": is_bimodule_over(B.v, G.v),
                         "type": classify_overorder_type(B, G),
                         "module_check": overorder_module_check(B, G)["ok"]})
        ok = (len(ovs) == r and all(x["order"] and x["maximal"] and x["contains"] and x["bimodule"]
                                    and x["module_check"] for x in info)
              and sorted(x["type"] for x in info) == list(vertices))
        return ok, {"count": len(ovs), "overorders": info}

    run("order.overorders", "exactly r maximal overorders, each of one type, types bijective",
        True, overorders)

    basic = G if G.is_basic() else standard_hereditary_order((1,) * r, p)

    def push_table():
        t = pushforward_ext_table(basic, N, 3)
        return t.ok, t.summary() | {"ext": {f"{j},{k},{n}": v for (j, k, n), v in t.ext.items() if v}}

    run("pushforward.ext_table", "pushed-forward simples: Ext^0 = delta, Ext^1 on j = k+1, no higher Ext",
        True, push_table)

    def orth():
        t = pushforward_ext_table(basic, N, 1)
        vals = {k: t.hom_rows[(r, k)] for k in range(1, r)}
        return all(v == 0 for v in vals.values()), vals

    run("pushforward.orthogonality", "Hom(L^(r), i_*S_k) = 0 for k < r", True, orth,
        skip="no k < r when r = 1" if r == 1 else None)

    def restriction():
        out = {}
        for k in vertices:
            rc = derived_restriction_cohomology(basic, k, N)
            out[k] = {"H-1": rc.h_minus1.dim_vector, "H0": rc.h0.dim_vector, "ok": rc.ok}
        return all(v["ok"] for v in out.values()), out

    run("restriction.cohomology", "Li^* i_* S_k has H^-1 = H^0 = S_k", True, restriction)

    # skew group
    def skew_iso():
        S = build_skew_group(r, p)
        iso = iso_to_lambda(S)
        return idempotents_ok(S) and S.is_associative(), {
            "zeta": S.zeta, "labelling": f"e_j -> eps_({iso.offset}{'+' if iso.sign > 0 else '-'}j)"}

    run("skew.iso", "k[t]/(t^r) x mu_r is isomorphic to Lambda_r", True, skew_iso)

    def skew_corr():
        S = build_skew_group(r, p)
        iso = iso_to_lambda(S)
        c = simple_correspondence(S, iso)
        lam = iso.morphism.source
        same_ext = all(
            ext_dim(character_module(S, i), character_module(S, j), n)
            == ext_dim(simple(lam, c.mapping[i]), simple(lam, c.mapping[j]), n)
            for i in vertices for j in vertices for n in range(min(D, 6) + 1))
        ok = c.bijective and correspondence_rotation_check(S, iso, c) and same_ext
        return ok, c.summary() | {"ext_tables_agree": same_ext}

    run("skew.correspondence", "character modules correspond bijectively to the simples S_i",
        True, skew_corr)
    return report


def smallest_prime_for(r: int, lower: int = 101) -> int:
    q = lower
    while not (la.is_prime(q) and (q - 1) % r == 0):
        q += 1
    return q


class UsageError(ValueError):
    """Parameters rejected before any computation runs."""


def make_params(r: int | None = None, p: int | None = None, depth: int | None = None, data=None,
                trunc: int = 2, seed: int = 0, serre_pairs: int = 100, oracle_pairs: int = 10) -> Params:
    if data is not None:
        data = tuple(int(x) for x in data)
        if not data or any(x < 1 for x in data):
            raise UsageError("ramification data must be a nonempty list of positive integers")
    if r is None:
        r = len(data) if data else 3
    if r < 1:
        raise UsageError("r must be positive")
    if data is None:
        data = (1,) * r
    if len(data) != r:
        raise UsageError(f"data has {len(data)} blocks but r is {r}")
    if p is None:
        p = smallest_prime_for(r)
    if not la.is_prime(p) or p >= 2 ** 31:
        raise UsageError(f"p = {p} must be a prime below 2^31")
    if r % p == 0:
        raise UsageError(f"p = {p} divides r = {r}")
    if (p - 1) % r:
        raise UsageError(f"the skew group algebra needs p = 1 mod r (p = {p}, r = {r})")
    if depth is None:
        depth = 2 * r + 4
    if depth < 2 * r + 4:
        raise UsageError(f"depth must be at least 2r + 4 = {2 * r + 4}")
    if trunc < 2:
        raise UsageError("trunc must be at least 2")
    return Params(r, p, depth, data, trunc, seed, serre_pairs, oracle_pairs)


def certify(r: int | None = None, p: int | None = None, depth: int | None = None, data=None,
            **flags) -> CertificationReport:
    """Validate parameters (UsageError) and run every check in order."""
    return run_checks(make_params(r, p, depth, data, **flags))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="absorption", description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, help="number of vertices (default: length of --data, else 3)")
    ap.add_argument("--p", type=int, help="prime; default smallest prime >= 101 with p = 1 mod r")
    ap.add_argument("--depth", type=int, help="degree bound D (default 2r + 4)")
    ap.add_argument("--data", type=str, help="ramification data n1,n2,... (default 1,...,1)")
    ap.add_argument("--trunc", type=int, default=2, help="truncation order N (default 2)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--serre-pairs", type=int, default=100)
    ap.add_argument("--out", type=str, help="write the JSON report to this file")
    ap.add_argument("--format", choices=("json", "text"), default="text")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        data = [int(x) for x in ns.data.split(",")] if ns.data else None
        params = make_params(ns.r, ns.p, ns.depth, data, ns.trunc, ns.seed, ns.serre_pairs)
    except ValueError as exc:
        ap.error(str(exc))
    report = run_checks(params)
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(report.to_json())
    print(report.to_json() if ns.format == "json" else report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
