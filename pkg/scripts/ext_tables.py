"""Print Ext dimension tables between simples of Lambda_r and between pushed-forward simples.

    python3 scripts/ext_tables.py --r 4
"""
import argparse

from absorption.cli import smallest_prime_for
from absorption.homalg import ext_dim, minimal_projective_resolution
from absorption.orderlocal import pushforward_ext_table, standard_hereditary_order
from absorption.quiveralg import build_cyclic_nakayama
from absorption.repmod import simple


def grid(rows, cols, value):
    head = "      " + " ".join(f"{c:>3}" for c in cols)
    lines = [head] + [f"{r:>5} " + " ".join(f"{value(r, c):>3}" for c in cols) for r in rows]
    return "\n".join(lines)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--p", type=int)
    ap.add_argument("--depth", type=int)
    args = ap.parse_args()
    r = args.r
    p = args.p or smallest_prime_for(r)
    D = args.depth if args.depth is not None else 2 * r + 4
    A = build_cyclic_nakayama(r, p)
    vs = range(1, r + 1)

    for i in vs:
        res = minimal_projective_resolution(simple(A, i), D)
        print(f"resolution of S_{i}: " + " <- ".join("P" + "+".join(map(str, s)) for s in res.summands())
              + f"   kernel dims {res.kernel_dims}")
    print()
    for n in range(min(D, 3) + 1):
        print(f"dim Ext^{n}(S_j, S_k), rows j, columns k")
        print(grid(vs, vs, lambda j, k: ext_dim(simple(A, j), simple(A, k), n)))
        print()

    table = pushforward_ext_table(standard_hereditary_order((1,) * r, p), 2, 3)
    for n in (0, 1, 2):
        print(f"dim Ext^{n}_Gamma(i_*S_k, i_*S_j), rows j, columns k")
        print(grid(vs, vs, lambda j, k: table.ext[(j, k, n)]))
        print()
    print("checks:", table.summary())


if __name__ == "__main__":
    main()
