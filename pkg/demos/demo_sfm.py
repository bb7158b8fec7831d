"""Submodular minimization on a graph cut plus a modular charge.

    python3 demos/demo_sfm.py
"""

import numpy as np

from cutplane import sfm

n = 8
edges = [(0, 1, 3), (1, 2, 2), (2, 3, 4), (3, 4, 1), (4, 5, 2),
         (5, 6, 3), (6, 7, 2), (0, 7, 1), (1, 6, 2), (2, 5, 1)]
charge = [-3, 2, -1, 1, -2, 1, 0, -1]


def raw(S):
    cut = sum(w for u, v, w in edges if (u in S) != (v in S))
    return cut + sum(charge[i] for i in S)


f = sfm.SubmodularFn(n, raw)

print("minimizing cut(S) + charge(S) on %d elements" % n)
S, v = sfm.sfm_weakly(f, seed=0)
print("weak solver:   min value %g at %s  (%d evaluations)"
      % (v, sorted(S), f.eo_calls))

f2 = sfm.SubmodularFn(n, raw)
S2, v2 = sfm.sfm_strongly(f2, seed=0)
print("strong solver: min value %g at %s  (%d evaluations)"
      % (v2, sorted(S2), f2.eo_calls))

best = min(raw(frozenset(T)) - raw(frozenset())
           for bits in range(2 ** n)
           for T in [[i for i in range(n) if bits & (1 << i)]])
print("exhaustive scan agrees:", best == v == v2)

print()
print("the continuous extension at a random interior point:")
rng = np.random.default_rng(1)
x = rng.uniform(0, 1, size=n)
val = sfm.lovasz_eval(f, x)
h, fhat = sfm.separation_hyperplane(f, x)
print("extension value %.4f, supporting linearization gives %.4f"
      % (val, float(h.h @ x)))
print("every vertex it emits satisfies h(S) <= f(S); min over coordinates "
      "lower-bounds the minimum: %.4f <= %g" % (np.minimum(h.h, 0).sum(), v))
