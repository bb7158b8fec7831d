"""Max-weight common independent set of two matroids.

    python3 demos/demo_matroid.py
"""

import itertools

import numpy as np

from cutplane import intersect

# ground set: 8 edges of a small graph, also partitioned into color classes
edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3), (2, 4), (3, 4)]
m_graphic = intersect.GraphicMatroid(edges)
m_colors = intersect.PartitionMatroid(
    [[0, 1], [2, 3], [4, 5], [6, 7]], [1, 1, 1, 2], n=8)
w = np.array([5, 3, 7, 2, 6, 4, 8, 1])

S = intersect.matroid_intersection(m_colors, m_graphic, w, Mbound=8, seed=0)
print("picked edges:", sorted(S), "weight", sum(int(w[i]) for i in S))
print("acyclic:", m_graphic.independent(list(S)),
      " within color caps:", m_colors.independent(list(S)))

best = 0
for r in range(9):
    for T in itertools.combinations(range(8), r):
        T = list(T)
        if m_graphic.independent(T) and m_colors.independent(T):
            best = max(best, sum(int(w[i]) for i in T))
print("exhaustive optimum:", best)

print()
print("isolation: re-weighting makes the optimum unique most of the time")
c = np.ones(8, dtype=int)
unique = 0
for seed in range(50):
    z = intersect.isolation_perturb(c, 8, 1, seed)
    vals = {}
    for r in range(9):
        for T in itertools.combinations(range(8), r):
            T = list(T)
            if m_graphic.independent(T) and m_colors.independent(T):
                vals.setdefault(sum(int(z[i]) for i in T), 0)
                vals[sum(int(z[i]) for i in T)] += 1
    if vals[max(vals)] == 1:
        unique += 1
print("unique optimum in %d / 50 seeds" % unique)
