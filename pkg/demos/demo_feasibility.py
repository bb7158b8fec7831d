"""Feasibility walk-through.

Solves one nonempty and one empty instance, printing what comes back in
each case.  Run from the repo root:

    python3 demos/demo_feasibility.py
"""

import numpy as np

from cutplane import core
from cutplane.oracles import box_oracle, halfspace_set_oracle

n = 6

print("== instance 1: small box, strictly feasible ==")
center = np.array([0.31, -0.12, 0.05, 0.4, -0.27, 0.09])
oracle = box_oracle(center, 0.05)
trace = []
out = core.run_feasibility(oracle, n, core.CpmParams.practical(n), trace=trace)
assert isinstance(out, core.Found)
print("verdict: found after %d oracle calls" % out.oracle_calls)
print("point:  ", np.round(out.x, 4))
print("inside? ", np.all(np.abs(out.x - center) <= 0.05))
print("trace rows: %d (first: %r)" % (len(trace), trace[0]))

print()
print("== instance 2: two antiparallel halfspaces with a gap, empty ==")
a = np.zeros(n)
a[0] = 1.0
# x_1 <= -0.1 and x_1 >= 0.1 cannot both hold
oracle = halfspace_set_oracle([(a, -0.1), (-a, -0.1)])
out = core.run_feasibility(oracle, n, core.CpmParams.practical(n))
assert isinstance(out, core.ThinCertificate)
print("verdict: thin-width certificate after %d oracle calls" % out.oracle_calls)
print("pivot row %d, %d combination weights, all nonnegative: %s"
      % (out.pivot, len(out.t), bool(np.all(out.t >= 0))))
print("residual ||a_p + sum t_j a_j|| = %.3g" % out.residual_norm)
print("combined slack sum t_j s_j    = %.3g" % out.slack_combination)

print()
print("== cross-check against the ellipsoid method ==")
ell = core.ellipsoid_baseline(halfspace_set_oracle([(a, -0.1), (-a, -0.1)]),
                              n, R=1.0, eps=1e-4)
print("ellipsoid verdict:", type(ell).__name__,
      "(%d calls)" % ell.oracle_calls)
