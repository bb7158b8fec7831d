"""Small SDP solved through the dual with an eigenvector oracle.

    python3 demos/demo_sdp.py
"""

import numpy as np

from cutplane import sdp

rng = np.random.default_rng(4)
m = 4
C = rng.standard_normal((m, m))
C = (C + C.T) / 2
A1 = rng.standard_normal((m, m))
A1 = (A1 + A1.T) / 2
b = np.array([0.3])

prob = sdp.SdpProblem(C=C, A=[A1], b=b)
print("maximize tr(CX) s.t. tr(A1 X) = %.2f, X >= 0, tr X <= %.2f"
      % (b[0], prob.K))

y, val, witnesses, res = sdp.solve_dual(prob, eps_total=1e-2, seed=0)
print("dual optimum  %.5f at y = %s  (%d oracle calls)"
      % (val, np.round(y, 4), res.oracle_calls))

X, g = sdp.recover_primal(prob, witnesses, y_best=y)
feas = abs(b[0] - np.trace(A1 @ X))
print("primal value  %.5f, feasibility residual %.2e" %
      (float(np.trace(C @ X)), feas))
print("gap           %.2e   (weak duality: primal <= dual)"
      % (val - float(np.trace(C @ X))))
print("X eigenvalues", np.round(np.linalg.eigvalsh(X), 5), "(all >= 0)")
