import numpy as np

from cutplane.convopt import OptimizeSpec, feasibility_eps, minimize
from cutplane.oracles import FunctionOracle, Halfspace, NearOptimal, subgrad_to_separation


def quadratic_oracle(center, D):
    center = np.asarray(center, float)

    def fn(x):
        g = 2.0 * (x - center)
        val = float((x - center) @ (x - center))
        return val, subgrad_to_separation(x, g, D, delta=0.0)

    return FunctionOracle(fn)


def test_minimizes_quadratic():
    for n in (2, 3, 5):
        center = 0.3 * np.ones(n) / np.sqrt(n)
        fo = quadratic_oracle(center, D=1.0)
        res = minimize(OptimizeSpec(oracle=fo, n=n, R=1.0, alpha=0.01))
        assert res.best_value < 1e-2
        assert np.linalg.norm(res.best_x - center) < 0.15


def test_returns_best_queried_point():
    fo = quadratic_oracle([0.2, -0.1], D=1.0)
    res = minimize(OptimizeSpec(oracle=fo, n=2, R=1.0, alpha=0.05))
    vals = [v for _, v in fo.log]
    assert res.best_value == min(vals)
    # the answer is literally one of the queried points
    hits = [np.array_equal(res.best_x, x) for x, _ in fo.log]
    assert any(hits)


def test_best_value_monotone_in_call_index():
    fo = quadratic_oracle([0.1, 0.25, -0.3], D=1.0)
    res = minimize(OptimizeSpec(oracle=fo, n=3, R=1.0, alpha=0.02))
    best = float("inf")
    running = []
    for _, v in fo.log:
        best = min(best, v)
        running.append(best)
    assert all(a >= b for a, b in zip(running, running[1:]))


def test_near_optimal_response_stops_early():
    calls = []

    def fn(x):
        calls.append(x)
        return float(x @ x), NearOptimal()

    fo = FunctionOracle(fn)
    res = minimize(OptimizeSpec(oracle=fo, n=2, R=1.0, alpha=0.01))
    assert len(calls) == 1
    assert res.termination == "NearOptimalFlag"


def test_feasibility_eps_shrinks_with_alpha_and_n():
    s1 = OptimizeSpec(oracle=None, n=4, R=1.0, alpha=0.1)
    s2 = OptimizeSpec(oracle=None, n=4, R=1.0, alpha=0.01)
    s3 = OptimizeSpec(oracle=None, n=16, R=1.0, alpha=0.1)
    assert feasibility_eps(s2) < feasibility_eps(s1)
    assert feasibility_eps(s3) < feasibility_eps(s1)


def test_oracle_calls_reported():
    fo = quadratic_oracle([0.0, 0.0], D=1.0)
    res = minimize(OptimizeSpec(oracle=fo, n=2, R=1.0, alpha=0.05))
    assert res.oracle_calls == fo.calls
    assert res.oracle_calls > 0
