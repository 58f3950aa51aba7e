import math

import pytest

import qmcround as q


def test_constants():
    assert q.alpha_gw() == pytest.approx(0.8785672, abs=1e-6)
    assert q.ratio_constant() == pytest.approx(0.5625401, abs=1e-6)
    assert q.ratio_constant(0.0) == pytest.approx(q.alpha_gw() / 2, abs=1e-9)


def test_certify_passes():
    cert = q.certify()
    assert cert["passed"]


def test_graphs():
    g = q.Graph.generate("cycle:n=5")
    assert g.n == 5 and len(g.edges) == 5
    assert q.Graph.parse("3\n0 1\n1 2 2.5\n").edges == [(0, 1, 1.0), (1, 2, 2.5)]
    with pytest.raises(q.InputError):
        q.Graph.parse("2\n0 0 1\n")


def test_exact_and_sdp():
    k3 = q.Graph.generate("complete:n=3")
    assert q.exact_opt(k3) == pytest.approx(1.5, abs=1e-9)
    sol = q.solve(q.Graph(2, [(0, 1, 1.0)]))
    assert sol["objective"] == pytest.approx(1.0, abs=1e-5)
    assert sol["residuals"]["converged"]


def test_solver_failure():
    with pytest.raises(q.SolverFailure):
        q.solve(q.Graph.generate("cycle:n=5"), max_iterations=2)


def test_run_k2():
    report = q.run(q.Graph(2, [(0, 1, 1.0)]), rounds=200, seed=1, deterministic=True)
    expected = (2 + 2 * math.sin(2 * math.acos(math.exp(-0.041)) / 2)) / 4
    assert report["mean_energy"] == pytest.approx(expected, abs=1e-9)
    assert report["opt"] == pytest.approx(1.0)
    assert "timing" not in report


def test_run_is_reproducible():
    g = q.Graph.generate("star:d=3")
    a = q.run(g, rounds=100, seed=5, deterministic=True)
    b = q.run(g, rounds=100, seed=5, deterministic=True)
    assert a == b
    with pytest.raises(q.InputError):
        q.run(g, rounds=10, deterministic=True)
