import numpy as np
import pytest

from galerkin_time import polybasis
from galerkin_time.errors import ConfigError
from galerkin_time.mesh import TimeMesh, geometric, uniform


def test_uniform_single_element():
    np.testing.assert_array_equal(uniform(1, 1.0).nodes, [0.0, 1.0])


def test_uniform_four_elements():
    np.testing.assert_allclose(uniform(4, 2.0).nodes, [0.0, 0.5, 1.0, 1.5, 2.0])


def test_uniform_lengths():
    np.testing.assert_allclose(uniform(2, 1.0).lengths, [0.5, 0.5])


@pytest.mark.parametrize("bad", [(0, 1.0), (-2, 1.0), (3, 0.0), (3, -1.0)])
def test_uniform_invalid(bad):
    with pytest.raises(ConfigError):
        uniform(*bad)


def test_geometric_mesh():
    m = geometric(4, 1.0, 2.0)
    ratios = m.lengths[1:] / m.lengths[:-1]
    np.testing.assert_allclose(ratios, 2.0)
    assert m.nodes[0] == 0.0
    assert m.nodes[-1] == 1.0


def test_nodes_must_increase():
    with pytest.raises(ConfigError):
        TimeMesh(nodes=np.array([0.0, 0.5, 0.5, 1.0]))
    with pytest.raises(ConfigError):
        TimeMesh(nodes=np.array([0.1, 0.5, 1.0]))


def test_reference_map_endpoints_and_midpoint():
    m = uniform(4, 2.0)
    for n in range(4):
        lo, hi = m.bounds(n)
        assert m.to_reference(n, lo) == -1.0
        assert m.to_reference(n, hi) == 1.0
        assert m.to_reference(n, 0.5 * (lo + hi)) == 0.0
        assert m.from_reference(n, -1.0) == lo
        assert m.from_reference(n, 1.0) == hi


def test_reference_map_example():
    # element (1, 1.5): midpoint 1.25 maps to 0
    m = TimeMesh(nodes=np.array([0.0, 1.0, 1.5]))
    assert m.to_reference(1, 1.25) == 0.0


def test_round_trip_property():
    rng = np.random.default_rng(12)
    m = geometric(7, 3.0, 1.4)
    for _ in range(50):
        n = int(rng.integers(0, 7))
        lo, hi = m.bounds(n)
        t = rng.uniform(lo, hi)
        back = m.from_reference(n, m.to_reference(n, t))
        assert abs(back - t) <= 1e-15 * m.T


def test_membership_slack_and_rejection():
    m = uniform(2, 1.0)
    m.to_reference(0, 0.5 + 1e-13)  # inside the slack
    with pytest.raises(ConfigError):
        m.to_reference(0, 0.6)
    with pytest.raises(ConfigError):
        m.from_reference(0, 1.5)


def test_locate_one_sided():
    m = uniform(4, 2.0)
    assert m.locate(0.5, side="left") == 0
    assert m.locate(0.5, side="right") == 1
    assert m.locate(0.0, side="right") == 0
    assert m.locate(2.0, side="left") == 3
    assert m.locate(0.75, side="left") == 1
    with pytest.raises(ConfigError):
        m.locate(2.5)
    with pytest.raises(ConfigError):
        m.locate(0.5, side="middle")


def test_change_of_variables_integration():
    # integral of p over an element equals (h/2) * reference quadrature
    rng = np.random.default_rng(13)
    m = geometric(5, 2.0, 0.7)
    rule = polybasis.gauss_rule(7)
    mono = rng.standard_normal(6)  # polynomial in t, monomial coefficients
    for n in range(m.N):
        lo, hi = m.bounds(n)
        t_q = np.asarray(m.from_reference(n, rule.nodes))
        approx = 0.5 * m.h(n) * rule.integrate(np.polynomial.polynomial.polyval(t_q, mono))
        anti = np.polynomial.polynomial.polyint(mono)
        exact = np.polynomial.polynomial.polyval(hi, anti) - np.polynomial.polynomial.polyval(lo, anti)
        assert abs(approx - exact) <= 1e-13 * (1 + abs(exact))


def test_chain_rule_scaling():
    # d/dt = (2/h) d/dtau for the affine map
    m = geometric(3, 1.5, 1.3)
    coeffs = np.array([0.3, -1.2, 0.8])  # Legendre coefficients in tau
    dcoeffs = polybasis.derivative(coeffs)
    for n in range(m.N):
        h = m.h(n)
        taus = np.linspace(-1, 1, 9)
        t = np.asarray(m.from_reference(n, taus))
        dt = 1e-7 * h
        tc = np.clip(t, m.bounds(n)[0] + dt, m.bounds(n)[1] - dt)
        tauc = m.to_reference(n, tc)
        fd = (
            polybasis.eval_poly(coeffs, m.to_reference(n, tc + dt))
            - polybasis.eval_poly(coeffs, m.to_reference(n, tc - dt))
        ) / (2 * dt)
        np.testing.assert_allclose(
            fd, (2.0 / h) * polybasis.eval_poly(dcoeffs, tauc), rtol=1e-6, atol=1e-6
        )
