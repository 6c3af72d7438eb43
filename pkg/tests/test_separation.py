import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rnmod import (AtomicSpace, Ball, ConvexBody, Hull, NoSeparationError, PreconditionError,
                   RNElement, gauge, hereditary_disjoint_stratification, norm, separate)
from rnmod.separation import contains, support_function
from rnmod._polytope import chebyshev_center, distance_to_hull, hull_hull_closest, min_norm_point
from rnmod.sampling import random_absorbent_body, random_body_pair, random_element, random_space

S1 = AtomicSpace(["a1"], [1.0])
S2 = AtomicSpace.uniform(2)
UNIT = Ball(np.zeros(2), 1.0)
SQUARE = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], float)


def example_pair():
    G = ConvexBody(S2, [UNIT, UNIT])
    M = ConvexBody(S2, [Hull(np.array([[3.0, 0]])), Hull(np.array([[0.5, 0]]))], interior=False)
    return G, M


def test_disjointness_set_examples():
    G, M = example_pair()
    assert hereditary_disjoint_stratification(G, M) == {"a1"}
    assert not hereditary_disjoint_stratification(G, G)
    far = ConvexBody(S2, [Ball(np.array([5.0, 0]), 1)] * 2)
    assert hereditary_disjoint_stratification(G, far) == S2.everything()


def test_gauge_examples():
    B = ConvexBody(S2, [UNIT, UNIT])
    x = RNElement(S2, [[3, 4], [0.3, 0.4]])
    np.testing.assert_allclose(gauge(B, x).values, [5, 0.5], rtol=1e-15)
    B2 = ConvexBody.ball(S1, np.zeros(2), 2.0)
    np.testing.assert_allclose(gauge(B2, RNElement(S1, [[3, 4]])).values, [2.5], rtol=1e-15)
    sq = ConvexBody.hull(S1, SQUARE)
    x = RNElement(S1, [[2, 1]])
    np.testing.assert_allclose(gauge(sq, x).values, [2], rtol=1e-14)
    np.testing.assert_allclose(gauge(sq, x, method="bisection").values, [2], atol=1e-9)


def test_gauge_needs_absorbent_body():
    off = ConvexBody.ball(S1, np.array([2.0, 0]), 1.0)
    with pytest.raises(PreconditionError):
        gauge(off, RNElement(S1, [[1, 0]]))
    edge = ConvexBody.hull(S1, SQUARE + [1, 0])
    with pytest.raises(PreconditionError):
        gauge(edge, RNElement(S1, [[1, 0]]))


def test_separate_single_atom():
    G = ConvexBody(S1, [UNIT])
    M = ConvexBody(S1, [Hull(np.array([[3.0, 0]]))], interior=False)
    f, H = separate(G, M)
    assert H == {"a1"}
    np.testing.assert_allclose(f.riesz.coords, [[1, 0]], atol=1e-12)
    np.testing.assert_allclose(support_function(G, f.riesz).values, [1], atol=1e-12)
    np.testing.assert_allclose(-support_function(M, -f.riesz).values, [3], atol=1e-12)


def test_separate_is_localized_to_disjoint_atoms():
    f, H = separate(*example_pair())
    assert H == {"a1"}
    assert not np.any(f.riesz.coords[1])
    np.testing.assert_allclose(f.riesz.coords[0], [1, 0], atol=1e-12)


def test_separate_complex_line():
    C = AtomicSpace(["a1"], [1.0], "complex")
    G = ConvexBody(C, [Ball(np.zeros(1, complex), 1.0)])
    M = ConvexBody(C, [Hull(np.array([[3.0 + 0j]]))], interior=False)
    f, H = separate(G, M)
    np.testing.assert_allclose(f.riesz.coords, [[1 + 0j]], atol=1e-12)
    # Re f on the unit disc peaks at 1, below Re f(3) = 3
    assert support_function(G, f.riesz).values[0] == pytest.approx(1)
    assert f(RNElement(C, [[3.0]])).values[0].real == pytest.approx(3)


def test_separate_preconditions():
    G, M = example_pair()
    with pytest.raises(NoSeparationError):
        separate(G, G)
    flat = ConvexBody(S2, [Hull(np.array([[0.0, 0], [1, 0]]))] * 2)
    with pytest.raises(PreconditionError):
        separate(flat, M)
    with pytest.raises(PreconditionError):
        separate(ConvexBody(S2, [UNIT, UNIT], interior=False), M)


def test_min_norm_point_against_projection():
    rng = np.random.default_rng(0)
    for _ in range(50):
        P = rng.standard_normal((int(rng.integers(1, 12)), int(rng.integers(1, 5)))) + 2
        x, w = min_norm_point(P)
        np.testing.assert_allclose(w @ P, x, atol=1e-12)
        # optimality: no point of the hull is further along -x than x itself
        assert np.min(P @ x) >= x @ x - 1e-10


def test_hull_helpers():
    d, q = distance_to_hull(np.array([3.0, 0]), SQUARE)
    assert d == pytest.approx(2) and np.allclose(q, [1, 0])
    p, q = hull_hull_closest(SQUARE, SQUARE + [5, 0.5])
    assert np.linalg.norm(q - p) == pytest.approx(3)
    c, r = chebyshev_center(SQUARE)
    assert r == pytest.approx(1) and np.allclose(c, 0, atol=1e-9)


def _sample_points(piece, rng, k=20):
    if isinstance(piece, Ball):
        v = rng.standard_normal((k, piece.center.shape[0]))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return piece.center + piece.radius * v * rng.uniform(0, 1, (k, 1))
    w = rng.dirichlet(np.ones(len(piece.points)), size=k)
    return w @ piece.points


@given(st.integers(0, 2**32 - 1))
def test_random_pairs_separate(seed):
    rng = np.random.default_rng(seed)
    space = random_space(rng, int(rng.integers(1, 5)), rng.choice(["real", "complex"]))
    G, M, mask = random_body_pair(rng, space, int(rng.integers(1, 4)))
    f, H = separate(G, M, jobs=int(rng.integers(1, 3)))
    assert np.array_equal(H.mask, mask)
    assert not np.any(f.riesz.coords[~mask])
    u = f.riesz.coords
    for a in np.flatnonzero(mask):
        ur = np.concatenate([u[a].real, u[a].imag]) if space.is_complex else u[a]
        g_vals = _sample_points(G.real_piece(a), rng) @ ur
        m_vals = _sample_points(M.real_piece(a), rng) @ ur
        assert g_vals.max() < m_vals.min()


@given(st.integers(0, 2**32 - 1))
def test_gauge_properties(seed):
    rng = np.random.default_rng(seed)
    space = random_space(rng, int(rng.integers(1, 4)), rng.choice(["real", "complex"]))
    d = int(rng.integers(1, 4))
    B = random_absorbent_body(rng, space, d)
    x, y = random_element(rng, space, d), random_element(rng, space, d)
    t = float(rng.uniform(0.1, 10))
    px, py = gauge(B, x).values, gauge(B, y).values
    np.testing.assert_allclose(gauge(B, t * x).values, t * px, rtol=1e-9, atol=1e-12)
    assert np.all(gauge(B, x + y).values <= px + py + 1e-9 * (1 + px + py))
    # the two routes agree; bisection resolves ray membership to about 1e-8 relative
    np.testing.assert_allclose(gauge(B, x, method="bisection").values, px, rtol=1e-6, atol=1e-9)
    # x / p(x) sits on the boundary
    inv = space.scalar(1 / px)
    assert np.all(contains(B, inv * x, tol=1e-8))
    assert not np.any(contains(B, space.scalar(1.01 / px) * x, tol=0))


@given(st.integers(0, 2**32 - 1))
def test_unit_ball_gauge_is_the_norm(seed):
    rng = np.random.default_rng(seed)
    space = random_space(rng, int(rng.integers(1, 6)), rng.choice(["real", "complex"]))
    d = int(rng.integers(1, 5))
    B = ConvexBody.ball(space, np.zeros(d, dtype=space.dtype), 1.0)
    x = random_element(rng, space, d)
    np.testing.assert_allclose(gauge(B, x).values, norm(x).values, rtol=1e-10)
