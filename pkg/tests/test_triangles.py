import numpy as np
import pytest

from chbend.hermitian import INFINITY, BoundaryPoint, boundary_gap
from chbend.isometries import (
    compose_all,
    elementary_E,
    elementary_sigma,
    identity_isometry,
    loxodromic_D,
    projective_equal,
    projective_residual,
    translation_T,
)
from chbend.triangles import (
    STANDARD_TRIANGLE,
    DegeneratePair,
    DegenerateZ,
    IdealTriangle,
    NotAdjacent,
    NotReal,
    cartan,
    extend_by_z,
    extended_pair,
    pair_symmetry,
    triangle_to_standard,
    z_invariant,
)

T0 = IdealTriangle(*STANDARD_TRIANGLE)


def random_holomorphic(rng, n=4):
    """Short bounded word, so mapped configurations stay well conditioned."""
    gens = []
    for _ in range(n):
        k = rng.integers(0, 3)
        if k == 0:
            gens.append(elementary_E())
        elif k == 1:
            gens.append(
                translation_T(0.7 * (rng.normal() + 1j * rng.normal()), rng.normal())
            )
        else:
            lam = rng.uniform(1.1, 1.8) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            if rng.integers(2):
                lam = 1.0 / lam
            gens.append(loxodromic_D(lam))
    return compose_all(gens)


def map_triangle(g, t):
    return IdealTriangle(*(g.apply(p) for p in t.vertices))


def random_real_pair(rng):
    """A random holomorphic image of the reference pair with a random
    admissible invariant; returns (t1, t2, z)."""
    z = rng.normal() + 1j * rng.normal()
    while abs(z) < 0.1 or abs(z + 1) < 0.1:
        z = rng.normal() + 1j * rng.normal()
    g = random_holomorphic(rng)
    t1 = map_triangle(g, T0)
    t2 = map_triangle(g, extended_pair(T0, z))
    return t1, t2, z


def test_cartan_examples():
    assert abs(cartan(T0)) < 1e-12
    t = IdealTriangle(INFINITY, BoundaryPoint(0, 0), BoundaryPoint(0, 1))
    assert abs(cartan(t) - np.pi / 2) < 1e-12


def test_cartan_range_and_holomorphic_invariance():
    rng = np.random.default_rng(20)
    for _ in range(50):
        t = IdealTriangle(
            BoundaryPoint(rng.normal() + 1j * rng.normal(), rng.normal()),
            BoundaryPoint(rng.normal() + 1j * rng.normal(), rng.normal()),
            BoundaryPoint(rng.normal() + 1j * rng.normal(), rng.normal()),
        )
        a = cartan(t)
        assert abs(a) <= np.pi / 2 + 1e-12
        g = random_holomorphic(rng)
        assert abs(cartan(map_triangle(g, t)) - a) < 1e-8


def test_cartan_antiholomorphic_flips_sign():
    rng = np.random.default_rng(21)
    for _ in range(20):
        t = IdealTriangle(
            BoundaryPoint(rng.normal() + 1j * rng.normal(), rng.normal()),
            BoundaryPoint(rng.normal() + 1j * rng.normal(), rng.normal()),
            BoundaryPoint(rng.normal() + 1j * rng.normal(), rng.normal()),
        )
        s = elementary_sigma(rng.normal() + 1j * rng.normal() + 2.0)
        assert abs(cartan(map_triangle(s, t)) + cartan(t)) < 1e-8


def test_real_triangle_triple_product_negative_real():
    rng = np.random.default_rng(22)
    for _ in range(20):
        g = random_holomorphic(rng)
        t = map_triangle(g, T0)
        assert abs(cartan(t)) < 1e-9


def test_z_invariant_reference_pair():
    z = 2 * np.exp(1j * np.pi / 4)
    tz = IdealTriangle(INFINITY, BoundaryPoint(0, 0), BoundaryPoint(z, 0)).rotated(1)
    assert abs(z_invariant(T0, tz) - z) < 1e-12


def test_z_invariant_swap_conjugates():
    rng = np.random.default_rng(23)
    for _ in range(30):
        t1, t2, z = random_real_pair(rng)
        z12 = z_invariant(t1, t2)
        z21 = z_invariant(t2, t1)
        assert abs(z12 - np.conj(z21)) < 1e-8
        assert abs(z12 - z) < 1e-7


def test_z_invariant_holomorphic_invariance_and_sigma_conjugation():
    rng = np.random.default_rng(24)
    for _ in range(20):
        t1, t2, z = random_real_pair(rng)
        g = random_holomorphic(rng)
        assert abs(z_invariant(map_triangle(g, t1), map_triangle(g, t2)) - z) < 1e-7
        s = elementary_sigma(1.5 * np.exp(0.3j))
        assert abs(z_invariant(map_triangle(s, t1), map_triangle(s, t2)) - np.conj(z)) < 1e-7


def test_z_invariant_rejects_non_adjacent():
    far = IdealTriangle(BoundaryPoint(5, 0), BoundaryPoint(6, 0), BoundaryPoint(7, 0))
    with pytest.raises(NotAdjacent):
        z_invariant(T0, far)


def test_z_invariant_rejects_non_real():
    bent = IdealTriangle(BoundaryPoint(0, 0), BoundaryPoint(1, 1), INFINITY)
    with pytest.raises(NotReal):
        z_invariant(bent, T0)


def test_z_invariant_degenerate():
    t2 = IdealTriangle(T0.p3, BoundaryPoint(-1, 0), T0.p1)  # same vertex set
    with pytest.raises(DegeneratePair):
        z_invariant(T0, t2)


def test_extend_by_z_reference():
    rng = np.random.default_rng(25)
    for _ in range(10):
        z = rng.normal() + 1j * rng.normal()
        if abs(z) < 0.1 or abs(z + 1) < 0.1:
            continue
        d = extend_by_z(T0, z)
        assert boundary_gap(d, BoundaryPoint(z, 0)) < 1e-9


def test_extend_by_real_z_stays_in_real_plane():
    d = extend_by_z(T0, 3.0)
    assert abs(d.z.imag) < 1e-12 and abs(d.t) < 1e-12 and d.z.real > 0


def test_extend_round_trip():
    rng = np.random.default_rng(26)
    for _ in range(50):
        t1, _, _ = random_real_pair(rng)
        z = rng.normal() + 1j * rng.normal()
        if abs(z) < 0.1 or abs(z + 1) < 0.1:
            continue
        t2 = extended_pair(t1, z)
        assert abs(z_invariant(t1, t2) - z) < 1e-8


def test_extend_degenerate_z():
    with pytest.raises(DegenerateZ):
        extend_by_z(T0, 0.0)
    with pytest.raises(DegenerateZ):
        extend_by_z(T0, -1.0)


def test_triangle_to_standard_identity():
    assert projective_equal(triangle_to_standard(T0), identity_isometry())


def test_triangle_to_standard_E_image():
    E = elementary_E()
    tE = map_triangle(E, T0)
    g = triangle_to_standard(tE)
    assert projective_equal(g, E.inverse())


def test_triangle_to_standard_random():
    rng = np.random.default_rng(27)
    for _ in range(30):
        h = random_holomorphic(rng)
        t = map_triangle(h, T0)
        g = triangle_to_standard(t)
        for p, target in zip(t.vertices, STANDARD_TRIANGLE):
            assert boundary_gap(g.apply(p), target) < 1e-9
        assert projective_residual(g, h.inverse()) < 1e-7


def test_triangle_to_standard_rejects_bent():
    bent = IdealTriangle(BoundaryPoint(0, 0), BoundaryPoint(1, 1), INFINITY)
    with pytest.raises(NotReal):
        triangle_to_standard(bent)


def test_pair_symmetry_standard_is_sigma():
    rng = np.random.default_rng(28)
    for _ in range(10):
        z = rng.normal() + 1j * rng.normal()
        if abs(z) < 0.1 or abs(z + 1) < 0.1:
            continue
        t2 = extended_pair(T0, z)
        s = pair_symmetry(T0, t2)
        assert s.antiholomorphic
        assert projective_residual(s, elementary_sigma(z)) < 1e-9


def test_pair_symmetry_swaps_and_involutes():
    rng = np.random.default_rng(29)
    for _ in range(20):
        t1, t2, _ = random_real_pair(rng)
        s = pair_symmetry(t1, t2)
        assert boundary_gap(s.apply(t1.p1), t1.p3) < 1e-7
        assert boundary_gap(s.apply(t1.p2), t2.p2) < 1e-7
        assert projective_equal(compose_all([s, s]), identity_isometry())
