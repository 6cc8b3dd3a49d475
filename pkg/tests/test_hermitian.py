import numpy as np
import pytest

from chbend.hermitian import (
    INFINITY,
    J,
    BoundaryPoint,
    DegenerateProjection,
    HoroPoint,
    PositiveVector,
    distance,
    herm,
    lift,
    project_point,
    project_to_standard_real_plane,
)

SQRT2 = np.sqrt(2.0)


def rand_vector(rng):
    return rng.normal(size=3) + 1j * rng.normal(size=3)


def test_form_signature():
    ev = np.linalg.eigvalsh(J)
    assert np.allclose(sorted(ev), [-1.0, 1.0, 1.0], atol=1e-12)


def test_herm_examples():
    e1 = np.array([1, 0, 0], dtype=complex)
    e2 = np.array([0, 1, 0], dtype=complex)
    assert herm(e1, e1) == 0
    assert herm(e2, e2) == 1
    v = np.array([-1, -SQRT2, 1], dtype=complex)
    assert abs(herm(v, v)) < 1e-12


def test_herm_sesquilinear():
    rng = np.random.default_rng(1)
    for _ in range(100):
        x, y = rand_vector(rng), rand_vector(rng)
        assert abs(herm(y, x) - np.conj(herm(x, y))) < 1e-12


def test_lift_examples():
    assert np.allclose(lift(BoundaryPoint(0, 0)), [0, 0, 1])
    assert np.allclose(lift(INFINITY), [1, 0, 0])
    assert np.allclose(lift(BoundaryPoint(-1, 0)), [-1, -SQRT2, 1])


def test_boundary_lifts_are_null():
    rng = np.random.default_rng(2)
    for _ in range(50):
        p = BoundaryPoint(rng.normal() + 1j * rng.normal(), rng.normal())
        assert abs(herm(lift(p), lift(p))) < 1e-12


def test_horo_lift_negative():
    p = HoroPoint(0.3 - 1j, 0.7, 2.0)
    assert herm(lift(p), lift(p)).real < 0


def test_project_point_examples():
    assert project_point(np.array([0, 0, 2], dtype=complex)) == BoundaryPoint(0, 0)
    assert project_point(np.array([1, 0, 0], dtype=complex)).infinite
    v = 2.0 * np.array([-1, -SQRT2, 1], dtype=complex)
    assert project_point(v).isclose(BoundaryPoint(-1, 0))


def test_project_point_roundtrip():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = BoundaryPoint(rng.normal() + 1j * rng.normal(), rng.normal())
        scale = (rng.normal() + 1j * rng.normal()) or 1.0
        q = project_point(scale * lift(p))
        assert q.isclose(p, 1e-9)
    for _ in range(50):
        m = HoroPoint(rng.normal() + 1j * rng.normal(), rng.normal(), rng.uniform(0.1, 4))
        q = project_point(lift(m) * (1.5 - 0.5j))
        assert isinstance(q, HoroPoint)
        assert abs(q.z - m.z) + abs(q.t - m.t) + abs(q.u - m.u) < 1e-9


def test_project_point_positive_rejected():
    with pytest.raises(PositiveVector):
        project_point(np.array([0, 1, 0], dtype=complex))


def test_distance_examples():
    m = HoroPoint(0, 0, 1)
    assert distance(m, m) == 0
    n = HoroPoint(0, 0, 4)
    assert abs(distance(m, n) - np.log(4.0)) < 1e-12


def test_distance_vertical_geodesic_law():
    rng = np.random.default_rng(4)
    for _ in range(50):
        u1, u2 = rng.uniform(0.05, 10, size=2)
        d = distance(HoroPoint(0, 0, u1), HoroPoint(0, 0, u2))
        assert abs(d - abs(np.log(u2 / u1))) < 1e-9


def test_distance_symmetry():
    rng = np.random.default_rng(5)
    for _ in range(100):
        m = HoroPoint(rng.normal() + 1j * rng.normal(), rng.normal(), rng.uniform(0.1, 5))
        n = HoroPoint(rng.normal() + 1j * rng.normal(), rng.normal(), rng.uniform(0.1, 5))
        assert abs(distance(m, n) - distance(n, m)) < 1e-12
        assert distance(m, n) >= 0


def test_real_plane_projection_fixes_real_vectors():
    v = np.array([-1, 0, 1], dtype=complex)
    w = project_to_standard_real_plane(v)
    assert np.linalg.norm(np.cross(w, v)) < 1e-12  # parallel


def test_real_plane_projection_example():
    v = np.array([-1, 1j * SQRT2, 1], dtype=complex)
    w = project_to_standard_real_plane(v)
    # expected output v + conj(v) = (-2, 0, 2)
    assert np.allclose(w, [-2, 0, 2], atol=1e-12)
    assert project_point(w) == HoroPoint(0, 0, 1)


def test_real_plane_projection_idempotent():
    rng = np.random.default_rng(6)
    done = 0
    while done < 100:
        v = rand_vector(rng)
        if herm(v, v).real >= -1e-6:
            continue
        done += 1
        w = project_to_standard_real_plane(v)
        w2 = project_to_standard_real_plane(w)
        # compare projectively
        k = np.argmax(np.abs(w))
        assert np.linalg.norm(w2 / w2[k] - w / w[k]) < 1e-9


def test_real_plane_projection_degenerate():
    # null vectors over the boundary of the plane itself: lift of [1, 0]
    v = np.array([-1, SQRT2, 1], dtype=complex)
    with pytest.raises(DegenerateProjection):
        project_to_standard_real_plane(v)
