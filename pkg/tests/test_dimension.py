import numpy as np
import pytest

from cxcdyn.dimension import (graph_spectral_radius, perron_vector, solve_exponent,
                              spectral_radius, weight_matrix)
from cxcdyn.graphs import make_graph


def test_weight_matrix_entries(two_loops):
    assert weight_matrix(two_loops, 1.0) == pytest.approx(np.array([[1.0]]))
    assert weight_matrix(two_loops, 0.5) == pytest.approx(np.array([[0.5]]))
    g = make_graph(2, [(1, 2, 4), (2, 1, 4)])
    assert weight_matrix(g, 0.5) == pytest.approx(np.array([[0.0, 1 / 16], [1 / 16, 0.0]]))


def test_radius_closed_forms(two_loops):
    assert graph_spectral_radius(two_loops, 1.0).radius == pytest.approx(1.0, abs=1e-12)
    assert graph_spectral_radius(two_loops, 0.5).radius == pytest.approx(0.5, abs=1e-12)


def test_radius_periodic_matrix_handled():
    # permutation-like two-cycle: the shift by the identity removes period 2
    g = make_graph(2, [(1, 2, 1), (2, 1, 1)])
    result = graph_spectral_radius(g, 1.0)
    assert result.radius == pytest.approx(1.0, abs=1e-12)


def test_radius_agrees_with_dense_eigensolver():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        matrix = rng.random((n, n)) + 0.05  # strictly positive, hence irreducible
        ours = spectral_radius(matrix, tol=1e-12).radius
        reference = max(abs(np.linalg.eigvals(matrix)))
        assert ours == pytest.approx(reference, abs=1e-9)


def test_radius_rejects_reducible():
    g = make_graph(2, [(1, 2, 3)])
    with pytest.raises(ValueError, match="irreducible"):
        graph_spectral_radius(g, 1.0)


def test_solve_conformal(two_loops, two_loops_d4):
    assert solve_exponent(two_loops, "conformal").exponent == pytest.approx(1.0, abs=1e-9)
    assert solve_exponent(two_loops_d4, "conformal").exponent == pytest.approx(0.5, abs=1e-9)


def test_solve_hausdorff(two_loops):
    result = solve_exponent(two_loops, "hausdorff", alpha=0.5)
    assert result.exponent == pytest.approx(0.5, abs=1e-9)


def test_bracket_straddles_radius_one(two_loops):
    result = solve_exponent(two_loops, "conformal")
    lo, hi = result.bracket
    assert hi - lo <= result.tolerance
    assert graph_spectral_radius(two_loops, 1.0 / lo).radius >= 1.0 - 1e-9
    assert graph_spectral_radius(two_loops, 1.0 / hi).radius <= 1.0 + 1e-9


def test_radius_monotone_in_alpha(two_loops):
    g3 = make_graph(2, [(1, 2, 2), (1, 2, 3), (2, 1, 5), (2, 2, 2)])
    for g in (two_loops, g3):
        radii = [graph_spectral_radius(g, a).radius for a in (0.25, 0.5, 1.0, 2.0, 4.0)]
        assert all(r1 < r2 for r1, r2 in zip(radii, radii[1:]))


def test_delta_over_alpha_matches_s(two_loops):
    s = solve_exponent(two_loops, "conformal").exponent
    for alpha in (0.25, 0.5):
        delta = solve_exponent(two_loops, "hausdorff", alpha=alpha).exponent
        assert delta / alpha == pytest.approx(s, abs=2e-10)


def test_solve_rejects_invalid_graphs():
    single = make_graph(1, [(1, 1, 2)])
    with pytest.raises(ValueError, match="witness"):
        solve_exponent(single, "conformal")
    with pytest.raises(ValueError, match="irreducible"):
        solve_exponent(make_graph(2, [(1, 2, 2), (1, 2, 2)]), "conformal")


def test_hausdorff_needs_contracting_alpha(two_loops):
    # radius at alpha=2 is about 1.414, so delta would exceed 1
    with pytest.raises(ValueError, match="delta"):
        solve_exponent(two_loops, "hausdorff", alpha=2.0)


def test_perron_vector_one_vertex(two_loops):
    data = perron_vector(two_loops, 0.5)
    assert data.vector == pytest.approx([1.0])
    assert data.radius == pytest.approx(0.5, abs=1e-12)


def test_perron_vector_contracts_componentwise():
    g = make_graph(2, [(1, 2, 4), (2, 1, 4)])
    data = perron_vector(g, 0.5)
    assert data.vector == pytest.approx([1.0, 1.0])
    contracted = weight_matrix(g, 0.5) @ data.vector
    assert (contracted < data.vector).all()
    assert contracted == pytest.approx([1 / 16, 1 / 16])


def test_perron_vector_refuses_expanding_alpha(two_loops):
    with pytest.raises(ValueError, match="no strictly contracted vector"):
        perron_vector(two_loops, 2.0)
