import numpy as np
import pytest

from conftest import mode_field
from diracbvp import (AssembledOperator, BoundaryCondition, Grid1D, ModelSpec,
                      SpinorField, apply_D, assemble, boundary_residual,
                      dump_matrix)
from diracbvp.errors import ConfigurationError, IncompatibleFieldsError


def hermiticity_defect(mat):
    return np.max(np.abs(mat - mat.conj().T))


# ------------------------------------------------------------- assembly

def test_periodic_spectrum_contains_zero(periodic_sd):
    vals = periodic_sd.eigenvalues
    assert np.max(np.abs(np.imag(vals))) == 0  # eigh returns reals
    assert np.min(np.abs(vals)) < 1e-12
    # spectrum of -i d/dx on a circle of length 2 pi is the integers
    ints = np.round(np.sort(vals))
    assert np.max(np.abs(np.sort(vals) - ints)) < 1e-9


def test_antiperiodic_smallest_eigenvalue(anti_sd):
    assert abs(anti_sd.lambda1) == pytest.approx(np.pi, rel=1e-12)


def test_bag_hermiticity(bag_spec):
    op = assemble(bag_spec)
    scale = np.max(np.abs(op.matrix))
    assert hermiticity_defect(op.matrix) <= 1e-12 * scale


def test_bag_spectrum_near_half_integers():
    spec = ModelSpec(Grid1D(1.0, 512), "dirac_2spinor",
                     BoundaryCondition("bag1d"))
    from diracbvp import decompose
    sd = decompose(assemble(spec))
    assert abs(sd.lambda1) == pytest.approx(np.pi / 2, rel=1e-4)


def test_constraint_map_orthonormal(anti_sd, bag_sd, periodic_sd):
    for sd in (anti_sd, bag_sd, periodic_sd):
        op = sd.operator
        gram = op.constraint_map.conj().T @ (op.weights[:, None]
                                             * op.constraint_map)
        assert np.max(np.abs(gram - np.eye(gram.shape[0]))) < 1e-12


def test_incompatible_specs_rejected():
    gi = Grid1D(1.0, 64)
    gc = Grid1D(1.0, 64, "circle")
    with pytest.raises(ConfigurationError):
        ModelSpec(gi, "scalar_derivative", BoundaryCondition("bag1d"))
    with pytest.raises(ConfigurationError):
        ModelSpec(gc, "scalar_derivative", BoundaryCondition("antiperiodic"))
    with pytest.raises(ConfigurationError):
        ModelSpec(gi, "scalar_derivative", BoundaryCondition("periodic"))
    with pytest.raises(ConfigurationError):
        ModelSpec(gi, "dirac_2spinor", BoundaryCondition("antiperiodic"))


def test_bag_projector_validation():
    with pytest.raises(ConfigurationError):
        BoundaryCondition("bag1d", projector_left=np.eye(2))  # rank 2
    with pytest.raises(ConfigurationError):
        BoundaryCondition("bag1d",
                          projector_left=np.array([[0.5, 0.5j], [0.5j, 0.5]]))


# -------------------------------------------------------------- apply_D

def test_apply_D_constant_is_zero(anti_spec):
    f = SpinorField(anti_spec.grid, np.full(256, 2.0 - 1.0j))
    out = apply_D(anti_spec, f)
    assert np.max(np.abs(out.values)) < 1e-12


def test_apply_D_mode(anti_spec):
    f = mode_field(anti_spec.grid)
    out = apply_D(anti_spec, f)
    assert np.max(np.abs(out.values - np.pi * f.values)) < 1e-6


def test_apply_D_bag_swaps_components(bag_spec):
    x = bag_spec.grid.points()
    vals = np.column_stack([np.exp(1j * np.pi * x), np.zeros_like(x)])
    out = apply_D(bag_spec, SpinorField(bag_spec.grid, vals))
    expected = np.column_stack([np.zeros_like(x),
                                np.pi * np.exp(1j * np.pi * x)])
    # 2nd-order interior stencil; the endpoint rows are one-sided
    assert np.max(np.abs(out.values[1:-1] - expected[1:-1])) < 5e-3


def test_apply_D_rank_mismatch(anti_spec):
    f = SpinorField(anti_spec.grid, np.ones((256, 2)))
    with pytest.raises(IncompatibleFieldsError):
        apply_D(anti_spec, f)


def test_matrix_consistent_with_apply_D(anti_sd, bag_sd):
    # matrix action on a constrained field agrees with the unconstrained
    # operator away from the endpoints
    for sd, skip in ((anti_sd, 1), (bag_sd, 2)):
        op = sd.operator
        rng = np.random.default_rng(3)
        c = rng.standard_normal(op.n_constrained) \
            + 1j * rng.standard_normal(op.n_constrained)
        # smooth the field spectrally so the finite-difference operator
        # is accurate: use a low-eigenvalue band
        a = np.zeros(op.n_constrained, dtype=complex)
        a[:8] = c[:8]
        c = sd.eigenvectors @ a
        f = op.embed(c)
        via_matrix = op.embed(op.matrix @ c)
        direct = apply_D(op.spec, f)
        interior = slice(skip, f.grid.n_points - skip)
        diff = np.max(np.abs(via_matrix.values[interior]
                             - direct.values[interior]))
        tol = 1e-10 if sd is anti_sd else 5e-2
        assert diff < tol * max(1.0, np.max(np.abs(direct.values)))


def test_self_adjointness_pairing(anti_sd, bag_sd, periodic_sd):
    for sd in (anti_sd, bag_sd, periodic_sd):
        op = sd.operator
        rng = np.random.default_rng(11)
        m = op.n_constrained
        psi = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        phi = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        lhs = np.vdot(phi, op.matrix @ psi)
        rhs = np.vdot(op.matrix @ phi, psi)
        assert abs(lhs - rhs) <= 1e-10 * np.linalg.norm(psi) \
            * np.linalg.norm(phi) * np.max(np.abs(op.matrix))


def test_antiperiodic_gap():
    for n in (64, 128):
        spec = ModelSpec(Grid1D(1.0, n), "scalar_derivative",
                         BoundaryCondition("antiperiodic"))
        from diracbvp import decompose
        sd = decompose(assemble(spec))
        assert np.min(np.abs(sd.eigenvalues)) > np.pi / 2


# ---------------------------------------------------- boundary_residual

def test_boundary_residual_examples(anti_spec, anti_sd):
    g = mode_field(anti_spec.grid, scale=0.3)
    assert boundary_residual(anti_spec, g, g) == 0.0
    # adding a discrete kernel element keeps the residual at zero
    kern = anti_sd.operator.embed(np.ones(anti_sd.size))
    assert boundary_residual(anti_spec, g + kern, g) < 1e-12
    one = SpinorField(anti_spec.grid, np.ones(256))
    assert boundary_residual(anti_spec, g + one, g) == pytest.approx(2.0)


def test_boundary_residual_bag(bag_spec, bag_sd):
    grid = bag_spec.grid
    g = SpinorField.zero(grid, 2)
    kern = bag_sd.operator.embed(np.ones(bag_sd.size))
    assert boundary_residual(bag_spec, kern, g) < 1e-12
    bad = SpinorField(grid, np.column_stack([np.ones(grid.n_points),
                                             np.zeros(grid.n_points)]))
    assert boundary_residual(bag_spec, bad, g) > 0.1


# ----------------------------------------------------------- misc I/O

def test_dump_matrix_binary(tmp_path):
    mat = np.array([[1.0, 2.0 - 1.0j], [2.0 + 1.0j, -3.0]])
    op = AssembledOperator.from_matrix(mat)
    path = tmp_path / "op.bin"
    dump_matrix(op, path)
    back = np.fromfile(path, dtype="<c16").reshape(2, 2)
    assert np.array_equal(back, mat)


def test_from_matrix_rejects_non_hermitian():
    with pytest.raises(ConfigurationError):
        AssembledOperator.from_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_bare_matrix_cannot_embed():
    op = AssembledOperator.from_matrix(np.diag([-1.0, 2.0]))
    with pytest.raises(ConfigurationError):
        op.embed(np.ones(2))
