import numpy as np
import pytest

from matrix_anderson import (InvalidArgumentError, InvalidDimensionError, ModelConfig,
                             ResourceLimitError, bracket, build_x, lie_span_dimension,
                             sp_dimension, symplectic_form, verify_sp_generation)
from matrix_anderson.lie import algebra_residual
from matrix_anderson.model import binary_patterns


def e_ij(i, j, d=2):
    m = np.zeros((d, d))
    m[i, j] = 1.0
    return m


def test_symplectic_form():
    np.testing.assert_array_equal(symplectic_form(1), [[0, 1], [-1, 0]])
    for n in (1, 2, 4):
        j = symplectic_form(n)
        np.testing.assert_array_equal(j @ j, -np.eye(2 * n))
        np.testing.assert_array_equal(j.T, -j)
    with pytest.raises(InvalidDimensionError):
        symplectic_form(0)


def test_bracket_basics(rng):
    a = rng.normal(size=(3, 3))
    assert np.all(bracket(a, a) == 0)
    np.testing.assert_array_equal(bracket(e_ij(0, 1), e_ij(1, 0)), np.diag([1.0, -1.0]))
    with pytest.raises(InvalidArgumentError):
        bracket(np.eye(2), np.eye(3))


def test_jacobi_identity(rng):
    for _ in range(20):
        a, b, c = rng.normal(size=(3, 4, 4))
        jac = (bracket(a, bracket(b, c)) + bracket(b, bracket(c, a))
               + bracket(c, bracket(a, b)))
        assert np.linalg.norm(jac) <= 1e-12


def test_sl2_from_raising_and_lowering():
    rank, span = lie_span_dimension([e_ij(0, 1), e_ij(1, 0)])
    assert rank == 3
    np.testing.assert_allclose(span.gram(), np.eye(3), atol=1e-10)


def test_identity_spans_center():
    assert lie_span_dimension([np.eye(4)])[0] == 1


def test_rejects_bad_generators():
    with pytest.raises(InvalidArgumentError):
        lie_span_dimension([])
    with pytest.raises(InvalidArgumentError):
        lie_span_dimension([np.eye(2), np.eye(3)])
    with pytest.raises(InvalidArgumentError):
        lie_span_dimension([np.ones((2, 3))])


def test_full_gl_from_generic_pair(rng):
    # two generic matrices generate gl(3) (dimension 9)
    a, b = rng.normal(size=(2, 3, 3))
    assert lie_span_dimension([a, b])[0] == 9


@pytest.mark.parametrize("n, expected", [(1, 3), (2, 10), (3, 21), (4, 36)])
def test_sp_dimension_table(n, expected):
    assert sp_dimension(n) == expected


def generators(cfg, e, scale=True):
    return [(cfg.ell if scale else 1.0) * np.asarray(build_x(cfg, w, e))
            for w in binary_patterns(cfg.n)]


def test_two_channels_generic_energy():
    cfg = ModelConfig(2, 0.5, (1.0, 1.0))
    rank, span = lie_span_dimension(generators(cfg, 0.37))
    assert rank == 10
    assert max(algebra_residual(b) for b in span.basis) <= 1e-10


@pytest.mark.parametrize("n, c, ell, e, rank", [
    (1, (1.0,), 0.5, 0.3, 3),
    (2, (1.0, 1.0), 0.5, 0.0, 10),
    (3, (1.0, 2.0, 3.0), 0.1, 1.0, 21),
])
def test_verify_sp_generation_examples(n, c, ell, e, rank):
    rep = verify_sp_generation(ModelConfig(n, ell, c), e)
    assert rep.generated and rep.rank == rank == rep.expected_rank
    assert rep.max_membership_residual <= 1e-12


def test_scale_invariance(rng):
    cfg = ModelConfig(2, 0.37, (1.0, -2.0))
    for e in rng.uniform(-3, 3, size=4):
        assert (lie_span_dimension(generators(cfg, e))[0]
                == lie_span_dimension(generators(cfg, e, scale=False))[0])


def test_order_independence(rng):
    cfg = ModelConfig(3, 0.2, (1.0, 2.0, 3.0))
    gens = generators(cfg, 0.4)
    ranks = {lie_span_dimension([gens[i] for i in rng.permutation(len(gens))])[0]
             for _ in range(5)}
    assert ranks == {21}


def test_rank_bounded_by_algebra_dimension(rng):
    # random elements of sp(2): brackets never leave the algebra
    j = symplectic_form(2)
    gens = []
    for _ in range(5):
        s = rng.normal(size=(4, 4))
        gens.append(j @ (s + s.T))  # J S with S symmetric lies in sp
    rank, _ = lie_span_dimension(gens)
    assert rank == 10


def test_single_pattern_generators_do_not_generate():
    # dropping to one pattern gives a one-dimensional algebra
    cfg = ModelConfig(2, 0.5, (1.0, 1.0))
    rank, _ = lie_span_dimension([cfg.ell * np.asarray(build_x(cfg, [0.0, 0.0], 0.2))])
    assert rank == 1


def test_resource_limit():
    cfg = ModelConfig(21, 0.01, tuple(float(i + 1) for i in range(21)))
    with pytest.raises(ResourceLimitError):
        verify_sp_generation(cfg, 0.0)
