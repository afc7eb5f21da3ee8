import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from grasspd.subspace import (
    Subspace,
    are_orthogonal,
    families_transversal,
    intersect,
    is_transverse,
    matrix_rank,
    null_space,
    ominus,
    orthocomplement,
    orthonormalize,
    project,
    project_subspace,
    sum_,
    sum_all,
)

e = np.eye(4)


def test_zero_space_is_d_by_zero():
    Z = Subspace.zero(5)
    assert Z.basis.shape == (5, 0)
    assert Z.dim == 0 and Z.is_zero()


def test_orthonormalize_drops_dependent_vectors():
    S = orthonormalize([e[0], e[1], e[0] + e[1], 2 * e[0]])
    assert S.dim == 2
    assert np.allclose(S.basis.T @ S.basis, np.eye(2))


def test_orthonormalize_of_only_zero_vectors():
    assert orthonormalize([np.zeros(3), np.zeros(3)]).dim == 0


def test_orthonormalize_rejects_ragged_input():
    with pytest.raises(ValueError, match="dimension mismatch"):
        orthonormalize([np.ones(3), np.ones(4)])


def test_orthonormalize_nearly_parallel_vectors():
    v = np.array([1.0, 0, 0])
    w = v + np.array([0, 1e-12, 0])
    assert orthonormalize([v, w]).dim == 1
    assert orthonormalize([v, v + np.array([0, 1e-4, 0])]).dim == 2


def test_span_example_from_the_minus_operation():
    # span{e1,e2} ⊖ span{e1} = span{e2}
    A = Subspace.span([e[0], e[1]])
    B = Subspace.span([e[0]])
    assert ominus(A, B) == Subspace.span([e[1]])


def test_ominus_with_non_nested_second_argument():
    # A ∩ B^⊥, even though A ∩ B = 0
    A = Subspace.span([e[0], e[1]])
    B = Subspace.span([e[0] + e[2]])
    assert (A & B).dim == 0
    assert ominus(A, B) == Subspace.span([e[1]])


def test_ominus_sign_and_edges():
    A = Subspace.span([e[0], e[1]])
    assert ominus(A, A).dim == 0
    assert ominus(A, Subspace.zero(4)) == A
    assert ominus(Subspace.zero(4), A).dim == 0


def test_sum_and_intersection():
    A = Subspace.span([e[0], e[1]])
    B = Subspace.span([e[1], e[2]])
    assert (A + B).dim == 3
    assert (A & B) == Subspace.span([e[1]])
    assert sum_(A, B) == A + B
    assert intersect(A, B) == A & B


def test_intersection_of_skew_planes_in_r4():
    A = Subspace.span([e[0], e[1]])
    B = Subspace.span([e[2], e[3]])
    assert (A & B).dim == 0


def test_ambient_mismatch_raises():
    with pytest.raises(ValueError):
        Subspace.full(3) + Subspace.full(4)


def test_equality_is_basis_independent():
    A = Subspace.span([e[0] + e[1], e[0] - e[1]])
    B = Subspace.span([e[0], e[1]])
    assert A == B
    assert A != Subspace.span([e[0], e[2]])


def test_equality_tolerance():
    A = Subspace.span([e[0]])
    B = Subspace.span([e[0] + 1e-7 * e[1]])
    assert not A.equals(B, 1e-9)
    assert A.equals(B, 1e-6)


def test_subspaces_are_unhashable():
    with pytest.raises(TypeError):
        hash(Subspace.full(2))


def test_orthocomplement_and_perp():
    A = Subspace.span([e[0], e[1] + e[2]])
    P = orthocomplement(A)
    assert P.dim == 2
    assert are_orthogonal(A, P)
    assert (A + P).dim == 4
    assert A.perp() == P


def test_projection():
    A = Subspace.span([e[0], e[1]])
    assert np.allclose(project(np.array([1.0, 2, 3, 4]), A), [1, 2, 0, 0])
    W = Subspace.span([e[0] + e[2], e[3]])
    assert project_subspace(W, A) == Subspace.span([e[0]])


def test_contains_and_issubspace():
    A = Subspace.span([e[0], e[1]])
    assert A.contains(e[0] + 3 * e[1])
    assert not A.contains(e[2])
    assert Subspace.span([e[0]]).issubspace(A)


def test_transversality():
    assert is_transverse([Subspace.span([e[0]]), Subspace.span([e[1]]), Subspace.span([e[0] + e[1] + e[2]])])
    assert not is_transverse([Subspace.span([e[0]]), Subspace.span([e[1]]), Subspace.span([e[0] + e[1]])])
    assert is_transverse([])
    F = [Subspace.span([e[0]])]
    G = [Subspace.span([e[1]]), Subspace.span([e[2]])]
    assert families_transversal(F, G)
    assert not families_transversal(F, [Subspace.span([e[0] + e[1]]), Subspace.span([e[1]])])


def test_sum_all_with_no_summands():
    assert sum_all([], d=3).dim == 0
    with pytest.raises(ValueError):
        sum_all([])


def test_null_space_and_rank():
    M = np.array([[1.0, 1, 0], [0, 0, 1]])
    N = null_space(M)
    assert N.shape == (3, 1)
    assert np.allclose(M @ N, 0)
    assert matrix_rank(M) == 2
    assert null_space(np.zeros((0, 3))).shape == (3, 3)


def test_json_roundtrip():
    A = Subspace.span([e[0] + e[1], e[3]])
    B = Subspace.from_json(json.loads(json.dumps(A.to_json())))
    assert A == B


def test_canonical_basis_is_deterministic():
    A = Subspace.span([e[0] + e[1]])
    B = Subspace.span([-(e[0] + e[1])])
    assert np.allclose(A.canonical_basis(), B.canonical_basis())


# -- property tests -------------------------------------------------------------

dims = st.integers(1, 6)


@st.composite
def subspaces(draw, d, max_k=None):
    k = draw(st.integers(0, max_k if max_k is not None else d))
    if k == 0:
        return Subspace.zero(d)
    M = draw(arrays(np.float64, (d, k), elements=st.integers(-3, 3).map(float)))
    return Subspace.from_columns(M)


@st.composite
def pairs(draw):
    d = draw(dims)
    return draw(subspaces(d)), draw(subspaces(d))


@settings(max_examples=200, deadline=None)
@given(pairs())
def test_dimension_formula(AB):
    A, B = AB
    assert (A + B).dim + (A & B).dim == A.dim + B.dim


@settings(max_examples=200, deadline=None)
@given(pairs())
def test_ominus_is_inside_first_and_orthogonal_to_second(AB):
    A, B = AB
    C = ominus(A, B)
    assert C.issubspace(A)
    assert are_orthogonal(C, B)


@settings(max_examples=200, deadline=None)
@given(pairs())
def test_ominus_of_nested_pair_completes(AB):
    A, B = AB
    inner = A & B
    assert (ominus(A, inner) + inner) == A
    assert ominus(A, inner).dim == A.dim - inner.dim


@settings(max_examples=100, deadline=None)
@given(pairs())
def test_orthocomplement_is_involutive(AB):
    A, _ = AB
    assert orthocomplement(orthocomplement(A)) == A
