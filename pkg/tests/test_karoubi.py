import pytest
from hypothesis import given, settings, strategies as st

from equivcat.action import Group, check_action, trivial_action
from equivcat.equivar import EquivariantCategory, adjunction_data
from equivcat.errors import StructuralError
from equivcat.karoubi import (KaroubiObject, extend_action, extend_functor, extend_monad, is_idempotent_complete,
                              karoubi_envelope, restriction_failures)
from equivcat.lincat import AdditiveEnvelope, Field, IdentityFunctor, matrix_category, validate_category
from equivcat.monadic import monad_of_adjunction

F5 = Field.prime(5)


@pytest.mark.parametrize("dims", [(0,), (0, 1), (0, 1, 2), (0, 2, 1)])
def test_matrix_categories_are_idempotent_complete(dims):
    v = is_idempotent_complete(matrix_category(F5, dims))
    assert v.status == "yes" and v.complete is True
    assert v.idempotents_checked > 0


def test_even_category_is_not_idempotent_complete():
    C0 = matrix_category(F5, (0, 2))
    v = is_idempotent_complete(C0)
    assert v.status == "no"
    X, p = v.witness
    assert X == "k2" and C0.compose(p, p) == p and not C0.is_identity(p) and not C0.is_zero(p)


def test_budget_outcome_is_explicit():
    v = is_idempotent_complete(matrix_category(F5, (0, 2)), budget=10)
    assert v.status == "budget" and v.skipped


@pytest.fixture(scope="module")
def completed():
    C0 = matrix_category(F5, (0, 2))
    E = AdditiveEnvelope(C0)
    K = karoubi_envelope(E, objects=[])
    X = ("k2",)
    half = K.make(X, E.mor(X, X, [1, 0, 0, 0]), label="half")
    K.objects = (K.embed(()), K.embed(X), half)
    return C0, E, K, half


def test_karoubi_envelope_is_a_category(completed):
    C0, E, K, half = completed
    assert validate_category(K).ok
    assert K.hom_dim(half, half) == 1


def test_karoubi_envelope_splits_the_witness(completed):
    C0, E, K, half = completed
    X = K.embed(("k2",))
    e = K.from_parent(X, X, E.mor(("k2",), ("k2",), [1, 0, 0, 0]))
    res = K.formal_split(X, e)
    assert res.split
    assert K.is_identity(K.compose(res.projection, res.inclusion))
    assert K.compose(res.inclusion, res.projection) == e


def test_karoubi_of_matrix_category_lists_split_objects():
    K = karoubi_envelope(matrix_category(F5, (0, 1, 2)))
    assert all(isinstance(A, KaroubiObject) for A in K.objects)
    assert is_idempotent_complete(K).status == "yes"


def test_extensions_restrict_to_the_originals(completed):
    C0, E, K, half = completed
    G = Group.cyclic(2)
    a = trivial_action(C0, G).on_envelope(E)
    objs = [(), ("k2",), ("k2", "k2")]
    aK = extend_action(a, K)
    assert check_action(aK, list(K.objects)).ok
    for g in G.elements:
        assert restriction_failures(K, a.phi(g), aK.phi(g), objs) == []
    CG = EquivariantCategory(a)
    S = monad_of_adjunction(adjunction_data(CG).right_adjunction())
    Sbar = extend_monad(S, K)
    assert restriction_failures(K, S.functor, Sbar.functor, objs) == []
    assert Sbar.check(list(K.objects)).ok


def test_extension_needs_an_idempotent_complete_target(completed):
    C0, E, K, half = completed
    with pytest.raises(StructuralError):
        extend_functor(IdentityFunctor(E), K)(half)
    emb = extend_functor(K.embedding(), K)
    assert K.hom_dim(emb(half), emb(half)) == 1


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_karoubi_composition_respects_idempotents(v):
    C0 = matrix_category(F5, (0, 2))
    E = AdditiveEnvelope(C0)
    K = karoubi_envelope(E, objects=[])
    X = ("k2",)
    half = K.make(X, E.mor(X, X, [1, 0, 0, 0]))
    full = K.embed(X)
    f = E.mor(X, X, v)
    g = E.compose(half.idem, f)       # lands in the image of diag(1,0)
    if K.contains(full, half, g):
        m = K.from_parent(full, half, g)
        assert K.compose(K.identity(half), m) == m
