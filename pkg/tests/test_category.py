import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equivcat.errors import MalformedInputError
from equivcat.lincat import (AdditiveEnvelope, Field, Mor, Presentation, check_functor, discrete_category,
                             enumerate_idempotents, find_iso, matrix_category, permutation_functor,
                             split_idempotent, validate_category)

F5 = Field.prime(5)
M = matrix_category(F5, (0, 1, 2))
E = AdditiveEnvelope(M)


def brute_idempotents_2x2(p):
    # independent count: every 2x2 matrix over F_p, squared with numpy
    n = 0
    for a, b, c, d in itertools.product(range(p), repeat=4):
        m = np.array([[a, b], [c, d]])
        if ((m @ m) % p == m).all():
            n += 1
    return n


def mors(cat, X, Y):
    n = cat.hom_dim(X, Y)
    return st.lists(st.integers(0, 4), min_size=n, max_size=n).map(lambda v: cat.mor(X, Y, v))


env_objects = st.lists(st.sampled_from(["k0", "k1", "k2"]), min_size=0, max_size=2).map(tuple)


def test_matrix_category_validates():
    rep = validate_category(M)
    assert rep.ok and rep.checked > 0


def test_matrix_hom_dims():
    assert [M.hom_dim("k1", Y) for Y in ("k0", "k1", "k2")] == [0, 1, 2]
    assert M.hom_dim("k2", "k2") == 4


def test_broken_constant_names_the_triple():
    broken = M.with_constant(("k1", "k1", "k1"), 0, 0, 0, 2)
    rep = validate_category(broken)
    assert not rep.ok
    assert any(v[0] in ("left unit", "right unit", "associativity") for v in rep.violations)
    assoc = [v for v in rep.violations if v[0] == "associativity"]
    assert all(len(v[1]) == 4 for v in assoc)


def test_malformed_matrix_shape():
    with pytest.raises(MalformedInputError):
        Presentation.from_matrices(F5, {"A": 2}, {("A", "A"): [[[1, 0]]]})


def test_idempotent_count_matches_brute_force():
    assert len(enumerate_idempotents(M, "k2")) == brute_idempotents_2x2(5) == 32


def test_idempotent_splits_in_matrix_category():
    p = M.mor("k2", "k2", [1, 0, 0, 0])
    res = split_idempotent(M, "k2", p)
    assert res.split and res.retract == "k1"
    assert M.is_identity(M.compose(res.projection, res.inclusion))
    assert M.compose(res.inclusion, res.projection) == p


def test_idempotent_does_not_split_in_even_category():
    C0 = matrix_category(F5, (0, 2))
    p = C0.mor("k2", "k2", [1, 0, 0, 0])
    assert split_idempotent(C0, "k2", p).status == "none"


def test_find_iso_in_envelope_is_verified():
    res = find_iso(E, ("k1", "k1"), ("k2",))
    assert res.found
    assert E.is_identity(E.compose(res.backward, res.forward))
    assert E.is_identity(E.compose(res.forward, res.backward))
    assert find_iso(E, ("k1",), ("k2",)).status == "none"


def test_direct_sum_structure_maps():
    ds = E.direct_sum([("k1",), ("k2",)])
    assert ds.obj == ("k1", "k2")
    total = E.add(*[E.compose(i, p) for i, p in zip(ds.injections, ds.projections)])
    assert E.is_identity(total)
    for a, i in enumerate(ds.injections):
        for b, p in enumerate(ds.projections):
            comp = E.compose(p, i)
            assert E.is_identity(comp) if a == b else E.is_zero(comp)


def test_permutation_functor_on_discrete_category():
    D = discrete_category(F5, ["X", "Y"])
    sw = permutation_functor(D, {"X": "Y", "Y": "X"})
    assert sw("X") == "Y"
    assert check_functor(sw).ok


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_envelope_composition_is_associative_and_bilinear(data):
    W, X, Y, Z = (data.draw(env_objects) for _ in range(4))
    f, f2 = data.draw(mors(E, W, X)), data.draw(mors(E, W, X))
    g = data.draw(mors(E, X, Y))
    h = data.draw(mors(E, Y, Z))
    assert E.compose(h, E.compose(g, f)) == E.compose(E.compose(h, g), f)
    assert E.compose(g, E.add(f, f2)) == E.add(E.compose(g, f), E.compose(g, f2))
    assert E.compose(E.identity(X), f) == f == E.compose(f, E.identity(W))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_inverse_is_two_sided(data):
    f = data.draw(mors(M, "k2", "k2"))
    g = M.inverse(f)
    det = (f.coords[0] * f.coords[3] - f.coords[1] * f.coords[2]) % 5
    assert (g is not None) == (det != 0)
    if g is not None:
        assert M.is_identity(M.compose(g, f)) and M.is_identity(M.compose(f, g))


def test_mor_is_frozen():
    f = Mor("k1", "k1", (1,))
    with pytest.raises(Exception):
        f.coords = (2,)
