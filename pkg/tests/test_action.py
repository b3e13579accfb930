import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equivcat.action import (Group, GroupAction, check_action, check_unit_identities, permutation_action,
                             scalar_action, trivial_action)
from equivcat.equivar import (EquivariantCategory, EquivariantObject, adjunction_data, check_adjunction_identities,
                              check_induce_functorial, equivariant_structures, equivariantize)
from equivcat.errors import BudgetExceeded, CharacteristicError, MalformedInputError
from equivcat.lincat import AdditiveEnvelope, Field, discrete_category, matrix_category, validate_category
from equivcat.pipelines import cyclic3_instance, swap_instance, trivial_group_instance, trivial_z2_instance

F5 = Field.prime(5)


def brute_involutions(n, p):
    # |{A in GL_n(F_p) : A² = 1}| by listing every matrix
    count = 0
    for entries in itertools.product(range(p), repeat=n * n):
        A = np.array(entries).reshape(n, n)
        if ((A @ A) % p == np.eye(n, dtype=int)).all():
            count += 1
    return count


# -- groups ------------------------------------------------------------------------

def test_cyclic_group_table():
    G = Group.cyclic(4)
    assert G.order == 4 and G.identity == 0
    assert G.mul(3, 2) == 1 and G.inv(1) == 3
    assert G.element_order(2) == 2 and G.exponent == 4


def test_group_table_must_be_associative():
    els = [0, 1, 2]
    table = {(a, b): (a + b) % 3 for a in els for b in els}
    table[(1, 1)] = 0
    with pytest.raises(MalformedInputError):
        Group(els, table, 0)


def test_klein_four_is_abelian_with_exponent_two():
    els = [(a, b) for a in (0, 1) for b in (0, 1)]
    G = Group(els, {(x, y): ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2) for x in els for y in els}, (0, 0))
    assert G.is_abelian and G.exponent == 2 and len(G.generators()) == 2


# -- actions ------------------------------------------------------------------------

@pytest.mark.parametrize("make", [trivial_group_instance, trivial_z2_instance, swap_instance, cyclic3_instance])
def test_packaged_actions_pass_all_checks(make):
    inst = make()
    assert check_action(inst.action, inst.objects).ok
    assert not check_unit_identities(inst.action, inst.objects)


def test_group_order_must_be_invertible():
    F2 = Field.prime(2)
    with pytest.raises(CharacteristicError):
        trivial_action(matrix_category(F2, (1,)), Group.cyclic(2))


def test_broken_cocycle_is_reported():
    M = matrix_category(F5, (1,))
    G = Group.cyclic(2)
    # a non-normalized c(0,0) = 2 with c = 1 elsewhere is not a cocycle
    a = scalar_action(M, G, lambda g, h: 2 if (g, h) == (0, 0) else 1)
    rep = check_action(a)
    assert not rep.ok
    assert any(v[0] == "cocycle" for v in rep.violations)


def _swap_with_eps(sign_at):
    D = discrete_category(F5, ["X", "Y"])
    G = Group.cyclic(2)
    base = permutation_action(D, G, {0: {"X": "X", "Y": "Y"}, 1: {"X": "Y", "Y": "X"}})

    def eps(g, h, Z):
        c = sign_at.get(Z, 1) if (g, h) == (1, 1) else 1
        return D.scale(c, base.eps(g, h, Z))
    return GroupAction(D, G, base.functors, eps)


def test_negating_eps_everywhere_is_still_a_cocycle():
    assert check_action(_swap_with_eps({"X": -1, "Y": -1})).ok


def test_negating_eps_at_one_object_breaks_the_cocycle():
    rep = check_action(_swap_with_eps({"X": -1}))
    assert ("cocycle", (1, 1, 1), "X") in [tuple(v[:3]) for v in rep.violations]


def test_permutation_action_must_be_a_right_action():
    D = discrete_category(F5, ["X", "Y", "Z"])
    G = Group.cyclic(3)
    perms = {0: {"X": "X", "Y": "Y", "Z": "Z"}, 1: {"X": "Y", "Y": "Z", "Z": "X"},
             2: {"X": "Y", "Y": "Z", "Z": "X"}}
    with pytest.raises(MalformedInputError):
        permutation_action(D, G, perms)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([0, 1]), st.sampled_from([0, 1]), st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_eps_is_natural_on_random_morphisms(g, h, v):
    inst = swap_instance()
    a, E = inst.action, inst.envelope
    X = ("X", "Y")
    f = E.mor(X, X, v[:2])
    lhs = E.compose(a.eps(g, h, X), a.act(g, a.act(h, f)))
    rhs = E.compose(a.act(inst.group.mul(h, g), f), a.eps(g, h, X))
    assert lhs == rhs


# -- equivariant objects -------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
def test_structure_count_trivial_z2_is_involution_count(n):
    inst = trivial_z2_instance()
    CG = EquivariantCategory(inst.action)
    S = equivariant_structures(CG, (f"k{n}",))
    assert len(S) == brute_involutions(n, 5)
    assert all(CG.validate(A) for A in S)


def test_structures_on_swapped_pair():
    inst = swap_instance()
    CG = EquivariantCategory(inst.action)
    assert equivariant_structures(CG, ("X",)) == []
    # θ_1 = [[0, b], [a, 0]] with ab = 1
    assert len(equivariant_structures(CG, ("X", "Y"))) == 4


def test_structure_budget_is_enforced():
    inst = trivial_z2_instance()
    CG = EquivariantCategory(inst.action)
    with pytest.raises(BudgetExceeded):
        equivariant_structures(CG, ("k2",), budget=10)


def test_equivariant_category_validates():
    inst = trivial_z2_instance()
    CG = EquivariantCategory(inst.action)
    objs = equivariant_structures(CG, ("k1",)) + equivariant_structures(CG, ("k2",))[:4]
    CGl = equivariantize(inst.action, objs)
    assert validate_category(CGl).ok


def test_invalid_listed_object_is_rejected():
    inst = trivial_z2_instance()
    CG = EquivariantCategory(inst.action)
    E = inst.envelope
    bogus = EquivariantObject(("k1",), ((0, E.identity(("k1",))), (1, E.scale(2, E.identity(("k1",))))))
    assert not CG.validate(bogus)
    with pytest.raises(MalformedInputError):
        equivariantize(inst.action, [bogus])


@pytest.mark.parametrize("make", [trivial_group_instance, trivial_z2_instance, swap_instance])
def test_adjunction_identities(make):
    inst = make()
    CG = EquivariantCategory(inst.action)
    cg = [A for X in inst.objects for A in equivariant_structures(CG, X)]
    assert cg
    data = adjunction_data(CG)
    assert check_adjunction_identities(data, inst.objects, cg) == []


def test_induction_is_functorial():
    inst = swap_instance()
    CG = EquivariantCategory(inst.action)
    assert check_induce_functorial(CG, inst.objects) == []


def test_induced_object_has_group_order_copies():
    inst = cyclic3_instance()
    CG = EquivariantCategory(inst.action)
    A = CG.induced_object(("X0",))
    assert sorted(A.obj) == ["X0", "X1", "X2"]
    assert CG.validate(A)


def test_custom_action_constructor_keeps_functors():
    M = matrix_category(F5, (1,))
    a = trivial_action(M, Group.cyclic(2))
    assert isinstance(a, GroupAction) and a.act(1, "k1") == "k1"
    env = a.on_envelope(AdditiveEnvelope(M))
    assert env.act(1, ("k1", "k1")) == ("k1", "k1")
