import pytest

from equivcat.equivar import EquivariantCategory, adjunction_data, equivariant_structures
from equivcat.lincat import Field, scale_nat
from equivcat.monadic import (ComoduleCategory, Comodule, check_equivalence, comodules_over, comonad_of_adjunction,
                              comparison_functor, identity_comonad, modules_over, monad_comparison_functor,
                              monad_of_adjunction, split_mono_check)
from equivcat.pipelines import even_dimension_check, swap_instance, trivial_z2_instance

from test_action import brute_involutions


@pytest.fixture(scope="module")
def z2():
    inst = trivial_z2_instance()
    CG = EquivariantCategory(inst.action)
    cg = [A for X in inst.objects for A in equivariant_structures(CG, X)]
    return inst, CG, cg, adjunction_data(CG)


def test_comonads_satisfy_their_laws(z2):
    inst, CG, cg, data = z2
    assert comonad_of_adjunction(data.left_adjunction()).check(inst.objects).ok
    assert comonad_of_adjunction(data.right_adjunction()).check(cg).ok
    assert monad_of_adjunction(data.right_adjunction()).check(inst.objects).ok
    assert identity_comonad(inst.envelope).check(inst.objects).ok


def test_coaction_counts_match_structure_counts(z2):
    inst, CG, cg, data = z2
    T = comonad_of_adjunction(data.left_adjunction())
    Cat, counts = comodules_over(T, inst.objects)
    found = {c.obj: c.found for c in counts}
    assert found[("k1",)] == brute_involutions(1, 5)
    assert found[("k2",)] == brute_involutions(2, 5)
    assert all(Cat.validate(M) for M in Cat.objects)


def test_comparison_is_an_equivalence_on_trivial_z2(z2):
    inst, CG, cg, data = z2
    adj = data.left_adjunction()
    T = comonad_of_adjunction(adj)
    Cat, _ = comodules_over(T, inst.objects)
    comp = comparison_functor(adj, T)
    v = check_equivalence(comp.functor, cg, list(Cat.objects))
    assert v.status == "equivalence"
    assert all(n == m == r for _, _, n, m, r in v.ranks)
    assert set(v.hits) == set(Cat.objects)
    assert comp.identity_failures(cg, inst.objects) == []


def test_monad_comparison_identities(z2):
    inst, CG, cg, data = z2
    adj = data.left_adjunction()
    comp = monad_comparison_functor(adj)
    assert comp.identity_failures(inst.objects, cg) == []
    Cat, counts = modules_over(comp.monad, cg[:3])
    assert Cat.objects


def test_unit_is_split_by_scaled_counit(z2):
    inst, CG, cg, data = z2
    Fld = inst.field
    rho = scale_nat(Fld.inv(Fld(2)), data.eps_prime)
    res = split_mono_check(data.eta, cg, candidate=rho)
    assert res.ok and res.method == "candidate"


def test_split_mono_by_linear_solve_on_swap():
    inst = swap_instance()
    CG = EquivariantCategory(inst.action)
    cg = equivariant_structures(CG, ("X", "Y"))
    data = adjunction_data(CG)
    res = split_mono_check(data.eta, cg)
    assert res.ok and res.method == "linear solve"


def test_non_comodule_is_rejected(z2):
    inst, CG, cg, data = z2
    T = comonad_of_adjunction(data.right_adjunction())
    A = next(A for A in cg if A.obj == ("k1",))
    Cat = ComoduleCategory(T)
    # the unit η is not counital for ε' (ε'∘η = |G|)
    assert not Cat.validate(Comodule(A, data.eta.at(A)))


def test_even_dimensional_comparison_misses_an_odd_comodule():
    r = even_dimension_check()
    before = r.details["before"]
    assert before.fully_faithful and before.essentially_surjective is False
    assert r.certificate["witness"]["end_dim"] == 1
    assert all(d % 4 == 0 for d in r.certificate["source_end_dims"])
    assert r.details["after"].is_equivalence
    assert r.affirmative
