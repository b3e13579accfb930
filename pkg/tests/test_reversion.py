import pytest

from equivcat.action import Group, check_action
from equivcat.equivar import EquivariantCategory, equivariant_structures
from equivcat.errors import PreconditionError, RootsOfUnityError
from equivcat.lincat import Field
from equivcat.monadic import comonad_iso_failures
from equivcat.pipelines import even_instance, trivial_z2_instance
from equivcat.reversion import RegularComonad, beta_iso, dual_group, gamma_iso, reversion_equivalence, twist_action


def roots_of_unity(n, p):
    return sorted(x for x in range(1, p) if pow(x, n, p) == 1)


@pytest.mark.parametrize("n,p", [(2, 5), (3, 7), (4, 5), (2, 3), (6, 7)])
def test_dual_of_cyclic_group(n, p):
    G, F = Group.cyclic(n), Field.prime(p)
    D = dual_group(G, F)
    assert D.order == n
    # χ is determined by χ(1), an n-th root of unity
    assert sorted(chi(1) for chi in D.elements) == roots_of_unity(n, p)
    for chi in D.elements:
        for g in G.elements:
            for h in G.elements:
                assert chi(G.mul(g, h)) == chi(g) * chi(h) % p


def test_missing_roots_of_unity():
    with pytest.raises(RootsOfUnityError):
        dual_group(Group.cyclic(3), Field.prime(5))
    with pytest.raises(RootsOfUnityError):
        dual_group(Group.cyclic(3), Field.rationals())


@pytest.mark.parametrize("n,p", [(2, 5), (3, 7), (4, 5)])
def test_gamma_matches_character_orthogonality(n, p):
    G, F = Group.cyclic(n), Field.prime(p)
    g = gamma_iso(G, dual_group(G, F))
    n_inv = pow(n, p - 2, p)
    for (x, chi), c in g.coeffs.items():
        assert c == pow(chi(x), p - 2, p) * n_inv % p
    assert g.coeffs == g.oracle()


@pytest.fixture(scope="module")
def z2():
    inst = trivial_z2_instance()
    CG = EquivariantCategory(inst.action)
    cg = [A for X in inst.objects for A in equivariant_structures(CG, X)]
    return inst, CG, cg


def test_twist_is_an_action(z2):
    inst, CG, cg = z2
    tw = twist_action(CG, dual_group(inst.group, inst.field))
    assert check_action(tw, cg[:8]).ok


def test_regular_comonad_laws(z2):
    inst, CG, cg = z2
    assert RegularComonad(CG).check(cg[:8]).ok


def test_beta_is_a_comonad_isomorphism(z2):
    inst, CG, cg = z2
    beta, Tp, R = beta_iso(CG)
    assert comonad_iso_failures(beta, Tp, R, cg) == []


def test_reversion_on_trivial_z2():
    inst = trivial_z2_instance()
    res = reversion_equivalence(inst.action, inst.objects)
    assert res.certified
    for V, (image, fwd, bwd) in res.round_trip.items():
        assert image == V or inst.envelope.is_identity(inst.envelope.compose(bwd, fwd))


def test_reversion_requires_idempotent_completeness():
    inst = even_instance()
    with pytest.raises(PreconditionError):
        reversion_equivalence(inst.action, [("k2",)])
