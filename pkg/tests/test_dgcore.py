import pytest
from hypothesis import given, settings, strategies as st

from equivcat.dgcore import (DGPresentation, H0Category, check_dg_action, check_dg_category,
                             cohomology_dims, degree_of, dg_equivariant_structures, equivariant_cone,
                             equivariant_shift, graded_dimensions, parity_report, pretr, swap_complexes_instance,
                             swap_structures_instance)
from equivcat.errors import BudgetExceeded, MalformedInputError, PreconditionError
from equivcat.lincat import Field, find_iso, validate_category

F5 = Field.prime(5)


def contractible_pair(d_coeff=1, shift_degree=-1):
    """Objects A, B with End = k and Hom(A, B) spanned by u, v, d(u) = d_coeff·v."""
    consts = {
        ("A", "A", "A"): [[[1]]],
        ("B", "B", "B"): [[[1]]],
        ("A", "A", "B"): [[[1], [0]], [[0], [1]]],
        ("A", "B", "B"): [[[1, 0]], [[0, 1]]],
    }
    dims = {("A", "A"): 1, ("B", "B"): 1, ("A", "B"): 2}
    return DGPresentation(F5, ["A", "B"], dims, consts, {"A": [1], "B": [1]},
                          degrees={("A", "B"): (shift_degree, 0)},
                          diffs={("A", "B"): [[0, 0], [d_coeff, 0]]}, name="AB")


@pytest.fixture(scope="module")
def swap():
    return swap_structures_instance()


# -- DG presentations and H⁰ -------------------------------------------------------

def test_contractible_hom_has_no_cohomology():
    A = contractible_pair()
    assert check_dg_category(A).ok
    assert all(v == 0 for v in cohomology_dims(A, "A", "B").values())
    H = H0Category(A, ["A", "B"])
    assert H.hom_dim("A", "B") == 0 and H.hom_dim("A", "A") == 1
    assert validate_category(H).ok


def test_differential_of_wrong_degree_is_reported():
    A = contractible_pair(shift_degree=0)
    rep = check_dg_category(A)
    assert not rep.ok


def test_grading_length_is_checked():
    with pytest.raises(MalformedInputError):
        DGPresentation(F5, ["A"], {("A", "A"): 1}, {("A", "A", "A"): [[[1]]]}, {"A": [1]},
                       degrees={("A", "A"): (0, 1)})


# -- twisted complexes ---------------------------------------------------------------

def test_generators_satisfy_maurer_cartan(swap):
    tw, o = swap.tw, swap.objects
    for k in ("V0", "M1", "M2"):
        assert tw.violations(o[k]) == []


def test_broken_twisted_differential_is_rejected(swap):
    tw, base = swap.tw, swap.base
    # a block from item 0 to itself is not strictly lower triangular
    with pytest.raises(MalformedInputError):
        tw.make([("V1", 0)], {(0, 0): base.identity("V1")})


def test_m1_is_quasi_isomorphic_to_v0(swap):
    H = swap.ctx.H
    assert find_iso(H, swap.objects["M1"], swap.objects["V0"]).found
    assert H.hom_dim(swap.objects["M1"], swap.objects["M1"]) == 1


def test_action_swaps_m1_and_m2(swap):
    assert swap.action.act(1, swap.objects["M1"]) == swap.objects["M2"]
    assert check_dg_action(swap.action, [swap.objects[k] for k in ("V0", "M1", "M2")]) == []


def test_cone_of_identity_is_zero_in_h0(swap):
    tw, M1 = swap.tw, swap.objects["M1"]
    C = tw.cone(tw.identity(M1))
    H = H0Category(tw)
    assert H.hom_dim(C, C) == 0


def test_cone_requires_a_closed_degree_zero_map(swap):
    tw, o = swap.tw, swap.objects
    X, Y = o["V0"], tw.shift(o["V0"], 1)
    f = next(b for b in tw.basis(X, Y) if degree_of(tw, b) != 0)
    with pytest.raises(PreconditionError):
        tw.cone(f)


def test_shift_twice_composes(swap):
    tw, M1 = swap.tw, swap.objects["M1"]
    assert tw.shift(tw.shift(M1, 2), -1) == tw.shift(M1, 1)
    assert graded_dimensions(tw.shift(M1, 1)) == {k - 1: v for k, v in graded_dimensions(M1).items()}


def test_graded_dimensions_of_m1(swap):
    # V0 in degree 0, V1 in degrees -1 and 0
    assert graded_dimensions(swap.objects["M1"]) == {-1: (0, 1, 0), 0: (1, 1, 0)}


def _small_complexes(inst):
    tw, o = inst.tw, inst.objects
    return [o["V0"], o["M1"], o["M2"], tw.shift(o["V1"], 1), tw.cone(tw.zero(o["M1"], o["M2"]))]


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_leibniz_rule_on_basis_morphisms(data):
    inst = swap_complexes_instance()
    tw = inst.tw
    objs = _small_complexes(inst)
    S, T, U = (data.draw(st.sampled_from(objs)) for _ in range(3))
    fs, gs = tw.basis(S, T), tw.basis(T, U)
    if not fs or not gs:
        return
    f, g = data.draw(st.sampled_from(fs)), data.draw(st.sampled_from(gs))
    dg = degree_of(tw, g)
    lhs = tw.differential(tw.compose(g, f))
    sign = F5(-1) if dg % 2 else F5(1)
    rhs = tw.add(tw.compose(tw.differential(g), f), tw.scale(sign, tw.compose(g, tw.differential(f))))
    assert lhs == rhs
    assert tw.is_zero(tw.differential(tw.differential(f)))


# -- equivariant objects ---------------------------------------------------------------

def test_structure_counts(swap):
    a, o, CG = swap.action, swap.objects, swap.CG
    assert dg_equivariant_structures(a, o["M1"], CG=CG) == []
    assert dg_equivariant_structures(a, o["M2"], CG=CG) == []
    assert len(dg_equivariant_structures(a, o["V0"], CG=CG)) == 2


def test_equivariant_shift_and_cone_are_valid(swap):
    CG, eq = swap.CG, swap.equivariant
    A = equivariant_shift(CG, eq["V0+"], 1)
    assert CG.validate(A)
    C = equivariant_cone(CG, CG.identity(eq["pM1"]))
    assert CG.validate(C)


def test_qg_membership(swap):
    ctx, eq = swap.ctx, swap.equivariant
    hit = ctx.qg_membership(eq["V0+"], swap.lists["A0"])
    assert hit.member and hit.witness == swap.objects["M1"]
    far = equivariant_shift(swap.CG, eq["V0+"], 5)
    assert ctx.qg_membership(far, swap.lists["A0"]).member is False


def test_dimension_relation_and_parity(swap):
    tw, o = swap.tw, swap.objects
    cone = parity_report(swap, tw.cone(tw.zero(o["M1"], o["M2"])))
    assert cone.relation_failures == [] and not cone.balanced and cone.parity_ok is None
    both = parity_report(swap, tw.direct_sum([o["M1"], o["M2"]]).obj)
    assert both.relation_failures == [] and both.balanced and both.parity_ok
    assert both.h_dim0 == {0: 2}


def test_parity_report_needs_construction_history(swap):
    with pytest.raises(PreconditionError):
        parity_report(swap, swap.objects["V1"])


def test_hull_budget(swap):
    with pytest.raises(BudgetExceeded):
        pretr(swap.tw, [swap.objects["M1"], swap.objects["M2"]], depth=2, budget=5)


def test_h0_of_equivariant_category(swap):
    eq = swap.equivariant
    assert find_iso(swap.ctx.HG, eq["V0+"], eq["V0-"]).status == "none"
