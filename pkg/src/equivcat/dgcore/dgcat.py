"""Finite DG categories: graded Hom spaces with a differential, and their H⁰.

A DG category is a linear category that also provides ``degrees(X, Y)``
(the degree of each basis vector of Hom(X, Y), so every basis vector is
homogeneous) and ``_differential(X, Y, coords)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import MalformedInputError, PreconditionError
from ..lincat import linalg
from ..lincat.category import DirectSum, LinearCategory, Mor, Presentation, validate_category
from ..lincat.field import Field
from ..lincat.functor import LambdaFunctor


class DGPresentation(Presentation):
    """A Presentation with a degree for every basis vector and a differential.

    ``diffs[(X, Y)]`` is the matrix of d on Hom(X, Y): column j holds the
    coordinates of d(basis_j).  Missing entries mean d = 0.
    """

    is_dg = True

    def __init__(self, field: Field, objects, dims: dict, constants: dict, identities: dict,
                 degrees: dict, diffs: dict | None = None, labels: dict | None = None, name: str = "A"):
        super().__init__(field, objects, dims, constants, identities, labels, name)
        self.degs = {}
        for X in self.objects:
            for Y in self.objects:
                n = self.hom_dim(X, Y)
                d = tuple(int(x) for x in degrees.get((X, Y), (0,) * n))
                if len(d) != n:
                    raise MalformedInputError(f"Hom({X!r},{Y!r}) has {n} basis vectors but {len(d)} degrees")
                self.degs[(X, Y)] = d
        self.diffs = {}
        for key, M in (diffs or {}).items():
            n = self.hom_dim(*key)
            if len(M) != n or any(len(r) != n for r in M):
                raise MalformedInputError(f"differential on Hom{key!r} is not {n}x{n}")
            self.diffs[key] = [[field(x) for x in r] for r in M]

    def degrees(self, X, Y) -> tuple:
        return self.degs.get((X, Y), ())

    def _differential(self, X, Y, coords) -> tuple:
        M = self.diffs.get((X, Y))
        if M is None:
            return (self.field.zero,) * len(coords)
        return tuple(linalg.matvec(self.field, M, coords))

    def differential(self, f: Mor) -> Mor:
        return Mor(f.source, f.target, self._differential(f.source, f.target, f.coords))


def dg_from_linear(pres: Presentation, name: str | None = None) -> DGPresentation:
    """A linear category viewed as a DG category concentrated in degree 0 with d = 0."""
    return DGPresentation(pres.field, pres.objects, pres.dims, pres.constants, pres.identities,
                          degrees={}, labels=pres.labels, name=name or pres.name)


def differential(cat: LinearCategory, f: Mor) -> Mor:
    return Mor(f.source, f.target, tuple(cat._differential(f.source, f.target, f.coords)))


def degree_of(cat: LinearCategory, f: Mor) -> int | None:
    """The degree of a nonzero homogeneous morphism; None for zero or mixed."""
    degs = {d for d, c in zip(cat.degrees(f.source, f.target), f.coords) if c}
    return degs.pop() if len(degs) == 1 else None


def is_closed_degree_zero(cat: LinearCategory, f: Mor) -> bool:
    if any(c and d != 0 for d, c in zip(cat.degrees(f.source, f.target), f.coords)):
        return False
    return not any(cat._differential(f.source, f.target, f.coords))


def homogeneous_parts(cat: LinearCategory, X, Y, coords) -> dict:
    """Split a coordinate vector into its homogeneous components."""
    degs = cat.degrees(X, Y)
    parts = {}
    for i, (d, c) in enumerate(zip(degs, coords)):
        if c:
            parts.setdefault(d, [cat.field.zero] * len(coords))[i] = c
    return parts


def _embed(F, cols, v, n):
    full = [F.zero] * n
    for i, x in zip(cols, v):
        full[i] = x
    return full


def cycles_and_boundaries(cat: LinearCategory, X, Y, n: int) -> tuple[list, list]:
    """Bases of Zⁿ and Bⁿ of the complex Hom(X, Y), as full coordinate vectors."""
    F = cat.field
    dim = cat.hom_dim(X, Y)
    degs = cat.degrees(X, Y)
    here = [i for i in range(dim) if degs[i] == n]
    below = [i for i in range(dim) if degs[i] == n - 1]
    unit = linalg.identity(F, dim)
    dcols = {i: cat._differential(X, Y, tuple(unit[i])) for i in here + below}
    Z = []
    if here:
        rows = linalg.from_columns([dcols[i] for i in here], dim)
        Z = [_embed(F, here, v, dim) for v in linalg.nullspace(F, rows, len(here))]
    Bv = [list(dcols[i]) for i in below]
    B = [Bv[i] for i in linalg.independent_subset(F, Bv)] if Bv else []
    return Z, B


def cohomology_dims(cat: LinearCategory, X, Y) -> dict:
    """{n: dim Hⁿ Hom(X, Y)} over the degrees where Hom(X, Y) is nonzero."""
    out = {}
    for n in sorted(set(cat.degrees(X, Y))):
        Z, B = cycles_and_boundaries(cat, X, Y, n)
        if len(Z) - len(B):
            out[n] = len(Z) - len(B)
    return out


def closed_degree_zero_basis(cat: LinearCategory, X, Y) -> list[Mor]:
    Z, _ = cycles_and_boundaries(cat, X, Y, 0)
    return [Mor(X, Y, tuple(v)) for v in Z]


@dataclass
class DGReport:
    ok: bool
    checked: int = 0
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_dg_category(cat: LinearCategory, objects=None, max_violations: int = 50) -> DGReport:
    """Unit/associativity laws plus d of degree +1, d² = 0, closed identities,
    graded composition and the graded Leibniz rule on basis pairs."""
    if not getattr(cat, "is_dg", False):
        raise MalformedInputError(f"{cat.name} carries no grading")
    objs = list(cat.objects if objects is None else objects)
    base = validate_category(cat, objs, max_violations)
    bad = list(base.violations)
    checked = base.checked
    for X in objs:
        for Y in objs:
            n = cat.hom_dim(X, Y)
            degs = cat.degrees(X, Y)
            if len(degs) != n:
                raise MalformedInputError(f"Hom({X!r},{Y!r}) has {n} basis vectors but {len(degs)} degrees")
            for b in cat.basis(X, Y):
                checked += 2
                db = differential(cat, b)
                k = degree_of(cat, b)
                if any(c and d != k + 1 for d, c in zip(degs, db.coords)):
                    bad.append(("d not of degree +1", X, Y, b.coords))
                if any(differential(cat, db).coords):
                    bad.append(("d∘d != 0", X, Y, b.coords))
        checked += 1
        if not is_closed_degree_zero(cat, cat.identity(X)):
            bad.append(("identity not closed of degree 0", X))
    F = cat.field
    for X in objs:
        for Y in objs:
            fs = cat.basis(X, Y)
            if not fs:
                continue
            for Z in objs:
                for g in cat.basis(Y, Z):
                    dg = differential(cat, g)
                    sg = F.one if degree_of(cat, g) % 2 == 0 else F(-1)
                    for f in fs:
                        checked += 2
                        gf = cat.compose(g, f)
                        want = degree_of(cat, g) + degree_of(cat, f)
                        if any(c and d != want for d, c in zip(cat.degrees(X, Z), gf.coords)):
                            bad.append(("composition not graded", (X, Y, Z), g.coords, f.coords))
                        lhs = differential(cat, gf)
                        rhs = cat.add(cat.compose(dg, f), cat.scale(sg, cat.compose(g, differential(cat, f))))
                        if lhs != rhs:
                            bad.append(("Leibniz", (X, Y, Z), g.coords, f.coords))
                        if len(bad) >= max_violations:
                            return DGReport(False, checked, bad)
    return DGReport(not bad, checked, bad)


class H0Category(LinearCategory):
    """Hom_{H⁰}(X, Y) = Z⁰/B⁰ of the Hom complex.

    Classes are written in a basis of chosen representatives extending a
    basis of B⁰ inside Z⁰; composition composes representatives.
    """

    def __init__(self, dg: LinearCategory, objects=None, name: str | None = None):
        if not getattr(dg, "is_dg", False):
            raise PreconditionError(f"{dg.name} is not a DG category")
        self.dg = dg
        self.field = dg.field
        self.objects = tuple(dg.objects if objects is None else objects)
        self.name = name or f"H0({dg.name})"
        self._quot: dict = {}

    def _data(self, X, Y):
        q = self._quot.get((X, Y))
        if q is None:
            F = self.field
            Z, B = cycles_and_boundaries(self.dg, X, Y, 0)
            n = self.dg.hom_dim(X, Y)
            vecs = B + Z
            idx = linalg.independent_subset(F, vecs) if vecs else []
            reps = [vecs[i] for i in idx if i >= len(B)]
            sp = linalg.Subspace(F, B + reps, n)
            q = self._quot[(X, Y)] = (len(B), reps, sp)
        return q

    def hom_dim(self, X, Y) -> int:
        return len(self._data(X, Y)[1])

    def _class_coords(self, X, Y, v) -> tuple:
        nb, reps, sp = self._data(X, Y)
        c = sp.coords(v)
        if c is None:
            raise PreconditionError(f"morphism {X!r} -> {Y!r} is not closed of degree 0")
        return tuple(c[nb:])

    def _rep_vector(self, X, Y, coords) -> list:
        _, reps, _ = self._data(X, Y)
        n = self.dg.hom_dim(X, Y)
        return linalg.lincomb(self.field, coords, reps, n) if reps else [self.field.zero] * n

    def cls(self, f: Mor) -> Mor:
        """Homotopy class of a closed degree-0 morphism of the DG category."""
        return Mor(f.source, f.target, self._class_coords(f.source, f.target, f.coords))

    def rep(self, f: Mor) -> Mor:
        return Mor(f.source, f.target, tuple(self._rep_vector(f.source, f.target, f.coords)))

    def _compose(self, X, Y, Z, g, f):
        h = self.dg._compose(X, Y, Z, tuple(self._rep_vector(Y, Z, g)), tuple(self._rep_vector(X, Y, f)))
        return self._class_coords(X, Z, h)

    def _identity(self, X):
        return self._class_coords(X, X, self.dg._identity(X))

    def zero_object(self):
        z = getattr(self.dg, "zero_object", None)
        return z() if z else None

    def direct_sum(self, objs) -> DirectSum:
        ds = self.dg.direct_sum(objs)
        return DirectSum(ds.obj, ds.summands, tuple(self.cls(i) for i in ds.injections),
                         tuple(self.cls(p) for p in ds.projections))


def h0(dg: LinearCategory, objects=None) -> H0Category:
    return H0Category(dg, objects)


def h0_functor(dg_functor, source: H0Category, target: H0Category) -> LambdaFunctor:
    """H⁰ of a DG functor: apply it to a representative and take the class."""
    return LambdaFunctor(source, target, dg_functor.on_object,
                         lambda f: target.cls(dg_functor.on_morphism(source.rep(f))),
                         name=f"H0({dg_functor.name})")


def h0_action(a, H: H0Category):
    """The action induced on H⁰ by a DG action with closed degree-0 ε."""
    from ..action import GroupAction
    functors = {g: h0_functor(a.phi(g), H, H) for g in a.group.elements}
    return GroupAction(H, a.group, functors, lambda g, h, X: H.cls(a.eps(g, h, X)), name=f"H0({a.name})")


def check_dg_functor(Fn, objects) -> list:
    """Where a functor between DG categories fails to keep degrees or commute with d."""
    A, B = Fn.source, Fn.target
    bad = []
    for X in objects:
        for Y in objects:
            FX, FY = Fn(X), Fn(Y)
            for b in A.basis(X, Y):
                Fb = Fn(b)
                k = degree_of(A, b)
                if any(c and d != k for d, c in zip(B.degrees(FX, FY), Fb.coords)):
                    bad.append(("degree", X, Y, b.coords))
                if Fn(differential(A, b)) != differential(B, Fb):
                    bad.append(("d", X, Y, b.coords))
    return bad


def check_dg_action(a, objects=None) -> list:
    """check_action plus DG conditions: each φ_g is a DG functor and every ε is closed of degree 0."""
    from ..action import check_action
    C = a.category
    objs = list(C.objects if objects is None else objects)
    rep = check_action(a, objs)
    bad = list(rep.violations)
    G = a.group
    for g in G.elements:
        bad += [("phi", g) + v for v in check_dg_functor(a.phi(g), objs)]
        for h in G.elements:
            for X in objs:
                if not is_closed_degree_zero(C, a.eps(g, h, X)):
                    bad.append(("eps not closed of degree 0", (g, h), X))
    return bad
