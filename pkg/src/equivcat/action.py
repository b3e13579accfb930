"""Finite groups and group actions on linear categories.

Convention: an action is a family of functors φ_g together with
isomorphisms ε_{g,h}: φ_g φ_h → φ_{hg}.  The coherence condition checked
here is, for all f, g, h and objects X,

    ε_{f,hg}(X) ∘ φ_f(ε_{g,h}(X)) = ε_{gf,h}(X) ∘ ε_{f,g}(φ_h X)

as maps φ_f φ_g φ_h X → φ_{hgf} X.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Hashable, Sequence

from .errors import CharacteristicError, ConsistencyError, MalformedInputError, StructuralError
from .lincat import linalg
from .lincat.category import LinearCategory, Mor
from .lincat.envelope import AdditiveEnvelope
from .lincat.functor import EnvelopeLift, Functor, IdentityFunctor, NatTrans, check_functor, permutation_functor


class Group:
    """A finite group given by its multiplication table."""

    def __init__(self, elements: Sequence, table: dict, identity, name: str = "G"):
        self.elements = tuple(elements)
        self.table = dict(table)
        self.identity = identity
        self.name = name
        self._check()
        self._inv = {g: next(h for h in self.elements if self.mul(g, h) == identity) for g in self.elements}

    def _check(self):
        els = set(self.elements)
        if self.identity not in els:
            raise MalformedInputError("identity is not a group element")
        for g in self.elements:
            for h in self.elements:
                if self.table.get((g, h)) not in els:
                    raise MalformedInputError(f"product {g!r}*{h!r} missing or not an element")
        for g in self.elements:
            if self.mul(self.identity, g) != g or self.mul(g, self.identity) != g:
                raise MalformedInputError(f"identity law fails at {g!r}")
            if not any(self.mul(g, h) == self.identity for h in self.elements):
                raise MalformedInputError(f"{g!r} has no inverse")
            for h in self.elements:
                for k in self.elements:
                    if self.mul(self.mul(g, h), k) != self.mul(g, self.mul(h, k)):
                        raise MalformedInputError(f"associativity fails at {(g, h, k)!r}")

    @classmethod
    def cyclic(cls, n: int, name: str | None = None) -> "Group":
        els = list(range(n))
        return cls(els, {(a, b): (a + b) % n for a in els for b in els}, 0, name or f"Z/{n}")

    @classmethod
    def trivial(cls) -> "Group":
        return cls.cyclic(1, "1")

    def __repr__(self):
        return f"Group({self.name}, order={self.order})"

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, g, h):
        return self.table[(g, h)]

    def inv(self, g):
        return self._inv[g]

    def element_order(self, g) -> int:
        n, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            n += 1
        return n

    @property
    def orders(self) -> dict:
        return {g: self.element_order(g) for g in self.elements}

    @property
    def is_abelian(self) -> bool:
        return all(self.mul(g, h) == self.mul(h, g) for g in self.elements for h in self.elements)

    @property
    def exponent(self) -> int:
        e = 1
        for g in self.elements:
            n = self.element_order(g)
            e = e * n // gcd(e, n)
        return e

    def generators(self) -> list:
        """A small generating set, picked greedily."""
        gens, span = [], {self.identity}
        for g in self.elements:
            if g in span:
                continue
            gens.append(g)
            frontier = list(span)
            span = set(span)
            while frontier:
                x = frontier.pop()
                for s in gens:
                    y = self.mul(x, s)
                    if y not in span:
                        span.add(y)
                        frontier.append(y)
        return gens


@dataclass
class ActionReport:
    ok: bool
    checked: int = 0
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class GroupAction:
    """φ_g and ε_{g,h} on a linear category.

    ``eps(g, h, X)`` returns the component ε_{g,h}(X): φ_gφ_h X → φ_{hg} X.
    """

    def __init__(self, category: LinearCategory, group: Group, functors: dict,
                 eps: Callable[[Hashable, Hashable, Hashable], Mor], name: str = "phi"):
        self.category, self.group, self.name = category, group, name
        F = category.field
        if F.is_finite and group.order % F.characteristic == 0:
            raise CharacteristicError(f"|G| = {group.order} is not invertible in {F}")
        missing = [g for g in group.elements if g not in functors]
        if missing:
            raise MalformedInputError(f"no functor given for group elements {missing!r}")
        self.functors = dict(functors)
        self._eps = eps
        self._eps_cache: dict = {}
        self._unit_inv: dict = {}
        self._unit: dict = {}

    def __repr__(self):
        return f"GroupAction({self.group.name} on {self.category.name})"

    @property
    def field(self):
        return self.category.field

    def phi(self, g) -> Functor:
        return self.functors[g]

    def act(self, g, x):
        return self.functors[g](x)

    def eps(self, g, h, X) -> Mor:
        key = (g, h, X)
        out = self._eps_cache.get(key)
        if out is None:
            out = self._eps(g, h, X)
            exp = (self.act(g, self.act(h, X)), self.act(self.group.mul(h, g), X))
            if (out.source, out.target) != exp:
                raise MalformedInputError(f"ε_{{{g},{h}}}({X!r}) has the wrong endpoints")
            self._eps_cache[key] = out
        return out

    def eps_inv(self, g, h, X) -> Mor:
        inv = self.category.inverse(self.eps(g, h, X))
        if inv is None:
            raise StructuralError(f"ε_{{{g},{h}}}({X!r}) is not invertible")
        return inv

    def eps_nat(self, g, h) -> NatTrans:
        from .lincat.functor import compose_functors
        return NatTrans(compose_functors(self.phi(g), self.phi(h)), self.phi(self.group.mul(h, g)),
                        lambda X: self.eps(g, h, X), name=f"eps[{g},{h}]")

    # -- the unit isomorphism u: Id → φ_e -----------------------------------

    def unit_inv(self, X) -> Mor:
        """u⁻¹(X): φ_e X → X, the unique v with φ_e(v) = ε_{e,e}(X)."""
        v = self._unit_inv.get(X)
        if v is None:
            C, e = self.category, self.group.identity
            phi_e = self.phi(e)
            eX = phi_e(X)
            target = self.eps(e, e, X)
            n = C.hom_dim(eX, X)
            M = C.linear_map_matrix(eX, X, phi_e.on_morphism)
            if n == 0:
                if any(target.coords):
                    raise StructuralError(f"φ_e is not faithful enough at {X!r}")
                v = C.zero(eX, X)
            else:
                sol = linalg.solve_affine(C.field, M, list(target.coords), n)
                if sol is None or sol[1]:
                    raise StructuralError(f"φ_e(v) = ε_{{e,e}}({X!r}) has no unique solution")
                v = Mor(eX, X, tuple(sol[0]))
            self._unit_inv[X] = v
        return v

    def unit(self, X) -> Mor:
        u = self._unit.get(X)
        if u is None:
            u = self.category.inverse(self.unit_inv(X))
            if u is None:
                raise StructuralError(f"u⁻¹({X!r}) is not invertible")
            self._unit[X] = u
        return u

    def unit_nat(self) -> NatTrans:
        return NatTrans(IdentityFunctor(self.category), self.phi(self.group.identity), self.unit, name="u")

    # -- lifting ---------------------------------------------------------------

    def on_envelope(self, env: AdditiveEnvelope | None = None) -> "GroupAction":
        """The blockwise action on the additive envelope of the category."""
        env = env or AdditiveEnvelope(self.category)
        functors = {g: EnvelopeLift(self.phi(g), env, env) for g in self.group.elements}

        def eps(g, h, X):
            blocks = {(i, i): self.eps(g, h, x) for i, x in enumerate(X)}
            src = functors[g](functors[h](X))
            return env.from_blocks(src, functors[self.group.mul(h, g)](X), blocks)

        return GroupAction(env, self.group, functors, eps, name=self.name)


def check_action(a: GroupAction, objects=None, max_violations: int = 50) -> ActionReport:
    """Functoriality, invertibility and naturality of ε, and every cocycle square."""
    C, G = a.category, a.group
    objs = list(C.objects if objects is None else objects)
    bad, checked = [], 0
    for g in G.elements:
        rep = check_functor(a.phi(g), objs)
        checked += 1
        bad += [("functor", g, v) for v in rep.violations]
    for g in G.elements:
        for h in G.elements:
            hg = G.mul(h, g)
            for X in objs:
                checked += 1
                if not C.is_iso(a.eps(g, h, X)):
                    bad.append(("eps not invertible", (g, h), X))
            for X in objs:
                for Y in objs:
                    for f in C.basis(X, Y):
                        checked += 1
                        lhs = C.compose(a.eps(g, h, Y), a.act(g, a.act(h, f)))
                        rhs = C.compose(a.act(hg, f), a.eps(g, h, X))
                        if lhs != rhs:
                            bad.append(("eps not natural", (g, h), (X, Y), f.coords))
    for f in G.elements:
        for g in G.elements:
            for h in G.elements:
                for X in objs:
                    checked += 1
                    lhs = C.compose(a.eps(f, G.mul(h, g), X), a.act(f, a.eps(g, h, X)))
                    rhs = C.compose(a.eps(G.mul(g, f), h, X), a.eps(f, g, a.act(h, X)))
                    if lhs != rhs:
                        bad.append(("cocycle", (f, g, h), X))
                        if len(bad) >= max_violations:
                            return ActionReport(False, checked, bad)
    return ActionReport(not bad, checked, bad)


def check_unit_identities(a: GroupAction, objects=None) -> list:
    """Failures of φ_e(u⁻¹) = ε_{e,e} = u⁻¹φ_e, ε_{e,g} = u⁻¹φ_g, ε_{g,e} = φ_g(u⁻¹)."""
    C, G = a.category, a.group
    e = G.identity
    bad = []
    for X in (C.objects if objects is None else objects):
        if a.act(e, a.unit_inv(X)) != a.eps(e, e, X):
            bad.append(("phi_e(u^-1)", X))
        if a.unit_inv(a.act(e, X)) != a.eps(e, e, X):
            bad.append(("u^-1(phi_e)", X))
        if not C.is_identity(C.compose(a.unit(X), a.unit_inv(X))):
            bad.append(("u not inverse", X))
        for g in G.elements:
            if a.eps(e, g, X) != a.unit_inv(a.act(g, X)):
                bad.append(("eps_{e,g}", g, X))
            if a.eps(g, e, X) != a.act(g, a.unit_inv(X)):
                bad.append(("eps_{g,e}", g, X))
    return bad


def unit_iso(a: GroupAction, objects=None) -> NatTrans:
    """u: Id → φ_e with the unit identities re-verified on ``objects``."""
    bad = check_unit_identities(a, objects)
    if bad:
        raise ConsistencyError(f"unit identities fail: {bad[:3]!r}")
    return a.unit_nat()


def trivial_action(category: LinearCategory, group: Group) -> GroupAction:
    ident = IdentityFunctor(category)
    return GroupAction(category, group, {g: ident for g in group.elements},
                       lambda g, h, X: category.identity(X), name="trivial")


def scalar_action(category: LinearCategory, group: Group, cocycle: Callable) -> GroupAction:
    """φ_g = Id and ε_{g,h} = c(g, h)·id for a scalar 2-cocycle c."""
    ident = IdentityFunctor(category)
    return GroupAction(category, group, {g: ident for g in group.elements},
                       lambda g, h, X: category.scale(cocycle(g, h), category.identity(X)), name="scalar")


def permutation_action(category: LinearCategory, group: Group, perms: dict) -> GroupAction:
    """Strict action permuting objects; ``perms[g]`` maps objects to objects.

    Basis i of Hom(X, Y) goes to basis i of Hom(gX, gY); the structure
    constants must be invariant for this to be a functor (check_action
    reports it otherwise).
    """
    functors = {g: permutation_functor(category, perms[g], name=f"phi_{g}") for g in group.elements}
    for g in group.elements:
        for h in group.elements:
            for X in category.objects:
                if perms[g][perms[h][X]] != perms[group.mul(h, g)][X]:
                    raise MalformedInputError(f"permutations are not a right action at {(g, h, X)!r}")
    return GroupAction(category, group, functors, lambda g, h, X: category.identity(functors[g](functors[h](X))),
                       name="perm")
