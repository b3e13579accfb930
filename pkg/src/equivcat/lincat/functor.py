"""Functors and natural transformations between linear categories."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from ..errors import MalformedInputError
from . import linalg
from .category import LinearCategory, Mor
from .envelope import AdditiveEnvelope


class Functor:
    source: LinearCategory
    target: LinearCategory
    name: str = "F"

    def on_object(self, X) -> Hashable:
        raise NotImplementedError

    def on_morphism(self, f: Mor) -> Mor:
        raise NotImplementedError

    def __call__(self, x):
        return self.on_morphism(x) if isinstance(x, Mor) else self.on_object(x)

    def hom_matrix(self, X, Y) -> list[list]:
        """Matrix of Hom(X, Y) -> Hom(FX, FY) in the fixed bases."""
        return self.source.linear_map_matrix(X, Y, self.on_morphism)

    def __repr__(self):
        return f"<Functor {self.name}: {self.source.name} -> {self.target.name}>"


class LambdaFunctor(Functor):
    def __init__(self, source, target, on_object: Callable, on_morphism: Callable, name: str = "F"):
        self.source, self.target, self.name = source, target, name
        self._obj, self._mor = on_object, on_morphism
        self._cache: dict = {}

    def on_object(self, X):
        return self._obj(X)

    def on_morphism(self, f):
        key = f
        out = self._cache.get(key)
        if out is None:
            out = self._mor(f)
            self._cache[key] = out
        return out


class IdentityFunctor(Functor):
    def __init__(self, cat: LinearCategory):
        self.source = self.target = cat
        self.name = f"Id_{cat.name}"

    def on_object(self, X):
        return X

    def on_morphism(self, f):
        return f


class ComposedFunctor(Functor):
    """``outer ∘ inner``."""

    def __init__(self, outer: Functor, inner: Functor):
        self.outer, self.inner = outer, inner
        self.source, self.target = inner.source, outer.target
        self.name = f"{outer.name}{inner.name}"

    def on_object(self, X):
        return self.outer.on_object(self.inner.on_object(X))

    def on_morphism(self, f):
        return self.outer.on_morphism(self.inner.on_morphism(f))


def compose_functors(*fs: Functor) -> Functor:
    out = fs[-1]
    for F in reversed(fs[:-1]):
        out = ComposedFunctor(F, out)
    return out


class FunctorPresentation(Functor):
    """Object map plus one matrix per Hom pair (columns = images of basis)."""

    def __init__(self, source, target, obj_map: dict, matrices: dict, name: str = "F"):
        self.source, self.target, self.name = source, target, name
        self.obj_map = dict(obj_map)
        F = source.field
        self.matrices = {}
        for X in source.objects:
            if X not in self.obj_map:
                raise MalformedInputError(f"functor {name} has no image for {X!r}")
        for X in source.objects:
            for Y in source.objects:
                m = matrices.get((X, Y))
                rows, cols = target.hom_dim(self.obj_map[X], self.obj_map[Y]), source.hom_dim(X, Y)
                if m is None:
                    m = [[F.zero] * cols for _ in range(rows)]
                m = [[F(x) for x in r] for r in m]
                if len(m) != rows or any(len(r) != cols for r in m):
                    raise MalformedInputError(f"functor {name}: matrix for ({X!r},{Y!r}) must be {rows}x{cols}")
                self.matrices[(X, Y)] = m

    def on_object(self, X):
        return self.obj_map[X]

    def on_morphism(self, f):
        m = self.matrices[(f.source, f.target)]
        return Mor(self.obj_map[f.source], self.obj_map[f.target],
                   tuple(linalg.matvec(self.source.field, m, f.coords)))


def identity_presentation_functor(cat) -> FunctorPresentation:
    mats = {(X, Y): linalg.identity(cat.field, cat.hom_dim(X, Y)) for X in cat.objects for Y in cat.objects}
    return FunctorPresentation(cat, cat, {X: X for X in cat.objects}, mats, name="Id")


def permutation_functor(cat, perm: dict, name: str = "phi") -> FunctorPresentation:
    """Functor permuting objects and carrying basis i of Hom(X,Y) to basis i of Hom(σX,σY)."""
    mats = {}
    for X in cat.objects:
        for Y in cat.objects:
            n = cat.hom_dim(X, Y)
            if cat.hom_dim(perm[X], perm[Y]) != n:
                raise MalformedInputError(f"{name}: Hom({X},{Y}) and its image differ in dimension")
            mats[(X, Y)] = linalg.identity(cat.field, n)
    return FunctorPresentation(cat, cat, perm, mats, name=name)


class EnvelopeLift(Functor):
    """Blockwise extension of a base functor to additive envelopes."""

    def __init__(self, base_functor: Functor, source: AdditiveEnvelope, target: AdditiveEnvelope):
        self.base_functor, self.source, self.target = base_functor, source, target
        self.name = base_functor.name
        self._objs: dict = {}

    def on_object(self, X):
        out = self._objs.get(X)
        if out is None:
            out = self._objs[X] = tuple(self.base_functor.on_object(x) for x in X)
        return out

    def on_morphism(self, f):
        src, tgt = self.source, self.target
        X, Y = f.source, f.target
        blocks = {(i, j): self.base_functor.on_morphism(Mor(X[i], Y[j], b))
                  for i, j, b in src._blocks(X, Y, f.coords)}
        return tgt.from_blocks(self.on_object(X), self.on_object(Y), blocks)


@dataclass
class FunctorReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_functor(Fn: Functor, objects=None) -> FunctorReport:
    src, tgt = Fn.source, Fn.target
    objs = list(src.objects if objects is None else objects)
    bad = []
    for X in objs:
        if Fn.on_morphism(src.identity(X)) != tgt.identity(Fn.on_object(X)):
            bad.append(("identity", X))
    for X in objs:
        for Y in objs:
            fs = src.basis(X, Y)
            if not fs:
                continue
            for Z in objs:
                for g in src.basis(Y, Z):
                    for f in fs:
                        lhs = Fn.on_morphism(src.compose(g, f))
                        rhs = tgt.compose(Fn.on_morphism(g), Fn.on_morphism(f))
                        if lhs != rhs:
                            bad.append(("composition", (X, Y, Z), g.coords, f.coords))
    return FunctorReport(not bad, bad)


class NatTrans:
    """A natural transformation source ⇒ target, given by its components."""

    def __init__(self, source: Functor, target: Functor, component: Callable[[Hashable], Mor], name: str = "α"):
        self.source, self.target, self.name = source, target, name
        self._component = component
        self._cache: dict = {}

    @property
    def category(self) -> LinearCategory:
        return self.source.target

    def at(self, X) -> Mor:
        out = self._cache.get(X)
        if out is None:
            out = self._component(X)
            exp = (self.source.on_object(X), self.target.on_object(X))
            if (out.source, out.target) != exp:
                raise MalformedInputError(
                    f"component {self.name}({X!r}) has endpoints {(out.source, out.target)!r}, expected {exp!r}")
            self._cache[X] = out
        return out

    __getitem__ = at

    def __repr__(self):
        return f"<NatTrans {self.name}: {self.source.name} => {self.target.name}>"


def identity_nat(Fn: Functor) -> NatTrans:
    return NatTrans(Fn, Fn, lambda X: Fn.target.identity(Fn.on_object(X)), name=f"1_{Fn.name}")


def vcompose(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """β∘α (vertical)."""
    cat = alpha.category
    return NatTrans(alpha.source, beta.target, lambda X: cat.compose(beta.at(X), alpha.at(X)),
                    name=f"{beta.name}∘{alpha.name}")


def whisker_right(alpha: NatTrans, H: Functor) -> NatTrans:
    """αH, with components α_{H(X)}."""
    return NatTrans(compose_functors(alpha.source, H), compose_functors(alpha.target, H),
                    lambda X: alpha.at(H.on_object(X)), name=f"{alpha.name}{H.name}")


def whisker_left(K: Functor, alpha: NatTrans) -> NatTrans:
    """Kα, with components K(α_X)."""
    return NatTrans(compose_functors(K, alpha.source), compose_functors(K, alpha.target),
                    lambda X: K.on_morphism(alpha.at(X)), name=f"{K.name}{alpha.name}")


def scale_nat(c, alpha: NatTrans) -> NatTrans:
    cat = alpha.category
    return NatTrans(alpha.source, alpha.target, lambda X: cat.scale(c, alpha.at(X)), name=f"{c}{alpha.name}")


def inverse_nat(alpha: NatTrans) -> NatTrans:
    cat = alpha.category

    def comp(X):
        inv = cat.inverse(alpha.at(X))
        if inv is None:
            raise ValueError(f"{alpha.name}({X!r}) is not invertible")
        return inv

    return NatTrans(alpha.target, alpha.source, comp, name=f"{alpha.name}^-1")


def check_naturality(alpha: NatTrans, objects) -> FunctorReport:
    """Every naturality square on every Hom basis element between listed objects."""
    src_cat = alpha.source.source
    cat = alpha.category
    bad = []
    for X in objects:
        for Y in objects:
            for f in src_cat.basis(X, Y):
                lhs = cat.compose(alpha.at(Y), alpha.source.on_morphism(f))
                rhs = cat.compose(alpha.target.on_morphism(f), alpha.at(X))
                if lhs != rhs:
                    bad.append((X, Y, f.coords))
    return FunctorReport(not bad, bad)


def nat_equal(alpha: NatTrans, beta: NatTrans, objects) -> list:
    """Objects where the components differ (empty list means equal)."""
    return [X for X in objects if alpha.at(X) != beta.at(X)]


def is_nat_iso(alpha: NatTrans, objects) -> bool:
    return all(alpha.category.is_iso(alpha.at(X)) for X in objects)
