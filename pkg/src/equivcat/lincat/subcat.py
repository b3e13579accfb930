"""Categories whose Hom spaces are subspaces of a parent category's Hom spaces."""
from __future__ import annotations

from ..errors import ConsistencyError
from . import linalg
from .category import LinearCategory, Mor


class SubspaceCategory(LinearCategory):
    """Base for categories with Hom(X, Y) ⊆ Hom_parent(uX, uY).

    Subclasses provide ``underlying`` and either ``constraint_rows`` (the
    Hom space is its kernel) or ``_subspace_basis`` directly.  When the
    parent is a DG category the basis is chosen degree by degree, so every
    basis vector is homogeneous; the constraints must preserve degree.
    """

    def __init__(self, parent: LinearCategory, objects=(), name: str = "S"):
        self.parent = parent
        self.field = parent.field
        self.objects = tuple(objects)
        self.name = name
        self._spaces: dict = {}

    @property
    def is_dg(self) -> bool:
        return getattr(self.parent, "is_dg", False)

    def underlying(self, X):
        raise NotImplementedError

    def constraint_rows(self, X, Y) -> list[list]:
        raise NotImplementedError

    def _subspace_basis(self, X, Y) -> list[list]:
        uX, uY = self.underlying(X), self.underlying(Y)
        n = self.parent.hom_dim(uX, uY)
        rows = self.constraint_rows(X, Y)
        if not self.is_dg:
            return linalg.nullspace(self.field, rows, n)
        degs = self.parent.degrees(uX, uY)
        basis = []
        for d in sorted(set(degs)):
            cols = [c for c in range(n) if degs[c] == d]
            sub = [[r[c] for c in cols] for r in rows]
            for v in linalg.nullspace(self.field, sub, len(cols)):
                full = [self.field.zero] * n
                for c, x in zip(cols, v):
                    full[c] = x
                basis.append(full)
        return basis

    def hom_space(self, X, Y) -> linalg.Subspace:
        key = (X, Y)
        sp = self._spaces.get(key)
        if sp is None:
            n = self.parent.hom_dim(self.underlying(X), self.underlying(Y))
            sp = linalg.Subspace(self.field, self._subspace_basis(X, Y), n)
            self._spaces[key] = sp
        return sp

    def hom_dim(self, X, Y) -> int:
        return self.hom_space(X, Y).dim

    def _parent_identity(self, X) -> tuple:
        return self.parent._identity(self.underlying(X))

    def _identity(self, X):
        c = self.hom_space(X, X).coords(self._parent_identity(X))
        if c is None:
            raise ConsistencyError(f"identity of {X!r} is not in its Hom space")
        return tuple(c)

    def to_parent(self, f: Mor) -> Mor:
        sp = self.hom_space(f.source, f.target)
        return Mor(self.underlying(f.source), self.underlying(f.target), tuple(sp.vector(f.coords)))

    def contains(self, X, Y, g: Mor) -> bool:
        return self.hom_space(X, Y).contains(g.coords)

    def from_parent(self, X, Y, g: Mor) -> Mor:
        if (g.source, g.target) != (self.underlying(X), self.underlying(Y)):
            raise ValueError("parent morphism has the wrong endpoints")
        c = self.hom_space(X, Y).coords(g.coords)
        if c is None:
            raise ValueError(f"morphism is not in Hom({X!r}, {Y!r}) of {self.name}")
        return Mor(X, Y, tuple(c))

    def _compose(self, X, Y, Z, g, f):
        P = self.parent
        uX, uY, uZ = self.underlying(X), self.underlying(Y), self.underlying(Z)
        gv = self.hom_space(Y, Z).vector(g)
        fv = self.hom_space(X, Y).vector(f)
        h = P._compose(uX, uY, uZ, tuple(gv), tuple(fv))
        c = self.hom_space(X, Z).coords(h)
        if c is None:
            raise ConsistencyError(f"{self.name}: composite leaves the Hom subspace")
        return tuple(c)

    # DG structure inherited from the parent

    def degrees(self, X, Y) -> tuple:
        sp = self.hom_space(X, Y)
        pdeg = self.parent.degrees(self.underlying(X), self.underlying(Y))
        return tuple(next(pdeg[i] for i, x in enumerate(v) if x) for v in sp.basis)

    def _differential(self, X, Y, coords) -> tuple:
        sp = self.hom_space(X, Y)
        v = sp.vector(coords)
        dv = self.parent._differential(self.underlying(X), self.underlying(Y), tuple(v))
        c = sp.coords(dv)
        if c is None:
            raise ConsistencyError(f"{self.name}: Hom({X!r},{Y!r}) is not closed under d")
        return tuple(c)

    def differential(self, f: Mor) -> Mor:
        return Mor(f.source, f.target, self._differential(f.source, f.target, f.coords))
