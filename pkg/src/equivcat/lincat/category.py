"""Finite k-linear categories.

A category is anything implementing ``hom_dim``, ``_compose`` and
``_identity`` on coordinate tuples.  Morphisms are :class:`Mor` values:
a source, a target and the coordinates in the fixed basis of that Hom
space.  Derived categories (envelopes, equivariant objects, comodules,
idempotent completions) are lazy: any hashable object of the right shape
is accepted, and ``objects`` is only the designated finite list used by
exhaustive checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

from ..errors import MalformedInputError, PreconditionError
from . import linalg
from .field import Field


@dataclass(frozen=True)
class Mor:
    source: Hashable
    target: Hashable
    coords: tuple

    def __repr__(self):
        return f"Mor({self.source!r} -> {self.target!r}, {list(self.coords)})"


@dataclass(frozen=True)
class DirectSum:
    obj: Hashable
    summands: tuple
    injections: tuple
    projections: tuple


class LinearCategory:
    field: Field
    objects: tuple = ()
    name: str = "C"
    is_dg: bool = False

    # -- to be provided by subclasses -------------------------------------

    def hom_dim(self, X, Y) -> int:
        raise NotImplementedError

    def _compose(self, X, Y, Z, g: tuple, f: tuple) -> tuple:
        raise NotImplementedError

    def _identity(self, X) -> tuple:
        raise NotImplementedError

    def direct_sum(self, objs: Sequence) -> DirectSum:
        raise NotImplementedError(f"{type(self).__name__} has no direct sums")

    # -- generic helpers --------------------------------------------------

    def mor(self, X, Y, coords) -> Mor:
        coords = tuple(self.field(c) for c in coords)
        if len(coords) != self.hom_dim(X, Y):
            raise MalformedInputError(
                f"{len(coords)} coordinates given for a Hom space of dimension {self.hom_dim(X, Y)}"
            )
        return Mor(X, Y, coords)

    def identity(self, X) -> Mor:
        return Mor(X, X, tuple(self._identity(X)))

    def zero(self, X, Y) -> Mor:
        return Mor(X, Y, (self.field.zero,) * self.hom_dim(X, Y))

    def basis(self, X, Y) -> list[Mor]:
        cache = self.__dict__.setdefault("_basis_cache", {})
        out = cache.get((X, Y))
        if out is None:
            F = self.field
            n = self.hom_dim(X, Y)
            zero = [F.zero] * n
            out = []
            for j in range(n):
                v = list(zero)
                v[j] = F.one
                out.append(Mor(X, Y, tuple(v)))
            cache[(X, Y)] = out = tuple(out)
        return list(out)

    def compose(self, *mors: Mor) -> Mor:
        """``compose(h, g, f)`` is h∘g∘f."""
        out = mors[-1]
        for g in reversed(mors[:-1]):
            if g.source != out.target:
                raise PreconditionError(f"cannot compose {g.source!r} <- {out.target!r}")
            out = Mor(out.source, g.target, tuple(self._compose(out.source, out.target, g.target, g.coords, out.coords)))
        return out

    def add(self, *mors: Mor) -> Mor:
        F = self.field
        first = mors[0]
        acc = list(first.coords)
        for m in mors[1:]:
            if (m.source, m.target) != (first.source, first.target):
                raise PreconditionError("adding morphisms with different endpoints")
            acc = linalg.vadd(F, acc, m.coords)
        return Mor(first.source, first.target, tuple(acc))

    def sum(self, mors: Sequence[Mor], X, Y) -> Mor:
        return self.add(self.zero(X, Y), *mors) if mors else self.zero(X, Y)

    def scale(self, c, f: Mor) -> Mor:
        return Mor(f.source, f.target, tuple(linalg.vscale(self.field, self.field(c), f.coords)))

    def sub(self, f: Mor, g: Mor) -> Mor:
        return self.add(f, self.scale(-1, g))

    def is_zero(self, f: Mor) -> bool:
        return all(c == 0 for c in f.coords)

    def is_identity(self, f: Mor) -> bool:
        return f.source == f.target and f.coords == tuple(self._identity(f.source))

    def is_zero_object(self, X) -> bool:
        return self.hom_dim(X, X) == 0 or all(c == 0 for c in self._identity(X))

    def linear_map_matrix(self, X, Y, fn) -> list[list]:
        """Matrix (columns = images of basis) of a linear map out of Hom(X, Y)."""
        cols = [fn(b).coords for b in self.basis(X, Y)]
        if not cols:
            return []
        return linalg.from_columns(cols, len(cols[0]))

    def precompose_matrix(self, f: Mor, Z) -> list[list]:
        """Matrix of h ↦ h∘f on Hom(target f, Z)."""
        return self.linear_map_matrix(f.target, Z, lambda h: self.compose(h, f))

    def postcompose_matrix(self, g: Mor, X) -> list[list]:
        """Matrix of h ↦ g∘h on Hom(X, source g)."""
        return self.linear_map_matrix(X, g.source, lambda h: self.compose(g, h))

    def inverse(self, f: Mor) -> Mor | None:
        """Two-sided inverse of f, or None when f is not invertible."""
        cache = self.__dict__.setdefault("_inverse_cache", {})
        if f in cache:
            return cache[f]
        cache[f] = out = self._inverse(f)
        return out

    def _inverse(self, f: Mor) -> Mor | None:
        X, Y = f.source, f.target
        F = self.field
        n = self.hom_dim(Y, X)
        A1 = self.precompose_matrix(f, X)   # g ↦ g∘f, in End(X)
        A2 = self.postcompose_matrix(f, Y)  # g ↦ f∘g, in End(Y)
        rows = list(A1) + list(A2)
        rhs = list(self._identity(X)) + list(self._identity(Y))
        if not rows:
            return Mor(Y, X, ())
        sol = linalg.solve(F, rows, rhs, n)
        return None if sol is None else Mor(Y, X, tuple(sol))

    def is_iso(self, f: Mor) -> bool:
        return self.inverse(f) is not None

    def format_mor(self, f: Mor) -> list[str]:
        return [self.field.format(c) for c in f.coords]


class Presentation(LinearCategory):
    """A finite category given by Hom dimensions and structure constants.

    ``constants[(X, Y, Z)][k][i][j]`` is the k-th coordinate of
    (basis_i of Hom(Y, Z)) ∘ (basis_j of Hom(X, Y)).  Missing triples are
    zero; missing Hom pairs have dimension zero.
    """

    def __init__(self, field: Field, objects, dims: dict, constants: dict, identities: dict,
                 labels: dict | None = None, name: str = "C", ranks: dict | None = None):
        self.field = field
        self.objects = tuple(objects)
        self.name = name
        self.dims = {k: int(v) for k, v in dims.items() if v}
        self.labels = labels or {}
        self.ranks = ranks or {}
        objs = set(self.objects)
        for (X, Y) in self.dims:
            if X not in objs or Y not in objs:
                raise MalformedInputError(f"Hom({X!r},{Y!r}) mentions an unknown object")
        self.constants = {}
        for (X, Y, Z), c in constants.items():
            dz, dy, dx = self.hom_dim(X, Z), self.hom_dim(Y, Z), self.hom_dim(X, Y)
            if len(c) != dz or any(len(ck) != dy for ck in c) or any(len(cki) != dx for ck in c for cki in ck):
                raise MalformedInputError(
                    f"structure constants for ({X!r},{Y!r},{Z!r}) are not of shape {dz}x{dy}x{dx}"
                )
            self.constants[(X, Y, Z)] = [[[field(x) for x in cki] for cki in ck] for ck in c]
        self.identities = {}
        for X in self.objects:
            v = identities.get(X, [field.zero] * self.hom_dim(X, X))
            if len(v) != self.hom_dim(X, X):
                raise MalformedInputError(f"identity of {X!r} has wrong length")
            self.identities[X] = tuple(field(x) for x in v)

    def __repr__(self):
        return f"Presentation({self.name}, objects={list(self.objects)}, {self.field})"

    def hom_dim(self, X, Y) -> int:
        return self.dims.get((X, Y), 0)

    def _identity(self, X):
        return self.identities[X]

    def _compose(self, X, Y, Z, g, f):
        F = self.field
        dz = self.hom_dim(X, Z)
        c = self.constants.get((X, Y, Z))
        if c is None:
            return (F.zero,) * dz
        nz_g = [(i, gi) for i, gi in enumerate(g) if gi]
        nz_f = [(j, fj) for j, fj in enumerate(f) if fj]
        out = []
        for k in range(dz):
            ck = c[k]
            s = 0
            for i, gi in nz_g:
                cki = ck[i]
                for j, fj in nz_f:
                    if cki[j]:
                        s += cki[j] * gi * fj
            out.append(F.reduce(s))
        return tuple(out)

    def with_constant(self, triple, k, i, j, value) -> "Presentation":
        """Copy with one structure constant replaced (for negative tests)."""
        consts = {t: [[list(r) for r in ck] for ck in c] for t, c in self.constants.items()}
        X, Y, Z = triple
        if triple not in consts:
            consts[triple] = [[[self.field.zero] * self.hom_dim(X, Y) for _ in range(self.hom_dim(Y, Z))]
                              for _ in range(self.hom_dim(X, Z))]
        consts[triple][k][i][j] = self.field(value)
        return Presentation(self.field, self.objects, self.dims, consts, self.identities,
                            self.labels, self.name, self.ranks)

    @classmethod
    def from_matrices(cls, field: Field, objects: dict, hom_bases: dict, name: str = "C",
                      labels: dict | None = None) -> "Presentation":
        """Concrete category: objects are k^n, Homs are spans of given matrices.

        ``objects`` maps names to dimensions; ``hom_bases[(X, Y)]`` is a list
        of dim(Y) x dim(X) matrices.  Composition is matrix multiplication
        expressed back in the target basis; non-closure is a malformed input.
        """
        names = list(objects)
        spaces = {}
        for X in names:
            for Y in names:
                mats = [[[field(x) for x in row] for row in m] for m in hom_bases.get((X, Y), [])]
                for m in mats:
                    if len(m) != objects[Y] or any(len(r) != objects[X] for r in m):
                        raise MalformedInputError(f"matrix in Hom({X},{Y}) has the wrong shape")
                flat = [[x for row in m for x in row] for m in mats]
                spaces[(X, Y)] = (mats, linalg.Subspace(field, flat, objects[X] * objects[Y]))
        dims = {k: len(v[0]) for k, v in spaces.items()}
        constants, identities = {}, {}
        for X in names:
            n = objects[X]
            idflat = [x for row in linalg.identity(field, n) for x in row]
            c = spaces[(X, X)][1].coords(idflat)
            if c is None:
                raise MalformedInputError(f"identity of {X} is not in End({X})")
            identities[X] = c
        for X in names:
            for Y in names:
                for Z in names:
                    gmats, fmats = spaces[(Y, Z)][0], spaces[(X, Y)][0]
                    target = spaces[(X, Z)][1]
                    if not gmats or not fmats:
                        continue
                    c = [[[None] * len(fmats) for _ in gmats] for _ in range(target.dim)]
                    for i, gm in enumerate(gmats):
                        for j, fm in enumerate(fmats):
                            prod = linalg.matmul(field, gm, fm) if objects[Y] else linalg.zeros(field, objects[Z], objects[X])
                            flat = [x for row in prod for x in row]
                            coords = target.coords(flat)
                            if coords is None:
                                raise MalformedInputError(f"composition Hom({Y},{Z}) x Hom({X},{Y}) leaves Hom({X},{Z})")
                            for k in range(target.dim):
                                c[k][i][j] = coords[k]
                    constants[(X, Y, Z)] = c
        pres = cls(field, names, dims, constants, identities, labels, name, ranks=dict(objects))
        pres.matrices = {k: v[0] for k, v in spaces.items()}
        return pres


def matrix_category(field: Field, dims=(0, 1, 2), name: str | None = None) -> Presentation:
    """Full subcategory of k-vect on the spaces k^n, n in ``dims``.

    Hom(k^m, k^n) has the elementary-matrix basis E_{rc}, row-major.
    """
    objects = {f"k{n}": n for n in dims}
    bases = {}
    for X, m in objects.items():
        for Y, n in objects.items():
            mats = []
            for r in range(n):
                for c in range(m):
                    mats.append([[1 if (a, b) == (r, c) else 0 for b in range(m)] for a in range(n)])
            bases[(X, Y)] = mats
    return Presentation.from_matrices(field, objects, bases, name=name or f"vect{tuple(dims)}")


def discrete_category(field: Field, names, name: str = "D") -> Presentation:
    """Objects with End = k and no morphisms between distinct objects."""
    objects = {X: 1 for X in names}
    bases = {(X, X): [[[1]]] for X in names}
    return Presentation.from_matrices(field, objects, bases, name=name)


@dataclass
class ValidationReport:
    ok: bool
    checked: int = 0
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def validate_category(cat: LinearCategory, objects=None, max_violations: int = 50) -> ValidationReport:
    """Check unit and associativity laws on every basis element/triple."""
    objs = list(cat.objects if objects is None else objects)
    violations = []
    checked = 0
    for X in objs:
        for Y in objs:
            for f in cat.basis(X, Y):
                checked += 2
                if cat.compose(cat.identity(Y), f) != f:
                    violations.append(("left unit", X, Y, f.coords))
                if cat.compose(f, cat.identity(X)) != f:
                    violations.append(("right unit", X, Y, f.coords))
    for W in objs:
        for X in objs:
            fs = cat.basis(W, X)
            if not fs:
                continue
            for Y in objs:
                gs = cat.basis(X, Y)
                if not gs:
                    continue
                for Z in objs:
                    hs = cat.basis(Y, Z)
                    for a, h in enumerate(hs):
                        for b, g in enumerate(gs):
                            hg = cat.compose(h, g)
                            for c, f in enumerate(fs):
                                checked += 1
                                if cat.compose(hg, f) != cat.compose(h, cat.compose(g, f)):
                                    violations.append(("associativity", (W, X, Y, Z), (c, b, a)))
                                    if len(violations) >= max_violations:
                                        return ValidationReport(False, checked, violations)
    return ValidationReport(not violations, checked, violations)
