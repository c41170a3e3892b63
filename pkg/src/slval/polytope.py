"""Canonical V-representation polytopes with exact predicates.

A polytope is stored as its extreme points, deduplicated and sorted, so
structural equality is geometric equality.  The empty polytope is a
first-class value.  Halfspace descriptions are derived on demand by
brute-force facet enumeration, which is exact and fast enough for the
intended scale (ambient dimension <= 4, at most 12 vertices).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .exactnum import ZERO, Scalar
from .linalg import (
    Matrix,
    Vector,
    det,
    kernel_basis,
    matrix_rank,
    solve_any,
)


class EmptyPolytopeError(ValueError):
    """Operation needs a nonempty polytope."""


class IncomparableHullsError(ValueError):
    """Neither affine hull contains the other."""


class Halfspace:
    """Closed halfspace {x : <normal, x> <= offset}."""

    __slots__ = ("normal", "offset")

    normal: Vector
    offset: Scalar

    def __init__(self, normal: Vector, offset) -> None:
        if normal.is_zero():
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", Scalar._coerce(offset))

    def __setattr__(self, name, value):
        raise AttributeError("Halfspace is immutable")

    def excess(self, x: Vector) -> Scalar:
        return self.normal.dot(x) - self.offset

    def side(self, x: Vector) -> int:
        """-1 strictly inside, 0 on the boundary, +1 strictly outside."""
        return self.excess(x).sign()

    def complement(self) -> Halfspace:
        return Halfspace(-self.normal, -self.offset)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Halfspace)
            and self.normal == other.normal
            and self.offset == other.offset
        )

    def __hash__(self) -> int:
        return hash((self.normal, self.offset))

    def __repr__(self) -> str:
        return f"Halfspace({self.normal!r}, {self.offset})"


class Polytope:
    """Convex hull of finitely many points, in canonical vertex form.

    Build through from_points unless the points are already known to be
    the extreme points; the constructor only sorts and deduplicates.
    """

    __slots__ = ("ambient_dim", "vertices")

    ambient_dim: int
    vertices: tuple[Vector, ...]

    def __init__(self, ambient_dim: int, vertices: Iterable[Vector] = ()) -> None:
        if ambient_dim < 1:
            raise ValueError("ambient dimension must be >= 1")
        unique = dict.fromkeys(vertices)
        for v in unique:
            if len(v) != ambient_dim:
                raise ValueError("vertex dimension does not match ambient_dim")
        ordered = tuple(sorted(unique, key=Vector.sort_key))
        _common_discriminant(ordered)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "vertices", ordered)

    def __setattr__(self, name, value):
        raise AttributeError("Polytope is immutable")

    @classmethod
    def empty(cls, ambient_dim: int) -> Polytope:
        return cls(ambient_dim, ())

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polytope)
            and self.ambient_dim == other.ambient_dim
            and self.vertices == other.vertices
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self) -> str:
        body = ", ".join(repr(list(map(str, v))) for v in self.vertices)
        return f"Polytope(n={self.ambient_dim}, vertices=[{body}])"


def _common_discriminant(vectors: Sequence[Vector]) -> int:
    d = 0
    for v in vectors:
        for c in v:
            if c.d != 0:
                if d == 0:
                    d = c.d
                elif c.d != d:
                    raise ValueError("vertices mix distinct quadratic fields")
    return d


def field_discriminant(P: Polytope) -> int:
    return _common_discriminant(P.vertices)


def origin(n: int) -> Vector:
    return Vector.zero(n)


# -- membership ----------------------------------------------------------


def _affine_coords(points: Sequence[Vector]) -> tuple[Vector, list[Vector], list[list[Scalar]]]:
    """Base point, independent direction basis, and coordinates of every point."""
    base = points[0]
    dirs: list[Vector] = []
    for p in points[1:]:
        delta = p - base
        if matrix_rank([list(v) for v in dirs + [delta]]) > len(dirs):
            dirs.append(delta)
    coords = []
    rows = [[d[i] for d in dirs] for i in range(len(base))]
    for p in points:
        sol = solve_any(rows, list(p - base))
        coords.append(sol)
    return base, dirs, coords


def _coords_in_frame(base: Vector, dirs: list[Vector], x: Vector) -> list[Scalar] | None:
    if not dirs:
        return [] if (x - base).is_zero() else None
    rows = [[d[i] for d in dirs] for i in range(len(base))]
    return solve_any(rows, list(x - base))


def _supporting(coords: Sequence[Sequence[Scalar]], k: int) -> dict:
    """Facet halfspaces of a rank-k point configuration, in its own coordinates.

    Returns {incident index frozenset: (normal w, offset c)} with
    <w, x> <= c valid on every point.  Every facet carries k affinely
    independent configuration points, so enumerating the hyperplanes
    spanned by k-subsets and keeping the one-sided ones finds all facets.
    """
    pts = [Vector(c) for c in coords]
    m = len(pts)
    found: dict[frozenset[int], tuple[Vector, Scalar]] = {}
    for subset in combinations(range(m), k):
        first = pts[subset[0]]
        rows = [list(pts[i] - first) for i in subset[1:]]
        kernel = kernel_basis(rows, k)
        if len(kernel) != 1:
            continue
        w = kernel[0]
        c = w.dot(first)
        signs = []
        has_pos = has_neg = False
        for t in pts:
            s = (w.dot(t) - c).sign()
            if s > 0:
                has_pos = True
            elif s < 0:
                has_neg = True
            if has_pos and has_neg:
                break
            signs.append(s)
        if has_pos and has_neg:
            continue
        if has_pos:
            w, c = -w, -c
            signs = [-s for s in signs]
        incident = frozenset(i for i, s in enumerate(signs) if s == 0)
        if incident not in found:
            found[incident] = (w, c)
    return found


def from_points(points: Iterable, ambient_dim: int | None = None) -> Polytope:
    """Canonical hull: keeps exactly the extreme points of the input.

    A point is extreme iff its incident facet normals span the full rank
    of the configuration, so one facet enumeration settles every point.
    """
    pts = [p if isinstance(p, Vector) else Vector(p) for p in points]
    if not pts:
        if ambient_dim is None:
            raise ValueError("empty point set needs an explicit ambient_dim")
        return Polytope.empty(ambient_dim)
    n = len(pts[0])
    if ambient_dim is not None and ambient_dim != n:
        raise ValueError("points do not match the requested ambient_dim")
    if any(len(p) != n for p in pts):
        raise ValueError("points of mixed dimension")
    unique = list(dict.fromkeys(pts))
    if len(unique) == 1:
        return Polytope(n, unique)
    _, dirs, coords = _affine_coords(unique)
    k = len(dirs)
    supporting = _supporting(coords, k)
    active: dict[int, list[list[Scalar]]] = {i: [] for i in range(len(unique))}
    for incident, (w, _) in supporting.items():
        row = list(w)
        for i in incident:
            active[i].append(row)
    keep = [
        p
        for i, p in enumerate(unique)
        if len(active[i]) >= k and matrix_rank(active[i]) == k
    ]
    return Polytope(n, keep)


@lru_cache(maxsize=None)
def _frame(P: Polytope):
    base, dirs, coords = _affine_coords(P.vertices)
    return base, tuple(dirs), tuple(tuple(c) for c in coords)


def dim(P: Polytope) -> int:
    if P.is_empty:
        raise EmptyPolytopeError("dimension of the empty polytope is undefined")
    return len(_frame(P)[1])


def in_affine_hull(P: Polytope, x: Vector) -> bool:
    if P.is_empty:
        return False
    base, dirs, _ = _frame(P)
    return _coords_in_frame(base, list(dirs), x) is not None


@lru_cache(maxsize=None)
def contains(P: Polytope, x: Vector) -> bool:
    if P.is_empty:
        return False
    if len(x) != P.ambient_dim:
        raise ValueError("point dimension does not match the polytope")
    if not in_affine_hull(P, x):
        return False
    if dim(P) == 0:
        return True
    return all(h.excess(x).sign() <= 0 for h, _ in _facet_data(P))


@lru_cache(maxsize=None)
def _facet_data(P: Polytope) -> tuple[tuple[Halfspace, frozenset[int]], ...]:
    """Supporting halfspace and incident vertex index set of every facet."""
    k = dim(P)
    if k < 1:
        raise ValueError("facet enumeration needs dim >= 1")
    n = P.ambient_dim
    if k == n:
        supporting = _supporting([list(v) for v in P.vertices], k)
        items = [(Halfspace(w, c), incident) for incident, (w, c) in supporting.items()]
    else:
        base, frame_dirs, frame_coords = _frame(P)
        supporting = _supporting(frame_coords, k)
        items = []
        for incident, (w, c) in supporting.items():
            # lift the in-hull normal to an ambient functional u solving
            # <u, dir_j> = w_j; any solution agrees with w on aff P
            lift = solve_any([list(d) for d in frame_dirs], list(w))
            normal = Vector(lift)
            items.append((Halfspace(normal, normal.dot(base) + c), incident))
    items.sort(key=lambda item: sorted(item[1]))
    return tuple(items)


@lru_cache(maxsize=None)
def facets(P: Polytope) -> tuple[tuple[Halfspace, Polytope], ...]:
    """All (dim-1)-faces as polytopes with their supporting halfspaces."""
    return tuple(
        (h, Polytope(P.ambient_dim, [P.vertices[i] for i in incident]))
        for h, incident in _facet_data(P)
    )


@lru_cache(maxsize=None)
def _edges(P: Polytope) -> tuple[tuple[int, int], ...]:
    """Vertex index pairs spanning 1-faces.

    The smallest face containing two vertices is the intersection of all
    facets containing both; the pair is an edge iff that intersection
    holds no other vertex.
    """
    k = dim(P)
    if k < 1:
        return ()
    if k == 1:
        return ((0, 1),)
    incidences = [incident for _, incident in _facet_data(P)]
    out = []
    for i, j in combinations(range(len(P.vertices)), 2):
        shared = [inc for inc in incidences if i in inc and j in inc]
        if shared and len(frozenset.intersection(*shared)) == 2:
            out.append((i, j))
    return tuple(out)


def relint_contains_origin(P: Polytope) -> bool:
    if P.is_empty:
        return False
    zero = origin(P.ambient_dim)
    if dim(P) == 0:
        return P.vertices[0] == zero
    if not in_affine_hull(P, zero):
        return False
    return all(halfspace.offset.sign() > 0 for halfspace, _ in _facet_data(P))


def clip(P: Polytope, H: Halfspace) -> Polytope:
    """P cut down to the halfspace, canonicalized.

    Kept vertices stay extreme, and a straddling edge meets the cut
    hyperplane in a single new vertex, so the result needs no pruning.
    """
    if P.is_empty:
        return P
    if len(H.normal) != P.ambient_dim:
        raise ValueError("halfspace dimension does not match the polytope")
    excesses = [H.excess(v) for v in P.vertices]
    signs = [e.sign() for e in excesses]
    if all(s <= 0 for s in signs):
        return P
    kept = [v for v, s in zip(P.vertices, signs) if s <= 0]
    if not kept:
        return Polytope.empty(P.ambient_dim)
    crossing = []
    for i, j in _edges(P):
        if signs[i] * signs[j] < 0:
            vi, vj = P.vertices[i], P.vertices[j]
            t = excesses[i] / (excesses[i] - excesses[j])
            crossing.append(vi + (vj - vi).scale(t))
    return Polytope(P.ambient_dim, kept + crossing)


def cone_hull(P: Polytope) -> Polytope:
    """Hull of the polytope together with the origin."""
    zero = origin(P.ambient_dim)
    if contains(P, zero):
        return P
    return from_points(list(P.vertices) + [zero], P.ambient_dim)


def visible_facets(P: Polytope) -> tuple[Polytope, ...]:
    """Facets whose supporting inequality fails strictly at the origin.

    A facet lying on a hyperplane through the origin is not visible.
    """
    n = P.ambient_dim
    if P.is_empty or dim(P) != n:
        raise ValueError("visible facets need a full-dimensional polytope")
    if contains(P, origin(n)):
        raise ValueError("visible facets need 0 outside the polytope")
    return tuple(F for halfspace, F in facets(P) if halfspace.offset.sign() < 0)


def _affine_equalities(P: Polytope) -> list[Halfspace]:
    """Halfspace pairs pinning the affine hull of P."""
    n = P.ambient_dim
    base, dirs, _ = _frame(P)
    constraints = []
    for w in kernel_basis([list(d) for d in dirs], n):
        b = w.dot(base)
        constraints.append(Halfspace(w, b))
        constraints.append(Halfspace(-w, -b))
    return constraints


def _intersect_unchecked(P: Polytope, Q: Polytope) -> Polytope:
    if P.is_empty or Q.is_empty:
        return Polytope.empty(P.ambient_dim)
    big, small = (P, Q) if dim(P) >= dim(Q) else (Q, P)
    if dim(small) == 0:
        point = small.vertices[0]
        return small if contains(big, point) else Polytope.empty(P.ambient_dim)
    result = big
    if dim(big) < P.ambient_dim or dim(small) < P.ambient_dim:
        for constraint in _affine_equalities(small):
            result = clip(result, constraint)
            if result.is_empty:
                return result
    for halfspace, _ in _facet_data(small):
        result = clip(result, halfspace)
        if result.is_empty:
            return result
    return result


def intersect(P: Polytope, Q: Polytope) -> Polytope:
    """Exact intersection; the affine hulls must be nested or equal."""
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if P.is_empty or Q.is_empty:
        return Polytope.empty(P.ambient_dim)
    p_in_q = all(in_affine_hull(Q, v) for v in P.vertices)
    q_in_p = all(in_affine_hull(P, v) for v in Q.vertices)
    if not p_in_q and not q_in_p:
        raise IncomparableHullsError("affine hulls are incomparable")
    return _intersect_unchecked(P, Q)


def transform(A: Matrix, P: Polytope) -> Polytope:
    """Image under an invertible linear map; extreme points stay extreme."""
    if det(A).is_zero():
        raise ValueError("transform needs an invertible matrix")
    return Polytope(P.ambient_dim, [A @ v for v in P.vertices])


def translate(P: Polytope, t: Vector) -> Polytope:
    if len(t) != P.ambient_dim:
        raise ValueError("translation dimension does not match the polytope")
    return Polytope(P.ambient_dim, [v + t for v in P.vertices])


# -- serialization -------------------------------------------------------


def to_json(P: Polytope) -> dict:
    return {
        "ambient_dim": P.ambient_dim,
        "field_d": field_discriminant(P),
        "vertices": [[str(c) for c in v] for v in P.vertices],
    }


def from_json(obj: dict) -> Polytope:
    try:
        n = int(obj["ambient_dim"])
        d = int(obj["field_d"])
        raw = obj["vertices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad polytope object: {exc}") from None
    points = []
    for row in raw:
        coords = [Scalar.parse(text) for text in row]
        for c in coords:
            if c.d not in (0, d):
                raise ValueError(f"vertex scalar {c} outside declared field sqrt({d})")
        points.append(Vector(coords))
    return from_points(points, n)
