"""Basis valuations and the classified five-term formula.

The five basis functionals are the Euler characteristic, the signed
relative-interior origin indicator (-1)^{dim P} when 0 lies in relint P,
the ambient volume, the plain origin indicator, and the volume of the
hull of P with the origin.  Every valuation in scope is the combination

    c0 * euler + c0p * relint_sign + psi(volume) + d0 * origin + phi(cone_volume)

with psi and phi additive solutions of the Cauchy equation.  All
valuations take the value 0 on the empty polytope.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .exactnum import (
    ONE,
    ZERO,
    CauchySolution,
    Linear,
    RationalPart,
    Scalar,
    cauchy_eval,
)
from .polytope import (
    IncomparableHullsError,
    Polytope,
    cone_hull,
    contains,
    dim,
    intersect,
    origin,
    relint_contains_origin,
)
from .triangulate import volume

MAX_UNION_PARTS = 12


def euler_char(P: Polytope) -> Scalar:
    return ZERO if P.is_empty else ONE


def relint_sign(P: Polytope) -> Scalar:
    if P.is_empty or not relint_contains_origin(P):
        return ZERO
    return ONE if dim(P) % 2 == 0 else -ONE


def origin_indicator(P: Polytope) -> Scalar:
    if P.is_empty:
        return ZERO
    return ONE if contains(P, origin(P.ambient_dim)) else ZERO


def cone_volume(P: Polytope) -> Scalar:
    if P.is_empty:
        return ZERO
    return volume(cone_hull(P))


#: basis order fixed across fitting and reports
BASIS_VALUATIONS = (
    ("euler_char", euler_char),
    ("relint_sign", relint_sign),
    ("volume", volume),
    ("origin_indicator", origin_indicator),
    ("cone_volume", cone_volume),
)


@dataclass(frozen=True)
class ClassifiedValuation:
    c0: Scalar
    c0p: Scalar
    d0: Scalar
    psi: CauchySolution
    phi: CauchySolution

    @classmethod
    def linear(cls, c0, c0p, cn, d0, dn) -> ClassifiedValuation:
        """Measurable case: psi and phi are plain linear maps."""
        return cls(
            c0=Scalar._coerce(c0),
            c0p=Scalar._coerce(c0p),
            d0=Scalar._coerce(d0),
            psi=Linear(cn),
            phi=Linear(dn),
        )


def evaluate(V: ClassifiedValuation, P: Polytope) -> Scalar:
    if P.is_empty:
        return ZERO
    return (
        V.c0 * euler_char(P)
        + V.c0p * relint_sign(P)
        + cauchy_eval(V.psi, volume(P))
        + V.d0 * origin_indicator(P)
        + cauchy_eval(V.phi, cone_volume(P))
    )


@lru_cache(maxsize=None)
def _intersection_lattice(parts: tuple[Polytope, ...]):
    """All nonempty-index intersections, keyed by index frozenset."""
    lattice: dict[frozenset[int], Polytope] = {}
    m = len(parts)
    for size in range(1, m + 1):
        for subset in combinations(range(m), size):
            key = frozenset(subset)
            if size == 1:
                lattice[key] = parts[subset[0]]
                continue
            prev = lattice[key - {subset[-1]}]
            if prev.is_empty:
                lattice[key] = prev
                continue
            try:
                lattice[key] = intersect(prev, parts[subset[-1]])
            except IncomparableHullsError as exc:
                raise ValueError(
                    f"intersection over parts {tuple(sorted(key))} is not supported: {exc}"
                ) from None
    return lattice


def evaluate_union(V: ClassifiedValuation, parts: list[Polytope]) -> Scalar:
    """Inclusion-exclusion value of a finite union, all terms exact."""
    parts = tuple(parts)
    if not parts:
        return ZERO
    if len(parts) > MAX_UNION_PARTS:
        raise ValueError(f"at most {MAX_UNION_PARTS} parts supported, got {len(parts)}")
    lattice = _intersection_lattice(parts)
    total = ZERO
    for key, piece in lattice.items():
        term = evaluate(V, piece)
        if len(key) % 2 == 1:
            total = total + term
        else:
            total = total - term
    return total


# -- serialization -------------------------------------------------------


def _solution_to_json(f: CauchySolution) -> dict:
    if isinstance(f, Linear):
        return {"kind": "linear", "lambda": str(f.coefficient)}
    if isinstance(f, RationalPart):
        return {"kind": "rational_part"}
    raise ValueError(f"unknown Cauchy solution {f!r}")


def _solution_from_json(obj: dict) -> CauchySolution:
    kind = obj.get("kind")
    if kind == "linear":
        return Linear(Scalar.parse(obj["lambda"]))
    if kind == "rational_part":
        return RationalPart()
    raise ValueError(f"unknown Cauchy solution kind {kind!r}")


def to_json(V: ClassifiedValuation) -> dict:
    return {
        "c0": str(V.c0),
        "c0p": str(V.c0p),
        "d0": str(V.d0),
        "psi": _solution_to_json(V.psi),
        "phi": _solution_to_json(V.phi),
    }


def from_json(obj: dict) -> ClassifiedValuation:
    try:
        return ClassifiedValuation(
            c0=Scalar.parse(obj["c0"]),
            c0p=Scalar.parse(obj["c0p"]),
            d0=Scalar.parse(obj["d0"]),
            psi=_solution_from_json(obj["psi"]),
            phi=_solution_from_json(obj["phi"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad valuation object: {exc}") from None
