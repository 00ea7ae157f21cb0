"""Incidence matrix, the marking equation, and place invariants.

All arithmetic is exact: incidence entries are Python ints and the
invariant basis comes from rational Gauss-Jordan elimination, so the
results are integer statements, never approximations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .errors import StructuralError
from .net import Marking, Net, fire_sequence


@dataclass(frozen=True)
class IncidenceMatrix:
    """entry[p][t] = post(p,t) - pre(p,t), rows/cols in declaration order."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def entry(self, place: str, trans: str) -> int:
        return self.entries[self.rows.index(place)][self.cols.index(trans)]

    def column(self, trans: str) -> tuple[int, ...]:
        j = self.cols.index(trans)
        return tuple(row[j] for row in self.entries)


@dataclass(frozen=True)
class InvariantVector:
    """Integer place weighting with weights^T * C = 0.

    Canonical form: nonzero entries coprime, first nonzero positive.
    `places` fixes the coordinate order (the net's declaration order).
    """

    places: tuple[str, ...]
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.places) != len(self.coeffs):
            raise StructuralError("invariant vector length mismatch")
        if not any(self.coeffs):
            raise StructuralError("invariant vector must not be all zero")

    @property
    def weights(self) -> dict[str, int]:
        return {p: c for p, c in zip(self.places, self.coeffs) if c}

    def weight(self, place: str) -> int:
        try:
            return self.coeffs[self.places.index(place)]
        except ValueError:
            return 0

    def value(self, m: Marking) -> int:
        """Weighted token count of a marking."""
        return sum(c * m[p] for p, c in zip(self.places, self.coeffs))

    def render(self) -> str:
        """Human-readable sum, terms in place declaration order."""
        parts: list[str] = []
        for p, c in zip(self.places, self.coeffs):
            if not c:
                continue
            if not parts:
                sign = "-" if c < 0 else ""
                parts.append(f"{sign}{abs(c)}·{p}")
            else:
                parts.append(f"{'-' if c < 0 else '+'} {abs(c)}·{p}")
        return " ".join(parts)


def incidence(net: Net) -> IncidenceMatrix:
    """The net's incidence matrix; self-loop contributions cancel."""
    entries = tuple(
        tuple(net.post_of(t)[p] - net.pre_of(t)[p] for t in net.transitions)
        for p in net.places
    )
    return IncidenceMatrix(net.places, net.transitions, entries)


def state_equation_check(
    net: Net, m0: Marking, m: Marking, parikh: Mapping[str, int]
) -> bool:
    """True iff m = m0 + C·parikh over the integers."""
    for t in parikh:
        if t not in net.transitions:
            raise StructuralError(f"parikh vector mentions unknown transition {t!r}")
    for p in net.places:
        delta = sum(
            parikh.get(t, 0) * (net.post_of(t)[p] - net.pre_of(t)[p])
            for t in net.transitions
        )
        if m[p] != m0[p] + delta:
            return False
    return True


def _normalize(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    denom_lcm = 1
    for x in vec:
        if x:
            denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


def place_invariants(net: Net) -> list[InvariantVector]:
    """Basis of the left integer kernel of the incidence matrix.

    Computed by rational Gauss-Jordan elimination on C^T; each basis
    vector is normalized and the list is sorted lexicographically by
    coefficient tuple (place declaration order).
    """
    places = net.places
    num_p = len(places)
    mat = incidence(net)
    # rows of A are transitions, unknowns are place weights
    a = [
        [Fraction(mat.entries[p][t]) for p in range(num_p)]
        for t in range(len(net.transitions))
    ]
    pivot_cols: list[int] = []
    row = 0
    for col in range(num_p):
        pivot = next((r for r in range(row, len(a)) if a[r][col]), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        factor = a[row][col]
        a[row] = [x / factor for x in a[row]]
        for r in range(len(a)):
            if r != row and a[r][col]:
                scale = a[r][col]
                a[r] = [x - scale * y for x, y in zip(a[r], a[row])]
        pivot_cols.append(col)
        row += 1
        if row == len(a):
            break
    free_cols = [c for c in range(num_p) if c not in pivot_cols]
    basis: list[tuple[int, ...]] = []
    for fc in free_cols:
        vec = [Fraction(0)] * num_p
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivot_cols):
            vec[pc] = -a[r][fc]
        basis.append(_normalize(vec))
    basis.sort()
    return [InvariantVector(places, coeffs) for coeffs in basis]


def check_invariant(
    net: Net, v: InvariantVector, m0: Marking, trace: Sequence[str]
) -> bool:
    """True iff the weighted token count stays constant along the trace."""
    values = {v.value(m) for m in fire_sequence(net, m0, trace)}
    return len(values) == 1
