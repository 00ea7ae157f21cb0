"""Immutable multisets, the token-counting backbone of the toolkit.

Markings, arc weights, and inscription values are all finite multisets.
Instances are hashable so they can serve as search-space keys; iteration
order is insertion order, so anything user-visible must sort explicitly.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from typing import Hashable, Iterator, TypeVar

K = TypeVar("K", bound=Hashable)


class Multiset(Mapping[K, int]):
    """A frozen multiset: mapping from elements to positive counts."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, items: Iterable[K] | Mapping[K, int] = ()):
        counts: dict[K, int] = {}
        if isinstance(items, Mapping):
            for key, n in items.items():
                if n < 0:
                    raise ValueError(f"negative multiplicity {n} for {key!r}")
                if n > 0:
                    counts[key] = counts.get(key, 0) + n
        else:
            for key in items:
                counts[key] = counts.get(key, 0) + 1
        object.__setattr__(self, "_counts", counts)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, counts: dict[K, int]) -> "Multiset[K]":
        ms = object.__new__(cls)
        object.__setattr__(ms, "_counts", counts)
        object.__setattr__(ms, "_hash", None)
        return ms

    def __getitem__(self, key: K) -> int:
        return self._counts.get(key, 0)

    def __iter__(self) -> Iterator[K]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __contains__(self, key: object) -> bool:
        return key in self._counts

    def total(self) -> int:
        """Number of tokens, multiplicities included."""
        return sum(self._counts.values())

    def elements(self) -> Iterator[K]:
        """Iterate elements with repetition."""
        for key, n in self._counts.items():
            for _ in range(n):
                yield key

    def __le__(self, other: "Multiset[K]") -> bool:
        return all(other[k] >= n for k, n in self._counts.items())

    def __lt__(self, other: "Multiset[K]") -> bool:
        return self <= other and self != other

    def __add__(self, other: "Multiset[K]") -> "Multiset[K]":
        counts = dict(self._counts)
        for k, n in other._counts.items():
            counts[k] = counts.get(k, 0) + n
        return Multiset._raw(counts)

    def __sub__(self, other: "Multiset[K]") -> "Multiset[K]":
        counts = dict(self._counts)
        for k, n in other._counts.items():
            left = counts.get(k, 0) - n
            if left < 0:
                raise ValueError(f"cannot remove {n} of {k!r}, only {counts.get(k, 0)} present")
            if left == 0:
                counts.pop(k, None)
            else:
                counts[k] = left
        return Multiset._raw(counts)

    def deficiencies(self, other: "Multiset[K]") -> tuple[K, ...]:
        """Elements of self not covered by other (for diagnostics)."""
        return tuple(k for k, n in self._counts.items() if other[k] < n)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multiset):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(frozenset(self._counts.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {n}" for k, n in self._counts.items())
        return f"Multiset({{{inner}}})"


EMPTY: Multiset = Multiset()
