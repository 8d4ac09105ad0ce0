"""Constant-time sampleable sets.

The recoloring procedures need sets that support membership tests,
insertion, deletion and uniform sampling cheaply.  A list with a
position index gives O(1) for all four (swap-with-last deletion);
iteration order is insertion-history dependent, so callers that need a
canonical order must sort explicitly.
"""

from __future__ import annotations

from random import Random
from typing import Hashable, Iterable, Iterator


class SampleSet:
    """Set with O(1) add/discard/contains and uniform sampling."""

    __slots__ = ("_items", "_pos")

    def __init__(self, items: Iterable = ()) -> None:
        self._items: list = []
        self._pos: dict = {}
        for x in items:
            self.add(x)

    def __contains__(self, x: Hashable) -> bool:
        return x in self._pos

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator:
        return iter(self._items)

    def __repr__(self) -> str:
        return f"SampleSet({self._items!r})"

    def add(self, x: Hashable) -> None:
        if x not in self._pos:
            self._pos[x] = len(self._items)
            self._items.append(x)

    def discard(self, x: Hashable) -> None:
        i = self._pos.pop(x, None)
        if i is None:
            return
        last = self._items.pop()
        if last is not x and last != x:
            self._items[i] = last
            self._pos[last] = i
        elif i < len(self._items):
            # x was not in the last slot but compared equal to it
            self._items[i] = last
            self._pos[last] = i

    def remove(self, x: Hashable) -> None:
        if x not in self._pos:
            raise KeyError(x)
        self.discard(x)

    def sample(self, rng: Random):
        """Uniform element; raises IndexError on an empty set."""
        if not self._items:
            raise IndexError("sample from an empty SampleSet")
        return self._items[rng.randrange(len(self._items))]

    def sorted(self) -> list:
        return sorted(self._items)
