"""Finite permutations of ``{1..n}`` and their action on rational functions."""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from hilbert90.errors import DimensionError, DomainError, ParseError
from hilbert90.exactfield.poly import MultiPoly
from hilbert90.exactfield.ratfunc import RatFunc


class FinPermutation:
    """A bijection of ``{1..n}``; ``images[i-1]`` is the image of ``i``.

    Composition ``p * q`` is ``p ∘ q`` (apply ``q`` first).
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise DomainError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, n: int) -> "FinPermutation":
        return cls(range(1, n + 1))

    @classmethod
    def transposition(cls, i: int, j: int, n: int) -> "FinPermutation":
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise DomainError(f"bad transposition ({i} {j}) at level {n}")
        im = list(range(1, n + 1))
        im[i - 1], im[j - 1] = j, i
        return cls(im)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "FinPermutation":
        im = list(range(1, n + 1))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = list(cyc)
            for a in cyc:
                if not 1 <= a <= n:
                    raise DimensionError(f"{a} is outside 1..{n}")
                if a in seen:
                    raise DomainError("cycles are not disjoint")
                seen.add(a)
            for k, a in enumerate(cyc):
                im[a - 1] = cyc[(k + 1) % len(cyc)]
        return cls(im)

    @classmethod
    def parse(cls, text: str, n: int) -> "FinPermutation":
        """Cycle notation such as ``(1 2 3)(4 5)``; ``()`` or ``id`` is the identity."""
        t = text.strip()
        if t in ("", "()", "id", "e"):
            return cls.identity(n)
        if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\))+", t):
            raise ParseError(f"bad cycle notation: {text!r}")
        cycles = [[int(a) for a in re.split(r"[\s,]+", c.strip())] for c in re.findall(r"\(([^)]*)\)", t)]
        return cls.from_cycles(cycles, n)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "FinPermutation") -> "FinPermutation":
        if self.n != other.n:
            raise DimensionError("composing permutations at different levels")
        im = self.images
        return FinPermutation._raw(tuple(im[j - 1] for j in other.images))

    @classmethod
    def _raw(cls, images: tuple[int, ...]) -> "FinPermutation":
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    def inverse(self) -> "FinPermutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return FinPermutation._raw(tuple(inv))

    def __pow__(self, k: int) -> "FinPermutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = FinPermutation.identity(self.n)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, FinPermutation) and self.images == other.images

    def __lt__(self, other: "FinPermutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, 1))

    def support(self) -> set[int]:
        return {i for i, j in enumerate(self.images, 1) if i != j}

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen or self.images[start - 1] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start - 1]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j - 1]
            out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        s = 1
        for c in self.cycles():
            if len(c) % 2 == 0:
                s = -s
        return s

    def lift(self, m: int) -> "FinPermutation":
        """Extend by fixed points to level ``m``."""
        if m < self.n:
            if any(self.images[i] != i + 1 for i in range(m, self.n)):
                raise DimensionError("permutation moves points beyond the target level")
            return FinPermutation(self.images[:m])
        return FinPermutation._raw(self.images + tuple(range(self.n + 1, m + 1)))

    def apply_to_set(self, s: Iterable[int]) -> frozenset[int]:
        return frozenset(self.images[i - 1] for i in s)

    def __repr__(self) -> str:
        return f"FinPermutation({list(self.images)})"

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def apply_permutation(p: FinPermutation, f):
    """Left action ``x_i -> x_{p(i)}`` on a ``RatFunc`` or ``MultiPoly``."""
    if p.n != f.nvars:
        raise DimensionError(f"permutation at level {p.n} acting on level {f.nvars}")
    if isinstance(f, RatFunc):
        return f.permute_variables(p.images)
    if isinstance(f, MultiPoly):
        return f.permute_variables(p.images)
    raise DomainError(f"cannot act on {type(f).__name__}")


def is_fixed_by(f, gens: Iterable[FinPermutation]) -> bool:
    return all(apply_permutation(g, f) == f for g in gens)


def adjacent_transposition(i: int, n: int) -> FinPermutation:
    """``s_i = (i i+1)``."""
    return FinPermutation.transposition(i, i + 1, n)
