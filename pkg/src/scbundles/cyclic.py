"""Circular permutations, necklaces, and the cyclic order engine.

Conventions, fixed here and relied on everywhere else:

* A necklace is an oriented circular word of colored beads.  The stored
  tuple is one turning of the circle; rotations are identified, and the
  canonical turning minimizes the pair (color word, id word).
* A circular permutation wears each color exactly once; its canonical
  turning starts at color 0.
* Face operator i deletes the bead(s) colored i and renumbers the higher
  colors down by one.  Degeneracy i inserts a duplicate right after the
  bead colored i: give the newcomer the value i + 1/2, then renumber.
  Both act the same way on linear permutations, so the quotient map from
  linear to circular words commutes with every operator.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterable, Iterator, Mapping

from .errors import (
    EnumerationBound,
    IncompatibleFamily,
    InconsistentTriples,
    LastColor,
    MismatchedCarriers,
)

__all__ = [
    "CircularPermutation",
    "Permutation",
    "Necklace",
    "c01",
    "enumerate_sc",
    "is_degenerate_sc",
    "default_enumeration_bound",
    "TripleOrderFamily",
    "insertion_extend",
    "kan_lifts",
    "kan_survey",
    "is_classical_necklace",
    "sc_normalized_homology",
]


def default_enumeration_bound() -> int:
    """Size ceiling for exhaustive circular-permutation enumeration.

    Read from the environment variable SC_MAX_K when set, else 7.
    """
    raw = os.environ.get("SC_MAX_K")
    if raw is None:
        return 7
    try:
        return int(raw)
    except ValueError as exc:
        raise EnumerationBound(f"SC_MAX_K must be an integer, got {raw!r}") from exc


# -- core word operations (plain tuples, cached) -----------------------


def _validate_perm_word(word: tuple[int, ...]) -> None:
    if sorted(word) != list(range(len(word))):
        raise ValueError(f"{word} is not a permutation word of 0..{len(word) - 1}")


@lru_cache(maxsize=None)
def _canon_cp(word: tuple[int, ...]) -> tuple[int, ...]:
    j = word.index(0)
    return word[j:] + word[:j]


@lru_cache(maxsize=None)
def _cp_face(word: tuple[int, ...], i: int) -> tuple[int, ...]:
    # delete the letter i, pull higher letters down
    return _canon_cp(tuple(v if v < i else v - 1 for v in word if v != i))


@lru_cache(maxsize=None)
def _cp_degeneracy(word: tuple[int, ...], i: int) -> tuple[int, ...]:
    out: list[int] = []
    for v in word:
        shifted = v if v <= i else v + 1
        out.append(shifted)
        if v == i:
            out.append(i + 1)
    return _canon_cp(tuple(out))


@lru_cache(maxsize=None)
def _cp_is_degenerate(word: tuple[int, ...]) -> bool:
    k = len(word) - 1
    if k == 0:
        return False
    for below in permutations(range(1, k)):
        small = (0,) + below
        for i in range(k):
            if _cp_degeneracy(small, i) == word:
                return True
    return False


@dataclass(frozen=True)
class CircularPermutation:
    """A cyclic order on the colors 0..top, stored starting at color 0."""

    word: tuple[int, ...]

    def __post_init__(self):
        word = tuple(int(v) for v in self.word)
        _validate_perm_word(word)
        object.__setattr__(self, "word", _canon_cp(word))

    @property
    def top(self) -> int:
        return len(self.word) - 1

    def face(self, i: int) -> "CircularPermutation":
        """Delete color i and renumber the colors above it down by one."""
        self._check_color(i)
        if self.top == 0:
            raise LastColor("cannot delete the only color of <0>")
        return CircularPermutation(_cp_face(self.word, i))

    def degeneracy(self, i: int) -> "CircularPermutation":
        """Insert a duplicate right after color i; higher colors move up."""
        self._check_color(i)
        return CircularPermutation(_cp_degeneracy(self.word, i))

    def is_degenerate(self) -> bool:
        """True when some degeneracy of a smaller circular permutation
        produces this one; decided by enumerating one dimension down."""
        return _cp_is_degenerate(self.word)

    def triple_bit(self, a: int, b: int, c: int) -> int:
        """Induced cyclic order of a < b < c: 0 for (a,b,c), 1 for (a,c,b)."""
        if not a < b < c:
            raise ValueError("triple must be strictly increasing")
        sub = tuple(v for v in self.word if v in (a, b, c))
        j = sub.index(a)
        return 0 if sub[j:] + sub[:j] == (a, b, c) else 1

    def _check_color(self, i: int) -> None:
        if not 0 <= i <= self.top:
            raise ValueError(f"color {i} outside 0..{self.top}")

    def __str__(self) -> str:
        return "<" + ",".join(str(v) for v in self.word) + ">"


@dataclass(frozen=True)
class Permutation:
    """A linear word using each color 0..top exactly once."""

    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        _validate_perm_word(values)
        object.__setattr__(self, "values", values)

    @property
    def top(self) -> int:
        return len(self.values) - 1

    def face(self, i: int) -> "Permutation":
        if not 0 <= i <= self.top:
            raise ValueError(f"color {i} outside 0..{self.top}")
        if self.top == 0:
            raise LastColor("cannot delete the only color of (0)")
        return Permutation(tuple(v if v < i else v - 1 for v in self.values if v != i))

    def degeneracy(self, i: int) -> "Permutation":
        if not 0 <= i <= self.top:
            raise ValueError(f"color {i} outside 0..{self.top}")
        out: list[int] = []
        for v in self.values:
            out.append(v if v <= i else v + 1)
            if v == i:
                out.append(i + 1)
        return Permutation(tuple(out))

    def coset(self) -> CircularPermutation:
        """Forget the starting point: the circular word of this permutation."""
        return CircularPermutation(self.values)


def c01(theta: CircularPermutation) -> int:
    """Parity of a circular permutation of three colors: 0 for the class
    of (0,1,2), 1 for the class of (0,2,1)."""
    if theta.top != 2:
        raise ValueError(f"parity defined on three colors, got top {theta.top}")
    return 0 if theta.word == (0, 1, 2) else 1


def _sc_words(k: int) -> Iterator[tuple[int, ...]]:
    for rest in permutations(range(1, k + 1)):
        yield (0,) + rest


def enumerate_sc(k: int, max_k: int | None = None) -> tuple[CircularPermutation, ...]:
    """All circular permutations of 0..k in lexicographic order of the
    canonical word; there are k! of them."""
    if k < 0:
        raise ValueError("alphabet top must be nonnegative")
    bound = max_k if max_k is not None else default_enumeration_bound()
    if k > bound:
        raise EnumerationBound(
            f"enumeration of circular permutations capped at top {bound}, got {k}"
        )
    return tuple(CircularPermutation(w) for w in _sc_words(k))


def is_degenerate_sc(theta: CircularPermutation) -> bool:
    return theta.is_degenerate()


# -- triple orders and insertion --------------------------------------


@dataclass(frozen=True)
class TripleOrderFamily:
    """A cyclic order bit for every triple of the ground set 0..top.

    Bit 0 orders a < b < c as (a,b,c), bit 1 as (a,c,b).  Bits are stored
    by lexicographic rank of the triple.
    """

    top: int
    bits: tuple[int, ...]

    def __post_init__(self):
        expected = len(list(combinations(range(self.top + 1), 3)))
        if len(self.bits) != expected:
            raise ValueError(
                f"need {expected} bits for ground set 0..{self.top}, "
                f"got {len(self.bits)}"
            )
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("triple order bits must be 0 or 1")

    @classmethod
    def from_mapping(cls, top: int, bits: Mapping[tuple[int, int, int], int]):
        ordered = [bits[t] for t in combinations(range(top + 1), 3)]
        return cls(top, tuple(ordered))

    @classmethod
    def from_circular(cls, theta: CircularPermutation) -> "TripleOrderFamily":
        return cls(
            theta.top,
            tuple(
                theta.triple_bit(*t)
                for t in combinations(range(theta.top + 1), 3)
            ),
        )

    def bit(self, a: int, b: int, c: int) -> int:
        triples = combinations(range(self.top + 1), 3)
        for rank, t in enumerate(triples):
            if t == (a, b, c):
                return self.bits[rank]
        raise KeyError((a, b, c))

    def items(self) -> Iterator[tuple[tuple[int, int, int], int]]:
        return zip(combinations(range(self.top + 1), 3), self.bits)


def _violating_quadruple(fam: TripleOrderFamily) -> tuple[int, ...] | None:
    for a, b, c, d in combinations(range(fam.top + 1), 4):
        total = (
            fam.bit(b, c, d) - fam.bit(a, c, d) + fam.bit(a, b, d) - fam.bit(a, b, c)
        )
        if total:
            return (a, b, c, d)
    return None


def insertion_extend(fam: TripleOrderFamily) -> CircularPermutation:
    """The unique circular permutation inducing a transitive triple family.

    Elements 3..top are inserted one at a time into the single gap
    consistent with every triple they join; afterwards all triples are
    re-verified.  An inconsistent family raises with a quadruple
    witnessing the transitivity failure.
    """
    if fam.top < 2:
        raise ValueError("triple orders need a ground set of at least three")
    bits = dict(fam.items())
    word = [0, 1, 2] if bits[(0, 1, 2)] == 0 else [0, 2, 1]

    def induced(w: list[int], a: int, b: int, c: int) -> int:
        sub = [v for v in w if v in (a, b, c)]
        j = sub.index(a)
        return 0 if sub[j:] + sub[:j] == [a, b, c] else 1

    for m in range(3, fam.top + 1):
        spot = None
        for gap in range(len(word)):
            candidate = word[: gap + 1] + [m] + word[gap + 1 :]
            if all(
                induced(candidate, a, b, m) == bits[(a, b, m)]
                for a, b in combinations(range(m), 2)
            ):
                spot = candidate
                break
        if spot is None:
            quad = _violating_quadruple(fam)
            if quad is None:
                raise AssertionError("insertion failed on a transitive family")
            raise InconsistentTriples(quad)
        word = spot
    for (a, b, c), bit in bits.items():
        if induced(word, a, b, c) != bit:
            quad = _violating_quadruple(fam)
            if quad is None:
                raise AssertionError("verification failed on a transitive family")
            raise InconsistentTriples(quad)
    return CircularPermutation(tuple(word))


# -- horn lifting ------------------------------------------------------


def kan_lifts(
    facets: Iterable[CircularPermutation], max_k: int | None = None
) -> list[CircularPermutation]:
    """All circular permutations whose faces are the given facet family.

    The family lists a facet for every face index 0..k; the pairwise
    exchange precheck runs first and failures name the offending index
    pair.  Counts follow the horn-filling pattern: two lifts when k is 2,
    one when k is at least 4, zero or one when k is 3.
    """
    facets = list(facets)
    k = len(facets) - 1
    if k < 1:
        raise MismatchedCarriers("a facet family needs at least two members")
    for j, th in enumerate(facets):
        if not isinstance(th, CircularPermutation) or th.top != k - 1:
            raise MismatchedCarriers(
                f"facet {j} should be a circular permutation of 0..{k - 1}"
            )
    for i in range(k):
        for j in range(i, k):
            left = facets[i].face(j) if k >= 2 else None
            right = facets[j + 1].face(i) if k >= 2 else None
            if k >= 2 and left != right:
                raise IncompatibleFamily(
                    f"faces disagree between facets {i} and {j + 1}: "
                    f"face {j} of the former is {left}, "
                    f"face {i} of the latter is {right}"
                )
    out = []
    for theta in enumerate_sc(k, max_k=max_k):
        if all(theta.face(i) == facets[i] for i in range(k + 1)):
            out.append(theta)
    return out


def kan_survey(k: int, max_k: int | None = None) -> dict:
    """Exhaustive lifting census over all facet families in dimension k.

    Every (k+1)-tuple of circular permutations of 0..k-1 is tried;
    families failing the pairwise exchange precheck count as
    incompatible.  Returns the family total, the compatible count, and a
    histogram of lift counts over compatible families.
    """
    if k < 2:
        raise MismatchedCarriers("the lifting census needs dimension >= 2")
    elems = enumerate_sc(k - 1, max_k=max_k)
    total = len(elems) ** (k + 1)
    if total > 1_000_000:
        raise EnumerationBound(
            f"census over {total} facet families is out of reach"
        )
    compatible = 0
    histogram: dict[int, int] = {}
    for facets in product(elems, repeat=k + 1):
        try:
            lifts = kan_lifts(facets, max_k=max_k)
        except IncompatibleFamily:
            continue
        compatible += 1
        n = len(lifts)
        histogram[n] = histogram.get(n, 0) + 1
    return {
        "dimension": k,
        "families": total,
        "compatible": compatible,
        "lift_counts": histogram,
    }


# -- necklaces ---------------------------------------------------------


@dataclass(frozen=True)
class Necklace:
    """Oriented circular word of colored beads with stable bead ids.

    Bead ids are local to the necklace; they survive color deletion and
    let descent data refer to beads without fixing a turning.  Arcs (the
    gaps between consecutive beads) are keyed by the bead they follow.
    """

    colors: tuple[int, ...]
    ids: tuple[int, ...]

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        ids = tuple(int(b) for b in self.ids)
        if not colors:
            raise ValueError("a necklace needs at least one bead")
        if len(colors) != len(ids):
            raise ValueError("colors and ids must align")
        if len(set(ids)) != len(ids):
            raise ValueError("bead ids must be distinct")
        top = max(colors)
        if min(colors) < 0 or set(colors) != set(range(top + 1)):
            raise ValueError("every color 0..top must appear at least once")
        n = len(colors)
        best = min(
            range(n),
            key=lambda r: (colors[r:] + colors[:r], ids[r:] + ids[:r]),
        )
        object.__setattr__(self, "colors", colors[best:] + colors[:best])
        object.__setattr__(self, "ids", ids[best:] + ids[:best])

    @classmethod
    def from_colors(cls, colors: Iterable[int], ids: Iterable[int] | None = None):
        colors = tuple(colors)
        if ids is None:
            ids = range(len(colors))
        return cls(colors, tuple(ids))

    @classmethod
    def from_circular(cls, theta: CircularPermutation) -> "Necklace":
        return cls(theta.word, theta.word)

    @property
    def size(self) -> int:
        return len(self.colors)

    @property
    def top(self) -> int:
        return max(self.colors)

    def beads(self) -> tuple[tuple[int, int], ...]:
        """Pairs (bead id, color) in circular order, canonical turning."""
        return tuple(zip(self.ids, self.colors))

    def color_of(self, bead: int) -> int:
        try:
            return self.colors[self.ids.index(bead)]
        except ValueError:
            raise KeyError(f"no bead {bead} on this necklace") from None

    def has_bead(self, bead: int) -> bool:
        return bead in self.ids

    def successor(self, bead: int) -> int:
        """The bead after the given one in the circular orientation."""
        p = self.ids.index(bead)
        return self.ids[(p + 1) % len(self.ids)]

    def predecessor(self, bead: int) -> int:
        p = self.ids.index(bead)
        return self.ids[(p - 1) % len(self.ids)]

    def color_class(self) -> tuple[int, ...]:
        """The circular color word alone, canonically rotated."""
        n = len(self.colors)
        return min(
            (self.colors[r:] + self.colors[:r] for r in range(n)),
        )

    def to_circular(self) -> CircularPermutation:
        if len(self.colors) != self.top + 1:
            raise ValueError("not one bead per color")
        return CircularPermutation(self.colors)

    def delete_color(self, i: int):
        """Remove the beads colored i; higher colors slide down.

        Returns the smaller necklace, the bead map (new bead id to old:
        the identity on survivors), and the arc merge map sending the arc
        after each old bead to the surviving arc it lands in.
        """
        if not 0 <= i <= self.top:
            raise ValueError(f"color {i} outside 0..{self.top}")
        if self.top == 0:
            raise LastColor("deleting the only color leaves nothing")
        survivors = [
            (b, c if c < i else c - 1) for b, c in self.beads() if c != i
        ]
        small = Necklace(
            tuple(c for _, c in survivors), tuple(b for b, _ in survivors)
        )
        bead_map = {b: b for b, _ in survivors}
        alive = {b for b, _ in survivors}
        arc_map = {}
        order = self.ids
        n = len(order)
        for p, b in enumerate(order):
            q = p
            while order[q % n] not in alive:
                q -= 1
            arc_map[b] = order[q % n]
        return small, bead_map, arc_map


def is_classical_necklace(neck: Necklace) -> tuple[bool, str | None]:
    """Whether the elementary bundle on this necklace is a classical
    simplicial complex: every color at least three beads, every color
    pair mixed (not two solid blocks around the circle)."""
    counts = [0] * (neck.top + 1)
    for c in neck.colors:
        counts[c] += 1
    for color, n in enumerate(counts):
        if n < 3:
            return False, f"color {color} has only {n} bead(s), needs 3"
    for i, j in combinations(range(neck.top + 1), 2):
        sub = [c for c in neck.colors if c in (i, j)]
        changes = sum(
            1 for p in range(len(sub)) if sub[p] != sub[p - 1]
        )
        if changes == 2:
            return False, f"colors {i} and {j} sit in two solid blocks"
    return True, None


# -- normalized chains of the circular-permutation family -------------


def sc_normalized_homology(max_dim: int = 3):
    """Homology of the normalized chain complex of circular permutations
    through dimension max_dim - 1, with nondegenerate element counts.

    Returns (counts, HomologyGroups); counts lists the nondegenerate
    elements per dimension 0..max_dim.
    """
    from .homology import HomologyGroups, IntMatrix, smith_normal_form

    nondeg: list[list[CircularPermutation]] = []
    for k in range(max_dim + 1):
        nondeg.append(
            [th for th in enumerate_sc(k, max_k=max(7, max_dim)) if not th.is_degenerate()]
        )
    counts = tuple(len(level) for level in nondeg)
    ranks = [0] * (max_dim + 2)
    torsions: list[tuple[int, ...]] = [()] * (max_dim + 2)
    for q in range(1, max_dim + 1):
        index = {th: r for r, th in enumerate(nondeg[q - 1])}
        m = IntMatrix(len(nondeg[q - 1]), len(nondeg[q]))
        for col, th in enumerate(nondeg[q]):
            for i in range(q + 1):
                f = th.face(i)
                r = index.get(f)
                if r is not None:
                    m.data[r][col] += -1 if i % 2 else 1
        snf = smith_normal_form(m)
        ranks[q] = snf.rank
        torsions[q] = tuple(d for d in snf.diagonal if d > 1)
    groups = []
    for q in range(max_dim):
        betti = counts[q] - ranks[q] - ranks[q + 1]
        groups.append((betti, torsions[q + 1]))
    return counts, HomologyGroups(tuple(groups))
