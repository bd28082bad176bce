"""Necklace local systems and their triangulated circle bundles.

A local system assigns to every base q-simplex a stalk necklace over the
colors 0..q and to every face operator a descent record embedding the
face stalk into the stalk above it.  The total space is assembled from a
catalog with two entry kinds per base simplex x of dimension q:

* one horizontal q-simplex per arc of the stalk (arcs are keyed by the
  bead they follow), and
* one vertical (q+1)-simplex per bead.

For a vertical simplex on a bead b of color j, face j is the horizontal
simplex of the arc following b and face j+1 of the arc preceding b; the
collapsing edge of the fiber sits at vertex positions j, j+1, so faces
below j descend through the bead map of face operator m and faces above
j+1 through face operator m-1, with colors renumbered by the deletion.
Horizontal faces descend through the arc merge maps.  The projection
sends horizontal simplices down by the identity operator and vertical
ones by the degeneracy at their bead color, which makes it a simplicial
map onto the base.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .cyclic import CircularPermutation, Necklace, c01, insertion_extend, TripleOrderFamily
from .errors import (
    DanglingReference,
    IncoherentLocalSystem,
    InconsistentTriples,
    MalformedFile,
    MismatchedCarriers,
    NotACocycle,
    NotBinary,
)
from .homology import FundamentalClass, IntCochain, coboundary
from .simplicial import SemiSimplicialSet, SimplexRef, standard_simplex

__all__ = [
    "NecklaceLocalSystem",
    "MinimalBundle",
    "AssembledBundle",
    "SingularProjection",
    "TotalSpaceIndex",
    "assemble",
    "elementary_system",
    "elementary_bundle",
    "minimal_from_cocycle",
    "chern_cocycle",
    "chern_number",
    "is_classical_bundle",
    "systems_equivalent",
    "check_projection_naturality",
    "bundle_to_json_dict",
    "bundle_from_json_dict",
    "total_to_json_dict",
    "format_necklace_text",
    "parse_necklace_text",
]


SimplexKey = tuple[int, int]


class NecklaceLocalSystem:
    """Stalk necklaces over a base plus descent maps along every face.

    ``stalks`` maps (dim, index) to the necklace over that simplex;
    ``bead_maps`` maps (dim, index, face_index) to the embedding of the
    face stalk's beads into the stalk's beads (its image is exactly the
    set of beads not colored face_index).  Instances are treated as
    immutable; spindle moves build modified copies.
    """

    __slots__ = ("base", "stalks", "bead_maps", "_arc_maps", "_embeddings")

    def __init__(self, base, stalks, bead_maps, check=True):
        self.base = base
        self.stalks: dict[SimplexKey, Necklace] = dict(stalks)
        self.bead_maps: dict[tuple[int, int, int], dict[int, int]] = {
            k: dict(v) for k, v in bead_maps.items()
        }
        self._arc_maps: dict[tuple[int, int, int], dict[int, int]] = {}
        self._embeddings: dict[tuple[int, int, int], dict[int, int]] = {}
        if check:
            problems = self.validate()
            if problems:
                raise IncoherentLocalSystem("; ".join(problems))

    # -- access --------------------------------------------------------

    def stalk(self, q: int, index: int) -> Necklace:
        try:
            return self.stalks[(q, index)]
        except KeyError:
            raise DanglingReference(f"no stalk over simplex {q}/{index}") from None

    def stalk_over(self, ref: SimplexRef) -> Necklace:
        return self.stalk(ref.dim, ref.index)

    def bead_map(self, q: int, index: int, i: int) -> dict[int, int]:
        return self.bead_maps[(q, index, i)]

    def inverse_bead_map(self, q: int, index: int, i: int) -> dict[int, int]:
        return {big: small for small, big in self.bead_map(q, index, i).items()}

    def arc_map(self, q: int, index: int, i: int) -> dict[int, int]:
        """Arc merge map along face i: the arc after each bead of the
        stalk lands in the arc after a surviving bead of the face stalk."""
        key = (q, index, i)
        cached = self._arc_maps.get(key)
        if cached is not None:
            return cached
        big = self.stalk(q, index)
        inv = self.inverse_bead_map(q, index, i)
        order = big.ids
        n = len(order)
        out = {}
        for p, b in enumerate(order):
            walk = p
            while order[walk % n] not in inv:
                walk -= 1
            out[b] = inv[order[walk % n]]
        self._arc_maps[key] = out
        return out

    def vertex_embedding(self, q: int, index: int, p: int) -> dict[int, int]:
        """Composite bead embedding from the circle over vertex position p
        into the stalk; independent of the face chain by coherence."""
        key = (q, index, p)
        cached = self._embeddings.get(key)
        if cached is not None:
            return cached
        chain: list[tuple[int, int, int]] = []
        cq, ci = q, index
        for t in range(q, p, -1):
            chain.append((cq, ci, t))
            ci = self.base.face_index(cq, ci, t)
            cq -= 1
        for _ in range(p):
            chain.append((cq, ci, 0))
            ci = self.base.face_index(cq, ci, 0)
            cq -= 1
        emb = {b: b for b in self.stalk(0, ci).ids}
        for dq, di, fi in reversed(chain):
            bm = self.bead_map(dq, di, fi)
            emb = {vb: bm[sb] for vb, sb in emb.items()}
        self._embeddings[key] = emb
        return emb

    def is_minimal(self) -> bool:
        return all(n.size == q + 1 for (q, _), n in self.stalks.items())

    # -- validation ----------------------------------------------------

    def validate(self) -> list[str]:
        base = self.base
        problems: list[str] = []
        for q in range(base.top_dim + 1):
            for idx in base.simplices(q):
                neck = self.stalks.get((q, idx))
                if neck is None:
                    problems.append(f"missing stalk over {q}/{idx}")
                elif neck.top != q:
                    problems.append(
                        f"stalk over {q}/{idx} uses colors 0..{neck.top}, expected 0..{q}"
                    )
        for key in self.stalks:
            q, idx = key
            if not (0 <= q <= base.top_dim and 0 <= idx < base.simplex_count(q)):
                problems.append(f"stalk over missing simplex {q}/{idx}")
        if problems:
            return problems
        for q in range(1, base.top_dim + 1):
            for idx in base.simplices(q):
                for i in range(q + 1):
                    problems.extend(self._check_one_map(q, idx, i))
        if problems:
            return problems
        for q in range(2, base.top_dim + 1):
            for idx in base.simplices(q):
                for i, j in combinations(range(q + 1), 2):
                    fj = base.face_index(q, idx, j)
                    fi = base.face_index(q, idx, i)
                    route_a = {
                        db: self.bead_map(q, idx, j)[sb]
                        for db, sb in self.bead_map(q - 1, fj, i).items()
                    }
                    route_b = {
                        db: self.bead_map(q, idx, i)[sb]
                        for db, sb in self.bead_map(q - 1, fi, j - 1).items()
                    }
                    if route_a != route_b:
                        problems.append(
                            f"descent maps of {q}/{idx} do not commute for faces ({i}, {j})"
                        )
        return problems

    def _check_one_map(self, q: int, idx: int, i: int) -> list[str]:
        where = f"face {i} of {q}/{idx}"
        bm = self.bead_maps.get((q, idx, i))
        if bm is None:
            return [f"missing bead map along {where}"]
        big = self.stalk(q, idx)
        fidx = self.base.face_index(q, idx, i)
        small = self.stalk(q - 1, fidx)
        if set(bm) != set(small.ids):
            return [f"bead map along {where} is not defined on the face stalk"]
        targets = list(bm.values())
        if len(set(targets)) != len(targets):
            return [f"bead map along {where} is not injective"]
        survivors = {b for b, c in big.beads() if c != i}
        if set(targets) != survivors:
            return [
                f"bead map along {where} must hit exactly the beads not colored {i}"
            ]
        for sb, bb in bm.items():
            c = big.color_of(bb)
            expected = c if c < i else c - 1
            if small.color_of(sb) != expected:
                return [f"bead map along {where} breaks colors at bead {sb}"]
        inv = {bb: sb for sb, bb in bm.items()}
        seq = tuple(inv[b] for b in big.ids if b in inv)
        ids = small.ids
        j = seq.index(ids[0])
        if seq[j:] + seq[:j] != ids:
            return [f"bead map along {where} does not preserve the circular order"]
        return []


class MinimalBundle:
    """A bundle with one bead per color everywhere; stalks are circular
    permutations and descent needs no extra data."""

    __slots__ = ("base", "stalks")

    def __init__(self, base, stalks, check=True):
        self.base = base
        self.stalks: dict[SimplexKey, CircularPermutation] = dict(stalks)
        if check:
            problems = self._validate()
            if problems:
                raise IncoherentLocalSystem("; ".join(problems))

    def _validate(self) -> list[str]:
        base = self.base
        problems = []
        for q in range(base.top_dim + 1):
            for idx in base.simplices(q):
                th = self.stalks.get((q, idx))
                if th is None:
                    problems.append(f"missing stalk over {q}/{idx}")
                elif th.top != q:
                    problems.append(
                        f"stalk over {q}/{idx} has top {th.top}, expected {q}"
                    )
        if problems:
            return problems
        for q in range(1, base.top_dim + 1):
            for idx in base.simplices(q):
                th = self.stalks[(q, idx)]
                for i in range(q + 1):
                    fidx = base.face_index(q, idx, i)
                    if th.face(i) != self.stalks[(q - 1, fidx)]:
                        problems.append(
                            f"stalk over face {i} of {q}/{idx} is not the face of the stalk"
                        )
        return problems

    def stalk(self, q: int, index: int) -> CircularPermutation:
        return self.stalks[(q, index)]

    def as_local_system(self) -> NecklaceLocalSystem:
        """Expand to the general representation: bead ids equal colors and
        descent maps are the canonical color embeddings."""
        stalks = {
            key: Necklace.from_circular(th) for key, th in self.stalks.items()
        }
        bead_maps = {}
        for q in range(1, self.base.top_dim + 1):
            for idx in self.base.simplices(q):
                for i in range(q + 1):
                    bead_maps[(q, idx, i)] = {
                        c: (c if c < i else c + 1) for c in range(q)
                    }
        return NecklaceLocalSystem(self.base, stalks, bead_maps, check=False)

    def __eq__(self, other):
        if not isinstance(other, MinimalBundle):
            return NotImplemented
        return self.base == other.base and self.stalks == other.stalks

    def __repr__(self):
        return f"MinimalBundle(base={self.base.counts})"


# -- total space assembly ----------------------------------------------


@dataclass(frozen=True)
class TotalSpaceIndex:
    """Bidirectional index between catalog keys and dense simplex ids.

    Keys are tuples ("H", q, index, bead) for the horizontal simplex of
    the arc following the bead, and ("V", q, index, bead) for the
    vertical simplex of the bead, over base simplex q/index.
    """

    keys: tuple[tuple[tuple, ...], ...]

    def ref_of(self, key) -> SimplexRef:
        kind, q, idx, bead = key
        dim = q if kind == "H" else q + 1
        try:
            return SimplexRef(dim, self.keys[dim].index(key))
        except (ValueError, IndexError):
            raise DanglingReference(f"no catalog entry {key}") from None

    def key_of(self, dim: int, index: int):
        return self.keys[dim][index]


@dataclass(frozen=True)
class SingularProjection:
    """Projection of each total simplex to its base simplex.

    ``table[p][i]`` is a pair (base ref, op) where op lists the values of
    the monotone surjection from vertex positions of the total simplex to
    those of the base simplex: the identity for horizontal entries and
    the degeneracy collapsing positions j, j+1 for a bead of color j.
    """

    base: SemiSimplicialSet
    table: tuple[tuple[tuple[SimplexRef, tuple[int, ...]], ...], ...]

    def target(self, dim: int, index: int) -> tuple[SimplexRef, tuple[int, ...]]:
        return self.table[dim][index]


@dataclass(frozen=True)
class AssembledBundle:
    system: NecklaceLocalSystem
    total: SemiSimplicialSet
    projection: SingularProjection
    index: TotalSpaceIndex


def assemble(system: NecklaceLocalSystem) -> AssembledBundle:
    """Build the total space, its projection, and the catalog index."""
    base = system.base
    top = base.top_dim
    keys_by_dim: list[list[tuple]] = []
    for p in range(top + 2):
        level: list[tuple] = []
        if p <= top:
            for idx in base.simplices(p):
                for b, _ in system.stalk(p, idx).beads():
                    level.append(("H", p, idx, b))
        if p >= 1:
            for idx in base.simplices(p - 1):
                for b, _ in system.stalk(p - 1, idx).beads():
                    level.append(("V", p - 1, idx, b))
        keys_by_dim.append(level)
    ids: dict[tuple, int] = {}
    for level in keys_by_dim:
        for i, key in enumerate(level):
            ids[key] = i
    faces: list[list[list[int]]] = []
    for p in range(1, top + 2):
        table: list[list[int]] = []
        for key in keys_by_dim[p]:
            kind, q, idx, b = key
            neck = system.stalk(q, idx)
            row: list[int] = []
            if kind == "H":
                for m in range(q + 1):
                    fidx = base.face_index(q, idx, m)
                    am = system.arc_map(q, idx, m)
                    row.append(ids[("H", q - 1, fidx, am[b])])
            else:
                j = neck.color_of(b)
                for m in range(q + 2):
                    if m == j:
                        row.append(ids[("H", q, idx, b)])
                    elif m == j + 1:
                        row.append(ids[("H", q, idx, neck.predecessor(b))])
                    else:
                        fm = m if m < j else m - 1
                        fidx = base.face_index(q, idx, fm)
                        inv = system.inverse_bead_map(q, idx, fm)
                        row.append(ids[("V", q - 1, fidx, inv[b])])
            table.append(row)
        faces.append(table)
    total = SemiSimplicialSet(len(keys_by_dim[0]), faces, check=False)
    proj_table = []
    for p, level in enumerate(keys_by_dim):
        entries = []
        for key in level:
            kind, q, idx, b = key
            if kind == "H":
                op = tuple(range(q + 1))
            else:
                j = system.stalk(q, idx).color_of(b)
                op = tuple(t if t <= j else t - 1 for t in range(q + 2))
            entries.append((SimplexRef(q, idx), op))
        proj_table.append(tuple(entries))
    projection = SingularProjection(base, tuple(proj_table))
    index = TotalSpaceIndex(tuple(tuple(level) for level in keys_by_dim))
    return AssembledBundle(system, total, projection, index)


def check_projection_naturality(
    total: SemiSimplicialSet, projection: SingularProjection
) -> list[str]:
    """Confirm the projection commutes with every face operator.

    For each total simplex with target (x, s), the composite of s with the
    coface at m either stays surjective, in which case the face must map
    to x by that composite, or misses one value v, in which case the face
    must map to face(x, v) by the co-restriction.
    """
    base = projection.base
    problems = []
    for p in range(1, total.top_dim + 1):
        for idx in total.simplices(p):
            x, s = projection.target(p, idx)
            for m in range(p + 1):
                composite = tuple(s[t] if t < m else s[t + 1] for t in range(p))
                fref = SimplexRef(p - 1, total.face_index(p, idx, m))
                fx, fs = projection.target(p - 1, fref.index)
                present = set(composite)
                missing = [v for v in range(x.dim + 1) if v not in present]
                if not missing:
                    if fx != x or fs != composite:
                        problems.append(
                            f"face {m} of {p}/{idx} projects to ({fx}, {fs}), "
                            f"expected ({x}, {composite})"
                        )
                elif len(missing) == 1:
                    v = missing[0]
                    want_ref = base.face(x, v)
                    want_op = tuple(w if w < v else w - 1 for w in composite)
                    if fx != want_ref or fs != want_op:
                        problems.append(
                            f"face {m} of {p}/{idx} projects to ({fx}, {fs}), "
                            f"expected ({want_ref}, {want_op})"
                        )
                else:
                    problems.append(
                        f"projection of {p}/{idx} is not a degeneracy operator"
                    )
    return problems


# -- elementary bundles ------------------------------------------------


def elementary_system(neck: Necklace | CircularPermutation) -> NecklaceLocalSystem:
    """The local system of one necklace over the standard simplex on its
    colors: stalks restrict by deleting absent colors, bead ids persist."""
    if isinstance(neck, CircularPermutation):
        neck = Necklace.from_circular(neck)
    k = neck.top
    base = standard_simplex(k)
    subsets = {
        q: list(combinations(range(k + 1), q + 1)) for q in range(k + 1)
    }
    stalks: dict[SimplexKey, Necklace] = {}
    restricted: dict[tuple, Necklace] = {}
    for q, level in subsets.items():
        for idx, sub in enumerate(level):
            rank = {c: r for r, c in enumerate(sub)}
            picked = [(b, rank[c]) for b, c in neck.beads() if c in rank]
            stalk = Necklace(
                tuple(c for _, c in picked), tuple(b for b, _ in picked)
            )
            stalks[(q, idx)] = stalk
            restricted[sub] = stalk
    bead_maps = {}
    for q in range(1, k + 1):
        for idx, sub in enumerate(subsets[q]):
            for i in range(q + 1):
                small = restricted[sub[:i] + sub[i + 1 :]]
                bead_maps[(q, idx, i)] = {b: b for b in small.ids}
    return NecklaceLocalSystem(base, stalks, bead_maps, check=False)


def elementary_bundle(neck: Necklace | CircularPermutation) -> AssembledBundle:
    return assemble(elementary_system(neck))


# -- cocycles and minimal bundles --------------------------------------


def _require_binary_cocycle(base: SemiSimplicialSet, u: IntCochain) -> None:
    if u.dim != 2:
        raise MismatchedCarriers(f"need a 2-cochain, got dimension {u.dim}")
    if len(u.values) != base.simplex_count(2):
        raise MismatchedCarriers(
            f"cochain has {len(u.values)} values but the base has "
            f"{base.simplex_count(2)} triangles"
        )
    if not u.is_binary():
        raise NotBinary("cochain values must be 0 or 1")
    if base.top_dim >= 3 and not coboundary(base, u).is_zero():
        raise NotACocycle("binary 2-cochain has nonzero coboundary")


def _two_face_index(base: SemiSimplicialSet, q: int, idx: int, triple) -> int:
    """Index of the 2-face at vertex positions i < j < l, by deleting the
    other positions from the top down; descending order keeps every
    remaining position at its original index."""
    cq, ci = q, idx
    keep = set(triple)
    for t in range(q, -1, -1):
        if t not in keep:
            ci = base.face_index(cq, ci, t)
            cq -= 1
    return ci


def minimal_from_cocycle(base: SemiSimplicialSet, u: IntCochain) -> MinimalBundle:
    """The minimal bundle whose triangle stalks realize the parity u.

    Stalks over vertices and edges are forced; a triangle gets the even
    class for u = 0 and the odd class for u = 1; higher stalks are the
    unique insertion extensions of the parities on their 2-faces, which
    exist exactly because u is a cocycle.
    """
    _require_binary_cocycle(base, u)
    stalks: dict[SimplexKey, CircularPermutation] = {}
    for idx in base.simplices(0):
        stalks[(0, idx)] = CircularPermutation((0,))
    for idx in base.simplices(1):
        stalks[(1, idx)] = CircularPermutation((0, 1))
    for idx in base.simplices(2):
        word = (0, 1, 2) if u.values[idx] == 0 else (0, 2, 1)
        stalks[(2, idx)] = CircularPermutation(word)
    for q in range(3, base.top_dim + 1):
        for idx in base.simplices(q):
            bits = {}
            for triple in combinations(range(q + 1), 3):
                face2 = _two_face_index(base, q, idx, triple)
                bits[triple] = u.values[face2]
            family = TripleOrderFamily.from_mapping(q, bits)
            try:
                stalks[(q, idx)] = insertion_extend(family)
            except InconsistentTriples as exc:
                raise AssertionError(
                    "cocycle condition held but insertion failed; "
                    f"simplex {q}/{idx}: {exc}"
                ) from exc
    return MinimalBundle(base, stalks)


def chern_cocycle(bundle: MinimalBundle) -> IntCochain:
    """Triangle parities of a minimal bundle; inverse to the construction
    from a cocycle."""
    values = tuple(
        c01(bundle.stalk(2, idx)) for idx in bundle.base.simplices(2)
    )
    return IntCochain(2, values)


def chern_number(u: IntCochain, fm: FundamentalClass) -> int:
    """Pairing of a binary 2-cocycle with the fundamental class."""
    _require_binary_cocycle(fm.carrier, u)
    return sum(c * v for c, v in zip(fm.coefficients, u.values))


def systems_equivalent(
    first: NecklaceLocalSystem, second: NecklaceLocalSystem
) -> bool:
    """Whether a bead renaming carries one system to the other.

    A renaming is determined by one rotation of each vertex circle, since
    every stalk's color class is the embedded image of a vertex circle.
    The rotations are searched with backtracking, checking each stalk as
    soon as all of its vertices are assigned.
    """
    if first.base != second.base:
        return False
    base = first.base
    nv = base.simplex_count(0)
    for v in range(nv):
        if first.stalk(0, v).size != second.stalk(0, v).size:
            return False
    by_last: dict[int, list[tuple[int, int, tuple[int, ...]]]] = {
        v: [] for v in range(nv)
    }
    for q in range(base.top_dim + 1):
        for idx in base.simplices(q):
            vs = base.vertices_of(q, idx)
            by_last[max(vs)].append((q, idx, vs))

    def stalk_matches(q, idx, vs, rotations):
        n1 = first.stalk(q, idx)
        n2 = second.stalk(q, idx)
        if n1.size != n2.size:
            return False
        f = {}
        for p, v in enumerate(vs):
            e1 = first.vertex_embedding(q, idx, p)
            e2 = second.vertex_embedding(q, idx, p)
            ids1 = first.stalk(0, v).ids
            ids2 = second.stalk(0, v).ids
            r = rotations[v]
            n = len(ids1)
            for t, vb in enumerate(ids1):
                f[e1[vb]] = e2[ids2[(t + r) % n]]
        seq = tuple(f[b] for b in n1.ids)
        ids2t = n2.ids
        j = ids2t.index(seq[0])
        return ids2t[j:] + ids2t[:j] == seq

    rotations = [0] * nv

    def search(v):
        if v == nv:
            return True
        for r in range(first.stalk(0, v).size):
            rotations[v] = r
            if all(
                stalk_matches(q, idx, vs, rotations)
                for q, idx, vs in by_last[v]
            ) and search(v + 1):
                return True
        return False

    return search(0)


def is_classical_bundle(system: NecklaceLocalSystem) -> tuple[bool, str | None]:
    """Whether the total space is a classical simplicial complex in
    dimension one: no loops and no repeated edges."""
    asm = assemble(system)
    total = asm.total
    seen: dict[tuple[int, int], int] = {}
    for e in total.simplices(1):
        f0, f1 = total.face_row(1, e)
        if f0 == f1:
            return False, f"total edge 1/{e} is a loop"
        pair = (f0, f1) if f0 < f1 else (f1, f0)
        if pair in seen:
            return False, (
                f"total edges 1/{seen[pair]} and 1/{e} join the same vertices"
            )
        seen[pair] = e
    return True, None


# -- serialization -----------------------------------------------------


def format_necklace_text(colors: Iterable[int]) -> str:
    return "(" + " ".join(str(c) for c in colors) + ")"


def parse_necklace_text(text: str) -> tuple[int, ...]:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise MalformedFile(f"necklace text must look like \"(0 1 2)\", got {text!r}")
    body = s[1:-1].strip()
    if not body:
        raise MalformedFile("necklace text must list at least one color")
    try:
        return tuple(int(tok) for tok in body.split())
    except ValueError as exc:
        raise MalformedFile(f"bad necklace text {text!r}") from exc


def bundle_to_json_dict(bundle: MinimalBundle | NecklaceLocalSystem) -> dict:
    """Serialize a bundle; minimal bundles omit descent data entirely.

    General stalk words are written in the canonical turning, and bead
    maps refer to beads by their position in the written word.
    """
    if isinstance(bundle, NecklaceLocalSystem) and bundle.is_minimal():
        minimal = MinimalBundle(
            bundle.base,
            {k: n.to_circular() for k, n in bundle.stalks.items()},
            check=False,
        )
        bundle = minimal
    doc: dict = {"base": bundle.base.to_json_dict()}
    if isinstance(bundle, MinimalBundle):
        doc["stalks"] = {
            f"{q}/{idx}": format_necklace_text(th.word)
            for (q, idx), th in bundle.stalks.items()
        }
        return doc
    doc["stalks"] = {
        f"{q}/{idx}": format_necklace_text(n.colors)
        for (q, idx), n in bundle.stalks.items()
    }
    maps = {}
    for (q, idx, i), bm in bundle.bead_maps.items():
        fidx = bundle.base.face_index(q, idx, i)
        small = bundle.stalk(q - 1, fidx)
        big = bundle.stalk(q, idx)
        pos = {b: p for p, b in enumerate(big.ids)}
        maps[f"{q}/{idx}/{i}"] = [pos[bm[b]] for b in small.ids]
    doc["bead_maps"] = maps
    return doc


def _parse_stalk_keys(raw: Mapping, base: SemiSimplicialSet) -> dict[SimplexKey, tuple[int, ...]]:
    out = {}
    for key, text in raw.items():
        try:
            q_str, idx_str = key.split("/")
            q, idx = int(q_str), int(idx_str)
        except ValueError as exc:
            raise MalformedFile(f"bad stalk key {key!r}, expected 'dim/index'") from exc
        if not (0 <= q <= base.top_dim and 0 <= idx < base.simplex_count(q)):
            raise DanglingReference(f"stalk key {key} names no base simplex")
        out[(q, idx)] = parse_necklace_text(text)
    return out


def bundle_from_json_dict(doc) -> MinimalBundle | NecklaceLocalSystem:
    """Read a bundle document; returns a minimal bundle when no descent
    data is present, else a full local system."""
    if not isinstance(doc, Mapping) or "base" not in doc or "stalks" not in doc:
        raise MalformedFile("bundle document needs 'base' and 'stalks'")
    base = SemiSimplicialSet.from_json_dict(doc["base"])
    words = _parse_stalk_keys(doc["stalks"], base)
    for q in range(base.top_dim + 1):
        for idx in base.simplices(q):
            if (q, idx) not in words:
                raise MalformedFile(f"missing stalk for simplex {q}/{idx}")
    raw_maps = doc.get("bead_maps")
    if raw_maps is None:
        stalks = {}
        for key, word in words.items():
            try:
                stalks[key] = CircularPermutation(word)
            except ValueError as exc:
                raise MalformedFile(
                    f"stalk {key[0]}/{key[1]} is not a circular permutation "
                    "and no bead_maps are given"
                ) from exc
        return MinimalBundle(base, stalks)
    stalks = {}
    for key, word in words.items():
        try:
            stalks[key] = Necklace.from_colors(word)
        except ValueError as exc:
            raise MalformedFile(f"bad stalk over {key[0]}/{key[1]}: {exc}") from exc
    bead_maps = {}
    for key, row in raw_maps.items():
        try:
            q_str, idx_str, i_str = key.split("/")
            q, idx, i = int(q_str), int(idx_str), int(i_str)
        except ValueError as exc:
            raise MalformedFile(f"bad bead map key {key!r}") from exc
        if not (1 <= q <= base.top_dim and 0 <= idx < base.simplex_count(q) and 0 <= i <= q):
            raise DanglingReference(f"bead map key {key} names no face")
        fidx = base.face_index(q, idx, i)
        small = stalks[(q - 1, fidx)]
        big = stalks[(q, idx)]
        if len(row) != small.size:
            raise MalformedFile(f"bead map {key} has {len(row)} entries, expected {small.size}")
        try:
            bead_maps[(q, idx, i)] = {
                small.ids[p]: big.ids[int(target)] for p, target in enumerate(row)
            }
        except IndexError as exc:
            raise MalformedFile(f"bead map {key} points outside the stalk") from exc
    return NecklaceLocalSystem(base, stalks, bead_maps)


def total_to_json_dict(asm: AssembledBundle) -> dict:
    """Total space in complex format plus the projection table."""
    doc = asm.total.to_json_dict()
    doc["projection"] = {
        str(p): [
            [ref.dim, ref.index, list(op)] for ref, op in asm.projection.table[p]
        ]
        for p in range(len(asm.projection.table))
    }
    return doc
