"""Shared generators for randomized suites.

Everything is seeded by the caller; no test should draw from global
random state.
"""

from __future__ import annotations

import random

from scbundles import (
    IntCochain,
    Necklace,
    NecklaceLocalSystem,
    SemiSimplicialSet,
    boundary_sphere,
    coboundary,
    delta_torus,
    minimal_from_cocycle,
    octahedron_sphere,
    standard_simplex,
)
from scbundles.spindle import subdivide

KLEIN_FACES = [[0, 0, 0], [[0, 0], [0, 0], [0, 0]], [[1, 2, 0], [2, 1, 0]]]


def klein_bottle() -> SemiSimplicialSet:
    """One vertex, three edges, two triangles; H1 has 2-torsion."""
    return SemiSimplicialSet(1, [KLEIN_FACES[1], KLEIN_FACES[2]])


def random_necklace(rng: random.Random, top: int, extra: int = 4) -> Necklace:
    """A necklace over colors 0..top with up to ``extra`` repeated beads."""
    colors = list(range(top + 1))
    for _ in range(rng.randrange(extra + 1)):
        colors.append(rng.randrange(top + 1))
    rng.shuffle(colors)
    return Necklace.from_colors(colors)


def random_binary_cocycle(base: SemiSimplicialSet, rng: random.Random) -> IntCochain:
    """Uniform binary 2-cocycle, by rejection over the (small) cube."""
    n = base.simplex_count(2)
    while True:
        u = IntCochain(2, tuple(rng.randrange(2) for _ in range(n)))
        if base.top_dim < 3 or coboundary(base, u).is_zero():
            return u


BUNDLE_BASES = (
    standard_simplex(1),
    standard_simplex(2),
    standard_simplex(3),
    boundary_sphere(3),
    delta_torus(),
)


def random_system(
    rng: random.Random,
    bases=BUNDLE_BASES,
    max_subdivisions: int = 3,
) -> NecklaceLocalSystem:
    """A random bundle: cocycle bundle plus a few random bead splits."""
    base = rng.choice(bases)
    u = random_binary_cocycle(base, rng)
    system = minimal_from_cocycle(base, u).as_local_system()
    for _ in range(rng.randrange(max_subdivisions + 1)):
        v = rng.randrange(base.simplex_count(0))
        bead = rng.choice(system.stalk(0, v).ids)
        system = subdivide(system, v, bead, check=False)
    return system
