"""The pair (F_n, A): separating words, strata and cylinder combinatorics.

``SubgroupSystem`` caches the data derived from a malnormal subgroup system:
the intersection bound ``L`` and the set ``C`` of length ``L+2`` words that
cannot be read inside any subgroup tree through the origin.  A cylinder
``C(gamma_w)`` lies in the relative double boundary iff ``w`` contains a
word of ``C``.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from relcurr.errors import InputError, MalnormalityError
from relcurr.stallings import (
    CoreGraph,
    check_malnormal_system,
    compute_L,
    is_conjugate_into,
    readable_anywhere,
)
from relcurr.words import (
    Alphabet,
    Word,
    canonical,
    cyclic_reduce,
    format_word,
    invert,
    multiply,
    reduce,
    word_key,
)


class SubgroupSystem:
    """A malnormal subgroup system with its cached derived data.

    Build instances with :func:`build_system`.  ``graphs`` are the based
    folded graphs as given; ``cores`` are the trimmed cores rebased at a core
    vertex, with ``conjugators[i]`` the spur label (the system is a set of
    conjugacy classes, so rebasing is harmless).
    """

    def __init__(self, rank: int, graphs: Sequence[CoreGraph], L: int, C: frozenset):
        self.alphabet = Alphabet(rank)
        self.rank = rank
        self.graphs = tuple(graphs)
        pairs = [g.core() for g in self.graphs]
        self.cores = tuple(c for c, _ in pairs)
        self.conjugators = tuple(p for _, p in pairs)
        self.L = L
        self.C = C
        self._strata: dict[int, frozenset] = {}

    @property
    def word_length(self) -> int:
        """Length ``L + 2`` of the words in ``C``."""
        return self.L + 2

    def __repr__(self):
        return f"SubgroupSystem(rank={self.rank}, subgroups={len(self.graphs)}, L={self.L}, |C|={len(self.C)})"

    def fingerprint(self) -> str:
        """Stable hash of the system, used to tag serialized tables."""
        parts = [str(self.rank)] + sorted(
            ";".join(f"{v},{l},{w}" for v, l, w in c.edges()) for c in self.cores)
        return hashlib.sha256("|".join(parts).encode()).hexdigest()[:16]

    def readable(self, w: Sequence[int]) -> bool:
        """``w`` labels a path in some subgroup tree through the origin."""
        return any(readable_anywhere(c, w) for c in self.cores)

    def in_Cyl_C(self, w: Sequence[int]) -> bool:
        return in_Cyl_C(self, w)

    def is_peripheral(self, g: Sequence[int]) -> bool:
        return is_peripheral(self, g)

    def stratum(self, k: int) -> frozenset:
        return stratum_S_k(self, k)

    def cylinder_words(self, length: int) -> list[Word]:
        """Canonical (flip-representative) words of a length that contain a C word."""
        return [w for w in self.alphabet.reduced_words(length)
                if w == canonical(w) and self.in_Cyl_C(w)]

    def domain(self, depth: int) -> list[Word]:
        """Canonical keys of Cyl(C) words with length at most ``depth``."""
        return [w for m in range(self.word_length, depth + 1) for w in self.cylinder_words(m)]


def build_system(graphs: Iterable[CoreGraph], rank: int) -> SubgroupSystem:
    """Validate malnormality, then compute ``L`` and the separating set ``C``."""
    graphs = list(graphs)
    alphabet = Alphabet(rank)
    for g in graphs:
        if g.max_letter() > rank:
            raise InputError(f"subgroup graph uses letters outside rank {rank}")
        if g.is_covering(rank):
            raise InputError("finite index subgroups (including F_n) are not admissible")
    verdict = check_malnormal_system(graphs)
    if not verdict:
        pair, word = verdict.witness
        raise MalnormalityError(
            f"subgroups {pair[0]} and {pair[1]} intersect nontrivially: {format_word(word)}", word)
    L = compute_L(graphs)
    cores = [g.core()[0] for g in graphs]
    C = frozenset(w for w in alphabet.reduced_words(L + 2)
                  if not any(readable_anywhere(c, w) for c in cores))
    system = SubgroupSystem(rank, graphs, L, C)
    if not C:
        raise InputError("the separating set is empty; is the system proper?")
    return system


def in_Cyl_C(system: SubgroupSystem, w: Sequence[int]) -> bool:
    m = system.word_length
    w = tuple(w)
    return any(w[i:i + m] in system.C for i in range(len(w) - m + 1))


def is_peripheral(system: SubgroupSystem, g: Sequence[int]) -> bool:
    """Trivial elements and elements conjugate into some subgroup are peripheral."""
    core, _ = cyclic_reduce(reduce(g))
    if core is None:
        return True
    return any(is_conjugate_into(c, core) for c in system.cores)


def stratum_S_k(system: SubgroupSystem, k: int) -> frozenset:
    """Reduced words of length ``k`` with no subword in ``C``."""
    if k < 0:
        raise InputError("k must be nonnegative")
    cache = system._strata
    if k not in cache:
        m = system.word_length
        if k < m:
            cache[k] = frozenset(system.alphabet.reduced_words(k))
        else:
            prev = stratum_S_k(system, k - 1)
            cache[k] = frozenset(
                v for w in prev for v in system.alphabet.extensions(w) if v[-m:] not in system.C)
    return cache[k]


def split_S_k(system: SubgroupSystem, k: int) -> frozenset:
    """One representative from each pair ``{w, w^-1}`` of the stratum."""
    if k < 1:
        raise InputError("k must be positive")
    return frozenset(w for w in stratum_S_k(system, k) if w == canonical(w))


# --- cylinders on the Cayley tree -------------------------------------------

def _common_prefix(p: Word, q: Word) -> int:
    n = min(len(p), len(q))
    i = 0
    while i < n and p[i] == q[i]:
        i += 1
    return i


def tree_distance(p: Word, q: Word) -> int:
    """Distance between two vertices (reduced words) of the Cayley tree."""
    return len(p) + len(q) - 2 * _common_prefix(p, q)


def geodesic(p: Word, q: Word) -> list[Word]:
    """Vertices of the tree geodesic from ``p`` to ``q``."""
    step = multiply(invert(p), q)
    return [multiply(p, step[:i]) for i in range(len(step) + 1)]


def between(x: Word, p: Word, q: Word) -> bool:
    """``x`` lies on the geodesic from ``p`` to ``q``."""
    return tree_distance(p, x) + tree_distance(x, q) == tree_distance(p, q)


def neighbours(v: Word, rank: int) -> list[Word]:
    return [multiply(v, (b,)) for b in Alphabet(rank).letters]


@dataclass(frozen=True)
class PositionedPath:
    """The geodesic edge path ``origin * gamma_label`` in the Cayley tree."""

    origin: Word
    label: Word

    def __post_init__(self):
        object.__setattr__(self, "origin", reduce(self.origin))
        object.__setattr__(self, "label", reduce(self.label))
        if not self.label:
            raise InputError("a positioned path needs at least one edge")

    @classmethod
    def between(cls, p: Word, q: Word) -> "PositionedPath":
        return cls(p, multiply(invert(p), q))

    @property
    def terminus(self) -> Word:
        return multiply(self.origin, self.label)

    @property
    def endpoints(self) -> frozenset:
        return frozenset((self.origin, self.terminus))

    def vertices(self) -> list[Word]:
        return geodesic(self.origin, self.terminus)

    def reversed(self) -> "PositionedPath":
        return PositionedPath(self.terminus, invert(self.label))

    def contains_path(self, other: "PositionedPath") -> bool:
        """``other`` is a subpath of ``self``, so C(self) is inside C(other)."""
        return all(between(x, self.origin, self.terminus) for x in other.endpoints)

    def sort_key(self):
        return (word_key(self.origin), word_key(self.label))

    def __str__(self):
        return f"{format_word(self.origin) or 'e'}:{format_word(self.label)}"


def _extreme_pair(points: Sequence[Word]) -> tuple[Word, Word]:
    return max(itertools.combinations(points, 2),
               key=lambda pq: (tree_distance(*pq), word_key(pq[0]), word_key(pq[1])))


def cylinders_intersect(p1: PositionedPath, p2: PositionedPath) -> bool:
    """Some bi-infinite geodesic contains both paths.

    In a tree without leaves this happens iff the four endpoints lie on one
    geodesic segment, i.e. all of them are between the two farthest apart.
    """
    points = list(p1.endpoints | p2.endpoints)
    if len(points) < 2:
        return True
    x, y = _extreme_pair(points)
    return all(between(z, x, y) for z in points)


def _refine(hull: list[Word], own_length: int, rank: int) -> list[PositionedPath]:
    """Split C(hull[:own_length+1]) into disjoint cylinders.

    ``hull`` runs from the far endpoint of the refined path to the far
    endpoint of the other path.  Each new path follows ``hull`` up to some
    vertex ``hull[t]`` with ``t`` between the end of the refined path and the
    second-to-last hull vertex, then leaves the segment ``hull[.. -2]`` by one
    edge.  Their far endpoints sit at distance exactly one from that segment.
    """
    last = len(hull) - 1
    out = []
    for t in range(own_length, last):
        back = hull[t - 1]
        ahead = hull[t + 1] if t + 1 < last else None
        for z in neighbours(hull[t], rank):
            if z == back or z == ahead:
                continue
            out.append(PositionedPath.between(hull[0], z))
    return out


def refine_pair(p_i: PositionedPath, p_j: PositionedPath, rank: int) -> tuple[list[PositionedPath], list[PositionedPath]]:
    """Refine two intersecting, mutually non-nested cylinders.

    Returns the families replacing ``p_i`` and ``p_j``.  Within each family the
    cylinders are disjoint, each family covers its parent exactly, and across
    the families two cylinders are equal or disjoint (exactly one path, the
    full hull, appears in both).
    """
    points = list(p_i.endpoints | p_j.endpoints)
    x, y = _extreme_pair(points)
    # orient the hull from p_i's far end to p_j's far end
    if x not in p_i.endpoints or y not in p_j.endpoints:
        x, y = y, x
    if x not in p_i.endpoints or y not in p_j.endpoints:
        raise InputError("paths are nested or their cylinders do not meet")
    hull = geodesic(x, y)
    fam_i = _refine(hull, len(p_i.label), rank)
    fam_j = _refine(hull[::-1], len(p_j.label), rank)
    return fam_i, fam_j


def decompose_compact_open(system: SubgroupSystem, paths: Iterable[PositionedPath],
                           max_steps: int = 1_000_000) -> list[PositionedPath]:
    """Rewrite a finite union of Cyl(C) cylinders as a disjoint union.

    Paths are inserted one at a time into a disjoint family.  A path that
    contains a member is dropped (its cylinder is already covered); members
    containing the path are absorbed; a member that meets the path without
    nesting is replaced by its refinement, and the path's own pieces that
    are not shared with the member go back on the worklist.  Every output
    path contains an input path, so still lies in Cyl(C).
    """
    pending = list(paths)
    for p in pending:
        if not system.in_Cyl_C(p.label):
            raise InputError(f"path {p} does not define a cylinder in Cyl(C)")
    # shorter paths first: they absorb the longer ones they are nested in
    pending.sort(key=lambda p: (-len(p.label),) + p.sort_key())
    family: dict[frozenset, PositionedPath] = {}
    steps = 0
    while pending:
        steps += 1
        if steps > max_steps:
            raise RuntimeError("cylinder refinement did not terminate")
        p = pending.pop()
        if p.endpoints in family:
            continue
        absorbed = False
        clash = None
        for key, q in list(family.items()):
            if not cylinders_intersect(p, q):
                continue
            if p.contains_path(q):
                absorbed = True
                break
            if q.contains_path(p):
                del family[key]
                continue
            clash = q
            break
        if absorbed:
            continue
        if clash is None:
            family[p.endpoints] = p
            continue
        fam_p, fam_q = refine_pair(p, clash, system.rank)
        del family[clash.endpoints]
        shared = set()
        for piece in fam_q:
            family[piece.endpoints] = piece
            shared.add(piece.endpoints)
        pending.extend(piece for piece in fam_p if piece.endpoints not in shared)
    return sorted(family.values(), key=PositionedPath.sort_key)
