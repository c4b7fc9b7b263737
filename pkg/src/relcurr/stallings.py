"""Stallings subgroup graphs.

A finitely generated subgroup ``A`` of F_n is modelled by its folded, based
graph: the closed reduced paths at the basepoint spell exactly the elements
of ``A``.  Trimming hanging trees (including the basepoint spur) gives the
core, which is the quotient of the minimal subtree T_A by ``A``.  A reduced
word is readable from some core vertex iff it labels a path inside some
translate of T_A through the origin.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from relcurr.errors import InputError, MalnormalityError
from relcurr.words import (
    Alphabet,
    CyclicWord,
    Word,
    cyclic_reduce,
    invert,
    letter_key,
    reduce,
)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: ``ok`` or a witness explaining the failure."""

    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


class CoreGraph:
    """A folded, connected, letter-labelled graph with a basepoint.

    ``adjacency[v]`` maps a letter ``l`` to the endpoint of the edge leaving
    ``v`` with label ``l``; every edge appears once per direction (``l`` at
    its origin and ``-l`` at its terminus).  Vertices are numbered by a
    breadth-first search from the basepoint (vertex 0) that visits letters in
    ``letter_key`` order, so equal subgroups give identical graphs.
    """

    def __init__(self, adjacency: Sequence[dict[int, int]]):
        self.adjacency = tuple(dict(a) for a in adjacency)
        self.basepoint = 0
        for v, out in enumerate(self.adjacency):
            for letter, w in out.items():
                if self.adjacency[w].get(-letter) != v:
                    raise ValueError("adjacency is not symmetric under inversion")

    def __eq__(self, other):
        return isinstance(other, CoreGraph) and self.adjacency == other.adjacency

    def __hash__(self):
        return hash(tuple(tuple(sorted(a.items())) for a in self.adjacency))

    def __repr__(self):
        return f"CoreGraph(vertices={self.num_vertices}, edges={self.num_edges}, rank={self.rank})"

    @property
    def num_vertices(self) -> int:
        return len(self.adjacency)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def rank(self) -> int:
        return self.num_edges - self.num_vertices + 1

    def vertices(self) -> range:
        return range(self.num_vertices)

    def edges(self) -> list[tuple[int, int, int]]:
        """Each geometric edge once, as ``(origin, positive letter, terminus)``."""
        return [(v, l, w) for v, out in enumerate(self.adjacency) for l, w in out.items() if l > 0]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_letter(self) -> int:
        return max((abs(l) for a in self.adjacency for l in a), default=0)

    def read(self, v: int, w: Iterable[int]) -> int | None:
        """End vertex of the path labelled ``w`` from ``v``, or None."""
        for letter in w:
            v = self.adjacency[v].get(letter)
            if v is None:
                return None
        return v

    def is_covering(self, rank: int) -> bool:
        """True when every vertex has all 2n letters (finite index subgroup)."""
        return all(self.degree(v) == 2 * rank for v in self.vertices())

    def spanning_paths(self) -> list[Word]:
        """Label of a tree path from the basepoint to each vertex."""
        paths: list[Word | None] = [None] * self.num_vertices
        paths[0] = ()
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for letter in sorted(self.adjacency[v], key=letter_key):
                w = self.adjacency[v][letter]
                if paths[w] is None:
                    paths[w] = paths[v] + (letter,)
                    queue.append(w)
        return paths  # type: ignore[return-value]

    def basis(self) -> list[Word]:
        """A free basis of the subgroup, one element per edge off a spanning tree."""
        paths = self.spanning_paths()
        tree = set()
        for w in range(1, self.num_vertices):
            p = paths[w]
            tree.add((self.read(0, p[:-1]), p[-1]))
        gens = []
        for v, l, w in self.edges():
            if (v, l) in tree or (w, -l) in tree:
                continue
            gens.append(reduce(paths[v] + (l,) + invert(paths[w])))
        return gens

    def core(self) -> tuple["CoreGraph", Word]:
        """Trim hanging trees, rebasing at a core vertex.

        Returns ``(core, p)`` where ``p`` labels the spur from the old basepoint
        to the new one, so that the old subgroup is ``p * new * p^-1``.
        """
        alive = set(self.vertices())
        degree = {v: self.degree(v) for v in alive}
        leaves = deque(v for v in alive if degree[v] <= 1)
        while leaves:
            v = leaves.popleft()
            if v not in alive or len(alive) == 1:
                continue
            alive.discard(v)
            for w in self.adjacency[v].values():
                if w in alive:
                    degree[w] -= 1
                    if degree[w] == 1:
                        leaves.append(w)
        paths = self.spanning_paths()
        new_base = min(alive, key=lambda v: (len(paths[v]), [letter_key(x) for x in paths[v]]))
        sub = [{l: w for l, w in self.adjacency[v].items() if w in alive} for v in self.vertices()]
        return _canonical_graph(sub, new_base), paths[new_base]

    def is_core(self) -> bool:
        return all(self.degree(v) >= 2 for v in self.vertices())


def _canonical_graph(adjacency: Sequence[dict[int, int]], base: int) -> CoreGraph:
    """Renumber the component of ``base`` by a letter-ordered BFS."""
    order = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for letter in sorted(adjacency[v], key=letter_key):
            w = adjacency[v][letter]
            if w not in order:
                order[w] = len(order)
                queue.append(w)
    out: list[dict[int, int]] = [dict() for _ in order]
    for v, i in order.items():
        for letter, w in adjacency[v].items():
            out[i][letter] = order[w]
    return CoreGraph(out)


def from_generators(gens: Iterable[Sequence[int]]) -> CoreGraph:
    """Fold the bouquet of generator loops into the based Stallings graph."""
    words = [reduce(g) for g in gens]
    words = [w for w in words if w]
    if not words:
        raise InputError("trivial subgroup not allowed")

    parent: list[int] = [0]
    edges: list[tuple[int, int, int]] = []
    for w in words:
        prev = 0
        for i, letter in enumerate(w):
            if i == len(w) - 1:
                nxt = 0
            else:
                nxt = len(parent)
                parent.append(nxt)
            edges.append((prev, letter, nxt))
            prev = nxt

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    while True:
        out: dict[int, dict[int, int]] = {}
        merged = False
        for u, letter, v in edges:
            u, v = find(u), find(v)
            for a, l, b in ((u, letter, v), (v, -letter, u)):
                slot = out.setdefault(a, {})
                c = slot.get(l)
                if c is None:
                    slot[l] = b
                elif find(c) != find(b):
                    parent[find(b)] = find(c)
                    merged = True
        if not merged:
            break

    roots = sorted({find(x) for x in range(len(parent))})
    index = {r: i for i, r in enumerate(roots)}
    adjacency: list[dict[int, int]] = [dict() for _ in roots]
    for u, letter, v in edges:
        u, v = index[find(u)], index[find(v)]
        adjacency[u][letter] = v
        adjacency[v][-letter] = u
    return _canonical_graph(adjacency, index[find(0)])


def contains(G: CoreGraph, w: Sequence[int]) -> bool:
    """Subgroup membership: ``w`` reads a closed loop at the basepoint."""
    return G.read(G.basepoint, reduce(w)) == G.basepoint


def readable_from(G: CoreGraph, v: int, w: Sequence[int]) -> bool:
    return G.read(v, w) is not None


def readable_anywhere(G: CoreGraph, w: Sequence[int]) -> bool:
    return any(G.read(v, w) is not None for v in G.vertices())


def is_conjugate_into(G: CoreGraph, g: CyclicWord | Sequence[int]) -> bool:
    """True iff some conjugate of ``g`` lies in the subgroup."""
    if not isinstance(g, CyclicWord):
        g, _ = cyclic_reduce(reduce(g))
        if g is None:
            return True
    return any(G.read(v, g.word) == v for v in G.vertices())


def is_conjugate_subgroup(G1: CoreGraph, G2: CoreGraph) -> bool:
    """Conjugacy of subgroups: label-preserving isomorphism of the cores."""
    c1, _ = G1.core()
    c2, _ = G2.core()
    if c1.num_vertices != c2.num_vertices or c1.num_edges != c2.num_edges:
        return False
    for start in c2.vertices():
        # folded graphs: the image of one vertex determines the whole map
        if _canonical_graph(c2.adjacency, start) == c1:
            return True
    return False


@dataclass
class FiberComponent:
    """A connected component (with at least one edge) of a product graph."""

    vertices: list[tuple[int, int]]
    edges: list[tuple[tuple[int, int], int, tuple[int, int]]]
    is_diagonal: bool = False
    _adj: dict = field(default=None, repr=False)

    def adjacency(self) -> dict[tuple[int, int], dict[int, tuple[int, int]]]:
        if self._adj is None:
            adj: dict = {v: {} for v in self.vertices}
            for a, l, b in self.edges:
                adj[a][l] = b
                adj[b][-l] = a
            self._adj = adj
        return self._adj

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1

    def diameter(self) -> int:
        """Longest path, in edges; only meaningful when the component is a tree."""
        def farthest(src):
            dist = {src: 0}
            queue = deque([src])
            while queue:
                v = queue.popleft()
                for w in self.adjacency()[v].values():
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        queue.append(w)
            far = max(dist, key=lambda x: (dist[x], x))
            return far, dist[far]

        end, _ = farthest(min(self.vertices))
        _, d = farthest(end)
        return d

    def cycle_label(self) -> Word | None:
        """Label of a closed reduced path in the component, if one exists."""
        if self.is_tree():
            return None
        adj = self.adjacency()
        root = min(self.vertices)
        path = {root: ()}
        queue = deque([root])
        tree_edges = set()
        while queue:
            v = queue.popleft()
            for l in sorted(adj[v], key=letter_key):
                w = adj[v][l]
                if w not in path:
                    path[w] = path[v] + (l,)
                    tree_edges.add((v, l))
                    tree_edges.add((w, -l))
                    queue.append(w)
        for a, l, b in sorted(self.edges):
            if (a, l) not in tree_edges:
                return reduce(path[a] + (l,) + invert(path[b]))
        raise AssertionError("component with a cycle but no off-tree edge")


def fiber_product(G1: CoreGraph, G2: CoreGraph) -> list[FiberComponent]:
    """Components of the labelled product graph that carry at least one edge.

    For ``G1 == G2`` the component made of diagonal pairs is flagged.
    """
    same = G1 == G2
    adj: dict[tuple[int, int], dict[int, tuple[int, int]]] = {}
    for u in G1.vertices():
        for v in G2.vertices():
            out = {}
            for l, u2 in G1.adjacency[u].items():
                v2 = G2.adjacency[v].get(l)
                if v2 is not None:
                    out[l] = (u2, v2)
            if out:
                adj[(u, v)] = out
    seen = set()
    components = []
    for start in sorted(adj):
        if start in seen:
            continue
        verts = []
        queue = deque([start])
        seen.add(start)
        while queue:
            x = queue.popleft()
            verts.append(x)
            for y in adj[x].values():
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        verts.sort()
        edges = [(x, l, y) for x in verts for l, y in adj[x].items() if l > 0]
        diagonal = same and all(a == b for a, b in verts)
        components.append(FiberComponent(verts, edges, diagonal))
    return components


def _relevant_components(cores: Sequence[CoreGraph]):
    """Off-diagonal self components and all cross components, with labels."""
    for i, Gi in enumerate(cores):
        for comp in fiber_product(Gi, Gi):
            if not comp.is_diagonal:
                yield (i, i), comp
        for j in range(i + 1, len(cores)):
            for comp in fiber_product(Gi, cores[j]):
                yield (i, j), comp


def _cores(graphs: Sequence[CoreGraph]) -> list[CoreGraph]:
    return [g.core()[0] for g in graphs]


def check_malnormal_system(graphs: Sequence[CoreGraph]) -> Verdict:
    """Malnormality of the system generated by ``graphs``.

    The verdict's witness, on failure, is ``(pair, word)``: the indices of the
    subgroups involved and a nontrivial element of the forbidden intersection
    (up to conjugacy).
    """
    for pair, comp in _relevant_components(_cores(graphs)):
        label = comp.cycle_label()
        if label is not None:
            return Verdict(False, (pair, label))
    return Verdict(True)


def compute_L(graphs: Sequence[CoreGraph]) -> int:
    """Largest diameter of an intersection of two distinct subgroup trees.

    Empty or single-vertex intersections count as diameter 0.
    """
    best = 0
    for pair, comp in _relevant_components(_cores(graphs)):
        label = comp.cycle_label()
        if label is not None:
            raise MalnormalityError(f"subgroups {pair} violate malnormality", label)
        best = max(best, comp.diameter())
    return best


def is_root_closed_bounded(G: CoreGraph, max_len: int, max_exp: int, rank: int | None = None) -> Verdict:
    """Search for ``g**k`` in a conjugate of the subgroup with ``g`` outside it.

    Only cyclically reduced ``g`` with ``|g| <= max_len`` and ``2 <= k <= max_exp``
    are tried; that suffices up to conjugacy.  The witness is ``(g, k)``.
    """
    if max_len < 1 or max_exp < 1:
        raise InputError("bounds must be positive")
    rank = rank or max(2, G.max_letter())
    if G.is_covering(rank) and G.num_vertices == 1:
        raise InputError("the whole free group is not an admissible subgroup")
    core, _ = G.core()
    alphabet = Alphabet(rank)
    for length in range(1, max_len + 1):
        for g in alphabet.cyclically_reduced_words(length):
            for k in range(2, max_exp + 1):
                for v in core.vertices():
                    if core.read(v, g * k) == v and core.read(v, g) != v:
                        return Verdict(False, (g, k))
    return Verdict(True)
