"""Brute-force reference computations on the Cayley tree of F_n.

Nothing here uses folding, core graphs or the closed-form occurrence count;
everything is enumeration of group elements and vertex sets in a ball.
Words are tuples of nonzero ints, as in the package.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def red(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inv(word):
    return tuple(-x for x in reversed(word))


def _rmul(x, y):
    """Product of two reduced words."""
    i = 0
    while i < len(x) and i < len(y) and x[-1 - i] == -y[i]:
        i += 1
    return x[:len(x) - i] + y[i:]


def mul(*words):
    return red(itertools.chain.from_iterable(words))


def letters(n):
    return [s * i for i in range(1, n + 1) for s in (1, -1)]


def ball(n, radius):
    level, out = [()], [()]
    for _ in range(radius):
        level = [w + (b,) for w in level for b in letters(n) if not w or w[-1] != -b]
        out.extend(level)
    return out


# --- subgroup membership by products of generators --------------------------

def products(gens, max_factors):
    """All reduced elements that are products of at most ``max_factors`` generators^+-1."""
    symbols = list(gens) + [inv(g) for g in gens]
    seen = {()}
    level = {()}
    for _ in range(max_factors):
        level = {mul(x, s) for x in level for s in symbols} - seen
        seen |= level
    return seen


# --- subgroup trees ---------------------------------------------------------

@lru_cache(maxsize=None)
def subgroup_elements(gens, length):
    """Elements of <gens> of length <= length, found by growing products.

    Products are pruned once they exceed ``length + 2 * max|g|``; for the
    Nielsen-reduced generating sets used in the tests no shorter element is
    reachable only through a longer one beyond that slack.
    """
    slack = length + 2 * max(len(g) for g in gens)
    symbols = list(gens) + [inv(g) for g in gens]
    seen = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for x in frontier:
            for s in symbols:
                y = mul(x, s)
                if len(y) <= slack and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(x for x in seen if len(x) <= length)


@lru_cache(maxsize=None)
def tree_vertices(gens, radius):
    """Vertices of the minimal subtree of <gens> inside the ball of ``radius``.

    The generators are cyclically reduced and their based graph has no spur,
    so the origin lies in the minimal subtree and the tree is the union of the
    translates a * [e, g] for a in the subgroup and g a generator.
    """
    longest = max(len(g) for g in gens)
    out = set()
    for a in subgroup_elements(gens, radius + longest):
        for g in list(gens) + [inv(g) for g in gens]:
            for i in range(len(g) + 1):
                v = mul(a, g[:i])
                if len(v) <= radius:
                    out.add(v)
    return frozenset(out)


def tree_readable(gens, w, radius=12):
    """The path labelled ``w`` lies in some translate of the subgroup tree."""
    tree = tree_vertices(gens, radius)
    for v in tree:
        if len(v) > radius - len(w):
            continue
        if all(mul(v, w[:i]) in tree for i in range(len(w) + 1)):
            return True
    return False


def _dist(p, q):
    return len(mul(inv(p), q))


def _diameter(points):
    points = list(points)
    if not points:
        return -1
    return max((_dist(p, q) for p, q in itertools.combinations(points, 2)), default=0)


def intersection_bound(systems, radius=8, shift=4):
    """Largest diameter of the intersection of two distinct subgroup trees.

    Only translates through the origin are needed: any intersection can be
    moved there.  Trees are compared inside the ball of ``radius``.
    """
    big = radius + shift
    trees = []
    for idx, gens in enumerate(systems):
        full = tree_vertices(gens, big)
        translates = set()
        for v in full:
            if len(v) <= shift:
                vi = inv(v)
                translates.add(frozenset(x for x in (mul(vi, y) for y in full) if len(x) <= radius))
        trees.extend(translates)
    best = 0
    for t1, t2 in itertools.combinations(trees, 2):
        best = max(best, _diameter(t1 & t2))
    return best


# --- axes of conjugates -----------------------------------------------------

def _period_exponent(g):
    m = len(g)
    for d in range(1, m + 1):
        if m % d == 0 and g[:d] * (m // d) == g:
            return m // d
    raise AssertionError


@lru_cache(maxsize=None)
def axes_through_origin(g, conj_radius=5, radius=6):
    """Distinct axes of conjugates x g x^-1 (|x| <= conj_radius) that pass through e.

    Each axis is recorded by its vertex set inside the ball of ``radius``.
    """
    reps = 2 * radius + 2
    base = set()
    for j in range(-reps, reps + 1):
        power = g * j if j >= 0 else inv(g) * (-j)
        for i in range(len(g)):
            base.add(red(power + g[:i]))
    rank = max(2, max(abs(c) for c in g))
    axes = set()
    for x in ball(rank, conj_radius):
        # x * axis passes through e iff x^-1 lies on the axis
        if inv(x) not in base:
            continue
        axes.add(frozenset(v for v in (_rmul(x, b) for b in base) if len(v) <= radius))
    return frozenset(axes)


def axis_count(g, w):
    """``k`` times the number of unoriented axes of conjugates of ``g`` through ``gamma_w``.

    ``g`` is cyclically reduced and equals h**k with h root-free.
    """
    w = tuple(w)
    return _period_exponent(g) * sum(1 for line in axes_through_origin(tuple(g)) if w in line)


# --- cylinders of positioned paths ------------------------------------------
# Vertices of the tree are reduced words; neighbours differ by one last letter.

def _lcp(p, q):
    i = 0
    for x, y in zip(p, q):
        if x != y:
            break
        i += 1
    return i


def tdist(p, q):
    return len(p) + len(q) - 2 * _lcp(p, q)


def _geodesic(p, q):
    m = _lcp(p, q)
    return [p[:i] for i in range(len(p), m - 1, -1)] + [q[:i] for i in range(m + 1, len(q) + 1)]


def _hull(points):
    verts = set(points)
    for p, q in itertools.combinations(points, 2):
        verts.update(_geodesic(p, q))
    return verts


def _degrees(verts):
    degree = dict.fromkeys(verts, 0)
    for v in verts:
        if v and v[:-1] in verts:
            degree[v] += 1
            degree[v[:-1]] += 1
    return degree


def spine_intersect(p, q):
    """Cylinders of two positioned paths meet iff their spanned subtree is a path."""
    p0, p1 = _ends(p)
    q0, q1 = _ends(q)
    # in a tree the span of a finite set is the union of geodesics from one of its points
    verts = set(_geodesic(p0, p1))
    verts.update(_geodesic(p0, q0))
    verts.update(_geodesic(p0, q1))
    return max(_degrees(verts).values()) <= 2


def _ends(path):
    return path[0], mul(path[0], path[1])


def _contains(outer, inner):
    """Path ``outer`` runs through both ends of ``inner``, so C(outer) is inside C(inner)."""
    u, v = _ends(outer)
    d = tdist(u, v)
    return all(tdist(u, x) + tdist(x, v) == d for x in _ends(inner))


def _extend(path, at_end, rank):
    """Split C(path) by the next edge beyond one end."""
    u, v = _ends(path)
    if not at_end:
        u, v = v, u
    back = _geodesic(u, v)[-2]
    out = []
    for b in letters(rank):
        z = mul(v, (b,))
        if z != back:
            out.append((u, mul(inv(u), z)) if at_end else (z, mul(inv(z), u)))
    return out


def cover_profile(cell, family, rank):
    """Multiplicities with which ``family`` covers the lines of C(cell).

    The cell is split one edge at a time until every member either contains
    all of its lines or none of them; returns the set of multiplicities seen.
    """
    seen = set()
    stack = [(cell, list(family))]
    while stack:
        c, candidates = stack.pop()
        # a sub-cell can only meet members that met its parent
        meeting = [q for q in candidates if spine_intersect(c, q)]
        full = 0
        partial = None
        for q in meeting:
            if _contains(c, q):
                full += 1
            elif partial is None:
                partial = q
        if partial is None:
            seen.add(full)
            continue
        u, v = _ends(c)
        a, b = _ends(partial)
        # extend towards a member end that lies beyond the cell
        d = tdist(u, v)
        beyond = [x for x in (a, b) if tdist(u, x) + tdist(x, v) != d]
        x = beyond[0]
        stack.extend((sub, meeting) for sub in _extend(c, tdist(v, x) < tdist(u, x), rank))
    return seen
