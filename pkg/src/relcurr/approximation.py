"""Approximating a relative current by rational currents.

The k-extension of the target is scaled by ``R`` and read as weights on the
de Bruijn graph of length-k words.  Directed cycles whose edges all carry
weight at least one are peeled off as rational currents until none is left.
Dividing the extracted sum by ``R`` gives the approximant.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from relcurr.boundary import SubgroupSystem
from relcurr.currents import (
    CurrentTable,
    RationalCurrentSum,
    SignedTable,
    current_key,
    eval_rational,
    extend_k,
)
from relcurr.errors import InputError, InvariantError, ZeroCurrentError
from relcurr.words import Alphabet, CyclicWord, Word, canonical, cyclic_reduce, word_key


def martin_threshold(n: int, k: int) -> int:
    """``2n (2n-1)^(2n (2n-1)^(k-2))``, computed exactly.

    The counting argument behind it assumes ``n >= 3``; smaller ranks are
    evaluated formally with a warning.
    """
    if n < 1 or k < 2:
        raise InputError("martin_threshold needs n >= 1 and k >= 2")
    if n < 3:
        warnings.warn(f"threshold is only guaranteed for n >= 3 (got n={n})", stacklevel=2)
    q = 2 * n - 1
    return 2 * n * q ** (2 * n * q ** (k - 2))


class TransitionGraph:
    """Weighted de Bruijn graph: vertices are words of length k-1, edges words of length k.

    Weights are flip-invariant, so they are stored per ``canonical`` key and
    each oriented edge reads the weight of its key.
    """

    def __init__(self, rank: int, k: int, weights: dict[Word, Fraction]):
        if k < 2:
            raise InputError("transition graphs need k >= 2")
        self.rank = rank
        self.k = k
        self.alphabet = Alphabet(rank)
        self.weights = {canonical(w): Fraction(v) for w, v in weights.items()}
        for w in self.alphabet.reduced_words(k):
            self.weights.setdefault(canonical(w), Fraction(0))

    @classmethod
    def from_table(cls, table: SignedTable, R=1) -> "TransitionGraph":
        R = Fraction(R)
        return cls(table.rank, table.depth,
                   {w: R * v for w, v in table.weights.items() if len(w) == table.depth})

    def weight(self, w: Word) -> Fraction:
        return self.weights[canonical(w)]

    def edges(self) -> list[Word]:
        return self.alphabet.reduced_words(self.k)

    def total_mass(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def mass_at(self, w: Word) -> Fraction:
        """Sum of the edge weights over all length-k words that start with ``w``."""
        w = tuple(w)
        if len(w) > self.k:
            raise InputError("word longer than the graph depth")
        level = [w]
        for _ in range(self.k - len(w)):
            level = [v for u in level for v in self.alphabet.extensions(u)]
        return sum((self.weight(v) for v in level), Fraction(0))

    def multiple(self, alpha: CyclicWord) -> int:
        """Largest ``t`` with ``t * eta_alpha <= weight`` on every length-k word."""
        best = None
        for i in range(len(alpha)):
            w = alpha.periodic(i, self.k)
            count = eval_rational(alpha, w)
            t = int(self.weight(w) // count)
            best = t if best is None else min(best, t)
        return max(best or 0, 0)

    def subtract(self, alpha: CyclicWord, t: int) -> None:
        for key in {canonical(alpha.periodic(i, self.k)) for i in range(len(alpha))}:
            self.weights[key] -= t * eval_rational(alpha, key)

    def heavy_cycles(self, length: int) -> list[CyclicWord]:
        """Simple cycles of a given length through edges of weight >= 1.

        Each cycle is listed once, from its least vertex, and reported as the
        cyclic word of its edge letters; order is by ``current_key``.
        """
        heavy: dict[Word, list[int]] = {}
        for w in self.edges():
            if self.weight(w) >= 1:
                heavy.setdefault(w[:-1], []).append(w[-1])
        found = set()
        for start in sorted(heavy, key=word_key):
            skey = word_key(start)
            stack = [(start, (), frozenset([start]))]
            while stack:
                vertex, letters, seen = stack.pop()
                for b in heavy.get(vertex, ()):
                    nxt = (vertex + (b,))[1:]
                    path = letters + (b,)
                    if nxt == start and len(path) == length:
                        key = current_key(CyclicWord(path))
                        found.add(key)
                    elif len(path) < length and nxt not in seen and word_key(nxt) > skey:
                        stack.append((nxt, path, seen | {nxt}))
        return sorted(found, key=lambda h: word_key(h.least))


def extract_cycle(graph: TransitionGraph) -> tuple[CyclicWord, int] | None:
    """The first heavy simple cycle admitting a positive multiple.

    Shorter cycles come first, ties broken lexicographically.
    """
    vertices = {w[:-1] for w in graph.edges() if graph.weight(w) >= 1}
    for length in range(1, len(vertices) + 1):
        for alpha in graph.heavy_cycles(length):
            t = graph.multiple(alpha)
            if t >= 1:
                return alpha, t
    return None


@dataclass
class ApproximationReport:
    """Outcome of the extraction loop.

    ``alphas`` and ``peripheral`` hold ``(class, multiple)`` pairs.
    ``residual`` is the exact sup distance on Cyl(C) words of length at most
    ``k`` between the target and the approximant.  ``stopping_bound`` is the
    largest mass left on those words, so ``residual <= stopping_bound / R``.
    """

    k: int
    R: Fraction
    alphas: list[tuple[CyclicWord, int]]
    peripheral: list[tuple[CyclicWord, int]]
    residual: Fraction
    stopping_bound: Fraction
    remaining_mass: Fraction
    threshold: int
    repair_scale: Fraction
    stalled: bool = False
    approximant: RationalCurrentSum = field(default_factory=RationalCurrentSum)

    @property
    def alpha_words(self) -> list[CyclicWord]:
        return [a for a, _ in self.alphas]


def approximate(system: SubgroupSystem, eta0: CurrentTable, k: int, R, tol=None,
                max_iterations: int = 100_000) -> ApproximationReport:
    """Approximate ``eta0`` on Cyl(C) words of length <= k by ``(1/R) sum t_i eta_[alpha_i]``."""
    R = Fraction(R)
    if R <= 0:
        raise InputError("R must be positive")
    if all(eta0[c] == 0 for c in system.C):
        raise ZeroCurrentError("zero projective class: the current vanishes on C")
    extension = extend_k(system, eta0, k)
    graph = TransitionGraph.from_table(extension, R)

    alphas: list[tuple[CyclicWord, int]] = []
    peripheral: list[tuple[CyclicWord, int]] = []
    for _ in range(max_iterations):
        found = extract_cycle(graph)
        if found is None:
            break
        alpha, t = found
        before = graph.total_mass()
        graph.subtract(alpha, t)
        if any(v < 0 for v in graph.weights.values()):
            raise InvariantError(f"extraction of {alpha} broke domination")
        if graph.total_mass() > before - 1:
            raise InvariantError("extraction made no progress")
        if system.is_peripheral(alpha.word):
            if any(eval_rational(alpha, c) for c in system.C):
                raise InvariantError(f"peripheral class {alpha} charges Cyl(C)")
            peripheral.append((alpha, t))
        else:
            alphas.append((alpha, t))
    else:
        raise InvariantError("extraction loop did not terminate")

    approximant = RationalCurrentSum()
    for alpha, t in alphas:
        approximant.add(alpha, Fraction(t) / R)
    residual = Fraction(0)
    bound = Fraction(0)
    for key in system.domain(k):
        residual = max(residual, abs(eta0[key] - approximant.evaluate(key)))
        bound = max(bound, graph.mass_at(key))
    if residual > bound / R:
        raise InvariantError(f"residual {residual} exceeds the stopping bound {bound}/{R}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        threshold = martin_threshold(system.rank, k)
    return ApproximationReport(
        k=k, R=R, alphas=alphas, peripheral=peripheral, residual=residual,
        stopping_bound=bound, remaining_mass=graph.total_mass(), threshold=threshold,
        repair_scale=extension.repair_scale,
        stalled=tol is not None and residual > Fraction(tol), approximant=approximant)


def combine_single(alphas: Sequence[CyclicWord], m: int) -> CyclicWord:
    """Cyclic reduction of ``alpha_1^m alpha_2^m ...`` in the given order."""
    if not alphas:
        raise InputError("need at least one class")
    if m < 1:
        raise InputError("m must be a positive integer")
    word = tuple(x for a in alphas for x in a.word * m)
    core, _ = cyclic_reduce(word)
    if core is None:
        raise InputError("the product of powers cancels to the identity")
    return core


def sup_distance(t1: CurrentTable, t2: CurrentTable) -> Fraction:
    if t1.system is not t2.system or t1.depth != t2.depth:
        raise InputError("tables must share the system and the depth")
    return max((abs(t1.weights[w] - t2.weights[w]) for w in t1.weights), default=Fraction(0))
