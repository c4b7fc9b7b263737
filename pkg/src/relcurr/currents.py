"""Finite coordinates of relative currents and signed measured currents.

A current is recorded by its values on cylinders ``C(gamma_w)``.  Values are
invariant under ``w -> w^-1``, so tables are keyed by ``canonical(w)``.

* ``CurrentTable``: a relative current, known on Cyl(C) words up to a depth.
* ``SignedTable``: a signed measured current on every reduced word up to a
  depth.
* ``RationalCurrentSum``: a finite positive combination of currents of
  conjugacy classes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from relcurr.boundary import SubgroupSystem, split_S_k, stratum_S_k
from relcurr.errors import InputError, InvariantError, NotStabilizingError, ZeroCurrentError
from relcurr.linalg import InconsistentSystem, solve_exact
from relcurr.stallings import Verdict, from_generators, is_conjugate_subgroup
from relcurr.words import (
    Alphabet,
    Automorphism,
    CyclicWord,
    Word,
    canonical,
    cyclic_reduce,
    format_word,
    invert,
    letter_key,
    occurrences,
    primitive_root,
    reduce,
    word_key,
)


def _as_cyclic(g) -> CyclicWord:
    if isinstance(g, CyclicWord):
        return g
    core, _ = cyclic_reduce(reduce(g))
    if core is None:
        raise InputError("rational currents are undefined for the trivial element")
    return core


def eval_rational(g, w: Sequence[int]) -> int:
    """Value of the rational current of ``g`` on the cylinder of ``w``.

    For ``g = h**k`` with ``h`` root-free this is ``k`` times the number of
    positions in one period of h^inf where ``w`` or ``w^-1`` can be read,
    i.e. the number of unoriented axes of conjugates of ``h`` through
    gamma_w, scaled by ``k``.
    """
    g = _as_cyclic(g)
    w = tuple(w)
    if not w:
        raise InputError("cylinders need a nonempty path")
    h, k = primitive_root(g)
    return k * (occurrences(w, h) + occurrences(invert(w), h))


def current_key(g) -> CyclicWord:
    """Root-free, orientation-normalised representative of ``[h]`` and ``[h^-1]``.

    Both classes define the same current, so they share a key.
    """
    h, _ = primitive_root(_as_cyclic(g))
    inv = h.inverse()
    return CyclicWord(min(h.least, inv.least, key=word_key))


class RationalCurrentSum:
    """``sum m_h * eta_[h]`` over root-free classes ``h`` with ``m_h > 0``."""

    def __init__(self, terms: Mapping | None = None):
        self.terms: dict[CyclicWord, Fraction] = {}
        for g, m in (terms or {}).items():
            self.add(g, m)

    @classmethod
    def of(cls, *gs, mult=1) -> "RationalCurrentSum":
        out = cls()
        for g in gs:
            out.add(g, mult)
        return out

    def add(self, g, mult=1) -> None:
        mult = Fraction(mult)
        if mult < 0:
            raise InputError("multiplicities must be nonnegative")
        if mult == 0:
            return
        g = _as_cyclic(g)
        _, k = primitive_root(g)
        key = current_key(g)
        self.terms[key] = self.terms.get(key, Fraction(0)) + mult * k

    def __call__(self, w: Sequence[int]) -> Fraction:
        return self.evaluate(w)

    def evaluate(self, w: Sequence[int]) -> Fraction:
        return sum((m * eval_rational(h, w) for h, m in self.terms.items()), Fraction(0))

    def __add__(self, other: "RationalCurrentSum") -> "RationalCurrentSum":
        out = RationalCurrentSum(self.terms)
        for h, m in other.terms.items():
            out.add(h, m)
        return out

    def scaled(self, factor) -> "RationalCurrentSum":
        factor = Fraction(factor)
        return RationalCurrentSum({h: m * factor for h, m in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, RationalCurrentSum) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self) -> list[tuple[CyclicWord, Fraction]]:
        return sorted(self.terms.items(), key=lambda hm: (len(hm[0]), word_key(hm[0].least)))

    def __repr__(self):
        body = " + ".join(f"{m}*[{format_word(h.least)}]" for h, m in self.sorted_terms())
        return f"RationalCurrentSum({body or '0'})"


@dataclass
class CurrentTable:
    """A relative current on Cyl(C) words of length at most ``depth``."""

    system: SubgroupSystem
    depth: int
    weights: dict[Word, Fraction]

    def __post_init__(self):
        if self.depth < self.system.word_length:
            raise InputError(f"depth must be at least L+2 = {self.system.word_length}")
        clean = {}
        for w, v in self.weights.items():
            w = reduce(w)
            key = canonical(w)
            if len(w) > self.depth or not self.system.in_Cyl_C(w):
                raise InputError(f"{format_word(w)!r} is outside the table domain")
            v = Fraction(v)
            if v < 0:
                raise InputError(f"negative weight at {format_word(w)!r}")
            if key in clean and clean[key] != v:
                raise InputError(f"conflicting weights for {format_word(w)!r} and its inverse")
            clean[key] = v
        for key in self.system.domain(self.depth):
            clean.setdefault(key, Fraction(0))
        self.weights = clean

    def __getitem__(self, w: Sequence[int]) -> Fraction:
        return self.weights[canonical(tuple(w))]

    def keys(self) -> list[Word]:
        return sorted(self.weights, key=lambda w: (len(w), word_key(w)))

    def C_keys(self) -> list[Word]:
        return [w for w in self.keys() if len(w) == self.system.word_length and w in self.system.C]

    def scaled(self, factor) -> "CurrentTable":
        factor = Fraction(factor)
        return CurrentTable(self.system, self.depth, {w: v * factor for w, v in self.weights.items()})

    def __eq__(self, other):
        return (isinstance(other, CurrentTable) and self.system is other.system
                and self.depth == other.depth and self.weights == other.weights)


@dataclass
class SignedTable:
    """A signed measured current on all reduced words of length 1..depth.

    ``repair_scale`` and ``repair_current`` record the multiple of the
    peripheral current added to restore nonnegativity (zero if none was needed).
    """

    rank: int
    depth: int
    weights: dict[Word, Fraction]
    repair_scale: Fraction = Fraction(0)
    repair_current: RationalCurrentSum | None = None
    base: Fraction = Fraction(1)
    free_letters: tuple = field(default=())

    def __getitem__(self, w: Sequence[int]) -> Fraction:
        return self.weights[canonical(tuple(w))]

    def keys(self) -> list[Word]:
        return sorted(self.weights, key=lambda w: (len(w), word_key(w)))

    def additivity_residual(self, w: Word) -> Fraction:
        """``eta(w) - sum_b eta(wb)``; zero for every ``|w| < depth`` when additive."""
        alphabet = Alphabet(self.rank)
        return self[w] - sum((self[v] for v in alphabet.extensions(w)), Fraction(0))


def restrict_relative(system: SubgroupSystem, current: RationalCurrentSum, k: int) -> CurrentTable:
    """Values of a rational current on the Cyl(C) cylinders of length <= k."""
    if k < system.word_length:
        raise InputError(f"depth must be at least L+2 = {system.word_length}")
    return CurrentTable(system, k, {w: current.evaluate(w) for w in system.domain(k)})


def check_consistency(table: CurrentTable) -> Verdict:
    """Additivity over one-letter extensions at every Cyl(C) word below the depth.

    Extensions of a Cyl(C) word stay in Cyl(C), so every such word is
    checked, in both orientations.  The witness is the first failing word.
    """
    alphabet = table.system.alphabet
    for key in table.keys():
        if len(key) >= table.depth:
            continue
        for w in (key, invert(key)):
            total = sum((table[v] for v in alphabet.extensions(w)), Fraction(0))
            if total != table[w]:
                return Verdict(False, w)
    return Verdict(True)


# --- k-extensions ------------------------------------------------------------

def _known(system, eta0, w):
    """eta0's value at a Cyl(C) word, or None for unknowns."""
    return eta0[w] if system.in_Cyl_C(w) else None


def level_system(system: SubgroupSystem, eta0: CurrentTable, values: Mapping[Word, Fraction], length: int):
    """The linear system fixing the stratum at ``length`` from shorter values.

    Rows are indexed by the words ``v`` of the stratum one shorter (both
    orientations), columns by the chosen half of the stratum at ``length``.
    The right-hand side is
    ``c_v = eta(v) - sum_{vb not in stratum} eta0(vb)``.
    """
    alphabet = system.alphabet
    S_cur = stratum_S_k(system, length)
    columns = sorted(split_S_k(system, length), key=word_key)
    row_words = sorted(stratum_S_k(system, length - 1), key=word_key)
    rows, rhs = [], []
    for v in row_words:
        row: dict[Word, int] = {}
        c = values[canonical(v)]
        for vb in alphabet.extensions(v):
            if vb in S_cur:
                col = canonical(vb)
                row[col] = row.get(col, 0) + 1
            else:
                c -= eta0[vb]
        rows.append(row)
        rhs.append(c)
    return row_words, rows, rhs, columns


def row_relation_defects(system: SubgroupSystem, row_words, rhs, length: int) -> list[tuple[Word, Fraction]]:
    """Check ``sum_{bu in S} c_bu == sum_{bu^-1 in S} c_{bu^-1}`` for each ``u``.

    ``u`` runs over the stratum two shorter than ``length``.  Returns the
    ``(u, lhs - rhs)`` pairs that fail (an empty list when all hold).
    """
    c = dict(zip(row_words, rhs))
    letters = system.alphabet.letters
    defects = []
    for u in sorted(stratum_S_k(system, length - 2), key=word_key):
        u_inv = invert(u)
        lhs = sum((c[(b,) + u] for b in letters
                   if (not u or b != -u[0]) and (b,) + u in c), Fraction(0))
        rhs_sum = sum((c[(b,) + u_inv] for b in letters
                       if (not u_inv or b != -u_inv[0]) and (b,) + u_inv in c), Fraction(0))
        if lhs != rhs_sum:
            defects.append((u, lhs - rhs_sum))
    return defects


def _solve_base_levels(system, eta0, base):
    """Jointly fix all words of length <= L+1 and the stratum at L+2.

    Unknowns are ordered longest first so that, where the constraints leave
    letters free, they are the free variables; those get the value ``base``.
    """
    alphabet = system.alphabet
    top = system.word_length
    unknowns = []
    for m in range(top, 0, -1):
        level = sorted(split_S_k(system, m), key=word_key)
        unknowns.extend(level)
    unknown_set = set(unknowns)
    rows, rhs, row_words = [], [], []
    for m in range(1, top):
        for v in alphabet.reduced_words(m):
            row_words.append(v)
            row = {canonical(v): -1}
            c = Fraction(0)
            for vb in alphabet.extensions(v):
                key = canonical(vb)
                if key in unknown_set:
                    row[key] = row.get(key, 0) + 1
                else:
                    c -= eta0[vb]
            rows.append({k: x for k, x in row.items() if x})
            rhs.append(c)
    letters = [u for u in unknowns if len(u) == 1]
    free_values = {u: base for u in letters}
    try:
        solution, free = solve_exact(rows, rhs, unknowns, free_values=free_values, return_free=True)
    except InconsistentSystem as exc:
        relation = {format_word(row_words[i]): str(x) for i, x in exc.relation.items()}
        raise InvariantError(f"no extension exists: additivity rows {relation} conflict") from exc
    return solution, tuple(u for u in letters if u in free)


def extend_k(system: SubgroupSystem, eta0: CurrentTable, k: int, base=1) -> SignedTable:
    """A signed measured current that agrees with ``eta0`` on Cyl(C).

    Values are built up by length.  The levels up to L+2 are solved jointly.
    Above them each level solves ``M x = c`` over half the stratum, after
    checking the row-relation identity on ``c``.  Negative values at lengths
    L+2..k are then lifted by adding the least multiple of a peripheral
    current that vanishes on Cyl(C).
    """
    if k < system.word_length:
        raise InputError(f"k must be at least L+2 = {system.word_length}")
    if eta0.depth < k:
        raise InputError(f"eta0 is only known to depth {eta0.depth} < k = {k}")
    if eta0.system is not system:
        raise InputError("eta0 belongs to a different subgroup system")
    base = Fraction(base)

    values: dict[Word, Fraction] = {}
    for key, v in eta0.weights.items():
        if len(key) <= k:
            values[key] = v
    base_solution, free_letters = _solve_base_levels(system, eta0, base)
    values.update(base_solution)

    for length in range(2, k + 1):
        row_words, rows, rhs, columns = level_system(system, eta0, values, length)
        defects = row_relation_defects(system, row_words, rhs, length)
        if defects:
            u, gap = defects[0]
            raise InvariantError(
                f"row relation at u={format_word(u) or 'e'} (length {length}) fails by {gap}")
        if length <= system.word_length:
            # already fixed jointly; the level system must hold as a certificate
            for row, c in zip(rows, rhs):
                if sum((values[col] * n for col, n in row.items()), Fraction(0)) != c:
                    raise InvariantError(f"base-level solution violates level {length}")
            continue
        try:
            values.update(solve_exact(rows, rhs, columns))
        except InconsistentSystem as exc:
            relation = {format_word(row_words[i]): str(x) for i, x in exc.relation.items()}
            raise InvariantError(f"level {length} system inconsistent; relation {relation}") from exc

    table = SignedTable(system.rank, k, values, base=base, free_letters=free_letters)
    _assert_extension(system, eta0, table)

    deficient = [w for w in values if system.word_length <= len(w) <= k and values[w] < 0]
    if deficient:
        eta_A = build_eta_A(system, k)
        scale = max(-values[w] / eta_A.evaluate(w) for w in deficient)
        repaired = {w: v + scale * eta_A.evaluate(w) for w, v in values.items()}
        table = SignedTable(system.rank, k, repaired, scale, eta_A, base, free_letters)
        _assert_extension(system, eta0, table)
    for w in table.weights:
        if system.word_length <= len(w) and table.weights[w] < 0:
            raise InvariantError(f"negative value at {format_word(w)} after repair")
    return table


def _assert_extension(system, eta0, table):
    alphabet = system.alphabet
    for m in range(1, table.depth):
        for w in alphabet.reduced_words(m):
            if table.additivity_residual(w) != 0:
                raise InvariantError(f"additivity fails at {format_word(w)}")
    for key in system.domain(table.depth):
        if table[key] != eta0[key]:
            raise InvariantError(f"extension disagrees with eta0 at {format_word(key)}")


def _complete_loop(core, start: int, w: Word) -> Word:
    """Shortest ``p`` with ``w*p`` a cyclically reduced loop at ``start``."""
    end = core.read(start, w)
    first_inv = -w[0]
    init = (end, w[-1])
    parent = {init: None}
    queue = deque([init])
    while queue:
        state = queue.popleft()
        vertex, last = state
        if vertex == start and last != first_inv:
            path = []
            while parent[state] is not None:
                state, letter = parent[state]
                path.append(letter)
            return tuple(reversed(path))
        for letter in sorted(core.adjacency[vertex], key=letter_key):
            if letter == -last:
                continue
            nxt = (core.adjacency[vertex][letter], letter)
            if nxt not in parent:
                parent[nxt] = (state, letter)
                queue.append(nxt)
    raise InvariantError(f"no reduced loop through {format_word(w)} in the core")


def build_eta_A(system: SubgroupSystem, k: int) -> RationalCurrentSum:
    """A peripheral rational current positive on the strata at L+2..k.

    Each word of the stratum at length ``k`` is read in some core and closed
    up into a cyclically reduced loop; the root-free classes of those loops,
    each with multiplicity one, form the sum.  It vanishes on Cyl(C).
    """
    if not system.cores:
        raise InputError("repair current undefined for an empty subgroup system")
    if k < system.word_length:
        raise InputError(f"k must be at least L+2 = {system.word_length}")
    out = RationalCurrentSum()
    for w in sorted(stratum_S_k(system, k), key=word_key):
        for core in system.cores:
            start = next((v for v in core.vertices() if core.read(v, w) is not None), None)
            if start is not None:
                break
        else:
            raise InvariantError(f"{format_word(w)} lies in the stratum but no core reads it")
        loop = w + _complete_loop(core, start, w)
        key = current_key(loop)
        if key not in out.terms:
            out.add(key, 1)
    for m in range(system.word_length, k + 1):
        for w in stratum_S_k(system, m):
            if out.evaluate(w) <= 0:
                raise InvariantError(f"repair current vanishes on {format_word(w)}")
    for c in system.C:
        if out.evaluate(c) != 0:
            raise InvariantError(f"repair current charges Cyl(C) word {format_word(c)}")
    return out


def normalize(table: CurrentTable) -> tuple[CurrentTable, Fraction]:
    """Scale so that the largest value on the words of C is 1."""
    top = max((table[c] for c in table.system.C), default=Fraction(0))
    if top == 0:
        raise ZeroCurrentError("zero projective class: the current vanishes on C")
    scale = 1 / top
    return table.scaled(scale), scale


def stabilizes(phi: Automorphism, system: SubgroupSystem) -> bool:
    """``phi`` maps each subgroup of the system onto a conjugate of one of them."""
    for f in (phi, phi.inverse()):
        for g in system.graphs:
            image = from_generators([f(b) for b in g.basis()])
            if not any(is_conjugate_subgroup(image, h) for h in system.graphs):
                return False
    return True


def act(phi: Automorphism, current: RationalCurrentSum, system: SubgroupSystem | None = None) -> RationalCurrentSum:
    """Push a rational current forward: ``[g] -> [phi(g)]`` termwise."""
    if system is not None:
        if phi.rank != system.rank:
            raise InputError("automorphism and system have different ranks")
        if not stabilizes(phi, system):
            raise NotStabilizingError("automorphism does not preserve the subgroup system")
    out = RationalCurrentSum()
    for h, m in current.terms.items():
        out.add(phi(h.word), m)
    return out
