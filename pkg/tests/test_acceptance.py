"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line with its wall time and budget.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from relcurr.boundary import PositionedPath, build_system, decompose_compact_open, in_Cyl_C
from relcurr.currents import (
    RationalCurrentSum,
    act,
    eval_rational,
    extend_k,
    level_system,
    restrict_relative,
    row_relation_defects,
)
from relcurr.approximation import approximate
from relcurr.stallings import compute_L, contains, from_generators
from relcurr.words import Alphabet, Automorphism, CyclicWord, invert

import oracles
from conftest import W, graph


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, budget):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            ok = ok and elapsed < budget
            with capsys.disabled():
                print(f"\ncriterion {number} {'PASS' if ok else 'FAIL'}: {title} "
                      f"({elapsed:.2f}s, budget {budget}s)")
        assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
    return run


def desk_systems():
    return [
        (build_system([graph("a")], 2), [(W("a"),)]),
        (build_system([graph("ab"), graph("aB")], 2), [(W("ab"),), (W("aB"),)]),
    ]


def test_criterion_1_membership(criterion):
    with criterion(1, "folded-graph membership agrees with products, |w| <= 6", 10):
        words = list(Alphabet(2).words_up_to(6))
        for gens in (["a"], ["b"], ["aa", "b"], ["ab"], ["aB"]):
            gens = [W(g) for g in gens]
            g = from_generators(gens)
            members = {w for w in oracles.products(gens, 6) if len(w) <= 6}
            for w in words:
                assert contains(g, w) == (w in members), w


def _loop_labels(core, max_length):
    out = set()
    for start in core.vertices():
        stack = [(start, ())]
        while stack:
            v, path = stack.pop()
            if path and v == start:
                out.add(path)
            if len(path) < max_length:
                for letter, nxt in core.adjacency[v].items():
                    if not path or path[-1] != -letter:
                        stack.append((nxt, path + (letter,)))
    return out


def test_criterion_2_separating_set(criterion):
    with criterion(2, "separating set: unreadable words hit C, subgroup loops avoid it", 30):
        for system, subgroups in desk_systems():
            assert system.C
            assert {invert(c) for c in system.C} == system.C
            for length in range(system.word_length, system.word_length + 4):
                for w in Alphabet(2).reduced_words(length):
                    if not any(oracles.tree_readable(s, w) for s in subgroups):
                        assert in_Cyl_C(system, w), w
            for core in system.cores:
                for label in _loop_labels(core, system.L + 8):
                    assert not in_Cyl_C(system, label), label


def test_criterion_3_intersection_bound(criterion):
    with criterion(3, "L matches the ball oracle at radius 8", 30):
        for gens, expected in ((["a"], 0), (["ab", "aB"], 1)):
            assert compute_L([graph(g) for g in gens]) == expected
            assert oracles.intersection_bound([(W(g),) for g in gens], radius=8) == expected


def test_criterion_4_axis_oracle(criterion):
    with criterion(4, "occurrence counts equal axis counts for |g|, |w| <= 4", 60):
        words = [w for w in Alphabet(2).words_up_to(4) if w]
        for m in range(1, 5):
            for g in Alphabet(2).cyclically_reduced_words(m):
                cg = CyclicWord(g)
                for w in words:
                    assert eval_rational(cg, w) == oracles.axis_count(g, w), (g, w)


def test_criterion_5_extension_contract(criterion):
    with criterion(5, "k-extension agrees, is additive, nonnegative, rhs identity holds", 60):
        system = build_system([graph("a")], 2)
        for g in ("b", "ab"):
            for k in (3, 4):
                eta0 = restrict_relative(system, RationalCurrentSum.of(W(g)), k)
                ext = extend_k(system, eta0, k)
                for key in system.domain(k):
                    assert ext[key] == eta0[key]
                for w in Alphabet(2).words_up_to(k - 1):
                    if w:
                        assert ext.additivity_residual(w) == 0
                for w, v in ext.weights.items():
                    if system.word_length <= len(w) <= k:
                        assert v >= 0
                for length in range(system.word_length + 1, k + 1):
                    row_words, _, rhs, _ = level_system(system, eta0, ext.weights, length)
                    assert row_relation_defects(system, row_words, rhs, length) == []


def test_criterion_6_density(criterion):
    with criterion(6, "approximation residual within bound/R and non-increasing", 120):
        system = build_system([graph("a")], 2)
        eta0 = restrict_relative(system, RationalCurrentSum.of(W("b")), 3)
        residuals = []
        for R in (10, 100, 1000):
            report = approximate(system, eta0, 3, R)
            assert report.residual <= report.stopping_bound / R
            assert all(not system.is_peripheral(a.word) for a in report.alpha_words)
            residuals.append(report.residual)
        assert residuals == sorted(residuals, reverse=True)


def _disjoint_union(system, family, out):
    for cell in family:
        assert oracles.cover_profile((cell.origin, cell.label), [(p.origin, p.label) for p in out],
                                     system.rank) == {1}
    for cell in out:
        assert 0 not in oracles.cover_profile((cell.origin, cell.label),
                                              [(p.origin, p.label) for p in family], system.rank)
    for i, x in enumerate(out):
        assert in_Cyl_C(system, x.label)
        for y in out[i + 1:]:
            assert not oracles.spine_intersect((x.origin, x.label), (y.origin, y.label))


def test_criterion_7_decomposition(criterion):
    with criterion(7, "decomposition of 50 seeded families is disjoint and union-equal", 30):
        system = build_system([graph("a")], 2)
        rng = random.Random(20240607)
        words = [w for m in range(2, 5) for w in Alphabet(2).reduced_words(m) if in_Cyl_C(system, w)]
        origins = list(Alphabet(2).words_up_to(2))
        for _ in range(50):
            family = [PositionedPath(rng.choice(origins), rng.choice(words))
                      for _ in range(rng.randint(1, 5))]
            _disjoint_union(system, family, decompose_compact_open(system, family))


def test_criterion_8_action(criterion):
    with criterion(8, "automorphism action round trip and image of the b class", 10):
        system = build_system([graph("a")], 2)
        phi = Automorphism.parse(2, "a:a,b:ba", "a:a,b:bA")
        rng = random.Random(8)
        pool = [g for m in range(1, 5) for g in Alphabet(2).cyclically_reduced_words(m)]
        for _ in range(20):
            current = RationalCurrentSum()
            for _ in range(rng.randint(1, 4)):
                current.add(CyclicWord(rng.choice(pool)), F(rng.randint(1, 9), rng.randint(1, 5)))
            assert act(phi.inverse(), act(phi, current, system), system) == current
        assert act(phi, RationalCurrentSum.of(W("b")), system) == RationalCurrentSum.of(W("ba"))
