"""Exact sparse linear solves over the rationals.

Rows are cleared of denominators once, then reduced by fraction-free
(integer) Gauss-Jordan elimination with content removal.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from relcurr.errors import InvariantError


class InconsistentSystem(InvariantError):
    """No solution exists.

    ``relation`` maps original row indices to rational coefficients whose
    combination of rows vanishes while the same combination of right-hand
    sides does not.
    """

    def __init__(self, message, relation):
        super().__init__(message)
        self.relation = relation


def _lcm_den(values) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out


def _normalize(row: dict, rhs: int, combo: dict):
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
    g = math.gcd(g, rhs)
    for v in combo.values():
        g = math.gcd(g, v)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
        rhs //= g
        combo = {k: v // g for k, v in combo.items()}
    return row, rhs, combo


def solve_exact(rows: Sequence[dict[Hashable, Fraction]], rhs: Sequence[Fraction],
                columns: Sequence[Hashable], free_values: Mapping[Hashable, Fraction] | None = None,
                return_free: bool = False):
    """Return one solution of ``rows . x = rhs`` as a mapping column -> value.

    Columns are pivoted in the given order, so later columns are the ones
    left free.  Free columns take their value from ``free_values`` (default
    zero).  With ``return_free`` the list of free columns is returned too.
    """
    work = []
    scales = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        row = {c: Fraction(v) for c, v in row.items() if v}
        b = Fraction(b)
        s = _lcm_den(list(row.values()) + [b])
        scales.append(s)
        work.append(_normalize({c: int(v * s) for c, v in row.items()}, int(b * s), {i: 1}))

    pivots: list[tuple[Hashable, int]] = []
    active = list(range(len(work)))
    for col in columns:
        idx = next((r for r in active if work[r][0].get(col)), None)
        if idx is None:
            continue
        active.remove(idx)
        prow, pb, pcombo = work[idx]
        a = prow[col]
        for r in range(len(work)):
            if r == idx:
                continue
            row, b, combo = work[r]
            c = row.get(col)
            if not c:
                continue
            new = {k: a * v for k, v in row.items()}
            for k, v in prow.items():
                new[k] = new.get(k, 0) - c * v
            new = {k: v for k, v in new.items() if v}
            newcombo = {k: a * v for k, v in combo.items()}
            for k, v in pcombo.items():
                newcombo[k] = newcombo.get(k, 0) - c * v
            newcombo = {k: v for k, v in newcombo.items() if v}
            work[r] = _normalize(new, a * b - c * pb, newcombo)
        pivots.append((col, idx))

    for r in active:
        row, b, combo = work[r]
        if not row and b != 0:
            relation = {k: Fraction(v * scales[k]) for k, v in sorted(combo.items())}
            raise InconsistentSystem(f"row relation {relation} has nonzero right-hand side", relation)

    pivot_cols = {col for col, _ in pivots}
    free = [c for c in columns if c not in pivot_cols]
    solution = {c: Fraction(free_values.get(c, 0)) if free_values else Fraction(0) for c in columns}
    for col, idx in pivots:
        row, b, _ = work[idx]
        # Gauss-Jordan: the other nonzero entries of a pivot row sit on free columns
        rest = sum((v * solution[k] for k, v in row.items() if k != col), Fraction(0))
        solution[col] = (b - rest) / row[col]
    if return_free:
        return solution, free
    return solution
