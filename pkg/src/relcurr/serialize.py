"""Text and JSON formats for systems, tables and rational currents.

Rationals are always written as integer pairs ``{"num": .., "den": ..}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from relcurr.boundary import SubgroupSystem
from relcurr.currents import CurrentTable, RationalCurrentSum, SignedTable
from relcurr.errors import InputError
from relcurr.stallings import CoreGraph, from_generators
from relcurr.words import CyclicWord, Word, format_word, parse_word, word_key


def rational(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def parse_rational(obj: Any) -> Fraction:
    try:
        if isinstance(obj, dict):
            return Fraction(int(obj["num"]), int(obj["den"]))
        if isinstance(obj, (int, str)):
            return Fraction(obj)
    except (KeyError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"bad rational {obj!r}") from exc
    raise InputError(f"bad rational {obj!r}")


def parse_system_text(text: str, rank: int | None = None) -> tuple[list[CoreGraph], int]:
    """One subgroup per line as comma-separated generators; ``#`` starts a comment.

    Without an explicit rank the largest letter used decides, with at least 2.
    """
    generator_lists: list[list[Word]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        gens = [parse_word(tok, rank) for tok in line.split(",") if tok.strip()]
        if not any(gens):
            raise InputError(f"line {lineno}: a subgroup needs a nontrivial generator")
        generator_lists.append([g for g in gens if g])
    used = max((abs(x) for gens in generator_lists for g in gens for x in g), default=1)
    if rank is None:
        rank = max(2, used)
    return [from_generators(gens) for gens in generator_lists], rank


def table_to_json(table: CurrentTable) -> dict:
    return {
        "system_hash": table.system.fingerprint(),
        "depth": table.depth,
        "entries": [{"word": format_word(w), "value_num": v.numerator, "value_den": v.denominator}
                    for w, v in ((w, table.weights[w]) for w in table.keys())],
    }


def table_from_json(obj: dict, system: SubgroupSystem) -> CurrentTable:
    try:
        depth = int(obj["depth"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("table JSON needs 'depth' and 'entries'") from exc
    expected = obj.get("system_hash")
    if expected is not None and expected != system.fingerprint():
        raise InputError("table was computed for a different subgroup system")
    weights = {}
    for entry in entries:
        try:
            word = parse_word(entry["word"], system.rank)
            value = Fraction(int(entry["value_num"]), int(entry["value_den"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad table entry {entry!r}") from exc
        weights[word] = value
    return CurrentTable(system, depth, weights)


def signed_to_json(table: SignedTable) -> dict:
    out = {
        "depth": table.depth,
        "base": rational(table.base),
        "repair_scale": rational(table.repair_scale),
        "entries": [{"word": format_word(w), "value_num": table.weights[w].numerator,
                     "value_den": table.weights[w].denominator} for w in table.keys()],
    }
    if table.repair_current is not None:
        out["repair_current"] = rational_to_json(table.repair_current)
    return out


def rational_to_json(current: RationalCurrentSum) -> dict:
    return {"terms": [{"cyclic_word": format_word(h.least), "mult_num": m.numerator,
                       "mult_den": m.denominator} for h, m in current.sorted_terms()]}


def rational_from_json(obj: dict, rank: int | None = None) -> RationalCurrentSum:
    out = RationalCurrentSum()
    try:
        terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise InputError("rational current JSON needs 'terms'") from exc
    for term in terms:
        try:
            g = CyclicWord.parse(term["cyclic_word"], rank)
            m = Fraction(int(term["mult_num"]), int(term.get("mult_den", 1)))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad term {term!r}") from exc
        out.add(g, m)
    return out


def cyclic_list(pairs) -> list[dict]:
    return [{"cyclic_word": format_word(a.least), "multiple": t} for a, t in pairs]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def sorted_words(words) -> list[str]:
    return [format_word(w) for w in sorted(words, key=lambda w: (len(w), word_key(w)))]
