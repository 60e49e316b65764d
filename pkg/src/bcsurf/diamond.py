"""Noncommutative quadratic rewriting: reduction systems, overlap resolution,
normal forms, and irreducible-word enumeration.

A rewrite system carries an ordered alphabet and a list of quadratic rules,
each replacing a two-letter leading word by a linear combination of
lexicographically smaller words.  Once every overlap ambiguity is certified
resolvable, the irreducible words (those avoiding every leading word as a
factor) form a basis of the quotient algebra and ``normal_form`` computes
canonical representatives.

The concrete instance ``a_system`` encodes the six binomial relations of the
collapsed-parameter algebra, whose irreducible words are the sorted monomials
x2^i x1^j x3^k x4^l; their count in each degree matches the graded dimension
formula C(n+3, 3).

The engine is deliberately generic so toy systems can exercise it; relations
of the general two-parameter algebra are never run through it (their leading
terms under this order need not give a confluent system), and general graded
dimensions come from the evaluation and linear-system routes instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CheckFailed, NonTerminating, UnresolvableOverlap

# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------

Word = tuple[str, ...]


def _normalize_combo(combo) -> dict[Word, Fraction]:
    """Coerce a word / (word, coeff) iterable / mapping into a clean dict."""
    if isinstance(combo, tuple) and all(isinstance(s, str) for s in combo):
        return {combo: Fraction(1)}
    items = combo.items() if isinstance(combo, dict) else list(combo)
    out: dict[Word, Fraction] = {}
    for w, c in items:
        w = tuple(w)
        c = Fraction(c) if not isinstance(c, Fraction) else c
        if c:
            out[w] = out.get(w, Fraction(0)) + c
    return {w: c for w, c in out.items() if c}


@dataclass(frozen=True)
class RewriteSystem:
    """Quadratic string-rewriting system over an ordered alphabet.

    ``alphabet`` lists the symbols in increasing order, so lexicographic
    comparison of equal-length words uses the listed ranks.  Each rule maps a
    distinct two-letter leading word to a linear combination of words of the
    same length; with ``check_order`` (the default) every replacement word
    must be strictly smaller than its leading word, which guarantees that
    rewriting terminates.
    """

    alphabet: tuple[str, ...]
    rules: tuple[tuple[Word, tuple[tuple[Word, Fraction], ...]], ...]
    check_order: bool = True
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)
    _table: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, alphabet, rules, check_order=True):
        alphabet = tuple(alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise CheckFailed("alphabet symbols must be distinct")
        rank = {s: i for i, s in enumerate(alphabet)}
        clean = []
        table = {}
        for lead, combo in rules:
            lead = tuple(lead)
            if len(lead) != 2:
                raise CheckFailed("leading words must have length 2")
            if any(s not in rank for s in lead):
                raise CheckFailed(f"unknown symbol in leading word {lead}")
            if lead in table:
                raise CheckFailed(f"duplicate leading word {lead}")
            repl = _normalize_combo(combo)
            for w in repl:
                if len(w) != 2:
                    raise CheckFailed("replacement words must have length 2")
                if any(s not in rank for s in w):
                    raise CheckFailed(f"unknown symbol in replacement {w}")
                if check_order and not self._lex_less(rank, w, lead):
                    raise CheckFailed(
                        f"replacement {w} is not below leading word {lead}"
                    )
            repl_t = tuple(sorted(repl.items()))
            table[lead] = repl
            clean.append((lead, repl_t))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "rules", tuple(clean))
        object.__setattr__(self, "check_order", check_order)
        object.__setattr__(self, "_rank", rank)
        object.__setattr__(self, "_table", table)

    @staticmethod
    def _lex_less(rank, a: Word, b: Word) -> bool:
        return [rank[s] for s in a] < [rank[s] for s in b]

    def word_key(self, w: Word):
        """Sort key realizing the declared order on equal-length words."""
        return tuple(self._rank[s] for s in w)

    def leading_words(self) -> tuple[Word, ...]:
        return tuple(lead for lead, _ in self.rules)

    def is_irreducible(self, w: Word) -> bool:
        return all(w[i : i + 2] not in self._table for i in range(len(w) - 1))


def a_system() -> RewriteSystem:
    """The six binomial rules of the collapsed-parameter algebra.

    Alphabet order x2 < x1 < x3 < x4; each rule rewrites a product into the
    single lexicographically smaller word it equals in the algebra.
    """
    r = [
        (("x3", "x1"), ("x1", "x3")),
        (("x3", "x2"), ("x1", "x4")),
        (("x4", "x1"), ("x2", "x3")),
        (("x4", "x2"), ("x2", "x4")),
        (("x1", "x2"), ("x2", "x3")),
        (("x4", "x3"), ("x1", "x4")),
    ]
    return RewriteSystem(("x2", "x1", "x3", "x4"), r)


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

_DEFAULT_BUDGET = 100_000


def _redex(sys: RewriteSystem, w: Word, strategy: str) -> int:
    """Position of the redex to contract, or -1 if ``w`` is irreducible."""
    positions = range(len(w) - 1)
    if strategy == "rightmost":
        positions = reversed(positions)
    elif strategy != "leftmost":
        raise ValueError(f"unknown strategy {strategy!r}")
    for i in positions:
        if w[i : i + 2] in sys._table:
            return i
    return -1


def normal_form(sys: RewriteSystem, element, strategy: str = "leftmost",
                budget: int = _DEFAULT_BUDGET) -> dict[Word, Fraction]:
    """Reduce a word or linear combination to its normal form.

    Repeatedly contracts one redex per step — the leftmost or the rightmost
    occurrence of a leading word, per ``strategy`` — until every word in the
    combination is irreducible.  Linear over coefficients.  Raises
    ``NonTerminating`` when the step budget is exhausted, which cannot happen
    for an order-compatible system.
    """
    pending = _normalize_combo(element)
    done: dict[Word, Fraction] = {}
    steps = 0
    while pending:
        w, c = pending.popitem()
        i = _redex(sys, w, strategy)
        if i < 0:
            done[w] = done.get(w, Fraction(0)) + c
            continue
        steps += 1
        if steps > budget:
            raise NonTerminating(
                f"rewriting exceeded {budget} steps on a word of length {len(w)}"
            )
        for piece, coeff in sys._table[w[i : i + 2]].items():
            nw = w[:i] + piece + w[i + 2 :]
            pending[nw] = pending.get(nw, Fraction(0)) + c * coeff
            if not pending[nw]:
                del pending[nw]
    return {w: c for w, c in done.items() if c}


# ---------------------------------------------------------------------------
# confluence
# ---------------------------------------------------------------------------


def resolve_overlaps(sys: RewriteSystem) -> dict:
    """Certify the diamond condition: every overlap ambiguity resolves.

    An overlap is a three-letter word abc where both ab and bc are leading
    words.  The two one-step contractions are each reduced to normal form;
    a nonzero difference raises ``UnresolvableOverlap`` carrying the overlap
    word and the offending combination.
    """
    leads = sys.leading_words()
    overlaps = []
    for ab in leads:
        for bc in leads:
            if ab[1] != bc[0]:
                continue
            w = ab + bc[1:]
            left = {}
            for piece, coeff in sys._table[ab].items():
                left[piece + w[2:]] = coeff
            right = {}
            for piece, coeff in sys._table[bc].items():
                right[w[:1] + piece] = coeff
            diff = normal_form(sys, left)
            for word, coeff in normal_form(sys, right).items():
                diff[word] = diff.get(word, Fraction(0)) - coeff
            diff = {k: v for k, v in diff.items() if v}
            if diff:
                raise UnresolvableOverlap(f"overlap {w} leaves {diff}")
            overlaps.append(w)
    return {"overlaps": overlaps, "count": len(overlaps), "resolved": True}


# ---------------------------------------------------------------------------
# irreducible words
# ---------------------------------------------------------------------------


def irreducible_words(sys: RewriteSystem, n: int) -> list[Word]:
    """All length-n words avoiding every leading word, in increasing order."""
    if n < 0:
        raise ValueError("word length must be nonnegative")
    words: list[Word] = [()]
    for _ in range(n):
        words = [
            w + (s,)
            for w in words
            for s in sys.alphabet
            if not w or (w[-1], s) not in sys._table
        ]
    return sorted(words, key=sys.word_key)


def irreducible_count(sys: RewriteSystem, n: int) -> int:
    """Number of irreducible words of length n, by transfer-matrix counting."""
    if n < 0:
        raise ValueError("word length must be nonnegative")
    if n == 0:
        return 1
    counts = {s: 1 for s in sys.alphabet}
    for _ in range(n - 1):
        counts = {
            s: sum(c for t, c in counts.items() if (t, s) not in sys._table)
            for s in sys.alphabet
        }
    return sum(counts.values())


def hilbert_coefficients(sys: RewriteSystem, max_n: int) -> tuple[int, ...]:
    """Irreducible-word counts in degrees 0..max_n."""
    return tuple(irreducible_count(sys, n) for n in range(max_n + 1))


@dataclass(frozen=True)
class NormalFormTable:
    """Degree-n reduction data: the irreducible basis and the matrix writing
    every degree-n word in that basis.

    ``matrix[w]`` is the normal form of the word ``w``; rows indexed by
    irreducible words reproduce the word itself, making reduction idempotent
    by construction (and checked).
    """

    degree: int
    irreducible: tuple[Word, ...]
    matrix: dict

    @classmethod
    def build(cls, sys: RewriteSystem, n: int) -> "NormalFormTable":
        irr = tuple(irreducible_words(sys, n))
        irr_set = set(irr)
        matrix = {}
        words = [()]
        for _ in range(n):
            words = [w + (s,) for w in words for s in sys.alphabet]
        for w in words:
            nf = normal_form(sys, w)
            for piece in nf:
                if piece not in irr_set:
                    raise CheckFailed(f"normal form of {w} is not irreducible")
            matrix[w] = nf
        for w in irr:
            if matrix[w] != {w: Fraction(1)}:
                raise CheckFailed(f"reduction is not idempotent at {w}")
        return cls(degree=n, irreducible=irr, matrix=matrix)


# ---------------------------------------------------------------------------
# cross-checks
# ---------------------------------------------------------------------------


def a_counts_match_dimension(max_n: int) -> list[tuple[int, int]]:
    """Irreducible counts of the concrete system against C(n+3, 3)."""
    sys = a_system()
    out = []
    for n in range(max_n + 1):
        cnt = irreducible_count(sys, n)
        if cnt != math.comb(n + 3, 3):
            raise CheckFailed(f"irreducible count {cnt} != C({n}+3,3)")
        out.append((n, cnt))
    return out
