"""Mod-2 Steenrod monomial arithmetic.

Words Sq^{j(1)}...Sq^{j(m)} are tuples of positive upper indices; an element
is a mod-2 set (frozenset) of admissible words of equal degree.  The lower
index convention Sq_i x = Sq^{|x|-i} x is used at the user-facing boundary
(module actions, free-module bases); Adem normalization runs on upper words.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

UpperWord = tuple[int, ...]
Element = frozenset  # of UpperWord

ZERO: Element = frozenset()

# generous bound on rewrite steps; tripping it signals a termination bug
_STEP_BUDGET = 10_000_000


def binom_mod2(a: int, b: int) -> int:
    """C(a, b) mod 2, with the convention C(a, b) = 0 whenever a < 0 or b < 0."""
    if a < 0 or b < 0:
        return 0
    # Lucas: C(a, b) is odd iff the bits of b are a subset of the bits of a
    return 1 if (b & ~a) == 0 else 0


def _binom_general_mod2(a: int, b: int) -> int:
    """C(a, b) mod 2 with the generalized (polynomial) binomial for a < 0.

    This is the convention under which the Adem relations hold for all
    integer indices: C(a, b) = C(b - a - 1, b) mod 2 when a < 0 <= b.
    """
    if b < 0:
        return 0
    if a < 0:
        return binom_mod2(b - a - 1, b)
    return binom_mod2(a, b)


def degree(word: UpperWord) -> int:
    return sum(word)


def is_admissible(word: UpperWord) -> bool:
    if any(j <= 0 for j in word):
        return False
    return all(word[r] >= 2 * word[r + 1] for r in range(len(word) - 1))


@lru_cache(maxsize=None)
def _adem_pair(i: int, j: int) -> Element:
    """Admissible-side expansion of Sq^i Sq^j with 0 < i < 2j."""
    terms = set()
    for t in range(i // 2 + 1):
        if binom_mod2(j - t - 1, i - 2 * t):
            word = (i + j,) if t == 0 else (i + j - t, t)
            terms.symmetric_difference_update({word})
    return frozenset(terms)


def adem_normalize(word: UpperWord) -> Element:
    """Expand an upper word in the admissible basis of the Steenrod algebra.

    Repeatedly rewrites the leftmost adjacent inadmissible pair via the Adem
    relation; Sq^0 factors are dropped and any negative index kills the word.
    """
    word = tuple(word)
    if any(j < 0 for j in word):
        return ZERO
    word = tuple(j for j in word if j != 0)
    result: set[UpperWord] = set()
    pending: set[UpperWord] = {word}
    steps = 0
    while pending:
        w = pending.pop()
        pos = -1
        for r in range(len(w) - 1):
            if w[r] < 2 * w[r + 1]:
                pos = r
                break
        if pos < 0:
            result.symmetric_difference_update({w})
            continue
        steps += 1
        if steps > _STEP_BUDGET:
            raise RuntimeError("Adem rewrite budget exceeded")
        for repl in _adem_pair(w[pos], w[pos + 1]):
            pending.symmetric_difference_update({w[:pos] + repl + w[pos + 2 :]})
    return frozenset(result)


def normalize_element(words) -> Element:
    out: set[UpperWord] = set()
    for w in words:
        out.symmetric_difference_update(adem_normalize(w))
    return frozenset(out)


def instability_kill(element: Element, n: int) -> Element:
    """Project onto the basis of the free unstable module on a degree-n class.

    Kills each admissible term Sq^{j(1)}...Sq^{j(m)} having some position s
    with j(s) > n + sum_{t>s} j(t), i.e. the terms that vanish on iota_n.
    """
    kept = set()
    for word in element:
        suffix = n
        unstable = False
        for j in reversed(word):
            if j > suffix:
                unstable = True
                break
            suffix += j
        if not unstable:
            kept.add(word)
    return frozenset(kept)


@dataclass(frozen=True)
class LowerWord:
    """Sq_{i(1)}...Sq_{i(m)} iota_n, in lower indices on a degree-n generator."""

    base_degree: int
    indices: tuple[int, ...]

    def degrees(self) -> list[int]:
        """Degree sequence d_1, ..., d_{m+1} with d_{m+1} = n, d_r = 2 d_{r+1} - i(r)."""
        degs = [self.base_degree]
        for i in reversed(self.indices):
            degs.append(2 * degs[-1] - i)
        degs.reverse()
        return degs

    @property
    def degree(self) -> int:
        return self.degrees()[0]


def lower_to_upper(w: LowerWord) -> tuple[UpperWord | None, int]:
    """Convert to an upper word; None means the word is zero (a negative upper index).

    The r-th square acts on an element of degree d_{r+1}, so j(r) = d_{r+1} - i(r).
    Raises ValueError when an intermediate degree goes negative.
    """
    degs = w.degrees()
    if any(d < 0 for d in degs):
        raise ValueError(f"negative intermediate degree in {w}")
    upper = []
    for r, i in enumerate(w.indices):
        j = degs[r + 1] - i
        if j < 0:
            return None, degs[0]
        if j > 0:
            upper.append(j)
    return tuple(upper), degs[0]


def upper_to_lower(word: UpperWord, n: int) -> tuple[int, ...]:
    """Lower indices of an upper word acting on a degree-n class."""
    indices = []
    deg = n
    for j in reversed(word):
        indices.append(deg - j)
        deg += j
    indices.reverse()
    return tuple(indices)


def act_on_generator(indices: tuple[int, ...], n: int) -> Element:
    """Sq_{i(1)}...Sq_{i(m)} iota_n as a sum of admissible words applied to iota_n."""
    upper, _ = lower_to_upper(LowerWord(n, indices))
    if upper is None:
        return ZERO
    return instability_kill(adem_normalize(upper), n)


def verify_lower_adem(i: int, j: int, n: int) -> bool:
    """Check Sq_i Sq_j = sum_s C(s-j-1, 2s-i-j) Sq_{i+2j-2s} Sq_s on iota_n."""
    if not (n > j and 2 * n > i + j):
        raise ValueError(f"need n > j and 2n > i + j, got i={i}, j={j}, n={n}")
    lhs = act_on_generator((i, j), n)
    rhs: set[UpperWord] = set()
    for s in range(-((i + j) // -2), n + 1):
        # the identity needs the all-integer Adem convention on the
        # admissible side (i <= j), where s - j - 1 can go negative
        if _binom_general_mod2(s - j - 1, 2 * s - i - j):
            rhs.symmetric_difference_update(act_on_generator((i + 2 * j - 2 * s, s), n))
    return lhs == frozenset(rhs)


def admissible_words_of_degree(d: int, max_first: int | None = None) -> list[UpperWord]:
    """All admissible upper words of total degree d (j(1) bounded by max_first if given)."""
    if d == 0:
        return [()]
    out = []
    hi = d if max_first is None else min(d, max_first)
    for j1 in range(1, hi + 1):
        for rest in admissible_words_of_degree(d - j1, max_first=j1 // 2):
            out.append((j1,) + rest)
    return out
