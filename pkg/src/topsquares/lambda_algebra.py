"""The mod-2 lambda algebra, its sphere quotients and module-level complexes.

Words are tuples of generator indices (lambda_i, i >= 0); an element is a
mod-2 frozenset of admissible words.  lambda_i sits in bidegree (s, t) =
(1, i + 1), the differential has bidegree (1, 0), and a word contributes to
topological degree a = m + t over a degree-m generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from . import steenrod as st
from .f2linalg import BitMatrix
from .unstable import INF, FiniteUModule

Word = tuple[int, ...]
ZERO: frozenset = frozenset()

_STEP_BUDGET = 10_000_000


def s_degree(word: Word) -> int:
    return len(word)


def t_degree(word: Word) -> int:
    return len(word) + sum(word)


def is_admissible(word: Word) -> bool:
    if any(i < 0 for i in word):
        return False
    return all(2 * word[r] >= word[r + 1] for r in range(len(word) - 1))


@lru_cache(maxsize=None)
def _lambda_pair(a: int, b: int) -> frozenset:
    """Admissible expansion of lambda_a lambda_b with b > 2a (b = 2a + 1 + j, j >= 0)."""
    j = b - 2 * a - 1
    terms = set()
    for t in range((j + 1) // 2):
        if st.binom_mod2(j - t - 1, t):
            terms.symmetric_difference_update({(a + j - t, 2 * a + 1 + t)})
    return frozenset(terms)


def lambda_normalize(word: Word) -> frozenset:
    """Expand a word in the admissible basis by rewriting leftmost bad pairs."""
    result: set[Word] = set()
    pending: set[Word] = {tuple(word)}
    steps = 0
    while pending:
        w = pending.pop()
        pos = -1
        for r in range(len(w) - 1):
            if w[r + 1] > 2 * w[r]:
                pos = r
                break
        if pos < 0:
            result.symmetric_difference_update({w})
            continue
        steps += 1
        if steps > _STEP_BUDGET:
            raise RuntimeError("lambda rewrite budget exceeded")
        for repl in _lambda_pair(w[pos], w[pos + 1]):
            pending.symmetric_difference_update({w[:pos] + repl + w[pos + 2 :]})
    return frozenset(result)


def normalize_element(words) -> frozenset:
    out: set[Word] = set()
    for w in words:
        out.symmetric_difference_update(lambda_normalize(w))
    return frozenset(out)


@lru_cache(maxsize=None)
def d_lambda_gen(i: int) -> frozenset:
    """Differential of a single generator; the result is already admissible."""
    terms = set()
    for j in range(1, i // 2 + 1):
        if st.binom_mod2(i - j, j):
            terms.add((i - j, j - 1))
    out = frozenset(terms)
    assert all(is_admissible(w) for w in out)
    return out


def d_lambda(word: Word) -> frozenset:
    """Leibniz extension of the differential (no signs in characteristic 2)."""
    out: set[Word] = set()
    for r in range(len(word)):
        for mid in d_lambda_gen(word[r]):
            out.symmetric_difference_update(
                lambda_normalize(word[:r] + mid + word[r + 1 :])
            )
    return frozenset(out)


def excess(word: Word) -> int:
    """Sum of 2 I(r) - I(r+1) over consecutive pairs; zero for words of length <= 1."""
    return sum(2 * word[r] - word[r + 1] for r in range(len(word) - 1))


def in_gamma(word: Word, m: int, k: float) -> bool:
    """Whether an admissible word with leading index below m dies in the k-truncation.

    A nontrivial word is killed when t + m - k - 1 > 2 I(s); equivalently its
    excess plus s - 1 exceeds I(1) - (m - k).
    """
    if not word:
        return False
    if k is INF:
        return False
    s, t = len(word), t_degree(word)
    killed = t + m - k - 1 > 2 * word[-1]
    other = excess(word) + (s - 1) > word[0] - (m - k)
    assert killed == other, f"truncation conditions disagree on {word}"
    return killed


def reduce_mod_gamma(elem, m: int, k: float) -> frozenset:
    out = set()
    for w in elem:
        if w and w[0] >= m:
            raise AssertionError(f"word {w} has leading index >= {m}")
        if not in_gamma(w, m, k):
            out.add(w)
    return frozenset(out)


def lambda_k_m_basis(
    m: int, k: float, s_max: int | None = None, t_max: int | None = None
) -> list[Word]:
    """Admissible basis words of the degree-m sphere quotient, empty word included.

    For finite k the answer is a finite set (length is capped at k).  For the
    untruncated algebra pass t_max (and optionally s_max) to window the
    enumeration.  Sorted by (s, t, word).
    """
    if k is INF and t_max is None:
        raise ValueError("untruncated enumeration needs t_max")
    cap_s = int(k) if k is not INF else (s_max if s_max is not None else 10**9)
    if s_max is not None:
        cap_s = min(cap_s, s_max)
    out: list[Word] = [()]

    def extend(word: Word, t: int):
        if len(word) >= cap_s:
            return
        last = word[-1]
        for n in range(0, 2 * last + 1):
            w2 = word + (n,)
            t2 = t + n + 1
            if t_max is not None and t2 > t_max:
                continue
            if in_gamma(w2, m, k):
                continue
            out.append(w2)
            extend(w2, t2)

    for i in range(0, m):
        w = (i,)
        t = i + 1
        if t_max is not None and t > t_max:
            continue
        if in_gamma(w, m, k):
            continue
        if cap_s >= 1:
            out.append(w)
            extend(w, t)
    out.sort(key=lambda w: (len(w), t_degree(w), w))
    return out


@dataclass
class SphereComplex:
    """Cochain complex computing Ext of a sphere: basis words graded by (s, t).

    mats[(s, t)] is the matrix of the differential from the (s, t) basis to
    the (s + 1, t) basis, in the sorted word order.  Topological degree is
    a = m + t.
    """

    m: int
    k: float
    basis: dict[tuple[int, int], list[Word]]
    mats: dict[tuple[int, int], BitMatrix] = field(default_factory=dict)

    def dim(self, s: int, t: int) -> int:
        return len(self.basis.get((s, t), []))

    def d(self, s: int, t: int) -> BitMatrix:
        mat = self.mats.get((s, t))
        if mat is None:
            return BitMatrix.zeros(self.dim(s + 1, t), self.dim(s, t))
        return mat


def sphere_complex(
    m: int, k: float, s_max: int | None = None, t_max: int | None = None
) -> SphereComplex:
    """Build the k-truncated lambda complex of the degree-m sphere."""
    words = lambda_k_m_basis(m, k, s_max=s_max, t_max=t_max)
    basis: dict[tuple[int, int], list[Word]] = {}
    for w in words:
        basis.setdefault((len(w), t_degree(w)), []).append(w)
    cx = SphereComplex(m=m, k=k, basis=basis)
    index = {
        key: {w: i for i, w in enumerate(ws)} for key, ws in basis.items()
    }
    for (s, t), ws in basis.items():
        tkey = (s + 1, t)
        target = basis.get(tkey, [])
        if not target:
            continue
        dense = [[0] * len(ws) for _ in range(len(target))]
        nonzero = False
        for c, w in enumerate(ws):
            for w2 in reduce_mod_gamma(d_lambda(w), m, k):
                dense[index[tkey][w2]][c] ^= 1
                nonzero = True
        if nonzero:
            cx.mats[(s, t)] = BitMatrix.from_dense(dense)
    _assert_d2_zero(cx)
    return cx


def _assert_d2_zero(cx: SphereComplex) -> None:
    for (s, t) in cx.mats:
        if cx.dim(s + 2, t):
            comp = cx.d(s + 1, t).matmul(cx.d(s, t))
            assert comp.is_zero(), f"d^2 != 0 at (s, t) = ({s}, {t})"


@dataclass
class ModuleComplex:
    """The lambda complex of a module: Ext into spheres, graded by (s, a).

    Basis entries are (word, degree, index) triples: an admissible non-killed
    word over the index-th basis vector of M in that degree, contributing in
    topological degree a = degree + t(word).
    """

    module: FiniteUModule
    a_max: int
    basis: dict[tuple[int, int], list[tuple[Word, int, int]]]
    mats: dict[tuple[int, int], BitMatrix] = field(default_factory=dict)

    def dim(self, s: int, a: int) -> int:
        return len(self.basis.get((s, a), []))

    def d(self, s: int, a: int) -> BitMatrix:
        mat = self.mats.get((s, a))
        if mat is None:
            return BitMatrix.zeros(self.dim(s + 1, a), self.dim(s, a))
        return mat


def _right_sq_entries(mod: FiniteUModule, m: int, i: int):
    """Right action of the i-th upper square on dual generators in degree m.

    Yields nothing when the needed lower square is unavailable; otherwise the
    matrix of Sq_{m-2i}: M^{m-i} -> M^m, whose (x, y) entry is the coefficient
    of y in x Sq^i.
    """
    j = m - 2 * i
    if j < 0:
        return None
    if mod.k is not INF and j >= mod.k:
        return None
    src = m - i
    if j > src:
        return None
    return mod.sq(j, src)


def module_complex(mod: FiniteUModule, s_max: int, a_max: int) -> ModuleComplex:
    """Build the k-truncated lambda complex of a finite module in a window.

    Correct for a <= a_max and s <= s_max as long as the module's own window
    covers every degree up to a_max.
    """
    if a_max > mod.max_deg:
        raise ValueError("module window too small for the requested degree range")
    k = mod.k
    basis: dict[tuple[int, int], list[tuple[Word, int, int]]] = {}
    words_cache: dict[int, list[Word]] = {}
    for m in mod.degrees():
        words_cache[m] = lambda_k_m_basis(m, k, s_max=s_max, t_max=a_max - m)
        for w in words_cache[m]:
            if len(w) > s_max:
                continue
            a = m + t_degree(w)
            if a > a_max:
                continue
            for idx in range(mod.dim(m)):
                basis.setdefault((len(w), a), []).append((w, m, idx))
    for key in basis:
        basis[key].sort(key=lambda e: (e[1], e[0], e[2]))
    cx = ModuleComplex(module=mod, a_max=a_max, basis=basis)
    index = {key: {e: i for i, e in enumerate(v)} for key, v in basis.items()}

    for (s, a), entries in sorted(basis.items()):
        tkey = (s + 1, a)
        target = basis.get(tkey, [])
        if not target:
            continue
        dense = [[0] * len(entries) for _ in range(len(target))]
        nonzero = False
        for c, (w, m, idx) in enumerate(entries):
            for w2 in reduce_mod_gamma(d_lambda(w), m, k):
                dense[index[tkey][(w2, m, idx)]][c] ^= 1
                nonzero = True
            # right Steenrod action part: lambda_{i-1} w over x Sq^i
            for i in range(1, m // 2 + 1):
                sqmat = _right_sq_entries(mod, m, i)
                if sqmat is None:
                    continue
                m2 = m - i
                coeffs = normalize_element([(i - 1,) + w])
                coeffs = reduce_mod_gamma(coeffs, m2, k)
                if not coeffs:
                    continue
                for y in range(mod.dim(m2)):
                    if not sqmat.get(idx, y):
                        continue
                    for w2 in coeffs:
                        dense[index[tkey][(w2, m2, y)]][c] ^= 1
                        nonzero = True
        if nonzero:
            cx.mats[(s, a)] = BitMatrix.from_dense(dense)
    for (s, a) in cx.mats:
        if cx.dim(s + 2, a):
            comp = cx.d(s + 1, a).matmul(cx.d(s, a))
            assert comp.is_zero(), f"d^2 != 0 at (s, a) = ({s}, {a})"
    return cx


@dataclass
class EHPTriple:
    """The inclusion/projection pair relating three sphere complexes.

    e embeds the degree-m complex at truncation k into the degree-(m+1)
    complex at truncation k+1 (same word, topological degree a -> a + 1).
    h sends a word starting with lambda_m to its tail, landing in the
    degree-(2m+1) complex at truncation k with (s, a) -> (s - 1, a - 1).
    """

    m: int
    k: int
    low: SphereComplex  # degree m, truncation k
    mid: SphereComplex  # degree m + 1, truncation k + 1
    high: SphereComplex  # degree 2m + 1, truncation k
    e_mats: dict[tuple[int, int], BitMatrix] = field(default_factory=dict)
    h_mats: dict[tuple[int, int], BitMatrix] = field(default_factory=dict)


def ehp_maps(m: int, k: int) -> EHPTriple:
    """Build the three sphere complexes and the chain maps between them.

    In each (s, t) bidegree of the middle complex, e is injective, h is
    surjective and the image of e equals the kernel of h, giving the long
    exact sequence on cohomology.
    """
    low = sphere_complex(m, k)
    mid = sphere_complex(m + 1, k + 1)
    high = sphere_complex(2 * m + 1, k)
    out = EHPTriple(m=m, k=k, low=low, mid=mid, high=high)
    for (s, t), words in mid.basis.items():
        low_words = low.basis.get((s, t), [])
        if low_words:
            dense = [[0] * len(low_words) for _ in range(len(words))]
            li = {w: i for i, w in enumerate(words)}
            for c, w in enumerate(low_words):
                dense[li[w]][c] = 1
            out.e_mats[(s, t)] = BitMatrix.from_dense(dense)
        high_words = high.basis.get((s - 1, t - (m + 1)), [])
        if high_words:
            hi = {w: i for i, w in enumerate(high_words)}
            dense = [[0] * len(words) for _ in range(len(high_words))]
            any_set = False
            for c, w in enumerate(words):
                if w and w[0] == m:
                    dense[hi[w[1:]]][c] = 1
                    any_set = True
            if any_set:
                out.h_mats[(s, t)] = BitMatrix.from_dense(dense)
    return out


def lambda_k_complex(mod: FiniteUModule, max_a: int, s_max: int | None = None):
    """Cochain complex of a finite-k module whose cohomology is Ext into spheres."""
    if mod.k is INF:
        raise ValueError("use lambda_complex_U for modules with all squares")
    from .ext import CochainComplex

    if s_max is None:
        s_max = int(mod.k) + 1
    cx = module_complex(mod, s_max=s_max, a_max=max_a)
    return CochainComplex(
        dims={key: len(v) for key, v in cx.basis.items()}, mats=dict(cx.mats)
    )


def lambda_complex_U(mod: FiniteUModule, max_a: int, s_max: int | None = None):
    """Cochain complex of an unrestricted module (all squares stored) in a window."""
    if mod.k is not INF:
        raise ValueError("module must carry all squares; use lambda_k_complex instead")
    from .ext import CochainComplex

    if s_max is None:
        s_max = max_a + 1
    cx = module_complex(mod, s_max=s_max, a_max=max_a)
    return CochainComplex(
        dims={key: len(v) for key, v in cx.basis.items()}, mats=dict(cx.mats)
    )
