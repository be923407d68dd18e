"""Finite modules with the top k Steenrod squares, and the functors between them.

A module is stored degree-wise inside a truncation window: dimensions, basis
labels and lower-index action matrices sq[j]: M^d -> M^{2d-j} for 0 <= j < k.
k = math.inf means an honest unstable module (all lower squares stored within
the window).  Correctness claims only hold inside the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import steenrod as st
from .f2linalg import BitMatrix, kernel_basis, rank, rref, solve_matrix

INF = math.inf


def _jmax_stored(k: float, d: int) -> int:
    """Largest lower index with a stored matrix on degree d (Sq_d itself is always id)."""
    if k is INF:
        return d - 1
    return min(int(k) - 1, d - 1)


@dataclass
class FiniteUModule:
    k: float  # natural number, or math.inf for a module with all squares
    max_deg: int
    dims: dict[int, int]
    labels: dict[int, list[str]]
    # (j, d) -> matrix of Sq_j : M^d -> M^{2d-j} for 0 <= j < d; absent means zero
    action: dict[tuple[int, int], BitMatrix] = field(default_factory=dict)
    name: str = ""

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    def degrees(self) -> list[int]:
        return sorted(d for d, n in self.dims.items() if n)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def sq(self, j: int, d: int) -> BitMatrix:
        """Matrix of the lower square Sq_j on degree d.

        Sq_d is the zeroth upper square, hence the identity; indices outside
        [0, d] give the zero map; otherwise the stored matrix (zero if absent).
        """
        if j == d:
            return BitMatrix.identity(self.dim(d))
        if j < 0 or j > d:
            return BitMatrix.zeros(self.dim(2 * d - j), self.dim(d))
        m = self.action.get((j, d))
        if m is None:
            return BitMatrix.zeros(self.dim(2 * d - j), self.dim(d))
        return m

    def sq_general(self, idx: int, d: int) -> BitMatrix | None:
        """Sq_idx on degree d when expressible in this category, else None.

        idx < 0 or idx > d is zero, idx == d is the identity, idx < k is a
        stored top square; anything else is not available for finite k.
        """
        if idx < 0 or idx > d or idx == d or idx < self.k:
            return self.sq(idx, d)
        return None

    def in_window(self, d: int) -> bool:
        return 0 <= d <= self.max_deg


@dataclass
class FreeDescriptor:
    n: int
    k: float
    max_deg: int


@dataclass
class ModuleMap:
    source: FiniteUModule
    target: FiniteUModule
    mats: dict[int, BitMatrix] = field(default_factory=dict)

    def mat(self, d: int) -> BitMatrix:
        m = self.mats.get(d)
        if m is None:
            return BitMatrix.zeros(self.target.dim(d), self.source.dim(d))
        return m

    def commutes_with_actions(self) -> bool:
        k = min(self.source.k, self.target.k)
        max_deg = min(self.source.max_deg, self.target.max_deg)
        for d in range(max_deg + 1):
            for j in range(0, _jmax_stored(k, d) + 1):
                td = 2 * d - j
                if td > max_deg:
                    continue
                lhs = self.mat(td).matmul(self.source.sq(j, d))
                rhs = self.target.sq(j, d).matmul(self.mat(d))
                if lhs != rhs:
                    return False
        return True

    def rank_in_degree(self, d: int) -> int:
        return rank(self.mat(d))


def _word_label(indices: tuple[int, ...], n: int) -> str:
    if not indices:
        return f"i{n}"
    return "".join(f"Sq{i}" for i in indices) + f"i{n}"


def _enumerate_lower_words(n: int, k: float, max_deg: int) -> list[tuple[tuple[int, ...], int]]:
    """Nondecreasing lower words 0 <= i(1) <= ... <= i(m) < min(n, k) of degree <= max_deg.

    Returns (indices, degree) pairs.  Words grow from the innermost square out:
    prepending index i to a degree-d word gives degree 2d - i >= d + 1, so the
    search tree is finite inside the window.
    """
    bound = int(min(n, k))
    out = [((), n)] if n <= max_deg else []
    frontier = [((), n)]
    while frontier:
        new = []
        for indices, d in frontier:
            hi = indices[0] if indices else bound - 1
            for i in range(0, hi + 1):
                nd = 2 * d - i
                if nd <= max_deg:
                    item = ((i,) + indices, nd)
                    new.append(item)
                    out.append(item)
        frontier = new
    return out


def free_module(desc: FreeDescriptor) -> FiniteUModule:
    """The free module on one degree-n generator, truncated at max_deg.

    Basis in each degree: the nondecreasing lower words with indices below
    min(n, k) applied to the generator.  Actions are computed by converting to
    upper words, Adem-normalizing, killing unstable terms and re-expressing in
    the admissible lower basis.
    """
    n, k, max_deg = desc.n, desc.k, desc.max_deg
    words_by_deg: dict[int, list[tuple[int, ...]]] = {}
    for indices, d in _enumerate_lower_words(n, k, max_deg):
        words_by_deg.setdefault(d, []).append(indices)
    for d in words_by_deg:
        words_by_deg[d].sort()
    dims = {d: len(ws) for d, ws in words_by_deg.items()}
    labels = {d: [_word_label(w, n) for w in ws] for d, ws in words_by_deg.items()}
    index_of = {d: {w: i for i, w in enumerate(ws)} for d, ws in words_by_deg.items()}

    mod = FiniteUModule(k=k, max_deg=max_deg, dims=dims, labels=labels, name=f"F_{k}({n})")
    bound = min(n, k)
    for d, ws in sorted(words_by_deg.items()):
        for j in range(0, _jmax_stored(k, d) + 1):
            td = 2 * d - j
            if td > max_deg:
                continue
            target_words = words_by_deg.get(td, [])
            dense = [[0] * len(ws) for _ in range(len(target_words))]
            nonzero = False
            for col, w in enumerate(ws):
                for upper in st.act_on_generator((j,) + w, n):
                    low = st.upper_to_lower(upper, n)
                    if any(i >= bound for i in low):
                        raise AssertionError(
                            f"free-module action left the basis span: Sq_{j} {w} on iota_{n}"
                        )
                    dense[index_of[td][low]][col] ^= 1
                    nonzero = True
            if nonzero:
                mod.action[(j, d)] = BitMatrix.from_dense(dense)
    return mod


def sphere(n: int, k: float, max_deg: int | None = None) -> FiniteUModule:
    """F_2 concentrated in degree n."""
    if n < 0:
        raise ValueError("sphere degree must be nonnegative")
    if max_deg is None:
        max_deg = n
    return FiniteUModule(
        k=k, max_deg=max_deg, dims={n: 1}, labels={n: [f"i{n}"]}, name=f"S_{k}({n})"
    )


def forget(mod: FiniteUModule, k_new: float | None = None) -> FiniteUModule:
    """Drop the squares with lower index >= k_new (default: one less than mod.k)."""
    if k_new is None:
        if mod.k is INF:
            raise ValueError("forgetting from the full category needs an explicit target k")
        k_new = mod.k - 1
    if k_new > mod.k:
        raise ValueError("cannot forget upward")
    action = {(j, d): m for (j, d), m in mod.action.items() if j < k_new}
    return FiniteUModule(
        k=k_new,
        max_deg=mod.max_deg,
        dims=dict(mod.dims),
        labels={d: list(v) for d, v in mod.labels.items()},
        action=action,
        name=f"u{mod.name}" if mod.name else "",
    )


def suspend(mod: FiniteUModule) -> FiniteUModule:
    """Degree shift by one; Sq_{j+1} on the suspension is Sq_j downstairs, Sq_0 = 0."""
    k_new = INF if mod.k is INF else mod.k + 1
    dims = {d + 1: n for d, n in mod.dims.items()}
    labels = {d + 1: [f"s{x}" for x in v] for d, v in mod.labels.items()}
    action = {(j + 1, d + 1): m for (j, d), m in mod.action.items()}
    return FiniteUModule(
        k=k_new,
        max_deg=mod.max_deg + 1,
        dims=dims,
        labels=labels,
        action=action,
        name=f"S{mod.name}" if mod.name else "",
    )


def desuspend(mod: FiniteUModule) -> FiniteUModule:
    """Inverse of suspend; requires M^0 = 0 and Sq_0 = 0."""
    if mod.dim(0):
        raise ValueError("cannot desuspend: nonzero degree-0 part")
    for (j, d), m in mod.action.items():
        if j == 0 and not m.is_zero():
            raise ValueError("cannot desuspend: Sq_0 acts nontrivially")
    if mod.k is not INF and mod.k < 1:
        raise ValueError("cannot desuspend below k = 0")
    k_new = INF if mod.k is INF else mod.k - 1
    dims = {d - 1: n for d, n in mod.dims.items() if n}
    labels = {d - 1: list(v) for d, v in mod.labels.items() if mod.dims.get(d)}
    action = {(j - 1, d - 1): m for (j, d), m in mod.action.items() if j >= 1}
    return FiniteUModule(
        k=k_new, max_deg=max(mod.max_deg - 1, 0), dims=dims, labels=labels, action=action
    )


def frobenius(mod: FiniteUModule) -> FiniteUModule:
    """Degree doubling: the double of M has M^n in degree 2n, Sq_{2i} doubling Sq_i."""
    k_new = INF if mod.k is INF else 2 * mod.k
    dims = {2 * d: n for d, n in mod.dims.items()}
    labels = {2 * d: [f"F{x}" for x in v] for d, v in mod.labels.items()}
    action = {(2 * j, 2 * d): m for (j, d), m in mod.action.items()}
    return FiniteUModule(
        k=k_new,
        max_deg=2 * mod.max_deg,
        dims=dims,
        labels=labels,
        action=action,
        name=f"Phi{mod.name}" if mod.name else "",
    )


def _truncate(mod: FiniteUModule, max_deg: int) -> FiniteUModule:
    dims = {d: n for d, n in mod.dims.items() if d <= max_deg}
    labels = {d: v for d, v in mod.labels.items() if d <= max_deg}
    action = {
        (j, d): m for (j, d), m in mod.action.items() if d <= max_deg and 2 * d - j <= max_deg
    }
    return FiniteUModule(
        k=mod.k, max_deg=max_deg, dims=dims, labels=labels, action=action, name=mod.name
    )


def lambda_map(mod: FiniteUModule) -> ModuleMap:
    """The natural map from the (forgotten) degree double of M to M, via Sq_0.

    Sends the double of x to Sq_0 x; its cokernel and kernel are the suspended
    loop functors.  Needs k >= 1.
    """
    if mod.k is not INF and mod.k < 1:
        raise ValueError("lambda_map needs k >= 1")
    src = _truncate(forget(frobenius(mod), mod.k), mod.max_deg)
    mats = {}
    for d in mod.degrees():
        td = 2 * d
        if td > mod.max_deg:
            continue
        m = mod.sq(0, d)
        if not m.is_zero():
            mats[td] = m
    out = ModuleMap(source=src, target=mod, mats=mats)
    assert out.commutes_with_actions(), "doubling map is not a module map"
    return out


def _submodule_from_spans(
    mod: FiniteUModule, spans: dict[int, BitMatrix], prefix: str
) -> tuple[FiniteUModule, ModuleMap]:
    """Submodule spanned degree-wise by the given column spans (must be action-closed).

    Chooses the canonical echelon basis in each degree; the returned map is
    the inclusion.
    """
    basis: dict[int, BitMatrix] = {}
    dims: dict[int, int] = {}
    labels: dict[int, list[str]] = {}
    for d in sorted(spans):
        cols = spans[d]
        if cols.cols == 0:
            continue
        reduced, pivots = rref(cols.transpose())
        if not pivots:
            continue
        rows = reduced.to_dense()[: len(pivots)]
        basis[d] = BitMatrix.from_dense(rows.T)
        dims[d] = len(pivots)
        labels[d] = [f"{prefix}{d}_{i}" for i in range(len(pivots))]
    sub = FiniteUModule(k=mod.k, max_deg=mod.max_deg, dims=dims, labels=labels)
    for d, b in basis.items():
        for j in range(0, _jmax_stored(mod.k, d) + 1):
            td = 2 * d - j
            if td > mod.max_deg:
                continue
            image = mod.sq(j, d).matmul(b)
            if image.is_zero():
                continue
            target = basis.get(td)
            if target is None:
                raise ValueError("span is not closed under the action")
            sub.action[(j, d)] = solve_matrix(target, image)
    incl = ModuleMap(source=sub, target=mod, mats=dict(basis))
    return sub, incl


def kernel_module(f: ModuleMap, prefix: str = "z") -> tuple[FiniteUModule, ModuleMap]:
    """Degree-wise kernel of a module map, as a submodule of the source."""
    spans = {}
    for d in range(f.source.max_deg + 1):
        if not f.source.dim(d):
            continue
        kb = kernel_basis(f.mat(d))
        spans[d] = BitMatrix.from_columns(kb, f.source.dim(d))
    return _submodule_from_spans(f.source, spans, prefix)


def cokernel_module(f: ModuleMap, prefix: str = "q") -> tuple[FiniteUModule, ModuleMap]:
    """Degree-wise cokernel of a module map, with the projection from the target.

    Quotient coordinates are the free (non-pivot) coordinates after reducing
    the image to echelon form; the section sending a quotient basis vector to
    the matching unit vector splits the projection.
    """
    mod = f.target
    dims: dict[int, int] = {}
    labels: dict[int, list[str]] = {}
    projections: dict[int, BitMatrix] = {}
    sections: dict[int, BitMatrix] = {}
    for d in range(mod.max_deg + 1):
        n = mod.dim(d)
        if not n:
            continue
        reduced, pivots = rref(f.mat(d).transpose())
        pivot_set = set(pivots)
        free = [c for c in range(n) if c not in pivot_set]
        if not free:
            continue
        reducer = reduced.to_dense()[: len(pivots)]
        proj = []
        for fcol in free:
            rowvec = [0] * n
            rowvec[fcol] = 1
            for r, p in enumerate(pivots):
                rowvec[p] ^= int(reducer[r][fcol])
            proj.append(rowvec)
        sec = np.zeros((n, len(free)), dtype=np.uint8)
        for i, fcol in enumerate(free):
            sec[fcol, i] = 1
        dims[d] = len(free)
        labels[d] = [f"{prefix}{d}_{i}" for i in range(len(free))]
        projections[d] = BitMatrix.from_dense(proj)
        sections[d] = BitMatrix.from_dense(sec)
    quot = FiniteUModule(k=mod.k, max_deg=mod.max_deg, dims=dims, labels=labels)
    for d in sorted(dims):
        for j in range(0, _jmax_stored(mod.k, d) + 1):
            td = 2 * d - j
            if td > mod.max_deg:
                continue
            pt = projections.get(td)
            if pt is None:
                continue
            mat = pt.matmul(mod.sq(j, d).matmul(sections[d]))
            if not mat.is_zero():
                quot.action[(j, d)] = mat
    proj_map = ModuleMap(source=mod, target=quot, mats=projections)
    return quot, proj_map


def loop(mod: FiniteUModule) -> tuple[FiniteUModule, FiniteUModule]:
    """The two loop functors: desuspended cokernel and kernel of the doubling map."""
    lam = lambda_map(mod)
    coker, _ = cokernel_module(lam, prefix="w")
    ker, _ = kernel_module(lam, prefix="w")
    return desuspend(coker), desuspend(ker)


def tensor(a: FiniteUModule, b: FiniteUModule) -> FiniteUModule:
    """Tensor product via the Cartan formula (finite k only).

    Sq^{n-j}(x tensor y) = sum_i Sq^i x tensor Sq^{n-j-i} y; each factor's
    lower index is nonnegative and the two sum to j, so both stay below k and
    every term is computable from the stored actions.
    """
    if a.k != b.k or a.k is INF:
        raise ValueError("tensor product needs two modules with the same finite k")
    k = int(a.k)
    max_deg = min(a.max_deg, b.max_deg)
    pairs: dict[int, list[tuple[int, int, int, int]]] = {}
    for p in a.degrees():
        for q in b.degrees():
            n = p + q
            if n > max_deg:
                continue
            for xi in range(a.dim(p)):
                for yi in range(b.dim(q)):
                    pairs.setdefault(n, []).append((p, xi, q, yi))
    for n in pairs:
        pairs[n].sort()
    dims = {n: len(v) for n, v in pairs.items()}
    labels = {
        n: [f"({a.labels[p][xi]}*{b.labels[q][yi]})" for (p, xi, q, yi) in v]
        for n, v in pairs.items()
    }
    col_of = {n: {key: c for c, key in enumerate(v)} for n, v in pairs.items()}
    out = FiniteUModule(k=k, max_deg=max_deg, dims=dims, labels=labels)

    for n in sorted(pairs):
        for j in range(0, _jmax_stored(k, n) + 1):
            tn = 2 * n - j
            if tn > max_deg:
                continue
            iu = n - j  # upper index of Sq_j on degree n
            target = pairs.get(tn, [])
            if not target:
                continue
            dense = [[0] * dims[n] for _ in range(len(target))]
            nonzero = False
            for c, (p, xi, q, yi) in enumerate(pairs[n]):
                for i in range(max(0, iu - q), min(p, iu) + 1):
                    ax = a.sq(p - i, p).to_dense()
                    by = b.sq(q - (iu - i), q).to_dense()
                    for xo in range(ax.shape[0]):
                        if not ax[xo, xi]:
                            continue
                        for yo in range(by.shape[0]):
                            if by[yo, yi]:
                                r = col_of[tn][(p + i, xo, q + iu - i, yo)]
                                dense[r][c] ^= 1
                                nonzero = True
            if nonzero:
                out.action[(j, n)] = BitMatrix.from_dense(dense)
    return out


def direct_sum(a: FiniteUModule, b: FiniteUModule) -> FiniteUModule:
    if a.k != b.k:
        raise ValueError("direct sum needs matching k")
    max_deg = min(a.max_deg, b.max_deg)
    dims = {}
    labels = {}
    for d in range(max_deg + 1):
        n = a.dim(d) + b.dim(d)
        if n:
            dims[d] = n
            labels[d] = [f"L{x}" for x in a.labels.get(d, [])] + [
                f"R{x}" for x in b.labels.get(d, [])
            ]
    out = FiniteUModule(k=a.k, max_deg=max_deg, dims=dims, labels=labels)
    for d in sorted(dims):
        for j in range(0, _jmax_stored(a.k, d) + 1):
            td = 2 * d - j
            if td > max_deg:
                continue
            ma, mb = a.sq(j, d), b.sq(j, d)
            if ma.is_zero() and mb.is_zero():
                continue
            da, db = ma.to_dense(), mb.to_dense()
            block = np.zeros(
                (da.shape[0] + db.shape[0], da.shape[1] + db.shape[1]), dtype=np.uint8
            )
            block[: da.shape[0], : da.shape[1]] = da
            block[da.shape[0] :, da.shape[1] :] = db
            out.action[(j, d)] = BitMatrix.from_dense(block)
    return out


def decomposable_columns(mod: FiniteUModule, a: int) -> BitMatrix:
    """Columns spanning the degree-a decomposables: images of all positive squares.

    A positive upper square landing in degree a comes from degree d < a with
    lower index 2d - a, which must lie in [0, min(k, d)).
    """
    cols = BitMatrix.zeros(mod.dim(a), 0)
    for d in range(a):
        j = 2 * d - a
        if j < 0 or j > _jmax_stored(mod.k, d):
            continue
        m = mod.sq(j, d)
        if not m.is_zero():
            cols = cols.hstack(m)
    return cols


def indecomposables(mod: FiniteUModule) -> dict[int, int]:
    """Per-degree dimension of M modulo the span of all positive squares."""
    return {a: mod.dim(a) - rank(decomposable_columns(mod, a)) for a in mod.degrees()}


def validate(mod: FiniteUModule) -> list[str]:
    """Necessary-condition check: shapes, index bounds, quadratic relations.

    Checks every instance Sq_i Sq_j on a window degree n where both sides are
    expressible with the available squares (indices in [0, k), plus the
    always-available identity Sq_d and zero maps) and all intermediate degrees
    stay inside the window.  Returns a list of violation descriptions.
    """
    issues: list[str] = []
    for (j, d), m in mod.action.items():
        td = 2 * d - j
        if m.rows != mod.dim(td) or m.cols != mod.dim(d):
            issues.append(
                f"sq[{j}] on degree {d}: shape {m.rows}x{m.cols}, "
                f"expected {mod.dim(td)}x{mod.dim(d)}"
            )
        if j < 0 or j > _jmax_stored(mod.k, d):
            issues.append(f"sq[{j}] on degree {d}: lower index out of range")
    for d, n in mod.dims.items():
        if d < 0 and n:
            issues.append(f"nonzero dimension in negative degree {d}")
    if issues:
        return issues

    kb = mod.k
    for n in mod.degrees():
        for j in range(0, (n if kb is INF else min(int(kb) - 1, n)) + 1):
            mid = 2 * n - j
            if mid > mod.max_deg:
                continue
            for i in range(0, (mid if kb is INF else min(int(kb) - 1, mid)) + 1):
                if not (n > j and 2 * n > i + j):
                    continue
                tdeg = 2 * mid - i
                if tdeg > mod.max_deg:
                    continue
                lhs_j = mod.sq_general(j, n)
                lhs_i = mod.sq_general(i, mid)
                if lhs_i is None or lhs_j is None:
                    continue
                lhs = lhs_i.matmul(lhs_j)
                rhs = BitMatrix.zeros(mod.dim(tdeg), mod.dim(n))
                expressible = True
                for s in range(-((i + j) // -2), n + 1):
                    if not st._binom_general_mod2(s - j - 1, 2 * s - i - j):
                        continue
                    if 2 * n - s > mod.max_deg:
                        expressible = False
                        break
                    inner = mod.sq_general(s, n)
                    outer = mod.sq_general(i + 2 * j - 2 * s, 2 * n - s)
                    if inner is None or outer is None:
                        expressible = False
                        break
                    term = outer.matmul(inner)
                    rhs = BitMatrix(rhs.rows, rhs.cols, rhs.words ^ term.words)
                if not expressible:
                    continue
                if lhs != rhs:
                    issues.append(f"quadratic relation fails: Sq_{i} Sq_{j} on degree {n}")
    return issues
