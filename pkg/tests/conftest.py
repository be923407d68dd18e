"""Shared fixtures and generators for the test suite."""

from __future__ import annotations

import random

from topsquares import ext as ex
from topsquares import unstable as un
from topsquares.f2linalg import BitMatrix
from topsquares.unstable import FreeDescriptor, free_module, sphere


def golden_truncated_basis(m: int, k: int) -> list[tuple[int, ...]]:
    """Frozen closed-form basis lists of the small truncated lambda complexes.

    Written out independently of the enumeration code, as case tables in m,
    so the DFS in lambda_k_m_basis has an external answer to match.
    """
    if k == 0:
        return [()]
    if k == 1:
        if m == 0:
            return [()]
        return [(), (m - 1,)]
    if k == 2:
        if m == 0:
            return [()]
        if m == 1:
            return [(), (0,), (0, 0)]
        return [(), (m - 2,), (m - 1,), (m - 1, 2 * m - 2)]
    if k == 3:
        if m == 0:
            return [()]
        if m == 1:
            return [(), (0,), (0, 0), (0, 0, 0)]
        if m == 2:
            return [(), (0,), (1,), (0, 0), (1, 1), (1, 2), (1, 2, 4)]
        return [
            (),
            (m - 3,),
            (m - 2,),
            (m - 1,),
            (m - 2, 2 * m - 4),
            (m - 1, 2 * m - 3),
            (m - 1, 2 * m - 2),
            (m - 1, 2 * m - 2, 4 * m - 4),
        ]
    raise ValueError(f"no frozen table for k = {k}")


def random_valid_module(rng: random.Random, k_max: int = 3, max_deg: int = 18):
    """A random module passing validate(): a quotient of a free module,
    optionally suspended or summed with a sphere."""
    n = rng.randrange(1, 6)
    k = rng.randrange(1, k_max + 1)
    fr = ex.free_on_generators([n], k, max_deg)
    mod = fr.module
    reldegs = [d for d in mod.degrees() if d > n]
    if reldegs and rng.random() < 0.8:
        d = rng.choice(reldegs)
        col = [[rng.randrange(2)] for _ in range(mod.dim(d))]
        rel = ex.free_on_generators([d], k, max_deg)
        f = ex.map_from_generator_images(rel, mod, [BitMatrix.from_dense(col)])
        mod, _ = un.cokernel_module(f)
    roll = rng.random()
    if roll < 0.25:
        mod = un.suspend(mod)
    elif roll < 0.40:
        mod = un.direct_sum(mod, sphere(rng.randrange(0, 5), mod.k, mod.max_deg))
    return mod


def small_free(n: int, k: float, max_deg: int):
    return free_module(FreeDescriptor(n=n, k=k, max_deg=max_deg))
