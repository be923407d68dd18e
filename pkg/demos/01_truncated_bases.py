"""
Bases of the truncated lambda complexes
=======================================

Enumerates the additive bases of the small truncated complexes over
spheres of each degree, and shows the cardinality doubling with each
extra retained square.
"""

from topsquares.lambda_algebra import lambda_k_m_basis, sphere_complex


def pretty(word):
    return " ".join(f"l{i}" for i in word) if word else "1"


# basis tables for the first few truncations
for k in range(0, 4):
    print(f"--- truncation k = {k} ---")
    for m in range(0, 7):
        words = lambda_k_m_basis(m, k)
        print(f"  m = {m}: " + ", ".join(pretty(w) for w in words))

# once the sphere degree clears the truncation, the size is exactly 2^k
print("\nbasis sizes (rows: k, cols: m)")
for k in range(0, 6):
    sizes = [len(lambda_k_m_basis(m, k)) for m in range(0, 9)]
    print(f"  k = {k}: {sizes}")

# the differentials on these small complexes all vanish
for k in range(0, 4):
    for m in range(0, 7):
        cx = sphere_complex(m, k)
        assert all(mat.is_zero() for mat in cx.mats.values())
print("\nall differentials vanish for k <= 3, as expected")
