"""
Truncation independence of Ext into a fixed sphere
==================================================

Keeping only the top few squares does not change Ext into a degree-n
sphere once the truncation index clears n - 1.  The finite-truncation
columns come from minimal resolutions; the untruncated column comes from
the lambda complex, so the agreement is a genuine cross-check.
"""

from topsquares.ext import minimal_resolution, stabilization_check
from topsquares.lambda_algebra import lambda_complex_U
from topsquares.unstable import INF, forget, sphere

m, n = 2, 3
mod = sphere(m, INF, max_deg=max(m, n) + 1)

print(f"Ext columns of the degree-{m} sphere into the degree-{n} sphere:")
for k in range(0, 5):
    res = minimal_resolution(forget(mod, k), s_max=3, max_deg=mod.max_deg)
    col = {s: c for (s, a), c in sorted(res.generator_counts().items()) if a == n}
    marker = "  (stable range)" if k >= n - 1 else ""
    print(f"  k = {k}: {col}{marker}")

cx = lambda_complex_U(mod, max_a=n, s_max=4)
u_col = {s: cx.cohomology(s, n) for s in range(4) if cx.cohomology(s, n)}
print(f"  untruncated: {u_col}")

report = stabilization_check(mod, n, range(0, 5), s_max=3)
print("mismatches:", report if report else "none")
