"""
Ext charts by two independent routes
====================================

Computes Ext of small spheres once through the lambda-complex route and
once through a minimal free resolution, and prints both charts side by
side.  The two computations share nothing but the linear algebra layer.
"""

from topsquares import ext
from topsquares.unstable import sphere

for n in range(1, 5):
    for k in range(1, 4):
        mod = sphere(n, k, max_deg=20)
        via_l = ext.ext_via_lambda(mod, s_max=k, a_max=20)
        via_r = ext.ext_via_resolution(mod, s_max=k, a_max=20)
        status = "agree" if via_l.agrees_with(via_r) else "DISAGREE"
        print(f"sphere degree {n}, truncation {k}: routes {status}")
        for s, a, d in via_l.rows():
            print(f"    s = {s}  a = {a}  dim = {d}")

# a free module has cohomology only at the bottom
from topsquares.unstable import FreeDescriptor, free_module

f = free_module(FreeDescriptor(n=3, k=2, max_deg=24))
t = ext.ext_via_lambda(f, s_max=3, a_max=24)
print("\nfree module on a degree-3 class:", t.rows())
