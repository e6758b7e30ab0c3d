"""Walk through the principal SUSY W-algebra of osp(1|2).

Computes the weight-3/2 cohomology generator, its Miura image, the matching
non-SUSY generators through tau, and the central charge.

    python3 demos/osp_w_algebra.py
"""
from fractions import Fraction

from superw.brst import (build_complex, central_charge, cohomology_generators, miura,
                         tau_data, tau_translate)
from superw.liealg import builtin

spec = builtin("osp12")
su = build_complex(spec, "susy")
ns = build_complex(spec, "nonsusy")
td = tau_data(spec)

omega = cohomology_generators(su, Fraction(3, 2))[0]
print("SUSY generator at weight 3/2:\n   ", omega)
print("its Miura image:\n   ", miura(su, omega, td.susy_target))
print("Miura image of its D-partner:\n   ", miura(su, omega.D(), td.susy_target))

for w in (Fraction(3, 2), Fraction(2)):
    v = cohomology_generators(ns, w)[0]
    m = miura(ns, v, td.nonsusy_target)
    print(f"non-SUSY generator at weight {w}:\n    mu   = {m}\n    tau  = {tau_translate(td, m)}")

c = central_charge(spec)
print("central charge:", c, "   at k = 1:", c.evaluate(1))
