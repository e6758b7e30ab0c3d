"""Invariant search for the finite SUSY W-algebra of osp(1|2) at k + h^vee = 1.

    python3 demos/finite_w.py
"""
from superw.env import check_finite_example, check_ghost_center, finite_example
from superw.liealg import builtin

ex = finite_example(cutoff=2)
print("invariants up to PBW degree 2:")
for b in ex.inv.basis:
    print("   ", b)
print()
print(check_finite_example(ex).text())
print()
print(check_ghost_center(builtin("osp12")).text())
