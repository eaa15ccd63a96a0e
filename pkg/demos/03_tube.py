"""Stable tubes: Hom and Ext tables, verification, and fpdim.

Objects E_i[j] are indexed by a quasi-simple position i and a length j,
both in 1..r. Rows of the tables are targets and columns are sources.
"""

import sys

from fptheory import build_tube_model, tube_fpdim, verify_tube
from fptheory.tube import brick_objects

r = int(sys.argv[1]) if len(sys.argv) > 1 else 3
model = build_tube_model(r)
names = [str(X) for X in brick_objects(r)]
width = max(map(len, names)) + 1


def show(title, M):
    print(title)
    print(" " * width + " ".join(n.rjust(width) for n in names))
    for name, row in zip(names, M.rows):
        print(name.rjust(width) + " ".join(str(v).rjust(width) for v in row))
    print()


show(f"Hom, rank {r}", model.hom)
show(f"Ext, rank {r}", model.ext)

report = verify_tube(r)
print("verification passed:", report.passed)
for clause, ok in sorted(report.checks.items()):
    print(f"  {clause:20s} {ok}")
print("brick sets:", report.brick_set_count)
print("largest ratio radius:", report.max_rho)
print("fpdim:", tube_fpdim(r))
