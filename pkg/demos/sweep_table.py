"""Tabulate the three-way classification of small posets.

Among ordinal-irreducible posets, avoiding both forbidden subposets, being
a snake and passing the direct check should go together.
"""

import sys
from collections import Counter

from khovlat.checker import theorem_sweep

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 5
report = theorem_sweep(n_max, strict=False)
tally = Counter((r.n, r.free, r.khovanskii) for r in report.rows if r.irreducible)

print("ordinal-irreducible posets")
print(f"{'size':>4}  {'free, pass':>10}  {'not free, fail':>14}  {'other':>5}")
for n in range(2, n_max + 1):
    good, bad = tally[(n, True, True)], tally[(n, False, False)]
    other = sum(v for (m, _, _), v in tally.items() if m == n) - good - bad
    print(f"{n:4}  {good:10}  {bad:14}  {other:5}")
print(f"\n{len(report.rows)} posets in all, {len(report.disagreements)} disagreements")
