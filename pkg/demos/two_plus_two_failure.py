"""Watch the Hibi binomials of the (2+2) lattice fail to be a Khovanskii basis.

Run: python3 demos/two_plus_two_failure.py
"""

from khovlat.checker import khovanskii_check
from khovlat.polyalg import format_polynomial
from khovlat.poset import Poset

p = Poset("1234", [("1", "2"), ("3", "4")])
report = khovanskii_check(p, full=True)
lat = report.lattice

print("lattice elements, numbered bottom-up:")
for k, name in enumerate(lat.names, start=1):
    print(f"  {k}: {name}")

print(f"\n{report.generator_count} generators, {report.walk_count} walk binomials to test")
for trace in report.walks:
    walk = ",".join("{%d,%d}" % tuple(e) for e in trace.binomial.walk.label())
    status = "reduces to 0" if trace.reduced else "leaves a remainder"
    print(f"  {walk:28} {status}")

w = report.verdict.witness
print("\nfirst failing walk:", w["walk"])
print("remainder:", w["remainder"])
