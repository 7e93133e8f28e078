"""How far apart do two rails need to be?

Write on a fixed rail, read a neighbor at increasing separation (peak1),
then read the original rail again (peak2). Below one signal radius the
neighbor read consumes the stored pulse (peak2 vanishes); by 20 MHz the
neighbor read neither retrieves anything nor disturbs what is stored.
"""

import os

from vapormem import default_params, default_rails, scan_crosstalk
from vapormem.cli import scan_csv

here = os.path.dirname(os.path.abspath(__file__))
outdir = os.path.join(here, "out")
os.makedirs(outdir, exist_ok=True)

result = scan_crosstalk(default_params(), default_rails())
p1, p2 = result.series["peak1"], result.series["peak2"]
scale1, scale2 = max(p1), max(p2)

print("separation_mhz  peak1     peak2     (bars normalized per series)")
for sep, a, b in zip(result.axis, p1, p2):
    bar1 = "#" * round(20 * a / scale1)
    bar2 = "*" * round(20 * b / scale2)
    print(f"{sep:>14.0f}  {a:.6f}  {b:.6f}  |{bar1:<20}|{bar2:<20}|")

with open(os.path.join(outdir, "crosstalk.csv"), "w") as fh:
    fh.write(scan_csv(result))
print(f"\nwrote {outdir}/crosstalk.csv")
