"""
The Choi map is neither 2-positive nor 2-copositive
===================================================

At y = x (x) x, x uniform, C_phi y is orthogonal to y but not in span(y).
One extra product term then pushes <z, C_cp z> above 1.
"""

from posmaps import choi_map_walkthrough

res = choi_map_walkthrough()
for name, passed in res["checks"]:
    print(f"[{'ok' if passed else '!!'}] {name}")

for key in ("phi", "t_phi"):
    r = res[key]
    print(f"{key:<6} c = {r['c']:.10g}  <z, C_cp z> = {r['witness_value']:.12g}  rank {r['witness_rank']}")

print(res["conclusion"])
print(res["note"])
