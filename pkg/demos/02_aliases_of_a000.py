"""
Aliases of the constant coefficient on S^3
==========================================

With few sampling points the quadrature estimate of a_{0,0,0} picks up
contributions from higher harmonics. The enumeration lists them directly,
and a brute-force scan of the aliasing function confirms the list.
"""
from hyperalias.aliasing import brute_force_aliases, compare_with_oracle, enumerate_aliases
from hyperalias.design import uniform_design
from hyperalias.harmonics import HarmonicIndex
from hyperalias.tables import computed_block, format_table

src = HarmonicIndex(0, (0, 0))

for Q, M in ((2, 1), (4, 2), (4, 4)):
    design = uniform_design(3, [Q, Q], M)
    records = enumerate_aliases(src, design, 4)
    print(f"Q={Q}, M={M}: {len(records)} aliases with s0 <= 4")
    for rec in records[:6]:
        print(f"   {rec.target}  eta={rec.intensity:+.4f}  dist={rec.distance:.3f}  {rec.location}")
    res = compare_with_oracle(src, design, 4)
    print("   oracle: missing", res["missing"], "extra", res["extra"])

# The same aliases laid out in the reference table layout.
print(format_table(computed_block(2, 1), 2, 1))

# Brute force sees exactly the same coefficients, with the same intensities.
design = uniform_design(3, [2, 2], 1)
found = brute_force_aliases(src, design, 4)
for tgt, tau in sorted(found.items()):
    print(tgt, round(tau.real, 6))
