"""Recovery of a double layer, including which layer sits on top.

Velocities come from the accumulation levels, thicknesses from the
pile-up weights, and the layer ordering from the spacing of the
frequencies at which branches cross the middle level: uniform spacing
means the middle-level velocity belongs to the surface layer.  Both
orderings of the same two layers are inverted to show the discriminator
at work (the traces take a couple of minutes).
"""

import numpy as np

from lovedisp import Medium, invert_double_layer, trace_branches

slow_on_top = Medium(
    mu=[1e6, 1818.0**2, 1e8], rho=[1.0, 1.0, 1.0], thickness=[100.0, 100.0]
)
fast_on_top = Medium(
    mu=[1818.0**2, 1e6, 1e8], rho=[1.0, 1.0, 1.0], thickness=[100.0, 100.0]
)

grid = np.arange(0.5, 1800.01, 0.5)
for name, medium in (("slow layer on top", slow_on_top),
                     ("fast layer on top", fast_on_top)):
    print(f"--- true configuration: {name}")
    branchset = trace_branches(medium, grid)
    report = invert_double_layer(branchset)
    print(report.render())
    print()
