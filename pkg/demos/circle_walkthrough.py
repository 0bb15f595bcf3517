"""Walk one set through the whole pipeline.

The unit circle: parse it, read off its format/degree, decompose the
plane, count components, triangulate the closed disk it bounds, and
compute Betti numbers.
"""

from fractions import Fraction

from sharpcells import (
    betti,
    compatible_decomposition,
    connected_components,
    fd_of_formula,
    locate,
    parse_formula,
    pformat_of_formula,
    to_text,
    triangulate,
)

circle = parse_formula("x^2 + y^2 - 1 = 0")
print("set:", to_text(circle))
print("format/degree:", fd_of_formula(circle).as_tuple())
print("P-format:", pformat_of_formula(circle))

decomp = compatible_decomposition([circle])
print("\ncells in the decomposition:", len(decomp.cells))
for cell in decomp.cells:
    tag = "in " if cell.memberships[0] else "out"
    print(f"  {cell.index_path}  dim {cell.dim}  {tag}")

comps = connected_components(circle)
print("\nconnected components:", len(comps))
print("component formula FD:", comps[0].fd.as_tuple())

# point location is exact: (3/5, 4/5) lies on the circle
path = locate(decomp, [Fraction(3, 5), Fraction(4, 5)])
cell = decomp.cell_at(path)
print("(3/5, 4/5) lands in cell", path, "dim", cell.dim)

disk = parse_formula("not (x^2 + y^2 - 1 > 0)")
K, _ = triangulate(disk)
v, e, f = K.counts()
print(f"\nclosed disk triangulated: {v} vertices, {e} edges, {f} triangles")
print("Betti numbers:", betti(K))

ring = parse_formula(
    "not (x^2 + y^2 - 4 > 0) and not (1 - x^2 - y^2 > 0)")
K, _ = triangulate(ring)
print("annulus Betti numbers:", betti(K))
