"""Why star representations exist.

A cell of a cylindrical decomposition can be described directly, by
naming which root of which polynomial bounds it; that description's
format grows with the root index.  The star representation instead
presents the cell as one connected component of its sign-condition set,
which is quantifier free with format equal to the ambient dimension.
This script shows the direct description growing along a polynomial
family while the star format stays flat.
"""

from sharpcells import (
    compatible_decomposition,
    decomposition_report,
    parse_formula,
    star_fd,
    star_report,
    star_union,
    to_star,
)


def chebyshev_text(d):
    # T_d(x) via the recurrence, printed as formula text
    prev, cur = "1", "x"
    for _ in range(d - 1):
        prev, cur = cur, f"2*x*({cur}) - ({prev})"
    return cur


for d in (2, 4, 6):
    curve = parse_formula(f"y - ({chebyshev_text(d)}) = 0")
    decomp = compatible_decomposition([curve])
    direct = decomposition_report(decomp)
    starred = star_report(decomp)
    print(f"degree {d}: {direct['cells']} cells, "
          f"direct max cell FD {tuple(direct['max_fd'])}, "
          f"star max cell FD {tuple(starred['max_star_fd'])}")

# unions of star representations: formats take the max, degrees add
a = to_star(parse_formula("x^2 + y^2 - 1 = 0"))
b = to_star(parse_formula("(x - 3)^2 + y^2 - 1 < 0"))
u = star_union(a, b)
print("\nstar FDs:", star_fd(a).as_tuple(), "+", star_fd(b).as_tuple(),
      "->", star_fd(u).as_tuple())
