"""Exact cylindrical algebraic decomposition over the rationals (dim <= 3).

Projection uses a reduced set (coefficient chain, discriminants, pairwise
resultants) over an irreducible factor basis, with an optional full
subresultant-based set as fallback.  Lifting is exact: sector samples are
rational, section samples are real algebraic numbers in field towers from
realalg.  Every sign decision goes through exact arithmetic.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import reduce

import sympy as sp

from .formula import (
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    NamedAtom,
    Not,
    Or,
    bound_vars,
    resolve_named,
)
from .fd import fd_of_formula
from .poly import Polynomial
from .realalg import (
    QQ,
    Num,
    RootHandle,
    isolate_roots,
    num_in,
    pdeg,
    ptrim,
    rational_between,
    sort_roots,
)


class CADError(Exception):
    pass


class CeilingError(CADError):
    """Requested dimension exceeds the configured ceiling."""


class ProjectionDegeneracy(CADError):
    def __init__(self, poly):
        super().__init__(
            f"nullified leading coefficient chain for {poly}; "
            "retry with projection='collins'"
        )
        self.poly = poly


DEFAULT_CEILING = 3


# ---------------------------------------------------------------------------
# basic types
# ---------------------------------------------------------------------------


class IsolatingInterval:
    """A point or an open interval isolating one real root of a polynomial."""

    def __init__(self, poly, lo, hi, exact=None):
        self.poly = poly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self.exact = None if exact is None else Fraction(exact)

    def is_point(self):
        return self.exact is not None

    def __repr__(self):
        if self.is_point():
            return f"IsolatingInterval(point {self.exact})"
        return f"IsolatingInterval(({self.lo}, {self.hi}))"


class Cell:
    """One cell of a cylindrical decomposition.

    index_path holds one stack index per level; even indices are sectors
    (intervals), odd indices sections (graphs of root functions).  The
    sample point is exact: rational in sector coordinates, real algebraic
    in sections.
    """

    def __init__(self, index_path, field, coords, dim):
        self.index_path = tuple(index_path)
        self.field = field
        self.coords = list(coords)
        self.dim = dim
        self.memberships = None  # filled by compatible_decomposition

    @property
    def level(self):
        return len(self.index_path)

    def kinds(self):
        return tuple("point" if i % 2 == 1 else "interval" for i in self.index_path)

    def sample_dict(self, variables):
        return dict(zip(variables, self.coords))

    def __repr__(self):
        return f"Cell{self.index_path}(dim {self.dim})"


class CellDecomposition:
    """A sign-invariant cylindrical decomposition of R^level.

    Carries the recursive base decomposition and, per base cell, the stack
    data (substituted univariate polynomials and section roots) used for
    lifting, adjacency, and cell formulas.
    """

    def __init__(self, variables, basis, cells, base, inputs, provenance=None):
        self.variables = tuple(variables)
        self.basis = list(basis)
        self.cells = list(cells)
        self.base = base
        self.inputs = list(inputs)
        self.provenance = provenance or []
        self.stacks = {}  # base index_path -> stack record

    @property
    def level(self):
        return len(self.variables)

    def __len__(self):
        return len(self.cells)

    def cell_at(self, index_path):
        index_path = tuple(index_path)
        for c in self.cells:
            if c.index_path == index_path:
                return c
        raise KeyError(index_path)

    def layers(self):
        """Decompositions from the one-dimensional base up to this one."""
        chain = []
        d = self
        while d is not None:
            chain.append(d)
            d = d.base
        return list(reversed(chain))


# ---------------------------------------------------------------------------
# factor basis and projection
# ---------------------------------------------------------------------------


def factor_basis(polys, variables):
    """Distinct irreducible rational factors, primitive-normalized."""
    out = []
    for p in polys:
        if p.is_zero():
            raise CADError("zero polynomial in input")
        if p.is_constant():
            continue
        _, factors = sp.factor_list(p.to_sympy())
        for fac, _ in factors:
            q = Polynomial.from_sympy(fac, variables).primitive()
            if q.is_constant():
                continue
            if q not in out:
                out.append(q)
    return out


def project_polys(polys, variables=None, method="mccallum"):
    """Projection of a set of polynomials, eliminating the last variable.

    The output (in one fewer variable) contains coefficient chains,
    discriminants, and pairwise resultants of an irreducible factor basis;
    method='collins' adds full subresultant coefficient sets instead of
    failing on a nullified coefficient chain.
    """
    polys = list(polys)
    if not polys:
        return []
    if variables is None:
        variables = polys[0].variables
    variables = tuple(variables)
    if len(variables) < 2:
        raise CADError("projection needs at least two variables")
    basis = factor_basis(polys, variables)
    last = sp.Symbol(variables[-1])
    rest = variables[:-1]
    active = [q for q in basis if q.degree_in(variables[-1]) >= 1]
    passthrough = [q.coeffs_in_last()[0] for q in basis
                   if q.degree_in(variables[-1]) == 0]
    out = []

    def add(item):
        if isinstance(item, Polynomial):
            q = item
        else:
            q = Polynomial.from_sympy(sp.expand(item), rest)
        if q.is_zero() or q.is_constant():
            return
        q = q.primitive()
        if q not in out:
            out.append(q)

    for q in passthrough:
        add(q)

    for q in active:
        coeffs = q.coeffs_in_last()
        chain_ok = False
        for c in reversed(coeffs):
            if c.is_zero():
                continue
            if c.is_constant():
                chain_ok = True
                break
            add(c)
        if not chain_ok and method == "mccallum":
            raise ProjectionDegeneracy(q)
        qs = sp.Poly(q.to_sympy(), last)
        if qs.degree() >= 2:
            add(sp.discriminant(qs.as_expr(), last))
        if method == "collins":
            dq = qs.diff(last)
            if not dq.is_zero:
                for s in sp.subresultants(qs.as_expr(), dq.as_expr(), last):
                    for c in sp.Poly(s, last).all_coeffs():
                        add(c)

    for i in range(len(active)):
        for j in range(i + 1, len(active)):
            ei = active[i].to_sympy()
            ej = active[j].to_sympy()
            add(sp.resultant(ei, ej, last))
            if method == "collins":
                for s in sp.subresultants(ei, ej, last):
                    for c in sp.Poly(s, last).all_coeffs():
                        add(c)

    return out


# ---------------------------------------------------------------------------
# root isolation
# ---------------------------------------------------------------------------


def _root_handles(field, up, fast=False):
    """Root handles for a univariate coefficient list over a field.

    Over the rationals the polynomial is factored first, so rational roots
    come back exact rather than as isolating intervals.  fast=True skips
    the factoring and isolates roots of the squarefree part directly; the
    handles are exact for comparison purposes but their minimal polynomials
    may be reducible.
    """
    if field is not QQ or fast:
        return [RootHandle(field, e) for e in isolate_roots(field, up)]
    x = sp.Symbol("_t")
    expr = sp.Add(*[sp.Rational(c.numerator, c.denominator) * x**i
                    for i, c in enumerate(up)])
    handles = []
    _, factors = sp.factor_list(expr, x)
    for fac, _ in factors:
        p = sp.Poly(fac, x)
        if p.degree() == 1:
            a, b = (sp.Rational(c) for c in p.all_coeffs())
            r = -Fraction(b.p, b.q) / Fraction(a.p, a.q)
            handles.append(RootHandle(QQ, ("rat", r)))
        elif p.degree() >= 2:
            coeffs = [Fraction(sp.Rational(c).p, sp.Rational(c).q)
                      for c in reversed(p.all_coeffs())]
            handles.extend(RootHandle(QQ, e) for e in isolate_roots(QQ, coeffs))
    return handles


def isolate_real_roots(p: Polynomial):
    """Isolating intervals for the distinct real roots of a univariate
    polynomial, in increasing order; rational roots come back as points."""
    if p.is_zero():
        raise CADError("cannot isolate roots of the zero polynomial")
    if len(p.variables) != 1:
        raise CADError("isolate_real_roots expects a univariate polynomial")
    up = [c.constant_value() for c in p.coeffs_in_last()]
    groups = sort_roots(_root_handles(QQ, up))
    out = []
    for group in groups:
        h = group[0]
        if h.is_rational():
            out.append(IsolatingInterval(p, h.exact, h.exact, exact=h.exact))
        else:
            out.append(IsolatingInterval(p, h.lo, h.hi))
    return out


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------


class _Section:
    def __init__(self, value, handle, vanishing, index):
        self.value = value  # Num in the (possibly extended) cell field
        self.handle = handle  # RootHandle over the base cell field
        self.vanishing = vanishing  # basis indices vanishing on this section
        self.index = index  # 1-based position in the merged stack


def _substituted_upoly(field, poly, coords):
    """poly (in the base variables plus one) as a coefficient list over the
    base cell's field, evaluated at the base sample."""
    out = []
    for c_poly in poly.coeffs_in_last():
        if c_poly.is_zero():
            out.append(field.zero)
            continue
        val = c_poly.eval(coords)
        if isinstance(val, (int, Fraction)):
            out.append(field.from_fraction(Fraction(val)))
        else:
            out.append(num_in(field, val).data)
    return ptrim(field, out)


def _build_stack(field, coords, basis, sampling=False):
    """Stack data over one base point: substituted polys, merged sections.

    sampling=True takes shortcuts that are safe when only the section
    order, isolating intervals, and on-demand exact values are needed: no
    per-section vanishing sets, no up-front factoring, and section values
    are computed lazily via _section_value.
    """
    upolys = []
    handles = []
    for bi, poly in enumerate(basis):
        up = _substituted_upoly(field, poly, coords)
        if len(up) == 0:
            upolys.append(None)  # vanishes identically on the fiber
            continue
        upolys.append(up)
        if len(up) >= 2:
            for h in _root_handles(field, up, fast=sampling):
                h.basis_index = bi
                handles.append(h)
    groups = sort_roots(handles)
    sections = []
    for j, group in enumerate(groups, start=1):
        rep = group[0]
        vanishing = {h.basis_index for h in group}
        if not sampling:
            for bi, up in enumerate(upolys):
                if up is not None and bi not in vanishing and rep.vanishes(up):
                    vanishing.add(bi)
        if sampling:
            value = None
        elif rep.is_rational():
            value = Num(field, field.from_fraction(rep.exact))
        else:
            ext = rep.as_extension()
            value = Num(ext, ext.gen)
        sections.append(_Section(value, rep, vanishing, j))
    return {"upolys": upolys, "sections": sections, "field": field,
            "coords": coords}


def _is_square(q: Fraction):
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def _section_value(field, handle):
    """Exact Num for a section from a (possibly fast) root handle.

    Fast handles over the rationals can carry a reducible squarefree part;
    extension fields need an irreducible minimal polynomial, so the root is
    re-examined here before extending.
    """
    if handle.is_rational():
        return Num(field, field.from_fraction(handle.exact))
    if field is QQ and pdeg(handle.sqf) == 1:
        c, b = handle.sqf
        return Num(field, field.from_fraction(-c / b))
    if field is QQ and pdeg(handle.sqf) == 2:
        # quadratic: either both roots rational or the poly is irreducible
        c, b, a = handle.sqf
        root = _is_square(b * b - 4 * a * c)
        if root is not None:
            for r in ((-b + root) / (2 * a), (-b - root) / (2 * a)):
                if handle.lo <= r <= handle.hi:
                    return Num(field, field.from_fraction(r))
        ext = handle.as_extension()
        return Num(ext, ext.gen)
    if field is QQ and pdeg(handle.sqf) > 2:
        # pick the irreducible factor this root actually satisfies
        x = sp.Symbol("_t")
        expr = sp.Add(*[sp.Rational(c.numerator, c.denominator) * x**i
                        for i, c in enumerate(handle.sqf)])
        _, factors = sp.factor_list(expr, x)
        for fac, _ in factors:
            p = sp.Poly(fac, x)
            coeffs = [Fraction(sp.Rational(c).p, sp.Rational(c).q)
                      for c in reversed(p.all_coeffs())]
            if len(coeffs) < 2 or not handle.vanishes(coeffs):
                continue
            if len(coeffs) == 2:
                return Num(field, field.from_fraction(-coeffs[0] / coeffs[1]))
            handle = RootHandle(QQ, ("alg", coeffs, handle.lo, handle.hi))
            break
    ext = handle.as_extension()
    return Num(ext, ext.gen)


def _sector_samples(sections):
    """Rational sample values for the sectors of a stack."""
    if not sections:
        return [Fraction(0)]
    samples = [sections[0].handle.lo - 1]
    for s1, s2 in zip(sections, sections[1:]):
        samples.append(rational_between(s1.handle, s2.handle))
    samples.append(sections[-1].handle.hi + 1)
    return samples


def _lift_cells(base_cell, stack):
    field = stack["field"]
    coords = stack["coords"]
    sections = stack["sections"]
    sectors = _sector_samples(sections)
    cells = []
    for idx in range(2 * len(sections) + 1):
        if idx % 2 == 0:
            new_field = field
            new_coords = list(coords) + [num_in(field, sectors[idx // 2])]
            dim = base_cell.dim + 1
        else:
            sec = sections[idx // 2]
            new_field = sec.value.field
            if new_field is field:
                new_coords = list(coords) + [sec.value]
            else:
                new_coords = [num_in(new_field, c) for c in coords] + [sec.value]
            dim = base_cell.dim
        cells.append(Cell(base_cell.index_path + (idx,), new_field,
                          new_coords, dim))
    return cells


# ---------------------------------------------------------------------------
# the decomposition builder
# ---------------------------------------------------------------------------


def cad(polys, variables=None, ceiling=DEFAULT_CEILING, projection="mccallum",
        provenance=None):
    """Sign-invariant cylindrical decomposition of R^len(variables)."""
    polys = list(polys)
    if variables is None:
        if not polys:
            raise CADError("need variables when no polynomials are given")
        variables = polys[0].variables
    variables = tuple(variables)
    for p in polys:
        if p.variables != variables:
            raise CADError("all polynomials must share one variable order")
    if len(variables) == 0:
        raise CADError("need at least one variable")
    if len(variables) > ceiling:
        raise CeilingError(
            f"dimension {len(variables)} exceeds ceiling {ceiling}")
    basis = factor_basis(polys, variables)
    return _cad_levels(basis, variables, projection, polys, provenance)


def _cad_levels(basis, variables, projection, inputs, provenance):
    if len(variables) == 1:
        virtual_base = Cell((), QQ, [], 0)
        stack = _build_stack(QQ, [], basis)
        cells = _lift_cells(virtual_base, stack)
        d = CellDecomposition(variables, basis, cells, None, inputs, provenance)
        d.stacks[()] = stack
        return d
    proj = project_polys(basis, variables, method=projection) if basis else []
    base = _cad_levels(
        factor_basis(proj, variables[:-1]) if proj else [],
        variables[:-1], projection, proj, None)
    d = CellDecomposition(variables, basis, [], base, inputs, provenance)
    cells = []
    for base_cell in base.cells:
        stack = _build_stack(base_cell.field, base_cell.coords, basis)
        d.stacks[base_cell.index_path] = stack
        cells.extend(_lift_cells(base_cell, stack))
    d.cells = cells
    return d


# ---------------------------------------------------------------------------
# random in-cell sampling
# ---------------------------------------------------------------------------


def _random_in_sector(sections, j, rng):
    t = Fraction(rng.randrange(1, 64), 64)
    if not sections:
        return Fraction(rng.randrange(-200, 201), 100)
    if j == 0:
        return sections[0].handle.lo - t
    if j == len(sections):
        return sections[-1].handle.hi + t
    h1 = sections[j - 1].handle
    h2 = sections[j].handle
    rational_between(h1, h2)  # refines both until the intervals separate
    a, b = h1.hi, h2.lo
    return a + t * (b - a)


def sample_in_cell(decomp, cell, rng, count=1):
    """Random exact points inside a cell, as coordinate lists of Num.

    Sector coordinates are drawn as random rationals; section coordinates
    are re-solved exactly over the random base point.
    """
    layers = decomp.layers()
    cache = getattr(decomp, "_sample_stacks", None)
    if cache is None:
        cache = decomp._sample_stacks = {}
    out = []
    for _ in range(count):
        field = QQ
        coords = []
        deterministic = True
        for k, idx in enumerate(cell.index_path):
            # a stack over a prefix of section coordinates is the same for
            # every sample, so it can be shared; randomness only enters
            # through sector levels
            key = cell.index_path[:k] if deterministic else None
            if key is not None and key in cache:
                stack = cache[key]
            else:
                stack = _build_stack(field, coords, layers[k].basis,
                                     sampling=True)
                if key is not None:
                    cache[key] = stack
            sections = stack["sections"]
            if idx % 2 == 1:
                sec = sections[idx // 2]
                if sec.value is None:
                    sec.value = _section_value(field, sec.handle)
                new_field = sec.value.field
                if new_field is not field:
                    coords = [num_in(new_field, c) for c in coords]
                    field = new_field
                coords.append(sec.value)
            else:
                val = _random_in_sector(sections, idx // 2, rng)
                coords.append(num_in(field, val))
                deterministic = False
        out.append(coords)
    return out


def locate(decomp, point):
    """Index path of the unique cell containing an exact point.

    point is a sequence of Fractions or Nums; comparisons against stack
    sections are exact, so the answer is certified.
    """
    layers = decomp.layers()
    if len(point) != decomp.level:
        raise CADError("point dimension mismatch")
    field = QQ
    coords = []
    path = []
    for k, value in enumerate(point):
        v = _as_num(value)
        if v.field.depth() > field.depth():
            field = v.field
            coords = [num_in(field, x) for x in coords]
        v = num_in(field, v)
        stack = _build_stack(field, coords, layers[k].basis)
        idx = 0
        landed = None
        for j, sec in enumerate(stack["sections"]):
            c = _num_cmp(v, sec.value)
            if c == 0:
                idx = 2 * j + 1
                landed = sec.value
                break
            if c < 0:
                idx = 2 * j
                break
            idx = 2 * j + 2
        if landed is not None:
            field = landed.field
            coords = [num_in(field, x) for x in coords]
            coords.append(landed)
        else:
            coords.append(v)
        path.append(idx)
    return tuple(path)


def _num_cmp(a, b):
    field = _deepest_field([a, b])
    return (num_in(field, a) - num_in(field, b)).sign()


def poly_sign_at(poly, coords):
    """Exact sign of a polynomial at a coordinate list of Num."""
    value = poly.eval(coords)
    if isinstance(value, (int, Fraction)):
        return (value > 0) - (value < 0)
    return value.sign()


# ---------------------------------------------------------------------------
# cell formulas with root indexing
# ---------------------------------------------------------------------------


def _lt(a, b):
    """Atom expressing a < b for two variables."""
    p = Polynomial((a, b), {(0, 1): Fraction(1), (1, 0): Fraction(-1)})
    return Atom(p, ">")


def _eq(a, b):
    p = Polynomial((a, b), {(1, 0): Fraction(1), (0, 1): Fraction(-1)})
    return Atom(p, "=")


def _jth_root(P, target, j, fresh):
    """Formula stating that target is the j-th real root, in increasing
    order, of P read as a polynomial in its last variable."""
    x = P.variables[-1]
    aux = [next(fresh) for _ in range(j - 1)]
    parts = [Atom(P.rename({x: u}), "=") for u in aux]
    chain = aux + [target]
    parts += [_lt(a, b) for a, b in zip(chain, chain[1:])]
    parts.append(Atom(P.rename({x: target}), "="))
    z = next(fresh)
    bad = And([Atom(P.rename({x: z}), "="), _lt(z, target)])
    if aux:
        closure = Forall(z, Or([Not(bad)] + [_eq(z, u) for u in aux]))
    else:
        closure = Forall(z, Not(bad))
    body = And(parts + [closure])
    for u in reversed(aux):
        body = Exists(u, body)
    return body


def _var_minus(var, r):
    return Polynomial((var,), {(1,): Fraction(1), (0,): -Fraction(r)})


def cell_formula(decomp, cell, fresh_prefix="_q"):
    """A defining formula for a cell, with its format/degree pair.

    Sections are described by root indexing into the product of the stack
    polynomials; the format of these descriptions grows with the root
    index, which is exactly the growth star representations avoid.
    """
    layers = decomp.layers()
    fresh = (f"{fresh_prefix}{i}" for i in itertools.count())
    parts = []
    for k, idx in enumerate(cell.index_path):
        layer = layers[k]
        var = layer.variables[-1]
        stack = layer.stacks[cell.index_path[:k]]
        sections = stack["sections"]
        active = [layer.basis[i] for i, up in enumerate(stack["upolys"])
                  if up is not None and len(up) >= 2]
        P = (reduce(lambda a, b: a * b,
                    (q.extend(layer.variables) for q in active))
             if active else None)
        if idx % 2 == 1:
            sec = sections[idx // 2]
            if k == 0 and sec.handle.is_rational():
                parts.append(Atom(_var_minus(var, sec.handle.exact), "="))
            else:
                parts.append(_jth_root(P, var, idx // 2 + 1, fresh))
        else:
            j = idx // 2  # number of sections strictly below this sector
            if j >= 1:
                sec = sections[j - 1]
                if k == 0 and sec.handle.is_rational():
                    parts.append(Atom(_var_minus(var, sec.handle.exact), ">"))
                else:
                    u = next(fresh)
                    parts.append(Exists(u, And([_jth_root(P, u, j, fresh),
                                                _lt(u, var)])))
            if j < len(sections):
                sec = sections[j]
                if k == 0 and sec.handle.is_rational():
                    parts.append(Atom(_var_minus(var, sec.handle.exact), "<"))
                else:
                    w = next(fresh)
                    parts.append(Exists(w, And([_jth_root(P, w, j + 1, fresh),
                                                _lt(var, w)])))
    if not parts:
        psi = Atom(Polynomial.constant(1, decomp.variables[:1]), ">")
    elif len(parts) == 1:
        psi = parts[0]
    else:
        psi = And(parts)
    return psi, fd_of_formula(psi)


# ---------------------------------------------------------------------------
# cylinders
# ---------------------------------------------------------------------------


def cylinder_cells(decomp, level, pad_prefix="_w"):
    """The decomposition of R^level induced by a cylindrical decomposition.

    For level below the ambient dimension this is the stored base
    decomposition; above it, cells are extended by full lines.
    """
    layers = decomp.layers()
    if 1 <= level <= decomp.level:
        return layers[level - 1]
    if level < 1:
        raise CADError("level must be at least 1")
    d = decomp
    for k in range(decomp.level + 1, level + 1):
        var = f"{pad_prefix}{k}"
        nd = CellDecomposition(d.variables + (var,), [], [], d, d.inputs,
                               d.provenance)
        cells = []
        for c in d.cells:
            nd.stacks[c.index_path] = {"upolys": [], "sections": [],
                                       "field": c.field, "coords": c.coords}
            cells.append(Cell(c.index_path + (0,), c.field,
                              list(c.coords) + [num_in(c.field, Fraction(0))],
                              c.dim + 1))
        nd.cells = cells
        d = nd
    return d


# ---------------------------------------------------------------------------
# exact decisions for quantified formulas (small ambient dimension)
# ---------------------------------------------------------------------------


def _deepest_field(values):
    field = QQ
    for v in values:
        if isinstance(v, Num) and v.field.depth() > field.depth():
            field = v.field
    return field


def _as_num(value):
    if isinstance(value, Num):
        return value
    return Num.rational(value)


def _eval_atom(atom, point):
    vals = [_as_num(point[v]) for v in atom.poly.variables]
    field = _deepest_field(vals)
    coerced = [num_in(field, v) for v in vals]
    s = poly_sign_at(atom.poly, coerced)
    if atom.sign == "=":
        return s == 0
    if atom.sign == ">":
        return s > 0
    return s < 0


def decide(psi: Formula, point=None, env=None, ceiling=DEFAULT_CEILING):
    """Exact truth value of a formula under a variable assignment.

    The assignment must cover every free variable (values may be rational
    or exact algebraic Num); quantified variables are handled by recursive
    decomposition over projection polynomials, so the quantifier depth is
    limited by the ceiling.
    """
    point = dict(point or {})
    if env is not None:
        psi = resolve_named(psi, env)
    missing = [v for v in psi.free_vars() if v not in point]
    if missing:
        raise CADError(f"unassigned free variables {missing}")
    return _decide(psi, point, ceiling)


def _decide(psi, point, ceiling):
    if isinstance(psi, Atom):
        return _eval_atom(psi, point)
    if isinstance(psi, NamedAtom):
        raise CADError("resolve named atoms before deciding")
    if isinstance(psi, And):
        return all(_decide(c, point, ceiling) for c in psi.children)
    if isinstance(psi, Or):
        return any(_decide(c, point, ceiling) for c in psi.children)
    if isinstance(psi, Not):
        return not _decide(psi.child, point, ceiling)
    if isinstance(psi, (Exists, Forall)):
        want = isinstance(psi, Exists)
        for value in _test_points(psi, point, ceiling):
            newpoint = dict(point)
            newpoint[psi.var] = value
            if _decide(psi.child, newpoint, ceiling) == want:
                return want
        return not want
    raise CADError(f"cannot decide {psi!r}")


def _test_points(psi, point, ceiling):
    """Candidate values for psi.var covering every relevant sign condition.

    Eliminates deeper quantified variables by projection, then isolates the
    roots of the surviving polynomials in psi.var at the current (possibly
    algebraic) assignment; yields each root and a rational in each gap.
    """
    var = psi.var
    inner_bound = bound_vars(psi.child)
    if len(inner_bound) + 1 > ceiling:
        raise CeilingError("quantifier depth exceeds ceiling")
    polys = []
    for atom in psi.child.atoms():
        if not isinstance(atom, Atom):
            raise CADError("resolve named atoms before deciding")
        if not atom.poly.is_constant():
            polys.append(atom.poly)
    order = []
    for p in polys:
        for v in p.variables:
            if v not in order:
                order.append(v)
    if var not in order:
        yield Num.rational(0)
        return
    full = [v for v in point if v in order]
    full.append(var)
    full += [v for v in inner_bound if v in order]
    stray = [v for v in order if v not in full]
    if stray:
        raise CADError(f"stray variables {stray} in quantified body")
    work = [p.extend(tuple(full)) for p in polys]
    while full[-1] != var:
        nonconst = [p for p in work if not p.is_constant()]
        if nonconst:
            try:
                work = project_polys(nonconst, tuple(full))
            except ProjectionDegeneracy:
                work = project_polys(nonconst, tuple(full), method="collins")
        else:
            work = []
        full = full[:-1]
    assigned = full[:-1]
    field = _deepest_field(_as_num(point[v]) for v in assigned)
    coords = [num_in(field, _as_num(point[v])) for v in assigned]
    handles = []
    for p in work:
        if p.is_constant():
            continue
        up = _substituted_upoly(field, p.extend(tuple(full)), coords)
        if len(up) >= 2:
            handles.extend(_root_handles(field, up))
    groups = sort_roots(handles)
    if not groups:
        yield Num.rational(0)
        return

    def section_value(handle):
        if handle.is_rational():
            return Num(field, field.from_fraction(handle.exact))
        ext = handle.as_extension()
        return Num(ext, ext.gen)

    yield Num.rational(groups[0][0].lo - 1)
    for g1, g2 in zip(groups, groups[1:]):
        yield section_value(g1[0])
        yield Num.rational(rational_between(g1[0], g2[0]))
    yield section_value(groups[-1][0])
    yield Num.rational(groups[-1][0].hi + 1)


# ---------------------------------------------------------------------------
# decompositions compatible with a family of sets
# ---------------------------------------------------------------------------


def compatible_decomposition(sets, variables=None, env=None,
                             ceiling=DEFAULT_CEILING, projection="mccallum"):
    """A cylindrical decomposition of R^n compatible with the given sets.

    Each input formula defines a subset of the common ambient space; every
    cell lies entirely inside or outside each set, recorded per cell in
    cell.memberships.  Quantified inputs contribute their projection
    polynomials; membership is then decided exactly at cell samples.
    """
    sets = list(sets)
    if env is not None:
        sets = [resolve_named(s, env) for s in sets]
    if variables is None:
        order = []
        for s in sets:
            for v in s.free_vars():
                if v not in order:
                    order.append(v)
        variables = tuple(order)
    else:
        variables = tuple(variables)
        for s in sets:
            extra = set(s.free_vars()) - set(variables)
            if extra:
                raise CADError(f"free variables {sorted(extra)} outside "
                               f"the ambient variables {variables}")
    if not variables:
        raise CADError("no ambient variables")
    if len(variables) > ceiling:
        raise CeilingError(
            f"dimension {len(variables)} exceeds ceiling {ceiling}")

    polys = []

    def add(p):
        if p.is_constant():
            return
        q = p.extend(variables).primitive()
        if q not in polys:
            polys.append(q)

    for s in sets:
        bvars = bound_vars(s)
        free_polys = []
        quant_polys = []
        for atom in s.atoms():
            if not isinstance(atom, Atom):
                raise CADError("resolve named atoms first")
            if set(atom.poly.variables) & set(bvars):
                quant_polys.append(atom.poly)
            else:
                free_polys.append(atom.poly)
        for p in free_polys:
            add(p)
        if quant_polys:
            order = list(variables) + list(bvars)
            if len(order) > ceiling:
                raise CeilingError("elimination depth exceeds ceiling")
            work = [p.extend(tuple(order)) for p in quant_polys
                    if not p.is_constant()]
            while len(order) > len(variables):
                nonconst = [p for p in work if not p.is_constant()]
                if nonconst:
                    try:
                        work = project_polys(nonconst, tuple(order),
                                             method=projection)
                    except ProjectionDegeneracy:
                        work = project_polys(nonconst, tuple(order),
                                             method="collins")
                else:
                    work = []
                order = order[:-1]
            for p in work:
                add(p)

    d = cad(polys, variables, ceiling=ceiling, projection=projection,
            provenance=sets)
    for c in d.cells:
        point = c.sample_dict(variables)
        c.memberships = tuple(decide(s, point, ceiling=ceiling) for s in sets)
    return d


def decomposition_report(decomp):
    """Cell count and the largest cell-description format/degree pair."""
    best = None
    for c in decomp.cells:
        _, fd = cell_formula(decomp, c)
        if best is None or (fd.format, fd.degree) > (best.format, best.degree):
            best = fd
    return {"cells": len(decomp.cells),
            "max_fd": best.as_tuple() if best else None}
