"""Sparse multivariate polynomials with exact rational coefficients.

Polynomials carry an explicit ordered variable tuple; the exponent tuples in
the term map always have the same length as the variable tuple.  The zero
polynomial has an empty term map and total degree 0 by convention.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import sympy as sp


class Polynomial:
    """An exact polynomial in an ordered list of variables.

    terms maps exponent tuples to nonzero Fraction coefficients.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        clean = {}
        for expo, coeff in (terms or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != len(self.variables):
                raise ValueError(
                    f"exponent tuple {expo} does not match variables {self.variables}"
                )
            coeff = Fraction(coeff)
            if coeff != 0:
                clean[expo] = clean.get(expo, Fraction(0)) + coeff
                if clean[expo] == 0:
                    del clean[expo]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c, variables):
        variables = tuple(variables)
        c = Fraction(c)
        if c == 0:
            return cls(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name, variables):
        variables = tuple(variables)
        i = variables.index(name)
        expo = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {expo: Fraction(1)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def total_degree(self):
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name):
        i = self.variables.index(name)
        if not self.terms:
            return 0
        return max(e[i] for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError("variable mismatch")
            return other
        return Polynomial.constant(other, self.variables)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- evaluation and substitution ---------------------------------------

    def eval(self, point):
        """Evaluate at a point given as a sequence of field elements.

        Works for Fractions and for any values supporting ring arithmetic
        with Fractions (e.g. exact algebraic numbers).
        """
        if len(point) != len(self.variables):
            raise ValueError("point dimension mismatch")
        total = 0
        for expo, coeff in self.terms.items():
            term = coeff
            for v, e in zip(point, expo):
                for _ in range(e):
                    term = term * v
            total = total + term
        return total

    def subs_var(self, name, value):
        """Substitute one variable by a rational, dropping it from the list."""
        i = self.variables.index(name)
        value = Fraction(value)
        new_vars = self.variables[:i] + self.variables[i + 1 :]
        terms = {}
        for expo, coeff in self.terms.items():
            c = coeff * value ** expo[i]
            e = expo[:i] + expo[i + 1 :]
            if c != 0:
                terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(new_vars, terms)

    def extend(self, variables):
        """View this polynomial in a larger ordered variable list."""
        variables = tuple(variables)
        index = []
        for v in self.variables:
            if v not in variables:
                raise ValueError(f"variable {v} missing from {variables}")
            index.append(variables.index(v))
        terms = {}
        for expo, coeff in self.terms.items():
            e = [0] * len(variables)
            for pos, exp in zip(index, expo):
                e[pos] = exp
            terms[tuple(e)] = coeff
        return Polynomial(variables, terms)

    def rename(self, mapping):
        """Rename variables via a dict, keeping order."""
        return Polynomial(
            tuple(mapping.get(v, v) for v in self.variables), self.terms
        )

    def coeffs_in_last(self):
        """Coefficients w.r.t. the last variable, as polynomials in the rest.

        Returns a list c_0..c_d indexed by the power of the last variable.
        """
        rest = self.variables[:-1]
        d = 0
        if self.terms:
            d = max(e[-1] for e in self.terms)
        buckets = [dict() for _ in range(d + 1)]
        for expo, coeff in self.terms.items():
            buckets[expo[-1]][expo[:-1]] = coeff
        return [Polynomial(rest, b) for b in buckets]

    def derivative(self, name):
        i = self.variables.index(name)
        terms = {}
        for expo, coeff in self.terms.items():
            if expo[i] == 0:
                continue
            e = list(expo)
            c = coeff * e[i]
            e[i] -= 1
            terms[tuple(e)] = c
        return Polynomial(self.variables, terms)

    def primitive(self):
        """Integer-primitive associate with positive leading coefficient.

        Used to normalize projection polynomials; the sign convention keys
        off the lexicographically largest exponent.
        """
        if not self.terms:
            return self
        denom = 1
        for c in self.terms.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        num = 0
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator * denom // c.denominator))
        scale = Fraction(denom, num)
        lead = self.terms[max(self.terms)]
        if lead < 0:
            scale = -scale
        return Polynomial(
            self.variables, {e: c * scale for e, c in self.terms.items()}
        )

    # -- sympy bridge ------------------------------------------------------

    def to_sympy(self):
        syms = sp.symbols(self.variables) if self.variables else ()
        if isinstance(syms, sp.Symbol):
            syms = (syms,)
        expr = sp.Integer(0)
        for expo, coeff in self.terms.items():
            term = sp.Rational(coeff.numerator, coeff.denominator)
            for s, e in zip(syms, expo):
                term *= s**e
            expr += term
        return expr

    @classmethod
    def from_sympy(cls, expr, variables):
        variables = tuple(variables)
        syms = [sp.Symbol(v) for v in variables]
        poly = sp.Poly(sp.expand(expr), *syms) if syms else None
        terms = {}
        if poly is None:
            c = sp.Rational(expr)
            return cls.constant(Fraction(c.p, c.q), variables)
        for expo, coeff in poly.terms():
            c = sp.Rational(coeff)
            terms[tuple(expo)] = Fraction(c.p, c.q)
        return cls(variables, terms)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for expo in sorted(self.terms, reverse=True):
            coeff = self.terms[expo]
            factors = []
            for v, e in zip(self.variables, expo):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            if not factors:
                body = _frac_str(abs(coeff))
            elif abs(coeff) == 1:
                body = "*".join(factors)
            else:
                body = _frac_str(abs(coeff)) + "*" + "*".join(factors)
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self})"


def _frac_str(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"
