"""Exact real algebraic arithmetic for CAD lifting.

Numbers live in towers of real field extensions QQ(a1)(a2)...  Each
extension is presented by a squarefree defining polynomial over the base
field together with a rational isolating interval selecting one real root.
Defining polynomials need not be irreducible: zero tests go through gcds
plus Sturm root counting in the isolating interval, and inversion shrinks
the defining polynomial when it discovers a factor without the selected
root.  All decisions are exact; floating point is never consulted.
"""

from __future__ import annotations

from fractions import Fraction


class RealAlgebraError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# univariate polynomials over a field: plain coefficient lists, index = degree
# ---------------------------------------------------------------------------


def ptrim(field, p):
    while p and field.raw_is_zero(p[-1]):
        p = p[:-1]
    return p


def pzero(p):
    return len(p) == 0


def pdeg(p):
    return len(p) - 1


def padd(field, p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else field.zero
        b = q[i] if i < len(q) else field.zero
        out.append(field.add(a, b))
    return ptrim(field, out)


def pneg(field, p):
    return [field.neg(c) for c in p]


def psub(field, p, q):
    return padd(field, p, pneg(field, q))


def pscale(field, c, p):
    if field.raw_is_zero(c):
        return []
    return ptrim(field, [field.mul(c, a) for a in p])


def pmul(field, p, q):
    if pzero(p) or pzero(q):
        return []
    out = [field.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = field.add(out[i + j], field.mul(a, b))
    return ptrim(field, out)


def pdivmod(field, p, q):
    if pzero(q):
        raise ZeroDivisionError("polynomial division by zero")
    q = ptrim(field, q)
    inv_lc = field.inv(q[-1])
    rem = list(p)
    quo = [field.zero] * max(len(p) - len(q) + 1, 0)
    while len(rem) >= len(q):
        rem = ptrim(field, rem)
        if len(rem) < len(q):
            break
        c = field.mul(rem[-1], inv_lc)
        k = len(rem) - len(q)
        quo[k] = field.add(quo[k], c)
        for i, b in enumerate(q):
            rem[k + i] = field.sub(rem[k + i], field.mul(c, b))
        rem = rem[:-1]
    return ptrim(field, quo), ptrim(field, rem)


def pmonic(field, p):
    p = ptrim(field, p)
    if pzero(p):
        return p
    inv_lc = field.inv(p[-1])
    return [field.mul(c, inv_lc) for c in p]


def pgcd(field, p, q):
    a, b = ptrim(field, p), ptrim(field, q)
    while not pzero(b):
        _, r = pdivmod(field, a, b)
        a, b = b, r
    return pmonic(field, a)


def pextgcd(field, p, q):
    """Return (g, u, v) with u*p + v*q = g, g monic."""
    a, b = ptrim(field, p), ptrim(field, q)
    ua, va = [field.one], []
    ub, vb = [], [field.one]
    while not pzero(b):
        quo, r = pdivmod(field, a, b)
        a, b = b, r
        ua, ub = ub, psub(field, ua, pmul(field, quo, ub))
        va, vb = vb, psub(field, va, pmul(field, quo, vb))
    if pzero(a):
        return a, ua, va
    inv_lc = field.inv(a[-1])
    scale = lambda p_: [field.mul(c, inv_lc) for c in p_]
    return scale(a), scale(ua), scale(va)


def pderiv(field, p):
    out = []
    for i in range(1, len(p)):
        out.append(field.mul(field.from_int(i), p[i]))
    return ptrim(field, out)


def peval(field, p, x):
    """Evaluate at a field element x (Horner)."""
    acc = field.zero
    for c in reversed(p):
        acc = field.add(field.mul(acc, x), c)
    return acc


def peval_frac(field, p, q: Fraction):
    return peval(field, p, field.from_fraction(q))


def squarefree(field, p):
    p = ptrim(field, p)
    if pdeg(p) <= 1:
        return pmonic(field, p)
    g = pgcd(field, p, pderiv(field, p))
    if pdeg(g) == 0:
        return pmonic(field, p)
    quo, _ = pdivmod(field, p, g)
    return pmonic(field, quo)


def sturm_chain(field, p):
    chain = [ptrim(field, p)]
    d = pderiv(field, p)
    if not pzero(d):
        chain.append(d)
        while True:
            _, r = pdivmod(field, chain[-2], chain[-1])
            if pzero(r):
                break
            chain.append(pneg(field, r))
    return chain


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def count_roots(field, chain, a: Fraction, b: Fraction):
    """Number of distinct real roots in (a, b); endpoints must be non-roots."""
    va = _variations([field.sign(peval_frac(field, q, a)) for q in chain])
    vb = _variations([field.sign(peval_frac(field, q, b)) for q in chain])
    return va - vb


def count_roots_all(field, chain, bound: Fraction):
    return count_roots(field, chain, -bound, bound)


def root_bound(field, p):
    """Cauchy-style rational bound on the absolute value of all roots."""
    p = ptrim(field, p)
    if pdeg(p) < 1:
        return Fraction(1)
    lo, hi = field.approx(p[-1], 8)
    lead = min(abs(lo), abs(hi))
    while lead == 0:  # refine until the leading coeff bounds away from 0
        prec = 16
        lo, hi = field.approx(p[-1], prec)
        lead = min(abs(lo), abs(hi))
        prec *= 2
        if prec > 2**16:
            raise RealAlgebraError("cannot bound leading coefficient away from 0")
    top = Fraction(0)
    for c in p[:-1]:
        lo, hi = field.approx(c, 8)
        top = max(top, max(abs(lo), abs(hi)))
    return Fraction(1) + top / lead


def _nonroot_near(field, p, x: Fraction, step: Fraction, direction: int):
    """A rational point near x (on the given side) where p does not vanish."""
    t = x + direction * step
    while field.raw_is_zero(peval_frac(field, p, t)):
        step = step / 2
        t = x + direction * step
    return t


def isolate_roots(field, p):
    """Isolating data for the distinct real roots of p, in increasing order.

    Returns a list of entries, each either ("rat", x) for an exact rational
    root or ("alg", sqf, lo, hi) where sqf is the squarefree part of p and
    (lo, hi) isolates exactly one root.
    """
    p = ptrim(field, p)
    if pzero(p):
        raise RealAlgebraError("cannot isolate roots of the zero polynomial")
    if pdeg(p) == 0:
        return []
    sqf = squarefree(field, p)
    chain = sturm_chain(field, sqf)
    bound = root_bound(field, sqf)
    lo = _nonroot_near(field, sqf, -bound, Fraction(1), -1)
    hi = _nonroot_near(field, sqf, bound, Fraction(1), +1)
    out = []

    def recurse(a, b, n):
        if n == 0:
            return
        if n == 1:
            out.append(("alg", a, b))
            return
        mid = (a + b) / 2
        if field.raw_is_zero(peval_frac(field, sqf, mid)):
            # shrink the punched-out gap until mid is the only root inside
            # it, so no roots are lost to (left, mid) or (mid, right)
            gap = (b - a) / 4
            while True:
                left = _nonroot_near(field, sqf, mid, gap, -1)
                right = _nonroot_near(field, sqf, mid, gap, +1)
                nl = count_roots(field, chain, a, left)
                nr = count_roots(field, chain, right, b)
                if nl + 1 + nr == n:
                    break
                gap = gap / 4
            recurse(a, left, nl)
            out.append(("rat", mid))
            recurse(right, b, nr)
        else:
            k = count_roots(field, chain, a, mid)
            recurse(a, mid, k)
            recurse(mid, b, n - k)

    recurse(lo, hi, count_roots(field, chain, lo, hi))
    result = []
    for entry in out:
        if entry[0] == "rat":
            result.append(("rat", entry[1]))
        else:
            result.append(("alg", sqf, entry[1], entry[2]))
    return result


# ---------------------------------------------------------------------------
# interval helpers (rational endpoints)
# ---------------------------------------------------------------------------


def _iadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _imul(a, b):
    vals = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(vals), max(vals))


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


class RationalField:
    """The base of every tower; payloads are Fractions."""

    base = None
    zero = Fraction(0)
    one = Fraction(1)

    def from_fraction(self, q):
        return Fraction(q)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def raw_is_zero(self, a):
        return a == 0

    def sign(self, a):
        return (a > 0) - (a < 0)

    def approx(self, a, prec):
        return (a, a)

    def depth(self):
        return 0

    def describe(self):
        return "QQ"


QQ = RationalField()


class ExtensionField:
    """base(alpha) where alpha is the unique root of `defining` in (lo, hi).

    `defining` is a squarefree UPoly over base.  Elements are tuples of base
    payloads, read as polynomials evaluated at alpha; they need not be
    reduced.  The defining polynomial may shrink over time as zero tests and
    inversions discover factors not carrying alpha.
    """

    def __init__(self, base, defining, lo: Fraction, hi: Fraction):
        self.base = base
        self.m = ptrim(base, list(defining))
        if pdeg(self.m) < 1:
            raise RealAlgebraError("defining polynomial must be nonconstant")
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self.exact = None  # set if alpha is discovered to be rational
        if base.raw_is_zero(peval_frac(base, self.m, self.lo)) or base.raw_is_zero(
            peval_frac(base, self.m, self.hi)
        ):
            raise RealAlgebraError("isolating interval endpoints must be non-roots")
        self._chain = None

    # elements -------------------------------------------------------------

    zero = ()

    @property
    def one(self):
        return (self.base.one,)

    @property
    def gen(self):
        return (self.base.zero, self.base.one)

    def from_fraction(self, q):
        q = Fraction(q)
        if q == 0:
            return ()
        return (self.base.from_fraction(q),)

    def from_int(self, n):
        return self.from_fraction(Fraction(n))

    def lift(self, base_elem):
        """Embed a base-field payload as a constant."""
        if self.base.raw_is_zero(base_elem):
            return ()
        return (base_elem,)

    def add(self, a, b):
        return tuple(padd(self.base, list(a), list(b)))

    def sub(self, a, b):
        return tuple(psub(self.base, list(a), list(b)))

    def neg(self, a):
        return tuple(pneg(self.base, list(a)))

    def mul(self, a, b):
        prod = pmul(self.base, list(a), list(b))
        _, rem = pdivmod(self.base, prod, self.m)
        return tuple(rem)

    def _chain_for(self, p):
        return sturm_chain(self.base, p)

    def _has_alpha(self, g):
        """Does the factor g of m vanish at alpha?  g squarefree, g | m."""
        g = ptrim(self.base, g)
        if pdeg(g) < 1:
            return False
        chain = self._chain_for(g)
        lo, hi = self.lo, self.hi
        # endpoints are non-roots of m, hence of g
        return count_roots(self.base, chain, lo, hi) > 0

    def raw_is_zero(self, a):
        a = ptrim(self.base, list(a))
        if not a:
            return True
        if self.exact is not None:
            return self.base.raw_is_zero(peval(self.base, a, self.exact))
        g = pgcd(self.base, self.m, a)
        if pdeg(g) < 1:
            return False
        if self._has_alpha(g):
            self.m = g
            self._chain = None
            return True
        return False

    def inv(self, a):
        a = ptrim(self.base, list(a))
        if self.raw_is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.exact is not None:
            val = peval(self.base, a, self.exact)
            return (self.base.inv(val),)
        while True:
            g, _, v = pextgcd(self.base, self.m, a)
            if pdeg(g) == 0:
                return tuple(v)
            # alpha is not a root of g (a(alpha) != 0), so strip the factor
            quo, _ = pdivmod(self.base, self.m, g)
            self.m = quo
            self._chain = None

    # refinement and signs ---------------------------------------------------

    def _sign_at(self, x: Fraction):
        return self.base.sign(peval_frac(self.base, self.m, x))

    def refine(self, max_width: Fraction):
        if self.exact is not None:
            return
        slo = self._sign_at(self.lo)
        while self.hi - self.lo > max_width:
            mid = (self.lo + self.hi) / 2
            smid = self._sign_at(mid)
            if smid == 0:
                self.exact = self.base.from_fraction(mid)
                self.lo = self.hi = mid
                return
            if smid == slo:
                self.lo = mid
            else:
                self.hi = mid

    def approx(self, a, prec):
        """Rational interval containing a(alpha), width shrinking with prec."""
        a = ptrim(self.base, list(a))
        if not a:
            return (Fraction(0), Fraction(0))
        width = Fraction(1, 2**prec)
        self.refine(width)
        if self.exact is not None and self.base is QQ:
            v = peval(self.base, a, self.exact)
            return (v, v)
        alpha_iv = (self.lo, self.hi)
        acc = (Fraction(0), Fraction(0))
        for c in reversed(a):
            c_iv = self.base.approx(c, prec)
            acc = _iadd(_imul(acc, alpha_iv), c_iv)
        return acc

    def sign(self, a):
        if self.raw_is_zero(a):
            return 0
        prec = 4
        while True:
            lo, hi = self.approx(a, prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2
            if prec > 2**20:
                raise RealAlgebraError("sign refinement failed to converge")

    def depth(self):
        return 1 + self.base.depth()

    def describe(self):
        return f"{self.base.describe()}(root of deg-{pdeg(self.m)} in ({self.lo},{self.hi}))"


# ---------------------------------------------------------------------------
# number wrapper
# ---------------------------------------------------------------------------


class Num:
    """A field element with operator sugar, usable in Polynomial.eval."""

    __slots__ = ("field", "data")

    def __init__(self, field, data):
        self.field = field
        self.data = data

    @classmethod
    def rational(cls, q):
        return cls(QQ, Fraction(q))

    def _coerce(self, other):
        if isinstance(other, Num):
            if other.field is self.field:
                return other.data
            if other.field is QQ:
                return self.field.from_fraction(other.data)
            raise RealAlgebraError("numbers from different towers")
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        d = self._coerce(other)
        if d is NotImplemented:
            return NotImplemented
        return Num(self.field, self.field.add(self.data, d))

    __radd__ = __add__

    def __neg__(self):
        return Num(self.field, self.field.neg(self.data))

    def __sub__(self, other):
        d = self._coerce(other)
        if d is NotImplemented:
            return NotImplemented
        return Num(self.field, self.field.sub(self.data, d))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        d = self._coerce(other)
        if d is NotImplemented:
            return NotImplemented
        return Num(self.field, self.field.mul(self.data, d))

    __rmul__ = __mul__

    def sign(self):
        return self.field.sign(self.data)

    def is_zero(self):
        return self.field.raw_is_zero(self.data)

    def approx(self, prec=30):
        return self.field.approx(self.data, prec)

    def as_fraction(self):
        """Exact Fraction value, if this number is visibly rational; else
        None.  An extension-field element counts when its reduced payload
        is constant, all the way down the tower."""
        field, data = self.field, self.data
        while field is not QQ:
            payload = list(data)
            while payload and field.base.raw_is_zero(payload[-1]):
                payload.pop()
            if len(payload) > 1:
                return None
            field = field.base
            data = payload[0] if payload else field.zero
        return data

    def __float__(self):
        lo, hi = self.approx(40)
        return float((lo + hi) / 2)

    def __repr__(self):
        if self.field is QQ:
            return f"Num({self.data})"
        lo, hi = self.approx(20)
        return f"Num(~{float((lo + hi) / 2):.6g})"

    def cmp(self, other):
        return (self - other).sign()

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (Num, int, Fraction)):
            return self.cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        raise TypeError("exact algebraic numbers are unhashable")


def num_in(field, value):
    """Embed a Fraction or lower-tower Num into the given field."""
    if isinstance(value, (int, Fraction)):
        return Num(field, field.from_fraction(Fraction(value)))
    if isinstance(value, Num):
        if value.field is field:
            return value
        if value.field is QQ:
            return Num(field, field.from_fraction(value.data))
        # lift through one extension step
        if getattr(field, "base", None) is value.field:
            return Num(field, field.lift(value.data))
        if getattr(field, "base", None) is not None:
            inner = num_in(field.base, value)
            return Num(field, field.lift(inner.data))
    raise RealAlgebraError(f"cannot embed {value!r} into {field.describe()}")


# ---------------------------------------------------------------------------
# root handles: refinable references to isolated real roots
# ---------------------------------------------------------------------------


class RootHandle:
    """One isolated real root of a squarefree polynomial over a field."""

    def __init__(self, field, entry):
        self.field = field
        if entry[0] == "rat":
            self.exact = entry[1]
            self.sqf = None
            self.lo = self.hi = entry[1]
        else:
            _, sqf, lo, hi = entry
            self.exact = None
            self.sqf = sqf
            self.lo = lo
            self.hi = hi

    def is_rational(self):
        return self.exact is not None

    def refine(self):
        if self.exact is not None:
            return
        f = self.field
        mid = (self.lo + self.hi) / 2
        smid = f.sign(peval_frac(f, self.sqf, mid))
        if smid == 0:
            self.exact = mid
            self.lo = self.hi = mid
            return
        slo = f.sign(peval_frac(f, self.sqf, self.lo))
        if smid == slo:
            self.lo = mid
        else:
            self.hi = mid

    def refine_below(self, width: Fraction):
        while self.hi - self.lo > width:
            self.refine()

    def vanishes(self, q):
        """Does the UPoly q (over the same field) vanish at this root?"""
        f = self.field
        q = ptrim(f, list(q))
        if pzero(q):
            return True
        if self.exact is not None:
            return f.raw_is_zero(peval_frac(f, q, self.exact))
        g = pgcd(f, self.sqf, q)
        if pdeg(g) < 1:
            return False
        chain = sturm_chain(f, g)
        return count_roots(f, chain, self.lo, self.hi) > 0

    def sign_of(self, q):
        """Exact sign of q at this root."""
        f = self.field
        q = ptrim(f, list(q))
        if self.vanishes(q):
            return 0
        if self.exact is not None:
            return f.sign(peval_frac(f, q, self.exact))
        prec = 4
        while True:
            self.refine_below(Fraction(1, 2**prec))
            iv = (Fraction(0), Fraction(0))
            for c in reversed(q):
                c_iv = f.approx(c, prec)
                iv = _iadd(_imul(iv, (self.lo, self.hi)), c_iv)
            if iv[0] > 0:
                return 1
            if iv[1] < 0:
                return -1
            prec *= 2
            if prec > 2**20:
                raise RealAlgebraError("sign refinement failed to converge")

    def as_extension(self):
        """An ExtensionField with this root as generator (rational roots
        stay in the current field)."""
        if self.exact is not None:
            return None
        # endpoints must be non-roots of sqf; refine a touch for safety
        f = self.field
        while f.raw_is_zero(peval_frac(f, self.sqf, self.lo)) or f.raw_is_zero(
            peval_frac(f, self.sqf, self.hi)
        ):
            self.refine()
        return ExtensionField(f, self.sqf, self.lo, self.hi)


def compare_roots(r1: RootHandle, r2: RootHandle):
    """-1, 0, or 1 comparing two root handles over the same field."""
    f = r1.field
    if r1.is_rational() and r2.is_rational():
        return (r1.exact > r2.exact) - (r1.exact < r2.exact)
    for _ in range(10_000):
        if r1.hi < r2.lo:
            return -1
        if r2.hi < r1.lo:
            return 1
        # overlapping intervals: equal only if they share a root
        if r1.is_rational():
            if r2.vanishes([f.from_fraction(-r1.exact), f.one]):
                return 0
        elif r2.is_rational():
            if r1.vanishes([f.from_fraction(-r2.exact), f.one]):
                return 0
        else:
            g = pgcd(f, r1.sqf, r2.sqf)
            if pdeg(g) >= 1:
                chain = sturm_chain(f, g)
                lo = max(r1.lo, r2.lo)
                hi = min(r1.hi, r2.hi)
                if (
                    lo < hi
                    and not f.raw_is_zero(peval_frac(f, g, lo))
                    and not f.raw_is_zero(peval_frac(f, g, hi))
                    and count_roots(f, chain, lo, hi) > 0
                    and r1.vanishes(g)
                    and r2.vanishes(g)
                ):
                    # both equal the unique shared root once intervals agree
                    r1_in = count_roots(f, sturm_chain(f, r1.sqf), lo, hi) > 0
                    r2_in = count_roots(f, sturm_chain(f, r2.sqf), lo, hi) > 0
                    if r1_in and r2_in:
                        return 0
        r1.refine()
        r2.refine()
    raise RealAlgebraError("root comparison failed to converge")


def sort_roots(handles):
    """Sort root handles, merging equal ones.

    Returns a list of groups; each group is a list of handles representing
    the same real number, in increasing order of value.
    """
    groups = []
    for h in handles:
        placed = False
        lo_idx = 0
        hi_idx = len(groups)
        while lo_idx < hi_idx:
            mid = (lo_idx + hi_idx) // 2
            c = compare_roots(h, groups[mid][0])
            if c == 0:
                groups[mid].append(h)
                placed = True
                break
            if c < 0:
                hi_idx = mid
            else:
                lo_idx = mid + 1
        if not placed:
            groups.insert(lo_idx, [h])
    return groups


def rational_between(r1: RootHandle, r2: RootHandle):
    """A rational strictly between two adjacent (distinct) roots."""
    for _ in range(10_000):
        if r1.hi < r2.lo:
            return (r1.hi + r2.lo) / 2
        r1.refine()
        r2.refine()
    raise RealAlgebraError("failed to separate adjacent roots")
