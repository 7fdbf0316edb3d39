"""Exact truncated Puiseux series in q over the rationals.

A series is stored on an integer grid: the key ``k`` of ``terms`` stands for
the exponent ``k/denom``.  ``trunc`` is the first exponent whose coefficient
is unknown; ``None`` means the series is exact (a Laurent polynomial).
"""

import math
from fractions import Fraction

from . import kernels

DEFAULT_ORDER = 30
DENSE_CROSSOVER = 64


class ZeroLeadingTerm(ArithmeticError):
    pass


class TruncationError(ArithmeticError):
    """A coefficient was requested at or beyond the truncation order."""


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _clean(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PuiseuxSeries:
    __slots__ = ("denom", "terms", "trunc")

    def __init__(self, terms=None, denom=1, trunc=None):
        denom = int(denom)
        if denom <= 0:
            raise ValueError("denom must be positive")
        trunc = None if trunc is None else _frac(trunc)
        terms = dict(terms or {})
        if trunc is not None:
            limit = math.ceil(trunc * denom)
            terms = {k: c for k, c in terms.items() if k < limit}
        terms = {k: _clean(c) for k, c in terms.items() if c}
        g = denom
        for k in terms:
            g = math.gcd(g, k)
            if g == 1:
                break
        if g > 1:
            terms = {k // g: c for k, c in terms.items()}
            denom //= g
        self.denom = denom
        self.terms = terms
        self.trunc = trunc

    # -- construction -----------------------------------------------------
    @classmethod
    def from_exponents(cls, mapping, trunc=None):
        """Build from a map rational exponent -> coefficient."""
        mapping = {_frac(e): c for e, c in mapping.items()}
        d = 1
        for e in mapping:
            d = d * e.denominator // math.gcd(d, e.denominator)
        return cls({int(e * d): c for e, c in mapping.items()}, d, trunc)

    @classmethod
    def monomial(cls, coeff=1, exponent=0, trunc=None):
        return cls.from_exponents({exponent: coeff}, trunc)

    @classmethod
    def zero(cls, trunc=None):
        return cls({}, 1, trunc)

    @classmethod
    def from_list(cls, coeffs, start=0, step=1, trunc=None):
        """Dense constructor: coeffs[i] sits at exponent start + i*step."""
        start, step = _frac(start), _frac(step)
        d = math.lcm(start.denominator, step.denominator)
        k0, ks = int(start * d), int(step * d)
        return cls({k0 + i * ks: c for i, c in enumerate(coeffs) if c}, d, trunc)

    # -- inspection -------------------------------------------------------
    def items(self):
        """(exponent, coefficient) pairs sorted by exponent."""
        return [(Fraction(k, self.denom), self.terms[k]) for k in sorted(self.terms)]

    def exponents(self):
        return [e for e, _ in self.items()]

    def valuation(self):
        """Smallest exponent with nonzero coefficient (or trunc/None if none)."""
        if self.terms:
            return Fraction(min(self.terms), self.denom)
        return self.trunc

    def coeff(self, exponent):
        e = _frac(exponent)
        if self.trunc is not None and e >= self.trunc:
            raise TruncationError(f"exponent {e} not below truncation {self.trunc}")
        if (e * self.denom).denominator != 1:
            return 0
        return self.terms.get(int(e * self.denom), 0)

    def __getitem__(self, exponent):
        return self.coeff(exponent)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (self.denom == other.denom and self.trunc == other.trunc
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.denom, self.trunc, tuple(sorted(self.terms.items()))))

    def agrees_with(self, other, order=None):
        """Coefficientwise equality below ``order`` and both truncations."""
        diff = self - other
        if order is not None:
            diff = diff.truncate(order)
        return diff.is_zero()

    def __repr__(self):
        parts = []
        for e, c in self.items()[:8]:
            parts.append(f"{c}*q^{e}")
        body = " + ".join(parts) or "0"
        if len(self.terms) > 8:
            body += " + ..."
        if self.trunc is not None:
            body += f" + O(q^{self.trunc})"
        return f"PuiseuxSeries({body})"

    # -- grid helpers -----------------------------------------------------
    def _regrid(self, d):
        f = d // self.denom
        return {k * f: c for k, c in self.terms.items()}

    def truncate(self, order):
        order = _frac(order)
        return PuiseuxSeries(self.terms, self.denom, _min_trunc(self.trunc, order))

    def shift(self, r):
        """Multiply by q^r."""
        r = _frac(r)
        d = math.lcm(self.denom, r.denominator)
        s = int(r * d)
        terms = {k + s: c for k, c in self._regrid(d).items()}
        trunc = None if self.trunc is None else self.trunc + r
        return PuiseuxSeries(terms, d, trunc)

    def substitute(self, m):
        """Replace q by q^m for a positive rational m."""
        m = _frac(m)
        if m <= 0:
            raise ValueError("substitution exponent must be positive")
        d = self.denom * m.denominator
        terms = {k * m.numerator: c for k, c in self.terms.items()}
        trunc = None if self.trunc is None else self.trunc * m
        return PuiseuxSeries(terms, d, trunc)

    def map_coefficients(self, fn):
        return PuiseuxSeries({k: fn(c) for k, c in self.terms.items()}, self.denom, self.trunc)

    # -- ring operations ----------------------------------------------------
    def __neg__(self):
        return PuiseuxSeries({k: -c for k, c in self.terms.items()}, self.denom, self.trunc)

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.monomial(other, 0)
        d = math.lcm(self.denom, other.denom)
        out = self._regrid(d)
        for k, c in other._regrid(d).items():
            out[k] = out.get(k, 0) + c
        return PuiseuxSeries(out, d, _min_trunc(self.trunc, other.trunc))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.monomial(other, 0)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            if other == 0:
                return PuiseuxSeries({}, 1, self.trunc)
            return PuiseuxSeries({k: c * other for k, c in self.terms.items()}, self.denom, self.trunc)
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self * other.invert(order=self._inverse_order_hint(other))
        other = _frac(other)
        return self * (1 / other)

    def _inverse_order_hint(self, other):
        # precision needed from 1/other so the quotient is limited only by self
        if self.trunc is None or not self.terms:
            return None
        return self.trunc - 2 * other.valuation()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        result = PuiseuxSeries.monomial(1, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def invert(self, order=None):
        """Multiplicative inverse.

        For an exact input the inverse is infinite, so it is truncated at
        ``order`` (default ``DEFAULT_ORDER``).  For a truncated input the
        achievable precision is trunc - 2*valuation.
        """
        if not self.terms:
            raise ZeroLeadingTerm("series has no nonzero coefficient below its truncation")
        k0 = min(self.terms)
        c0 = self.terms[k0]
        v = Fraction(k0, self.denom)
        if self.trunc is not None:
            trunc = self.trunc - 2 * v
            if order is not None:
                trunc = min(trunc, _frac(order))
        else:
            trunc = _frac(order) if order is not None else Fraction(DEFAULT_ORDER)
        g = 0
        for k in self.terms:
            g = math.gcd(g, k - k0)
        g = g or 1
        # length of the inverse in steps of g/denom
        n = math.ceil((trunc + v) * self.denom / g)
        if n <= 0:
            return PuiseuxSeries({}, 1, trunc)
        a = [0] * n
        for k, c in self.terms.items():
            i = (k - k0) // g
            if i < n:
                a[i] = c
        b = [0] * n
        exact = c0 in (1, -1)
        inv0 = c0 if exact else Fraction(1) / c0
        b[0] = inv0
        for m in range(1, n):
            s = 0
            for k in range(1, m + 1):
                ak = a[k]
                if ak:
                    s += ak * b[m - k]
            b[m] = -s * inv0
        terms = {-k0 + i * g: c for i, c in enumerate(b) if c}
        return PuiseuxSeries(terms, self.denom, trunc)

    # -- numerics ---------------------------------------------------------
    def evaluate(self, tau):
        """Numeric value at q = exp(2 pi i tau), tau complex (or real y for tau = i*y)."""
        import cmath
        total = 0
        for e, c in self.items():
            total += float(c) * cmath.exp(2j * math.pi * float(e) * tau)
        return total

    # -- serialisation ----------------------------------------------------
    def to_json(self):
        terms = []
        for e, c in self.items():
            c = _frac(c)
            terms.append([e.numerator, e.denominator, c.numerator, c.denominator])
        trunc = None if self.trunc is None else [self.trunc.numerator, self.trunc.denominator]
        return {"denom": self.denom, "trunc": trunc, "terms": terms}

    @classmethod
    def from_json(cls, data):
        trunc = data.get("trunc")
        if trunc is not None:
            trunc = Fraction(trunc[0], trunc[1])
        mapping = {Fraction(n, d): Fraction(cn, cd) for n, d, cn, cd in data["terms"]}
        return cls.from_exponents(mapping, trunc)


def _mul(a, b):
    va, vb = a.valuation(), b.valuation()
    if va is None or vb is None:
        # an exact zero factor
        return PuiseuxSeries({}, 1, None)
    trunc = None
    if a.trunc is not None:
        trunc = a.trunc + vb
    if b.trunc is not None:
        trunc = _min_trunc(trunc, b.trunc + va)
    if not a.terms or not b.terms:
        return PuiseuxSeries({}, 1, trunc)
    d = math.lcm(a.denom, b.denom)
    ta, tb = a._regrid(d), b._regrid(d)
    ea, eb = sorted(ta), sorted(tb)
    if trunc is None:
        limit = ea[-1] + eb[-1] + 1
    else:
        limit = math.ceil(trunc * d)
    base = ea[0] + eb[0]
    if base >= limit:
        return PuiseuxSeries({}, 1, trunc)
    g = 0
    for k in ea:
        g = math.gcd(g, k - ea[0])
    for k in eb:
        g = math.gcd(g, k - eb[0])
    g = g or 1
    n = (limit - base + g - 1) // g
    if min(len(ea), len(eb)) >= DENSE_CROSSOVER or (
            len(ea) * len(eb) > 4 * n and n < 1 << 16):
        la = [0] * min(n, (ea[-1] - ea[0]) // g + 1)
        for k in ea:
            i = (k - ea[0]) // g
            if i < len(la):
                la[i] = ta[k]
        lb = [0] * min(n, (eb[-1] - eb[0]) // g + 1)
        for k in eb:
            i = (k - eb[0]) // g
            if i < len(lb):
                lb[i] = tb[k]
        prod = kernels.conv_trunc(la, lb, n)
        terms = {base + i * g: c for i, c in enumerate(prod) if c}
    else:
        terms = kernels.sparse_mul_trunc(ea, [ta[k] for k in ea], eb, [tb[k] for k in eb], limit)
    return PuiseuxSeries(terms, d, trunc)


def q_power(exponent=1, coeff=1):
    return PuiseuxSeries.monomial(coeff, exponent)


def euler_product_power(e, n_terms):
    """prod_{k>=1}(1-q^k)^e to relative order n_terms, as exact integers."""
    return kernels.eta_power(e, n_terms)


def eta_quotient(factors, order=DEFAULT_ORDER):
    """Expand prod_m eta(m*tau)^{e_m} exactly below q^order.

    ``factors`` maps a positive rational scale m to an integer exponent.
    The leading exponent is sum m*e_m/24.
    """
    factors = {_frac(m): int(e) for m, e in factors.items() if e}
    order = _frac(order)
    lead = sum((m * e for m, e in factors.items()), Fraction(0)) / 24
    rel = order - lead
    if rel <= 0:
        raise ValueError(f"order {order} must exceed the leading exponent {lead}")
    result = PuiseuxSeries.monomial(1, 0, trunc=rel)
    for m, e in sorted(factors.items()):
        n = math.ceil(rel / m)
        coeffs = kernels.eta_power(e, n)
        result = result * PuiseuxSeries.from_list(coeffs, 0, m, trunc=rel)
    return result.shift(lead)


def eta_quotient_lead(factors):
    return sum((_frac(m) * e for m, e in factors.items()), Fraction(0)) / 24


def eisenstein_e4(order=DEFAULT_ORDER):
    """E4 = 1 + 240 sum sigma_3(n) q^n, exact below q^order."""
    n = math.ceil(_frac(order))
    coeffs = [0] * n
    if n:
        coeffs[0] = 1
    for d in range(1, n):
        for m in range(d, n, d):
            coeffs[m] += 240 * d ** 3
    return PuiseuxSeries.from_list(coeffs, 0, 1, trunc=order)


def j_invariant(order=DEFAULT_ORDER):
    """j = E4^3 / Delta, exact below q^order."""
    order = _frac(order)
    delta = eta_quotient({1: 24}, order + 2)
    e4 = eisenstein_e4(order + 1)
    return (e4 ** 3 * delta.invert(order=order)).truncate(order)
