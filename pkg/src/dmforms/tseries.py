"""Truncated power series in the uniformizer t over F_q or K = F_q(T).

A TSeries of precision N stores exactly N+1 coefficients: the series is
known modulo t^(N+1).  Equality demands equal precision and equal
coefficients; use agrees_to for prefix comparison.  Precision always
propagates as the minimum of the operands; nothing is ever extrapolated.

Products and inversions of series with coefficients in A (or with a common
denominator) run through the packed kernel; coefficients with genuinely
rational entries fall back to direct convolution.
"""

from . import _kernel
from .ffield import Fq, FqElem
from .polyring import PolyA, RatK, RatField, poly_gcd


def _base_zero(base):
    return base.zero


class TSeries:
    """A truncated power series over an exact coefficient field."""

    __slots__ = ('base', 'coeffs', 'prec')

    def __init__(self, base, coeffs, prec=None):
        if prec is None:
            prec = len(coeffs) - 1
        if len(coeffs) != prec + 1:
            raise ValueError(
                f"series with prec {prec} needs {prec + 1} coefficients, "
                f"got {len(coeffs)}")
        self.base = base
        self.coeffs = tuple(base.element(c) if not _is_elem(base, c) else c
                            for c in coeffs)
        self.prec = prec

    @classmethod
    def zero(cls, base, prec):
        return cls(base, [_base_zero(base)] * (prec + 1), prec)

    @classmethod
    def one(cls, base, prec):
        c = [_base_zero(base)] * (prec + 1)
        c[0] = base.one
        return cls(base, c, prec)

    @classmethod
    def t(cls, base, prec):
        c = [_base_zero(base)] * (prec + 1)
        if prec >= 1:
            c[1] = base.one
        return cls(base, c, prec)

    @classmethod
    def monomial(cls, base, coeff, n, prec):
        c = [_base_zero(base)] * (prec + 1)
        if n <= prec:
            c[n] = coeff
        return cls(base, c, prec)

    def __getitem__(self, n):
        if not 0 <= n <= self.prec:
            raise IndexError(f"coefficient {n} beyond precision {self.prec}")
        return self.coeffs[n]

    def valuation(self):
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None  # zero to precision

    def is_zero(self):
        return all(not c for c in self.coeffs)

    def _check(self, other):
        if not isinstance(other, TSeries):
            raise TypeError(f"cannot combine TSeries with {type(other).__name__}")
        if other.base is not self.base:
            raise ValueError("series over different coefficient fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        n = min(self.prec, other.prec)
        return TSeries(self.base,
                       [a + b for a, b in zip(self.coeffs, other.coeffs)][:n + 1],
                       n)

    def __sub__(self, other):
        other = self._check(other)
        n = min(self.prec, other.prec)
        return TSeries(self.base,
                       [a - b for a, b in zip(self.coeffs, other.coeffs)][:n + 1],
                       n)

    def __neg__(self):
        return TSeries(self.base, [-c for c in self.coeffs], self.prec)

    def scale(self, c):
        """Multiply by a single coefficient of the base field."""
        c = self.base.element(c) if not _is_elem(self.base, c) else c
        return TSeries(self.base, [c * x for x in self.coeffs], self.prec)

    def __mul__(self, other):
        other = self._check(other)
        n = min(self.prec, other.prec)
        fk, fden = _to_kernel(self)
        gk, gden = _to_kernel(other)
        kf = _kf(self.base)
        res = _kernel.ser_mul(kf, fk, gk, n)
        den = None
        if fden is not None or gden is not None:
            a = fden if fden is not None else PolyA.one(_fq(self.base))
            b = gden if gden is not None else PolyA.one(_fq(self.base))
            den = a * b
        return _from_kernel(self.base, res, n, den)

    def inv(self):
        """Multiplicative inverse; the constant term must be a unit."""
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        f = self.scale(_inv_elem(self.base, c0))
        fk, fden = _to_kernel(f)
        if fden is None:
            res = _kernel.ser_inv_unit(_kf(self.base), fk, self.prec)
            out = _from_kernel(self.base, res, self.prec, None)
        else:
            out = _naive_inv(f)
        return out.scale(_inv_elem(self.base, c0))

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative series power; use inv() first")
        if e == 0:
            return TSeries.one(self.base, self.prec)
        p = _fq(self.base).p
        # p-adic digits of e: f^e = prod_j frobenius^j(f^(digit_j))
        digits = []
        n = e
        while n:
            digits.append(n % p)
            n //= p
        result = None
        small_pows = {}
        for j, dig in enumerate(digits):
            if dig == 0:
                continue
            if dig not in small_pows:
                acc = self
                for _ in range(dig - 1):
                    acc = acc * self
                small_pows[dig] = acc
            factor = small_pows[dig].frobenius(j) if j else small_pows[dig]
            result = factor if result is None else result * factor
        return result.truncate(self.prec)

    def frobenius(self, e=1):
        """self**(p**e); exact, precision grows to p^e*(prec+1)-1."""
        if e == 0:
            return self
        kf = _kf(self.base)
        out_prec = kf.p ** e * (self.prec + 1) - 1
        fk, fden = _to_kernel(self)
        res = _kernel.ser_frobenius(kf, fk, e, out_prec)
        den = None if fden is None else fden.frobenius(e)
        return _from_kernel(self.base, res, out_prec, den)

    def theta(self):
        """The derivation -t^2 d/dt: sum (-n) a_n t^(n+1), precision + 1."""
        base = self.base
        p = _fq(base).p
        out = [_base_zero(base)] * (self.prec + 2)
        scalars = {}
        for n, c in enumerate(self.coeffs):
            s = (-n) % p
            if not s or not c:
                continue
            if s not in scalars:
                scalars[s] = _int_elem(base, s)
            out[n + 1] = scalars[s] * c
        return TSeries(base, out, self.prec + 1)

    def truncate(self, n):
        if n > self.prec:
            raise ValueError(f"cannot raise precision from {self.prec} to {n}")
        if n == self.prec:
            return self
        return TSeries(self.base, self.coeffs[:n + 1], n)

    def shift(self, k):
        """Multiply by t^k; the result is known modulo t^(prec+k+1)."""
        if k == 0:
            return self
        return TSeries(self.base,
                       (_base_zero(self.base),) * k + self.coeffs,
                       self.prec + k)

    def agrees_to(self, other, n):
        """Prefix comparison through t^n (both series must reach that far)."""
        self._check(other)
        if n > self.prec or n > other.prec:
            raise ValueError("insufficient precision for comparison")
        return self.coeffs[:n + 1] == other.coeffs[:n + 1]

    def map_coeffs(self, fn, base=None):
        base = base if base is not None else self.base
        return TSeries(base, [fn(c) for c in self.coeffs], self.prec)

    def __eq__(self, other):
        return (isinstance(other, TSeries) and other.base is self.base
                and other.prec == self.prec and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((id(self.base), self.prec, self.coeffs))

    def __str__(self):
        parts = []
        for n, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = str(c)
            if n == 0:
                parts.append(cs)
                continue
            if any(ch in cs for ch in '+-*/'):
                cs = f"({cs})"
            tp = "t" if n == 1 else f"t^{n}"
            parts.append(tp if cs == "1" else f"{cs}*{tp}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.prec + 1})"

    def __repr__(self):
        return f"TSeries({self})"

    def to_json(self):
        return {"prec": self.prec, "coeffs": [str(c) for c in self.coeffs]}


def _is_elem(base, c):
    if isinstance(base, RatField):
        return isinstance(c, RatK) and c.field is base.field
    return isinstance(c, FqElem) and c.field is base


def _fq(base):
    return base.field if isinstance(base, RatField) else base


def _kf(base):
    return _fq(base).kf


def _inv_elem(base, c):
    return c.inv()


def _int_elem(base, s):
    if isinstance(base, RatField):
        return RatK.from_poly(PolyA.constant(base.field.element(s)))
    return base.element(s)


def _to_kernel(f):
    """Return (packed series, common denominator or None)."""
    base = f.base
    kf = _kf(base)
    if isinstance(base, Fq):
        return _kernel.ser_from_vals(
            kf, [(c.code,) if c.code else () for c in f.coeffs], f.prec), None
    dens = [c.den for c in f.coeffs if c.den.vals != (1,)]
    if not dens:
        return _kernel.ser_from_vals(kf, [c.num.vals for c in f.coeffs],
                                     f.prec), None
    lcm = PolyA.one(base.field)
    for d in dens:
        lcm = lcm * (d // poly_gcd(lcm, d))
    vals = []
    for c in f.coeffs:
        scaled = c.num * (lcm // c.den)
        vals.append(scaled.vals)
    return _kernel.ser_from_vals(kf, vals, f.prec), lcm


def _from_kernel(base, packed, prec, den=None):
    kf = _kf(base)
    vals_list = _kernel.ser_to_vals(kf, packed)
    if isinstance(base, Fq):
        coeffs = [FqElem(base, v[0]) if v else base.zero for v in vals_list]
        return TSeries(base, coeffs, prec)
    field = base.field
    if den is None or den.vals == (1,):
        coeffs = [RatK(PolyA.from_codes(field, v), _trusted=True)
                  for v in vals_list]
    else:
        coeffs = [RatK(PolyA.from_codes(field, v), den) for v in vals_list]
    return TSeries(base, coeffs, prec)


def _naive_inv(f):
    """O(N^2) inversion for series with rational coefficients; f[0] = 1."""
    base = f.base
    n = f.prec
    out = [_base_zero(base)] * (n + 1)
    out[0] = base.one
    for k in range(1, n + 1):
        acc = _base_zero(base)
        for j in range(1, k + 1):
            if f.coeffs[j] and out[k - j]:
                acc = acc + f.coeffs[j] * out[k - j]
        out[k] = -acc
    return TSeries(base, out, n)


def poly_eval_series(coeffs, s):
    """Evaluate the univariate polynomial sum coeffs[i] X^i at the series s,
    which must have zero constant term (so truncation is stable)."""
    if s.coeffs[0]:
        raise ValueError("polynomial-at-series needs zero constant term")
    coeffs = list(coeffs)
    base = s.base
    acc = TSeries.zero(base, s.prec)
    for c in reversed(coeffs):
        acc = acc * s
        if c:
            const = TSeries.monomial(base, c, 0, s.prec)
            acc = acc + const
    return acc
