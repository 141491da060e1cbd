"""The polynomial ring A = F_q[T], its fraction field K, and monic primes.

PolyA stores coefficients as a tuple of element codes with no trailing
zeros; RatK keeps fractions fully reduced with a monic denominator at every
step, so equality of values is equality of representations.
"""

import itertools
import re

from . import _kernel
from .ffield import FqElem


class PolyA:
    """Dense polynomial over F_q in the variable T."""

    __slots__ = ('field', 'vals')

    def __init__(self, field, vals, _trusted=False):
        self.field = field
        if _trusted:
            self.vals = vals
        else:
            self.vals = _kernel.strip([field.element(v).code if not isinstance(v, int)
                                       else v % field.q if field.r == 1 else v
                                       for v in vals])

    @classmethod
    def from_codes(cls, field, vals):
        return cls(field, _kernel.strip(tuple(vals)), _trusted=True)

    @classmethod
    def zero(cls, field):
        return cls(field, (), _trusted=True)

    @classmethod
    def one(cls, field):
        return cls(field, (1,), _trusted=True)

    @classmethod
    def gen(cls, field):
        """The polynomial T."""
        return cls(field, (0, 1), _trusted=True)

    @classmethod
    def constant(cls, elem):
        return cls(elem.field, (elem.code,) if elem.code else (), _trusted=True)

    @property
    def degree(self):
        return len(self.vals) - 1

    @property
    def coeffs(self):
        return tuple(FqElem(self.field, c) for c in self.vals)

    def coeff(self, i):
        if i < len(self.vals):
            return FqElem(self.field, self.vals[i])
        return self.field.zero

    def lead(self):
        if not self.vals:
            raise ValueError("zero polynomial has no leading coefficient")
        return FqElem(self.field, self.vals[-1])

    def is_zero(self):
        return not self.vals

    def is_monic(self):
        return bool(self.vals) and self.vals[-1] == 1

    def is_constant(self):
        return len(self.vals) <= 1

    def monic(self):
        if not self.vals or self.vals[-1] == 1:
            return self
        inv = self.field.kf.inv[self.vals[-1]]
        return PolyA.from_codes(self.field,
                                _kernel.poly_scalar(self.field.kf, self.vals, inv))

    def _check(self, other):
        if not isinstance(other, PolyA):
            raise TypeError(f"cannot combine PolyA with {type(other).__name__}")
        if other.field is not self.field:
            raise ValueError("polynomials over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return PolyA.from_codes(self.field,
                                _kernel.poly_add(self.field.kf, self.vals, other.vals))

    def __sub__(self, other):
        other = self._check(other)
        return PolyA.from_codes(self.field,
                                _kernel.poly_sub(self.field.kf, self.vals, other.vals))

    def __neg__(self):
        return PolyA.from_codes(self.field,
                                _kernel.poly_neg(self.field.kf, self.vals))

    def __mul__(self, other):
        if isinstance(other, FqElem):
            if other.field is not self.field:
                raise ValueError("scalar from a different field")
            return PolyA.from_codes(self.field,
                                    _kernel.poly_scalar(self.field.kf, self.vals,
                                                        other.code))
        other = self._check(other)
        return PolyA.from_codes(self.field,
                                _kernel.poly_mul(self.field.kf, self.vals, other.vals))

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = _kernel.poly_divmod(self.field.kf, self.vals, other.vals)
        return PolyA.from_codes(self.field, q), PolyA.from_codes(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = PolyA.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self, e=1):
        """self**(p**e), using the additivity of the Frobenius."""
        return PolyA.from_codes(self.field,
                                _kernel.poly_frob(self.field.kf, self.vals, e))

    def shift(self, k):
        """Multiply by T^k."""
        if not self.vals:
            return self
        return PolyA.from_codes(self.field, (0,) * k + self.vals)

    def __call__(self, theta):
        if not isinstance(theta, FqElem) or theta.field is not self.field:
            raise ValueError("evaluation point must be an element of the field")
        return FqElem(self.field, _kernel.poly_eval(self.field.kf, self.vals,
                                                    theta.code))

    def is_irreducible(self):
        """Irreducibility over F_q: trial division up to degree 8, the
        Frobenius power criterion above that."""
        d = self.degree
        if d < 1:
            raise ValueError("irreducibility is undefined in degree < 1")
        kf = self.field.kf
        mod = self.monic().vals
        if d <= 8:
            for e in range(1, d // 2 + 1):
                for g in monic_polys(self.field, e):
                    if not _kernel.poly_divmod(kf, mod, g.vals)[1]:
                        return False
            return True
        # Rabin: x^(q^d) = x mod f, and gcd(x^(q^(d/l)) - x, f) = 1 for l | d
        q = self.field.q
        x = (0, 1)
        frob_d = _kernel.poly_pow_mod(kf, x, q ** d, mod)
        if _kernel.poly_sub(kf, frob_d, x):
            return False
        for ell in _prime_divisors(d):
            e = d // ell
            fe = _kernel.poly_pow_mod(kf, x, q ** e, mod)
            g = _kernel.poly_gcd(kf, _kernel.poly_sub(kf, fe, x), mod)
            if len(g) != 1:
                return False
        return True

    def __bool__(self):
        return bool(self.vals)

    def __eq__(self, other):
        return (isinstance(other, PolyA) and other.field is self.field
                and other.vals == self.vals)

    def __hash__(self):
        return hash((id(self.field), self.vals))

    def __str__(self):
        if not self.vals:
            return "0"
        parts = []
        for i in reversed(range(len(self.vals))):
            c = self.vals[i]
            if not c:
                continue
            cs = str(FqElem(self.field, c))
            need_paren = ('+' in cs or '-' in cs or '*' in cs)
            if i == 0:
                parts.append(f"({cs})" if need_paren else cs)
                continue
            tp = "T" if i == 1 else f"T^{i}"
            if c == 1:
                parts.append(tp)
            elif need_paren:
                parts.append(f"({cs})*{tp}")
            else:
                parts.append(f"{cs}*{tp}")
        return "+".join(parts)

    def __repr__(self):
        return f"PolyA({self})"


def _prime_divisors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


_TERM_RE = re.compile(
    r'(?:\((?P<paren>[^()]*)\)|(?P<plain>[0-9]\w*|u(?:\^\d+)?))?'
    r'\s*\*?\s*(?:(?P<T>T)(?:\^(?P<exp>\d+))?)?')


def _split_terms(text):
    """Split on top-level `+`/`-` only, leaving parenthesized groups intact."""
    text = text.replace(' ', '')
    if not text:
        raise ValueError("empty expression")
    pos, depth, sign, start = 0, 0, 1, 0
    if text[0] in '+-':
        sign = -1 if text[0] == '-' else 1
        pos = start = 1
    while pos <= len(text):
        if pos == len(text) or (text[pos] in '+-' and depth == 0):
            yield sign, text[start:pos]
            if pos < len(text):
                sign = -1 if text[pos] == '-' else 1
            start = pos + 1
        elif text[pos] == '(':
            depth += 1
        elif text[pos] == ')':
            depth -= 1
        pos += 1


def parse_poly(field, text):
    """Parse the polynomial grammar: terms `c`, `T`, `c*T`, `T^k`, `c*T^k`
    joined by `+`/`-`; coefficients use the element grammar, parenthesized
    when they have several terms."""
    coeffs = {}
    for sign, term in _split_terms(text.strip()):
        if not term:
            raise ValueError(f"empty term in {text!r}")
        m = _TERM_RE.fullmatch(term)
        if not m or (m.group('paren') is None and m.group('plain') is None
                     and m.group('T') is None):
            raise ValueError(f"invalid polynomial term {term!r}")
        if m.group('paren') is not None:
            coef = field.parse(m.group('paren'))
        elif m.group('plain') is not None:
            coef = field.parse(m.group('plain'))
        else:
            coef = field.one
        if m.group('T'):
            expo = int(m.group('exp')) if m.group('exp') else 1
        else:
            expo = 0
        cur = coeffs.get(expo, field.zero)
        coeffs[expo] = cur + coef if sign > 0 else cur - coef
    if not coeffs:
        return PolyA.zero(field)
    deg = max(coeffs)
    result = [0] * (deg + 1)
    for e, c in coeffs.items():
        result[e] = c.code
    return PolyA.from_codes(field, result)


def poly_gcd(a, b):
    """Monic greatest common divisor; both zero is an error."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    return PolyA.from_codes(a.field, _kernel.poly_gcd(a.field.kf, a.vals, b.vals))


def monic_polys(field, d):
    """All monic polynomials of degree exactly d, ordered lexicographically
    by the coefficient tuple (a_0, a_1, ..., a_{d-1})."""
    out = []
    for lower in itertools.product(range(field.q), repeat=d):
        out.append(PolyA.from_codes(field, lower + (1,)))
    return out


def monic_irreducibles(field, d, exclude_T=False):
    """All monic irreducible PrimePoly of degree exactly d, in the order of
    monic_polys; T is omitted when exclude_T is set."""
    T = PolyA.gen(field)
    out = []
    for f in monic_polys(field, d):
        if exclude_T and f == T:
            continue
        if f.is_irreducible():
            out.append(PrimePoly(f))
    return out


def count_irreducibles(field, d):
    """Moebius necklace count (1/d) sum_{e | d} mu(e) q^(d/e)."""
    def mu(n):
        out, f = 1, 2
        while f * f <= n:
            if n % f == 0:
                n //= f
                if n % f == 0:
                    return 0
                out = -out
            f += 1
        if n > 1:
            out = -out
        return out

    q = field.q
    total = sum(mu(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d


class PrimePoly:
    """A monic irreducible of A, with its residue at T = 0 and coefficients."""

    __slots__ = ('poly', 'degree', 'residue', 'alpha')

    def __init__(self, poly, _trusted=False):
        if not _trusted:
            if not poly.is_monic():
                raise ValueError(f"{poly} is not monic")
            if not poly.is_irreducible():
                raise ValueError(f"{poly} is not irreducible")
        self.poly = poly
        self.degree = poly.degree
        self.residue = poly.coeff(0)
        self.alpha = poly.coeffs

    @classmethod
    def parse(cls, field, text):
        return cls(parse_poly(field, text))

    @property
    def field(self):
        return self.poly.field

    def is_T(self):
        return self.poly.vals == (0, 1)

    def __eq__(self, other):
        return isinstance(other, PrimePoly) and other.poly == self.poly

    def __hash__(self):
        return hash(self.poly)

    def __str__(self):
        return str(self.poly)

    def __repr__(self):
        return f"PrimePoly({self.poly})"


class RatK:
    """An element of K = F_q(T): a reduced fraction with monic denominator."""

    __slots__ = ('num', 'den')

    def __init__(self, num, den=None, _trusted=False):
        if den is None:
            den = PolyA.one(num.field)
        if _trusted:
            self.num = num
            self.den = den
            return
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in K")
        if num.is_zero():
            self.num = num
            self.den = PolyA.one(num.field)
            return
        kf = num.field.kf
        g = _kernel.poly_gcd(kf, num.vals, den.vals)
        nv, dv = num.vals, den.vals
        if len(g) > 1:
            nv = _kernel.poly_divmod(kf, nv, g)[0]
            dv = _kernel.poly_divmod(kf, dv, g)[0]
        if dv[-1] != 1:
            inv = kf.inv[dv[-1]]
            nv = _kernel.poly_scalar(kf, nv, inv)
            dv = _kernel.poly_scalar(kf, dv, inv)
        self.num = PolyA.from_codes(num.field, nv)
        self.den = PolyA.from_codes(num.field, dv)

    @classmethod
    def from_poly(cls, p):
        return cls(p, _trusted=True)

    @classmethod
    def zero(cls, field):
        return cls(PolyA.zero(field), _trusted=True)

    @classmethod
    def one(cls, field):
        return cls(PolyA.one(field), _trusted=True)

    @property
    def field(self):
        return self.num.field

    def is_zero(self):
        return self.num.is_zero()

    def is_integral(self):
        """True when the denominator is 1 (the value lies in A)."""
        return self.den.vals == (1,)

    def _check(self, other):
        if not isinstance(other, RatK):
            raise TypeError(f"cannot combine RatK with {type(other).__name__}")
        if other.field is not self.field:
            raise ValueError("values over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if self.den.vals == (1,) and other.den.vals == (1,):
            return RatK(self.num + other.num, _trusted=True)
        num = self.num * other.den + other.num * self.den
        return RatK(num, self.den * other.den)

    def __sub__(self, other):
        other = self._check(other)
        if self.den.vals == (1,) and other.den.vals == (1,):
            return RatK(self.num - other.num, _trusted=True)
        num = self.num * other.den - other.num * self.den
        return RatK(num, self.den * other.den)

    def __neg__(self):
        return RatK(-self.num, self.den, _trusted=True)

    def __mul__(self, other):
        other = self._check(other)
        if self.den.vals == (1,) and other.den.vals == (1,):
            return RatK(self.num * other.num, _trusted=True)
        return RatK(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in K")
        return RatK(self.num * other.den, self.den * other.num)

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in K")
        return RatK(self.den, self.num)

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        return RatK(self.num ** e, self.den ** e)

    def frobenius(self, e=1):
        return RatK(self.num.frobenius(e), self.den.frobenius(e), _trusted=True)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return (isinstance(other, RatK) and other.field is self.field
                and other.num == self.num and other.den == self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den.vals == (1,):
            return str(self.num)
        ns = str(self.num)
        if '+' in ns or '-' in ns:
            ns = f"({ns})"
        ds = str(self.den)
        if '+' in ds or '-' in ds or '*' in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"RatK({self})"


def parse_ratk(field, text):
    text = text.strip()
    if '/' in text:
        top, bottom = text.split('/', 1)
        top = top.strip()
        bottom = bottom.strip()
        if top.startswith('(') and top.endswith(')'):
            top = top[1:-1]
        if bottom.startswith('(') and bottom.endswith(')'):
            bottom = bottom[1:-1]
        return RatK(parse_poly(field, top), parse_poly(field, bottom))
    return RatK.from_poly(parse_poly(field, text))


def reduce_at_theta(x, theta):
    """Evaluate x in K at T = theta; raises ZeroDivisionError when the
    denominator vanishes there (x is not integral at theta)."""
    if isinstance(x, PolyA):
        return x(theta)
    dv = x.den(theta)
    if not dv:
        raise ZeroDivisionError(
            f"denominator of {x} vanishes at T = {theta}")
    return x.num(theta) / dv


class RatField:
    """Handle object for K = F_q(T): ring protocol for generic containers."""

    _cache = {}

    def __new__(cls, field):
        if field in cls._cache:
            return cls._cache[field]
        self = super().__new__(cls)
        self.field = field
        self.zero = RatK.zero(field)
        self.one = RatK.one(field)
        cls._cache[field] = self
        return self

    def element(self, x):
        if isinstance(x, RatK):
            if x.field is not self.field:
                raise ValueError("value from a different field")
            return x
        if isinstance(x, PolyA):
            return RatK.from_poly(x)
        if isinstance(x, FqElem):
            return RatK.from_poly(PolyA.constant(x))
        if isinstance(x, int):
            return RatK.from_poly(PolyA.constant(self.field.element(x)))
        if isinstance(x, str):
            return parse_ratk(self.field, x)
        raise TypeError(f"cannot coerce {type(x).__name__} into K")

    def __repr__(self):
        return f"RatField({self.field!r})"

    def __reduce__(self):
        return (RatField, (self.field,))
