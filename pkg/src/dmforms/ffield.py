"""Finite fields F_q, q = p^r, with explicit modulus for extension fields.

Elements are canonical: an FqElem stores its code, the integer
sum(coords[i] * p**i) for the polynomial-basis coordinates, so equality is
plain integer equality.  Field instances are interned by (p, r, modulus), so
two fields with the same parameters are the same object.
"""

import re

from . import _kernel

# default moduli (monic, coefficient lists low-to-high over F_p) so small
# extension fields work without the caller supplying one
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),        # u^2 + u + 1
    (2, 3): (1, 1, 0, 1),     # u^3 + u + 1
    (3, 2): (1, 0, 1),        # u^2 + 1
}

_FIELD_CACHE = {}


def _is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _fp_poly_irreducible(p, coeffs):
    """Brute-force irreducibility over F_p for the field modulus (small r)."""
    r = len(coeffs) - 1
    if r < 1 or coeffs[-1] != 1:
        return False

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        return out

    def pmod(a, b):
        a = list(a)
        while len(a) >= len(b) and any(a):
            while a and a[-1] == 0:
                a.pop()
            if len(a) < len(b):
                break
            f = a[-1] * pow(b[-1], p - 2, p) % p
            off = len(a) - len(b)
            for j in range(len(b)):
                a[off + j] = (a[off + j] - f * b[j]) % p
            while a and a[-1] == 0:
                a.pop()
        return a

    def monics(d):
        for code in range(p ** d):
            yield [(code // p ** i) % p for i in range(d)] + [1]

    for d in range(1, r // 2 + 1):
        for g in monics(d):
            rem = pmod(coeffs, g)
            if not any(rem):
                return False
    return True


class Fq:
    """The finite field F_q, q = p^r; r > 1 uses F_p[u]/(modulus)."""

    def __new__(cls, p, r=1, modulus=None):
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if r < 1:
            raise ValueError(f"r = {r} must be >= 1")
        if r == 1:
            mod = ()
        else:
            if modulus is None:
                if (p, r) not in DEFAULT_MODULI:
                    raise ValueError(
                        f"no default modulus for q = {p}^{r}; supply one")
                mod = DEFAULT_MODULI[(p, r)]
            else:
                mod = tuple(int(c) % p for c in modulus)
                if len(mod) != r + 1 or mod[-1] != 1:
                    raise ValueError("modulus must be monic of degree r")
            if not _fp_poly_irreducible(p, list(mod)):
                raise ValueError("modulus is not irreducible over F_p")
        key = (p, r, mod)
        if key in _FIELD_CACHE:
            return _FIELD_CACHE[key]
        self = super().__new__(cls)
        self.p = p
        self.r = r
        self.q = p ** r
        self.modulus = mod
        self.kf = _kernel.make_kernel_field(p, r, list(mod))
        self.zero = FqElem(self, 0)
        self.one = FqElem(self, 1)
        _FIELD_CACHE[key] = self
        return self

    @classmethod
    def from_order(cls, q, modulus=None):
        """Build F_q from a prime power q."""
        n, p = q, None
        for cand in range(2, q + 1):
            if q % cand == 0:
                p = cand
                break
        if p is None:
            raise ValueError(f"invalid field order {q}")
        r = 0
        while n > 1:
            if n % p:
                raise ValueError(f"{q} is not a prime power")
            n //= p
            r += 1
        return cls(p, r, modulus)

    def element(self, x):
        if isinstance(x, FqElem):
            if x.field is not self:
                raise ValueError("element from a different field")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, int):
            if self.r == 1:
                return FqElem(self, x % self.p)
            if 0 <= x < self.q:
                return FqElem(self, x)
            raise ValueError(f"code {x} out of range for q = {self.q}")
        # iterable of coordinates
        coords = list(x)
        if len(coords) > self.r:
            raise ValueError("too many coordinates")
        code = sum((c % self.p) * self.p ** i for i, c in enumerate(coords))
        return FqElem(self, code)

    def from_code(self, code):
        return FqElem(self, code)

    def elements(self):
        """All q elements; the first is 0, the second is 1."""
        return [FqElem(self, c) for c in range(self.q)]

    def parse(self, text):
        """Parse the element grammar: an integer for r = 1, else a polynomial
        in u such as `u^2+2*u+1`."""
        text = text.strip()
        if self.r == 1:
            try:
                return FqElem(self, int(text, 0) % self.p)
            except ValueError:
                raise ValueError(f"invalid element literal {text!r}") from None
        coords = [0] * self.r
        for sign, term in _iter_terms(text):
            m = re.fullmatch(
                r'(?:(\d+)\s*\*?\s*)?(u)?(?:\^(\d+))?', term)
            if not m or (m.group(3) and not m.group(2)) or not term:
                raise ValueError(f"invalid element term {term!r}")
            coef = int(m.group(1)) if m.group(1) else 1
            if m.group(2):
                expo = int(m.group(3)) if m.group(3) else 1
            else:
                if m.group(1) is None:
                    raise ValueError(f"invalid element term {term!r}")
                expo = 0
            if expo >= self.r:
                raise ValueError(f"u^{expo} exceeds field degree {self.r}")
            coords[expo] = (coords[expo] + sign * coef) % self.p
        return self.element(coords)

    def __repr__(self):
        if self.r == 1:
            return f"Fq({self.p})"
        return f"Fq({self.p}^{self.r})"

    def __reduce__(self):
        return (Fq, (self.p, self.r, self.modulus if self.r > 1 else None))


def _iter_terms(text):
    """Split `a+b-c` into (sign, term) pairs, respecting no parentheses."""
    text = text.replace(' ', '')
    if not text:
        raise ValueError("empty expression")
    pos = 0
    sign = 1
    if text[0] in '+-':
        sign = -1 if text[0] == '-' else 1
        pos = 1
    start = pos
    while pos <= len(text):
        if pos == len(text) or text[pos] in '+-':
            yield sign, text[start:pos]
            if pos < len(text):
                sign = -1 if text[pos] == '-' else 1
            start = pos + 1
        pos += 1


class FqElem:
    """An element of F_q in canonical (fully reduced) form."""

    __slots__ = ('field', 'code')

    def __init__(self, field, code):
        self.field = field
        self.code = code

    @property
    def coords(self):
        p = self.field.p
        return tuple((self.code // p ** i) % p for i in range(self.field.r))

    def _check(self, other):
        if not isinstance(other, FqElem):
            raise TypeError(f"cannot combine FqElem with {type(other).__name__}")
        if other.field is not self.field:
            raise ValueError("elements from different field configurations")
        return other

    def __add__(self, other):
        other = self._check(other)
        kf = self.field.kf
        return FqElem(self.field, kf.add[self.code * kf.q + other.code])

    def __sub__(self, other):
        other = self._check(other)
        kf = self.field.kf
        return FqElem(self.field, kf.sub[self.code * kf.q + other.code])

    def __mul__(self, other):
        other = self._check(other)
        kf = self.field.kf
        return FqElem(self.field, kf.mul[self.code * kf.q + other.code])

    def __neg__(self):
        return FqElem(self.field, self.field.kf.neg[self.code])

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inv()

    def inv(self):
        if self.code == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return FqElem(self.field, self.field.kf.inv[self.code])

    def __pow__(self, e):
        if self.code == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero in F_q")
            return self.field.one if e == 0 else self.field.zero
        return FqElem(self.field, self.field.kf.elem_pow(self.code, e))

    def frobenius(self, e=1):
        code = self.code
        for _ in range(e % self.field.r if self.field.r > 1 else 0):
            code = self.field.kf.frob[code]
        if self.field.r == 1:
            return self
        return FqElem(self.field, code)

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        return (isinstance(other, FqElem) and other.field is self.field
                and other.code == self.code)

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __str__(self):
        if self.field.r == 1:
            return str(self.code)
        parts = []
        for i in reversed(range(self.field.r)):
            c = self.coords[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                up = 'u' if i == 1 else f'u^{i}'
                parts.append(up if c == 1 else f'{c}*{up}')
        return '+'.join(parts) if parts else '0'

    def __repr__(self):
        return f"<{self} in {self.field!r}>"
