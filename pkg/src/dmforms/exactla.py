"""Exact dense linear algebra over K = F_q(T) and over F_q: minimal
polynomials, separability, nilpotency.

Minimal polynomials are found per standard basis vector: the Krylov vectors
e, Me, M^2 e, ... are scaled to be denominator-free and reduced against an
echelon basis; the first linear dependence gives the local minimal
polynomial, and the answer is the lcm over all basis vectors.  Before
returning, the evaluation of the candidate on every basis vector is checked
to vanish, which is exactly the statement that the matrix of the candidate
at M is zero, column by column.

Separability over K matters because K is imperfect: a minimal polynomial
with derivative zero (a polynomial in X^p) is genuinely inseparable.
"""

from .ffield import Fq, FqElem
from .polyring import PolyA, RatK, RatField, poly_gcd


def _ring_of(entry):
    if isinstance(entry, RatK):
        return RatField(entry.field)
    if isinstance(entry, FqElem):
        return entry.field
    raise TypeError(f"unsupported matrix entry type {type(entry).__name__}")


class MatrixK:
    """A square matrix over K or over F_q (row-major)."""

    __slots__ = ('ring', 'n', 'rows')

    def __init__(self, field_or_ring, rows):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if isinstance(field_or_ring, Fq):
            ring = field_or_ring
        elif isinstance(field_or_ring, RatField):
            ring = field_or_ring
        else:
            raise TypeError("expected a field or fraction-field handle")
        self.ring = ring
        self.n = n
        self.rows = [[ring.element(x) for x in row] for row in rows]

    @classmethod
    def identity(cls, field_or_ring, n):
        ring = field_or_ring
        rows = [[ring.one if i == j else ring.zero for j in range(n)]
                for i in range(n)]
        return cls(ring, rows)

    @classmethod
    def from_hecke(cls, hm):
        """Matrix over K from a HeckeMatrix (columns stay images)."""
        return cls(RatField(hm.field), [list(r) for r in hm.entries])

    @classmethod
    def from_mod_t(cls, mt):
        """Matrix over F_q from a reduced Hecke matrix, transposed back to
        the column-as-image convention so products compose as operators."""
        n = mt.dim
        return cls(mt.field, [[mt.entries[c][r] for c in range(n)]
                              for r in range(n)])

    def __getitem__(self, rc):
        return self.rows[rc[0]][rc[1]]

    def __add__(self, other):
        self._check(other)
        return MatrixK(self.ring, [[a + b for a, b in zip(ra, rb)]
                                   for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        return MatrixK(self.ring, [[a - b for a, b in zip(ra, rb)]
                                   for ra, rb in zip(self.rows, other.rows)])

    def scale(self, c):
        c = self.ring.element(c)
        return MatrixK(self.ring, [[a * c for a in row] for row in self.rows])

    def __mul__(self, other):
        self._check(other)
        n = self.n
        zero = self.ring.zero
        out = []
        for i in range(n):
            row = []
            ri = self.rows[i]
            for j in range(n):
                acc = zero
                for l in range(n):
                    a = ri[l]
                    b = other.rows[l][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return MatrixK(self.ring, out)

    def apply(self, vec):
        if len(vec) != self.n:
            raise ValueError("vector length mismatch")
        zero = self.ring.zero
        out = []
        for i in range(self.n):
            acc = zero
            for a, x in zip(self.rows[i], vec):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out

    def is_zero(self):
        return all(not x for row in self.rows for x in row)

    def _check(self, other):
        if not isinstance(other, MatrixK):
            raise TypeError("expected a matrix")
        if other.ring is not self.ring or other.n != self.n:
            raise ValueError("matrix shape or ring mismatch")

    def __eq__(self, other):
        return (isinstance(other, MatrixK) and other.ring is self.ring
                and other.rows == self.rows)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.rows)
        return f"MatrixK[{body}]"


class UniPoly:
    """A univariate polynomial over K or F_q in the formal variable X."""

    __slots__ = ('ring', 'coeffs')

    def __init__(self, ring, coeffs):
        coeffs = [ring.element(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.ring = ring
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.ring.one

    def monic(self):
        if self.is_zero() or self.is_monic():
            return self
        lead = self.coeffs[-1]
        if isinstance(lead, RatK):
            inv = lead.inv()
        else:
            inv = lead.inv()
        return UniPoly(self.ring, [c * inv for c in self.coeffs])

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(self.ring, out)

    def __sub__(self, other):
        return self + UniPoly(self.ring, [-c for c in other.coeffs])

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return UniPoly(self.ring, [])
        out = [self.ring.zero] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return UniPoly(self.ring, out)

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = other.degree
        lead_inv = other.coeffs[-1].inv()
        quo = [self.ring.zero] * max(0, len(rem) - db)
        for k in range(len(rem) - db - 1, -1, -1):
            f = rem[k + db] * lead_inv
            if f:
                quo[k] = f
                for j in range(db + 1):
                    rem[k + j] = rem[k + j] - f * other.coeffs[j]
        return UniPoly(self.ring, quo), UniPoly(self.ring, rem[:db])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def evaluate_matrix(self, M):
        """Horner evaluation of self at a square matrix."""
        n = M.n
        acc = MatrixK.identity(M.ring, n).scale(self.coeffs[-1]) \
            if self.coeffs else MatrixK(M.ring, [[M.ring.zero] * n
                                                 for _ in range(n)])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * M
            if c:
                acc = acc + MatrixK.identity(M.ring, n).scale(c)
        return acc

    def __eq__(self, other):
        return (isinstance(other, UniPoly) and other.ring is self.ring
                and other.coeffs == self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if not c:
                continue
            cs = str(c)
            if i == 0:
                parts.append(f"({cs})" if any(ch in cs for ch in '+-*/')
                             else cs)
                continue
            xp = "X" if i == 1 else f"X^{i}"
            if cs == "1":
                parts.append(xp)
            else:
                if any(ch in cs for ch in '+-*/'):
                    cs = f"({cs})"
                parts.append(f"{cs}*{xp}")
        return "+".join(parts)

    def __repr__(self):
        return f"UniPoly({self})"


def _clear_denominators(ring, vec):
    """Scale a K-vector to a vector over A; returns (scaled vector, scale)
    so relations on the scaled vectors translate back exactly."""
    if isinstance(ring, Fq):
        return vec, ring.one
    field = ring.field
    lcm = PolyA.one(field)
    for x in vec:
        if x and x.den.vals != (1,):
            lcm = lcm * (x.den // poly_gcd(lcm, x.den))
    if lcm.vals == (1,):
        return vec, ring.one
    return ([RatK(x.num * (lcm // x.den), _trusted=True) if x else x
             for x in vec], RatK.from_poly(lcm))


class _FractionFreeEchelon:
    """Row echelon over A (or F_q) with Bareiss one-step division: incoming
    rows are reduced by cross-multiplication and exact division by the
    previous pivot, so entries stay polynomial minors instead of fractions.
    The augmented expression part receives identical row operations.

    insert returns None when the row was independent (and absorbed), or the
    expression coefficients of the discovered linear relation."""

    def __init__(self, ring):
        self.ring = ring
        if isinstance(ring, Fq):
            self.kf = ring.kf
            self.field = ring
        else:
            self.kf = ring.field.kf
            self.field = ring.field
        self.rows = []   # (pivot index, row vals, expr vals)

    def _to_vals(self, x):
        if isinstance(x, RatK):
            return x.num.vals
        if isinstance(x, FqElem):
            return (x.code,) if x.code else ()
        raise TypeError(type(x).__name__)

    def _from_vals(self, vals):
        if isinstance(self.ring, Fq):
            return FqElem(self.field, vals[0] if vals else 0)
        return RatK(PolyA.from_codes(self.field, vals), _trusted=True)

    def insert(self, vec, expr):
        from . import _kernel
        kf = self.kf
        v = [self._to_vals(x) for x in vec]
        ex = [self._to_vals(x) for x in expr]
        prev_pivot = (1,)
        for pivot, row, rex, pval in self.rows:
            c = v[pivot]
            if c:
                def combine(av, bv):
                    t = _kernel.poly_sub(kf, _kernel.poly_mul(kf, av, pval),
                                         _kernel.poly_mul(kf, bv, c))
                    if prev_pivot != (1,) and t:
                        q, r = _kernel.poly_divmod(kf, t, prev_pivot)
                        assert not r, "inexact Bareiss division"
                        return q
                    return t
                v = [combine(av, bv) for av, bv in zip(v, row)]
                rex2 = list(rex) + [()] * (len(ex) - len(rex))
                ex = [combine(av, bv) for av, bv in zip(ex, rex2)]
            else:
                def scale_only(av):
                    t = _kernel.poly_mul(kf, av, pval)
                    if prev_pivot != (1,) and t:
                        q, r = _kernel.poly_divmod(kf, t, prev_pivot)
                        assert not r, "inexact Bareiss division"
                        return q
                    return t
                v = [scale_only(av) for av in v]
                ex = [scale_only(av) for av in ex]
            prev_pivot = pval
        pivot = next((i for i, a in enumerate(v) if a), None)
        if pivot is None:
            return [self._from_vals(a) for a in ex]
        self.rows.append((pivot, v, ex, v[pivot]))
        return None


def minimal_polynomial(M):
    """The monic minimal polynomial of a square matrix, by Krylov relations
    per standard basis vector with exact elimination and an lcm over
    vectors; the evaluation at M is verified on every basis vector before
    returning."""
    ring = M.ring
    n = M.n
    if n == 0:
        return UniPoly(ring, [ring.one])
    mu = UniPoly(ring, [ring.one])
    krylov_all = []
    for start in range(n):
        e = [ring.one if i == start else ring.zero for i in range(n)]
        chain = [e]
        deltas = []
        local = None
        j = 0
        echelon = _FractionFreeEchelon(ring)
        while local is None:
            v, delta = _clear_denominators(ring, chain[-1])
            deltas.append(delta)
            expr = [ring.zero] * j + [ring.one]
            relation = echelon.insert(v, expr)
            if relation is not None:
                coeffs = [a * d for a, d in zip(relation, deltas)]
                local = UniPoly(ring, coeffs).monic()
                break
            chain.append(M.apply(chain[-1]))
            j += 1
        krylov_all.append(chain)
        g = mu.gcd(local)
        mu = divmod(mu * local, g)[0].monic()
        if mu.degree == n:
            break
    # verify mu(M) e = 0 for every basis vector, extending chains as needed
    deg = mu.degree
    for start in range(n):
        if start < len(krylov_all):
            chain = krylov_all[start]
        else:
            chain = [[ring.one if i == start else ring.zero
                      for i in range(n)]]
        while len(chain) <= deg:
            chain.append(M.apply(chain[-1]))
        for i in range(n):
            acc = ring.zero
            for j, c in enumerate(mu.coeffs):
                if c and chain[j][i]:
                    acc = acc + c * chain[j][i]
            if acc:
                raise AssertionError(
                    "minimal polynomial failed verification; this is a bug")
    return mu


def formal_derivative(u):
    """Coefficient-wise n * a_n shift in characteristic p."""
    ring = u.ring
    field = ring.field if isinstance(ring, RatField) else ring
    p = field.p
    out = []
    for i in range(1, len(u.coeffs)):
        s = i % p
        if s == 0 or not u.coeffs[i]:
            out.append(ring.zero)
        else:
            scalar = field.element(s)
            if isinstance(ring, RatField):
                out.append(u.coeffs[i] * RatK.from_poly(PolyA.constant(scalar)))
            else:
                out.append(u.coeffs[i] * scalar)
    return UniPoly(ring, out)


def is_separable(u):
    """gcd(u, u') = 1; over the imperfect field K a zero derivative (a
    polynomial in X^p) is a genuine source of inseparability."""
    if u.degree < 1:
        raise ValueError("separability needs degree >= 1")
    du = formal_derivative(u)
    if du.is_zero():
        return False
    return u.gcd(du).degree == 0


def is_nilpotent(M):
    """M^(2^s) = 0 with 2^s >= n, by repeated squaring."""
    n = M.n
    if n == 0:
        return True
    power = M
    s = 0
    while (1 << s) < n:
        s += 1
    for _ in range(s + 1):
        if power.is_zero():
            return True
        power = power * power
    return power.is_zero()
