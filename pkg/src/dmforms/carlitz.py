"""The Carlitz module, torsion exponentials, the expansions t_a, and Goss
polynomials of finite torsion lattices.

phi is the rank-one module with phi_T(z) = T z + z^q; phi_a follows by
F_q-linearity and phi_{T a} = phi_T o phi_a.  For a monic prime ell the
normalized torsion exponential is e_ell = phi_ell / ell, and the Goss
polynomials of its lattice satisfy the recursion

    G_1 = X,   G_n = X * (G_{n-1} + sum_{i>=1} alpha_i G_{n-q^i}),

with alpha_i the z^(q^i)-coefficient of the exponential and G_m = 0 for
m <= 0.  The recursion is pinned by two independent anchors: the closed
form modulo T (goss_mod_T_closed_form) and the X^2-coefficient at
n = q^i + 1.
"""

from . import _kernel
from .ffield import FqElem
from .polyring import PolyA, RatK, RatField, PrimePoly
from .tseries import TSeries


class AdditivePoly:
    """An F_q-linear polynomial sum c_i z^(q^i), coefficients in A or K."""

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs):
        coeffs = list(coeffs)
        while coeffs and _coeff_is_zero(coeffs[-1]):
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        """Degree in the Frobenius: the polynomial has degree q^degree."""
        return len(self.coeffs) - 1

    def coeff(self, i):
        return self.coeffs[i] if i < len(self.coeffs) else None

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        if other.field is not self.field:
            raise ValueError("additive polynomials over different fields")
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return AdditivePoly(self.field, out)

    def scale(self, c):
        """Multiply every coefficient by c (an element of A or K)."""
        return AdditivePoly(self.field, [x * c for x in self.coeffs])

    def compose(self, other):
        """(self o other)(z); coefficients c_k = sum f_i * g_j^(q^i)."""
        if other.field is not self.field:
            raise ValueError("additive polynomials over different fields")
        if self.is_zero() or other.is_zero():
            return AdditivePoly(self.field, [])
        r = self.field.r
        da, db = self.degree, other.degree
        out = [None] * (da + db + 1)
        for i, fi in enumerate(self.coeffs):
            if _coeff_is_zero(fi):
                continue
            for j, gj in enumerate(other.coeffs):
                if _coeff_is_zero(gj):
                    continue
                term = fi * gj.frobenius(r * i)
                k = i + j
                out[k] = term if out[k] is None else out[k] + term
        zero = self.coeffs[0] - self.coeffs[0]
        return AdditivePoly(self.field, [zero if c is None else c for c in out])

    def at_series(self, s):
        """Evaluate sum c_i s^(q^i) for a TSeries s with zero constant term."""
        if s.coeffs[0]:
            raise ValueError("additive evaluation needs zero constant term")
        base = s.base
        out = TSeries.zero(base, s.prec)
        pw = s
        r = self.field.r
        for i, c in enumerate(self.coeffs):
            if i > 0:
                pw = pw.frobenius(r).truncate(min(s.prec, (pw.prec + 1) *
                                                  self.field.q - 1))
            if not _coeff_is_zero(c):
                out = out + pw.scale(base.element(c) if isinstance(c, (PolyA,))
                                     else c)
        return out

    def __eq__(self, other):
        return (isinstance(other, AdditivePoly) and other.field is self.field
                and other.coeffs == self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        q = self.field.q
        parts = []
        for i, c in enumerate(self.coeffs):
            if _coeff_is_zero(c):
                continue
            zs = "z" if i == 0 else f"z^{q ** i}"
            cs = str(c)
            if cs == "1":
                parts.append(zs)
            else:
                if any(ch in cs for ch in '+-*/'):
                    cs = f"({cs})"
                parts.append(f"{cs}*{zs}")
        return " + ".join(parts)

    def __repr__(self):
        return f"AdditivePoly({self})"


def _coeff_is_zero(c):
    if isinstance(c, PolyA):
        return c.is_zero()
    if isinstance(c, RatK):
        return c.is_zero()
    return not c


_PHI_POWER_CACHE = {}


def _phi_T_powers(field, n):
    """phi_{T^i} for i <= n, coefficients in A; cached per field."""
    cache = _PHI_POWER_CACHE.setdefault(field, [
        [PolyA.one(field)],                       # phi_1 = z
        [PolyA.gen(field), PolyA.one(field)],     # phi_T = T z + z^q
    ])
    r = field.r
    T = PolyA.gen(field)
    while len(cache) <= n:
        prev = cache[-1]
        # phi_{T^(i+1)} = phi_T o phi_{T^i}: c'_k = T*c_k + c_{k-1}^q
        nxt = []
        for k in range(len(prev) + 1):
            term = None
            if k < len(prev):
                term = T * prev[k]
            if k >= 1:
                fr = prev[k - 1].frobenius(r)
                term = fr if term is None else term + fr
            nxt.append(term)
        cache.append(nxt)
    return cache


def carlitz_phi(a):
    """The additive polynomial phi_a for a nonzero a in A."""
    if a.is_zero():
        raise ValueError("phi_a is not defined for a = 0")
    field = a.field
    powers = _phi_T_powers(field, a.degree)
    out = [PolyA.zero(field)] * (a.degree + 1)
    for i, ai in enumerate(a.coeffs):
        if not ai:
            continue
        for k, c in enumerate(powers[i]):
            out[k] = out[k] + c * ai
    return AdditivePoly(field, out)


def torsion_exponential(prime):
    """The normalized exponential of the prime-torsion lattice of phi:
    e = phi_prime / prime, so the z-coefficient is 1."""
    phi = carlitz_phi(prime.poly)
    denom = RatK.from_poly(prime.poly)
    return AdditivePoly(prime.field,
                        [RatK.from_poly(c) / denom for c in phi.coeffs])


def _ta_packed(field, a_vals, N):
    """Packed-kernel t-expansion of t_a for monic a, through t^N.

    t_a = t^(q^d) / (sum_i c_i t^(q^d - q^i)) with c_i the coefficients of
    phi_a; the divisor is a sparse unit series, inverted by its recurrence.
    Coefficients of the result lie in A.
    """
    kf = field.kf
    a = PolyA.from_codes(field, a_vals)
    d = a.degree
    Q = field.q ** d
    if Q > N:
        return _kernel.ser_zero(kf, N)
    phi = carlitz_phi(a)
    # sparse divisor terms at t^(Q - q^i): packed coefficient and its length
    terms = []
    for i in range(d):  # the i = d term is the constant 1 of the unit
        c = phi.coeffs[i]
        if not c.is_zero():
            off = Q - field.q ** i
            pv = _kernel.pack_vals(kf, c.vals)
            terms.append((off, pv, _kernel.planes_digit_len(pv)))
    M = N - Q  # precision needed for the unit inverse
    inv = [_kernel.pack_vals(kf, (1,))]
    p1 = kf.p - 1
    neg_terms = [(off, _kernel.normalize_planes(kf, tuple(p1 * x for x in pv)), lv)
                 for off, pv, lv in terms]
    for n in range(1, M + 1):
        acc = [_kernel.MPZ_0] * kf.r
        hit = False
        for off, pv, lv in neg_terms:
            k = n - off
            if k < 0:
                continue
            b = inv[k]
            prod = _kernel.planes_mul(kf, b, pv, lb=lv)
            for j in range(kf.r):
                if prod[j]:
                    acc[j] += prod[j]
            hit = True
        if hit:
            inv.append(_kernel.normalize_planes(kf, tuple(acc)))
        else:
            inv.append((_kernel.MPZ_0,) * kf.r)
    zero = (_kernel.MPZ_0,) * kf.r
    return [zero] * Q + inv[:N - Q + 1]


def t_sub_a(a, N):
    """The expansion of t_a as a TSeries over K through t^N; a must be monic.

    Every coefficient is a polynomial (denominator 1) and the lowest term is
    t^(q^deg a) with coefficient 1; both are checked before returning.
    """
    if not a.is_monic():
        raise ValueError(f"t_a needs monic a, got {a}")
    field = a.field
    packed = _ta_packed(field, a.vals, N)
    base = RatField(field)
    out = _from_packed_integral(base, packed, N)
    Q = field.q ** a.degree
    if Q <= N:
        if out.coeffs[Q] != base.one or any(out.coeffs[i] for i in range(Q)):
            raise AssertionError("t_a must start with a unit t^(q^deg a) term")
    assert all(c.is_integral() for c in out.coeffs), "t_a must lie in A[[t]]"
    return out


def _from_packed_integral(base, packed, prec):
    field = base.field
    vals_list = _kernel.ser_to_vals(field.kf, packed)
    coeffs = [RatK(PolyA.from_codes(field, v), _trusted=True) for v in vals_list]
    return TSeries(base, coeffs, prec)


class GossTable:
    """Goss polynomials G_1..G_nmax of a finite lattice given by its
    normalized exponential; grown monotonically and cached per lattice."""

    def __init__(self, field, lattice_coeffs):
        if not lattice_coeffs or not _is_one(lattice_coeffs[0]):
            raise ValueError("lattice exponential must be normalized (z-coefficient 1)")
        self.field = field
        self.base = RatField(field)
        self.lattice_coeffs = tuple(self.base.element(c) for c in lattice_coeffs)
        self._polys = [None, [self.base.zero, self.base.one]]  # G_1 = X

    def grow(self, n_max):
        q = self.field.q
        zero = self.base.zero
        while len(self._polys) <= n_max:
            n = len(self._polys)
            acc = list(self._polys[n - 1])  # G_{n-1}
            for i in range(1, len(self.lattice_coeffs)):
                if n - q ** i < 1:
                    break
                alpha = self.lattice_coeffs[i]
                if alpha.is_zero():
                    continue
                prev = self._polys[n - q ** i]
                for j, c in enumerate(prev):
                    if not c.is_zero():
                        s = acc[j] + c * alpha
                        acc[j] = s
            self._polys.append([zero] + acc)  # multiply by X
        return self

    def coeffs(self, n):
        """Coefficient list (low-to-high in X) of G_n."""
        if n < 1:
            raise ValueError("Goss polynomials are indexed from 1")
        if n >= len(self._polys):
            self.grow(n)
        return list(self._polys[n])

    def poly(self, n):
        from .exactla import UniPoly
        return UniPoly(self.base, self.coeffs(n))

    def coeff(self, n, m):
        cs = self.coeffs(n)
        return cs[m] if m < len(cs) else self.base.zero

    def order(self, n):
        """ord_X G_n."""
        cs = self.coeffs(n)
        for m, c in enumerate(cs):
            if not c.is_zero():
                return m
        return None


def _is_one(c):
    if isinstance(c, RatK):
        return c == RatK.one(c.field)
    if isinstance(c, PolyA):
        return c == PolyA.one(c.field)
    return c == 1


_GOSS_CACHE = {}


def goss_table(lattice, n_max):
    """GossTable for an AdditivePoly lattice exponential with c_0 = 1."""
    field = lattice.field
    key = (field, tuple(str(c) for c in lattice.coeffs))
    table = _GOSS_CACHE.get(key)
    if table is None:
        table = GossTable(field, lattice.coeffs)
        _GOSS_CACHE[key] = table
    return table.grow(n_max)


def goss_table_for_prime(prime, n_max):
    return goss_table(torsion_exponential(prime), n_max)


def _binom_mod_p(n, k, p, fact):
    """Lucas: C(n, k) mod p via base-p digits."""
    res = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        res = res * fact[nd] * pow(fact[kd] * fact[nd - kd] % p, p - 2, p) % p
        n //= p
        k //= p
    return res


def multinomial_mod_p(m, parts, p):
    """m! / (i_0! ... i_s!) mod p by a Lucas factorization into binomials."""
    fact = [1] * p
    for i in range(2, p):
        fact[i] = fact[i - 1] * i % p
    res, rem = 1, m
    for i in parts:
        res = res * _binom_mod_p(rem, i, p, fact) % p
        if res == 0:
            return 0
        rem -= i
    return res


def _closed_form_x_coeff(field, beta, d, n, m):
    """The X^(m+1) coefficient of the reduced G_n: a multinomial sum over
    the tuples (i_0..i_d) with sum i_j = m, sum i_j q^j = n - 1, each tuple
    weighted by prod beta_j^(i_j), multinomials taken mod p by Lucas."""
    p, q = field.p, field.q
    target = n - 1
    total = field.zero

    def rec(j, weight_left, exp_left, parts):
        nonlocal total
        if j == 0:
            if exp_left != weight_left:
                return
            parts_full = [exp_left] + parts
            coef = multinomial_mod_p(m, parts_full, p)
            if not coef:
                return
            val = field.element(coef)
            for jj, i in enumerate(parts_full):
                if jj and i:
                    val = val * beta[jj] ** i
            total = total + val
            return
        step = q ** j
        top = min(weight_left, exp_left // step)
        for i in range(top + 1):
            rec(j - 1, weight_left - i, exp_left - i * step, [i] + parts)

    rec(d, m, target, [])
    return total


def goss_mod_T_closed_form(prime, n):
    """G_n of the prime-torsion lattice reduced mod T, as a coefficient list
    over F_q, through the multinomial closed form."""
    if prime.is_T():
        raise ValueError("the closed form excludes the prime T")
    if n < 1:
        raise ValueError("Goss polynomials are indexed from 1")
    field = prime.field
    inv_a0 = prime.residue.inv()
    beta = [a * inv_a0 for a in prime.alpha]  # beta_0 = 1
    out = [field.zero] * (n + 1)
    for m in range(min(n - 1, n) + 1):
        out[m + 1] = _closed_form_x_coeff(field, beta, prime.degree, n, m)
    return out


_GOSS_COLS_CACHE = {}


def _goss_mod_T_columns(prime, n_max, m_max):
    """Columns of the reduced Goss triangle via the closed form: cols[m] is
    the list of (n, code) with a nonzero X^m coefficient in reduced G_n,
    n <= n_max, ascending."""
    key = (prime.field, prime.poly.vals)
    entry = _GOSS_COLS_CACHE.get(key)
    if entry is not None and entry[0] >= n_max and entry[1] >= m_max:
        return entry[2]
    field = prime.field
    q = field.q
    d = prime.degree
    inv_a0 = prime.residue.inv()
    beta = [a * inv_a0 for a in prime.alpha]
    cols = [[] for _ in range(m_max + 1)]
    for m in range(1, m_max + 1):
        col = cols[m]
        # ord bound: X^m can occur only when n <= (m-1) q^d + 1; also m <= n
        for n in range(m, min(n_max, (m - 1) * q ** d + 1) + 1):
            c = _closed_form_x_coeff(field, beta, d, n, m - 1)
            if c:
                col.append((n, c.code))
    _GOSS_COLS_CACHE[key] = (n_max, m_max, cols)
    return cols


def goss_order_bound(n, q, d):
    """Lower bound for ord_X of the n-th Goss polynomial of a degree-d
    prime-torsion lattice: (n-1)/q^d + 1, exceeded by no term."""
    return (n - 1) / q ** d + 1
