"""Drinfeld modular forms of full level: g, h, the quasi-form E, monomial
bases of each weight/type space, exact basis decomposition, Serre
derivatives, and reduction at degree-one primes.

The defining expansions are

    g = 1 - (T^q - T) * sum_{a monic} t_a^(q-1)
    h = sum_{a monic} a^q t_a
    E = sum_{a monic} a t_a        (quasi-modular, excluded from bases)

truncated to monic a with q^(deg a) <= precision, which is sufficient since
t_a is a unit times t^(q^(deg a)).  The space of weight k, type m is spanned
by the monomials g^i h^j with k = (q-1)i + (q+1)j and j = m mod (q-1),
ordered by increasing j; their leading terms t^j make decomposition an exact
unitriangular solve.
"""

from typing import NamedTuple

from . import _kernel
from .ffield import FqElem
from .polyring import PolyA, RatK, RatField, monic_polys, reduce_at_theta
from .tseries import TSeries
from .carlitz import _ta_packed, carlitz_phi


class BasisMonomial(NamedTuple):
    i: int
    j: int


class ModForm:
    """A form of weight k and type m with its t-expansion over K."""

    __slots__ = ('weight', 'type', 'series', 'coords', 'quasi')

    def __init__(self, weight, type_, series, coords=None, quasi=False):
        self.weight = weight
        self.type = type_
        self.series = series
        self.coords = coords
        self.quasi = quasi

    @property
    def field(self):
        return self.series.base.field

    @property
    def prec(self):
        return self.series.prec

    def __mul__(self, other):
        if not isinstance(other, ModForm):
            raise TypeError("can only multiply by another form")
        if self.quasi or other.quasi:
            raise ValueError("products with the quasi-form are not graded forms")
        q = self.field.q
        m = (self.type + other.type) % max(q - 1, 1)
        return ModForm(self.weight + other.weight, m, self.series * other.series)

    def __eq__(self, other):
        return (isinstance(other, ModForm) and other.weight == self.weight
                and other.type == self.type and other.series == self.series)

    def __repr__(self):
        tag = "quasi " if self.quasi else ""
        return (f"<{tag}form weight {self.weight} type {self.type}: "
                f"{self.series}>")


class ModTForm:
    """A reduction of a form at T = theta: series over F_q plus the exponent
    list of the cusp-form powers spanning its space."""

    __slots__ = ('series', 'exponents', 'theta', 'weight', 'type')

    def __init__(self, series, exponents, theta, weight=None, type_=None):
        self.series = series
        self.exponents = exponents
        self.theta = theta
        self.weight = weight
        self.type = type_

    def __repr__(self):
        return f"<mod (T-{self.theta}) form: {self.series}>"


# ---------------------------------------------------------------------------
# cached packed builders


_CACHE = {}  # (field, kind, key) -> (prec, packed series)


def clear_caches():
    _CACHE.clear()


def _cached(field, kind, key, N, builder):
    entry = _CACHE.get((field, kind, key))
    if entry is None or entry[0] < N:
        entry = (N, builder(N))
        _CACHE[(field, kind, key)] = entry
    prec, packed = entry
    if prec == N:
        return packed
    return packed[:N + 1]


def _monic_degree_classes(field, N):
    """Degrees d with q^d <= N (those t_a reach below the precision)."""
    d = 0
    while field.q ** d <= N:
        yield d
        d += 1


def _h_contribs(field, N, weight_exp):
    """Generator of a^(q^weight_exp) * t_a over contributing monic a."""
    kf = field.kf
    for d in _monic_degree_classes(field, N):
        for a in monic_polys(field, d):
            ta = _ta_packed(field, a.vals, N)
            w = _kernel.poly_frob(kf, a.vals, field.r * weight_exp)
            yield _kernel.ser_scalar_poly(kf, ta, w)


def _build_h(field, N):
    return _kernel.ser_sum(field.kf, _h_contribs(field, N, 1), N)


def _build_E(field, N):
    return _kernel.ser_sum(field.kf, _h_contribs(field, N, 0), N)


def _ta_unit_pow_qm1(field, a_vals, N):
    """t_a^(q-1) through t^N, via the unit-part power with the Frobenius
    shortcut on the p-adic digits of q-1."""
    kf = field.kf
    q, p, r = field.q, kf.p, kf.r
    d = len(a_vals) - 1
    Q = q ** d
    lead = Q * (q - 1)
    if lead > N:
        return None
    M = N - lead
    unit = _ta_packed(field, a_vals, M + Q)[Q:]  # the unit factor of t_a
    # unit^(q-1): q-1 = (p-1) + (p-1)p + ... + (p-1)p^(r-1)
    small = [None] * p  # small[e] = unit^e
    small[0] = [_kernel.pack_vals(kf, (1,))]
    small[1] = unit
    for e in range(2, p):
        small[e] = _kernel.ser_mul(kf, small[e - 1], unit, M)
    result = small[p - 1]
    for jj in range(1, r):
        tw = _kernel.ser_frobenius(kf, small[p - 1], jj, M)
        result = _kernel.ser_mul(kf, result, tw, M)
    zero = (_kernel.MPZ_0,) * kf.r
    return [zero] * lead + result[:M + 1]


def _build_g(field, N):
    kf = field.kf
    q = field.q

    def contribs():
        for d in _monic_degree_classes(field, N):
            for a in monic_polys(field, d):
                c = _ta_unit_pow_qm1(field, a.vals, N)
                if c is not None:
                    yield c

    s = _kernel.ser_sum(kf, contribs(), N)
    # g = 1 - (T^q - T) * s
    tq_minus_t = _kernel.poly_sub(kf, _kernel.poly_frob(kf, (0, 1), field.r),
                                  (0, 1))
    scaled = _kernel.ser_scalar_poly(kf, s, tq_minus_t)
    neg = [_kernel.normalize_planes(kf, tuple((kf.p - 1) * x for x in c))
           if any(c) else c for c in scaled]
    one = _kernel.ser_from_vals(kf, [(1,)], 0)
    return _kernel.ser_add(kf, one, neg, N)


def _packed_g(field, N):
    return _cached(field, 'g', None, N, lambda n: _build_g(field, n))


def _packed_h(field, N):
    return _cached(field, 'h', None, N, lambda n: _build_h(field, n))


def _packed_E(field, N):
    return _cached(field, 'E', None, N, lambda n: _build_E(field, n))


def _packed_power(field, name, e, N):
    """Packed g^e or h^e with p-adic Frobenius splitting, cached."""
    kf = field.kf
    base_builder = _packed_g if name == 'g' else _packed_h
    if e == 0:
        return _kernel.ser_from_vals(kf, [(1,)] + [()] * N, N)
    if e == 1:
        return base_builder(field, N)

    def build(n):
        p = kf.p
        if e % p == 0:
            half_prec = (n + 1 + p - 1) // p - 1
            half = _packed_power(field, name, e // p, half_prec)
            return _kernel.ser_frobenius(kf, half, 1, n)
        part = _packed_power(field, name, e - 1, n)
        return _kernel.ser_mul(kf, part, base_builder(field, n), n)

    return _cached(field, name + '^', e, N, build)


def _packed_monomial(field, i, j, N):
    if i == 0:
        return _packed_power(field, 'h', j, N)
    if j == 0:
        return _packed_power(field, 'g', i, N)

    def build(n):
        return _kernel.ser_mul(field.kf, _packed_power(field, 'g', i, n),
                               _packed_power(field, 'h', j, n), n)

    return _cached(field, 'mono', (i, j), N, build)


def _to_series(field, packed, N):
    vals_list = _kernel.ser_to_vals(field.kf, packed)
    coeffs = [RatK(PolyA.from_codes(field, v), _trusted=True) for v in vals_list]
    return TSeries(RatField(field), coeffs, N)


# ---------------------------------------------------------------------------
# public constructors


def eisenstein_g(field, N):
    """The weight q-1, type 0 form g through t^N."""
    if N < 1:
        raise ValueError("precision must be at least 1")
    return ModForm(field.q - 1, 0, _to_series(field, _packed_g(field, N), N))


def cusp_h(field, N):
    """The weight q+1, type 1 cusp form h through t^N."""
    if N < 1:
        raise ValueError("precision must be at least 1")
    return ModForm(field.q + 1, 1 % max(field.q - 1, 1),
                   _to_series(field, _packed_h(field, N), N))


def false_eisenstein(field, N):
    """Gekeler's quasi-modular E through t^N (weight 2, type 1 bookkeeping);
    flagged quasi and excluded from basis decompositions."""
    if N < 1:
        raise ValueError("precision must be at least 1")
    return ModForm(2, 1 % max(field.q - 1, 1),
                   _to_series(field, _packed_E(field, N), N), quasi=True)


def mu(field, k, m):
    """floor((k - m(q+1)) / (q^2 - 1)); the mod-T space has dimension 1 + mu
    when k >= m(q+1) and k = 2m mod (q-1)."""
    q = field.q
    return (k - m * (q + 1)) // (q * q - 1)


def monomial_basis(field, k, m):
    """All (i, j) with k = (q-1)i + (q+1)j, j = m mod (q-1), i, j >= 0,
    ordered by increasing j; empty when the congruence fails."""
    q = field.q
    qm1 = max(q - 1, 1)
    if not 0 <= m < qm1:
        raise ValueError(f"type representative must lie in [0, {qm1})")
    out = []
    j = m % qm1
    while (q + 1) * j <= k:
        rem = k - (q + 1) * j
        if rem % qm1 == 0:
            out.append(BasisMonomial(rem // qm1, j))
        j += qm1
    return out


def monomial_form(field, i, j, N):
    """The form g^i h^j through t^N."""
    q = field.q
    return ModForm((q - 1) * i + (q + 1) * j, j % max(q - 1, 1),
                   _to_series(field, _packed_monomial(field, i, j, N), N),
                   coords=None)


def decompose_in_basis(series, k, m):
    """Exact coordinates of a series in the monomial basis of weight k,
    type m.  The basis leading terms are t^j with unit coefficient, so the
    solve is unitriangular back-substitution; any nonzero residual through
    the full precision of the input raises ValueError."""
    field = series.base.field
    basis = monomial_basis(field, k, m)
    if not basis:
        if series.is_zero():
            return []
        raise ValueError(f"series is nonzero but the ({k}, {m}) basis is empty")
    j_max = basis[-1].j
    if series.prec < j_max:
        raise ValueError(
            f"precision {series.prec} is below the largest leading term "
            f"t^{j_max} of the basis")
    residual = list(series.coeffs)
    basis_series = [monomial_form(field, b.i, b.j, series.prec).series
                    for b in basis]
    coords = []
    for b, bs in zip(basis, basis_series):
        c = residual[b.j]
        coords.append(c)
        if c:
            for n in range(b.j, len(residual)):
                residual[n] = residual[n] - c * bs.coeffs[n]
    for n, rc in enumerate(residual):
        if rc:
            raise ValueError(
                f"series is not in the span of the ({k}, {m}) basis: "
                f"residual at t^{n}")
    return coords


def form_from_coords(field, k, m, coords, N):
    """Rebuild the form with the given basis coordinates through t^N."""
    basis = monomial_basis(field, k, m)
    if len(coords) != len(basis):
        raise ValueError("coordinate list does not match the basis")
    base = RatField(field)
    acc = TSeries.zero(base, N)
    for b, c in zip(basis, coords):
        c = base.element(c)
        if c:
            acc = acc + monomial_form(field, b.i, b.j, N).series.scale(c)
    return ModForm(k, m, acc, coords=list(coords))


def serre_derivative(f):
    """The weight-raising derivative: theta(f) + k E f, of weight k + 2 and
    next type; defined for true forms and for products with E folded in."""
    field = f.field
    p = field.p
    k_scalar = f.weight % p
    th = f.series.theta().truncate(f.prec)
    if k_scalar:
        E = false_eisenstein(field, f.prec)
        ke = RatK.from_poly(PolyA.constant(field.element(k_scalar)))
        th = th + (E.series * f.series).scale(ke)
    q = field.q
    return ModForm(f.weight + 2, (f.type + 1) % max(q - 1, 1), th,
                   quasi=f.quasi)


def reduce_mod_theta(f, theta):
    """Coefficient-wise evaluation of a form at T = theta.  For theta = 0 the
    result lives in the span of the cusp-form powers recorded in exponents."""
    field = f.field
    try:
        coeffs = [reduce_at_theta(c, theta) for c in f.series.coeffs]
    except ZeroDivisionError as exc:
        raise ZeroDivisionError(
            f"form is not integral at T = {theta}: {exc}") from None
    series = TSeries(field, coeffs, f.prec)
    exponents = [b.j for b in monomial_basis(field, f.weight, f.type)] \
        if not f.quasi else None
    return ModTForm(series, exponents, theta, f.weight, f.type)


# ---------------------------------------------------------------------------
# independent mod-T route: series built directly over F_q


def _tbar_sub_a(field, a_vals, N):
    """t_a mod T over F_q: phi_a = sum a_i z^(q^i) mod T, so the unit part is
    the inverse of sum a_i t^(q^d - q^i).  Independent of carlitz_phi."""
    kf = field.kf
    q = field.q
    d = len(a_vals) - 1
    Q = q ** d
    out = [0] * (N + 1)
    if Q > N:
        return out
    M = N - Q
    inv = [1] + [0] * M
    offs = [(Q - q ** i, kf.neg[a_vals[i]]) for i in range(d) if a_vals[i]]
    mul, add = kf.mul, kf.add
    for n in range(1, M + 1):
        acc = 0
        for off, negc in offs:
            k = n - off
            if k >= 0 and inv[k]:
                acc = add[acc * q + mul[negc * q + inv[k]]]
        inv[n] = acc
    out[Q:] = inv
    return out


def cusp_h_mod_T(field, N):
    """h mod T computed natively over F_q (no characteristic-zero step):
    sum of a(0)-weighted reduced t_a over contributing monic a."""
    def build(n):
        kf = field.kf
        q, mul, add = field.q, kf.mul, kf.add
        acc = [0] * (n + 1)
        for d in _monic_degree_classes(field, n):
            for a in monic_polys(field, d):
                w = a.coeff(0).code  # abar^q = abar in F_q
                if not w:
                    continue
                ta = _tbar_sub_a(field, a.vals, n)
                wq = w * q
                for idx in range(q ** d, n + 1):
                    v = ta[idx]
                    if v:
                        acc[idx] = add[acc[idx] * q + mul[wq + v]]
        return acc

    entry = _CACHE.get((field, 'hbar', None))
    if entry is None or entry[0] < N:
        entry = (N, build(N))
        _CACHE[(field, 'hbar', None)] = entry
    prec, codes = entry
    return TSeries(field, [FqElem(field, c) for c in codes[:N + 1]], N)
