"""The Hecke action on t-expansions and its exact matrices.

For a monic prime ell of degree d the operator of weight k sends
sum a_n t^n to

    ell^k * sum_n a_n t_ell^n  +  sum_n a_n G_{n,ell}(ell t),

with G_{n,ell} the Goss polynomials of the ell-torsion lattice.  The second
sum is evaluated through the integral table D_n = G_{n,ell}(ell t), which
satisfies D_1 = ell t and

    D_n = t * (ell * D_{n-1} + sum_{i>=1} c_i D_{n-q^i}),

c_i the z^(q^i)-coefficients of phi_ell; only the columns [t^m] D_n with
m <= output precision are kept, swept over n with a window of depth q^d.
Since ord_X G_n >= (n-1)/q^d + 1, input coefficients beyond
(N_out - 1) q^d + 1 cannot influence the output; that bound is the required
input precision.

Matrices on a weight/type space are taken in the monomial basis ordered by
increasing cusp-power j (columns are images); reductions at T = theta are
stored row-as-image so that the triangular shape of the reduced action is
literally lower triangular.
"""

from typing import NamedTuple, Optional

from . import _kernel
from .ffield import FqElem
from .polyring import (PolyA, RatK, RatField, PrimePoly, monic_polys,
                       reduce_at_theta)
from .tseries import TSeries, _to_kernel
from .carlitz import carlitz_phi, _ta_packed, _goss_mod_T_columns
from .modforms import (monomial_basis, monomial_form, decompose_in_basis,
                       cusp_h_mod_T, _packed_monomial, _to_series)


class StructureError(RuntimeError):
    """A structural postcondition that a theorem guarantees has failed;
    this certifies a computation bug rather than bad input."""


def required_input_precision(q, n_out, d):
    """Input coefficients a_n with n beyond (n_out - 1) q^d + 1 cannot reach
    outputs at or below t^n_out."""
    return max(0, (n_out - 1) * q ** d + 1)


def _goss_sweep(field, prime, inputs, n_out, p_in):
    """[t^m] of sum_n a_n G_{n,ell}(ell t) for each packed input series.

    Returns, per input, a list over m = 0..n_out of packed plane tuples.
    """
    kf = field.kf
    q, r, p = field.q, kf.r, kf.p
    d = prime.degree
    phi = carlitz_phi(prime.poly)
    ell = _kernel.pack_vals(kf, prime.poly.vals)
    ell_len = _kernel.planes_digit_len(ell)
    cs = []
    for i in range(1, d + 1):
        c = phi.coeffs[i]
        pv = _kernel.pack_vals(kf, c.vals) if not c.is_zero() else None
        cs.append((q ** i, pv,
                   _kernel.planes_digit_len(pv) if pv is not None else 0))
    zero = (_kernel.MPZ_0,) * r
    acc = [[[_kernel.MPZ_0] * r for _ in range(n_out + 1)] for _ in inputs]
    window = {}
    renorm_every = max(1, ((1 << 16) - p) // (p - 1) if p > 1 else 1)
    since_renorm = 0
    m_top = n_out
    for n in range(1, p_in + 1):
        if n == 1:
            row = [None] * (n_out + 1)
            if n_out >= 1:
                row[1] = (ell, ell_len)
        else:
            row = [None] * (n_out + 1)
            prev = window.get(n - 1)
            backs = [(window.get(n - qi), pv, lv) for qi, pv, lv in cs
                     if pv is not None and n - qi >= 1]
            for m in range(1, min(m_top, n) + 1):
                raw = None
                if prev is not None and prev[m - 1] is not None:
                    b, bl = prev[m - 1]
                    prod = _kernel.planes_mul(kf, b, ell, la=bl, lb=ell_len)
                    raw = list(prod)
                for wrow, pv, lv in backs:
                    if wrow is not None and wrow[m - 1] is not None:
                        b, bl = wrow[m - 1]
                        prod = _kernel.planes_mul(kf, b, pv, la=bl, lb=lv)
                        if raw is None:
                            raw = list(prod)
                        else:
                            for j in range(r):
                                if prod[j]:
                                    raw[j] += prod[j]
                if raw is not None:
                    planes = _kernel.normalize_planes(kf, tuple(raw))
                    row[m] = (planes, _kernel.planes_digit_len(planes))
        window[n] = row
        old = n - q ** d
        if old >= 1:
            window.pop(old, None)
        for fi, f in enumerate(inputs):
            if n >= len(f):
                continue
            a_n = f[n]
            if not any(a_n):
                continue
            al = _kernel.planes_digit_len(a_n)
            af = acc[fi]
            for m in range(1, min(m_top, n) + 1):
                ent = row[m]
                if ent is None:
                    continue
                prod = _kernel.planes_mul(kf, a_n, ent[0], la=al, lb=ent[1])
                dst = af[m]
                for j in range(r):
                    if prod[j]:
                        dst[j] += prod[j]
        since_renorm += 1
        if since_renorm >= renorm_every:
            for af in acc:
                for m in range(n_out + 1):
                    af[m] = list(_kernel.normalize_planes(kf, tuple(af[m])))
            since_renorm = 0
    return [[_kernel.normalize_planes(kf, tuple(c)) for c in af] for af in acc]


def _hecke_images_packed(field, inputs, weights, prime, n_out):
    """Apply the weight-k operator to packed integral series; returns packed
    series of precision n_out, one per input."""
    kf = field.kf
    q = field.q
    d = prime.degree
    p_in = required_input_precision(q, n_out, d)
    for f in inputs:
        if len(f) < p_in + 1:
            raise ValueError(
                f"series precision {len(f) - 1} is below the required "
                f"input precision {p_in}")
    goss = _goss_sweep(field, prime, inputs, n_out, p_in) if p_in else \
        [[(_kernel.MPZ_0,) * kf.r for _ in range(n_out + 1)] for _ in inputs]
    # first sum: ell^k sum_{n q^d <= n_out} a_n t_ell^n
    Q = q ** d
    n_first = n_out // Q
    t_ell = _ta_packed(field, prime.poly.vals, n_out)
    ell_pow = {}
    out = []
    for f, k, g in zip(inputs, weights, goss):
        if k not in ell_pow:
            ell_pow[k] = (prime.poly ** k).vals
        ell_k = ell_pow[k]
        first = _kernel.ser_zero(kf, n_out)
        t_pow = None
        for n in range(0, n_first + 1):
            if n == 0:
                pass
            elif n == 1:
                t_pow = t_ell
            else:
                t_pow = _kernel.ser_mul(kf, t_pow, t_ell, n_out)
            if n >= len(f):
                break
            a_n = f[n]
            if not any(a_n):
                continue
            vals = _kernel.unpack_vals(kf, a_n)
            if n == 0:
                term = _kernel.ser_from_vals(kf, [vals], 0)
                term = _kernel.ser_add(kf, term, _kernel.ser_zero(kf, n_out),
                                       n_out)
            else:
                term = _kernel.ser_scalar_poly(kf, t_pow, vals)
            first = _kernel.ser_add(kf, first, term, n_out)
        first = _kernel.ser_scalar_poly(kf, first, ell_k)
        out.append(_kernel.ser_add(kf, first, g, n_out))
    return out


def hecke_on_series(f, k, prime, n_out):
    """The weight-k Hecke operator at the given prime applied to a TSeries
    over K, truncated to t^n_out.  Valid for the prime T as well."""
    field = f.base.field
    p_in = required_input_precision(field.q, n_out, prime.degree)
    if f.prec < p_in:
        raise ValueError(
            f"input precision {f.prec} is below the required {p_in} for "
            f"output precision {n_out} at a degree-{prime.degree} prime")
    packed, den = _to_kernel(f)
    img = _hecke_images_packed(field, [packed], [k], prime, n_out)[0]
    base = f.base
    out = _to_series(field, img, n_out)
    if den is not None:
        dinv = RatK.one(field) / RatK.from_poly(den)
        out = out.scale(dinv)
    return out


class HeckeMatrix(NamedTuple):
    """Exact matrix on the monomial basis; entries[r][c] is the coordinate
    on basis element r of the image of basis element c (columns = images)."""
    field: object
    k: int
    m: int
    prime: PrimePoly
    basis: tuple
    entries: tuple

    @property
    def dim(self):
        return len(self.basis)

    def column(self, c):
        return [self.entries[r][c] for r in range(self.dim)]

    def apply(self, coords):
        if len(coords) != self.dim:
            raise ValueError("coordinate length does not match the basis")
        out = []
        for r in range(self.dim):
            acc = RatK.zero(self.field)
            for c in range(self.dim):
                if coords[c] and self.entries[r][c]:
                    acc = acc + self.entries[r][c] * coords[c]
            out.append(acc)
        return out


class ModTHeckeMatrix(NamedTuple):
    """Reduced matrix at T = theta on the cusp-power basis; entries[i][j] is
    the coefficient of exponent e_j in the image of exponent e_i (rows are
    images), which makes the guaranteed shape lower triangular with the
    constant diagonal residue^m."""
    field: object
    k: int
    m: int
    prime: PrimePoly
    theta: FqElem
    exponents: tuple
    entries: tuple
    diagonal: FqElem

    @property
    def dim(self):
        return len(self.exponents)


def hecke_matrix(field, k, m, prime):
    """Exact matrix of the weight-k Hecke operator on the (k, m) space."""
    basis = monomial_basis(field, k, m)
    if not basis:
        raise ValueError(f"the ({k}, {m}) space is zero")
    n_out = basis[-1].j
    p_in = required_input_precision(field.q, n_out, prime.degree)
    inputs = [_packed_monomial(field, b.i, b.j, max(p_in, n_out))
              for b in basis]
    images = _hecke_images_packed(field, inputs, [k] * len(basis), prime,
                                  n_out)
    cols = []
    for img in images:
        series = _to_series(field, img, n_out)
        try:
            cols.append(decompose_in_basis(series, k, m))
        except ValueError as exc:
            raise StructureError(
                f"Hecke image left the ({k}, {m}) span at prime "
                f"{prime}: {exc}") from None
    entries = tuple(tuple(cols[c][r] for c in range(len(basis)))
                    for r in range(len(basis)))
    return HeckeMatrix(field, k, m, prime, tuple(basis), entries)


def hecke_matrix_mod_theta(field, k, m, prime, theta=None, matrix=None):
    """Entry-wise reduction of the exact matrix at T = theta, transposed to
    the row-as-image convention on the cusp-power exponents.  The prime
    T - theta is excluded; the lower-triangular shape and constant diagonal
    residue(theta)^m are enforced."""
    if theta is None:
        theta = field.zero
    shifted = PolyA.from_codes(field, ((-theta).code, 1))
    if prime.poly == shifted:
        raise ValueError(
            f"reduction at T = {theta} excludes the prime {prime}")
    if matrix is None:
        matrix = hecke_matrix(field, k, m, prime)
    n = matrix.dim
    red = [[reduce_at_theta(matrix.entries[r][c], theta) for r in range(n)]
           for c in range(n)]  # red[c][r]: row c = image of basis c
    diag = reduce_at_theta(RatK.from_poly(prime.poly), theta) ** m
    for i in range(n):
        for j in range(n):
            if j > i and red[i][j]:
                raise StructureError(
                    f"reduced Hecke matrix at {prime} on ({k}, {m}) is not "
                    f"lower triangular at ({i}, {j})")
        if red[i][i] != diag:
            raise StructureError(
                f"reduced Hecke matrix at {prime} on ({k}, {m}) has diagonal "
                f"{red[i][i]} at {i}, expected {diag}")
    exponents = tuple(b.j for b in matrix.basis)
    return ModTHeckeMatrix(field, k, m, prime, theta, exponents,
                           tuple(tuple(row) for row in red), diag)


def hecke_matrix_mod_T(field, k, m, prime, matrix=None):
    return hecke_matrix_mod_theta(field, k, m, prime, field.zero, matrix)


# ---------------------------------------------------------------------------
# independent mod-T pipeline (closed-form Goss columns, native F_q series)


def _hecke_mod_T_on_codes(field, codes, k, prime, n_out):
    """The reduced operator on a mod-T series given as a code list."""
    if prime.is_T():
        raise ValueError("the mod-T action excludes the prime T")
    kf = field.kf
    q, mul, add = field.q, kf.mul, kf.add
    d = prime.degree
    p_in = required_input_precision(q, n_out, d)
    if len(codes) < p_in + 1:
        raise ValueError(
            f"mod-T series precision {len(codes) - 1} below required {p_in}")
    out = [0] * (n_out + 1)
    # Goss part: [t^m] = residue^m * sum_n a_n * (X^m coefficient of G_n)
    cols = _goss_mod_T_columns(prime, p_in, n_out)
    res_pow = [1] * (n_out + 1)
    for m in range(1, n_out + 1):
        res_pow[m] = mul[res_pow[m - 1] * q + prime.residue.code]
    for m in range(1, n_out + 1):
        acc = 0
        for n, g in cols[m]:
            if n > p_in:
                break
            a_n = codes[n] if n < len(codes) else 0
            if a_n and g:
                acc = add[acc * q + mul[a_n * q + g]]
        out[m] = mul[acc * q + res_pow[m]]
    # first sum: residue^k * sum_{n q^d <= n_out} a_n tbar_ell^n
    from .modforms import _tbar_sub_a
    tbar = _tbar_sub_a(field, prime.poly.vals, n_out)
    res_k = kf.elem_pow(prime.residue.code, k)
    n_first = n_out // (q ** d)
    t_pow = [1] + [0] * n_out
    for n in range(0, n_first + 1):
        if n:
            nxt = [0] * (n_out + 1)
            for i, x in enumerate(t_pow):
                if x:
                    for jj in range(q ** d, n_out - i + 1):
                        y = tbar[jj]
                        if y:
                            nxt[i + jj] = add[nxt[i + jj] * q + mul[x * q + y]]
            t_pow = nxt
        a_n = codes[n] if n < len(codes) else 0
        if not a_n:
            continue
        w = mul[res_k * q + a_n]
        for i, x in enumerate(t_pow):
            if x:
                out[i] = add[out[i] * q + mul[w * q + x]]
    return out


def _hbar_power_codes(field, n, prec):
    hbar = cusp_h_mod_T(field, prec)
    base = TSeries(field, list(hbar.coeffs), prec)
    pw = base ** n if n != 1 else base
    return [c.code for c in pw.coeffs]


def hecke_mod_T_on_power(field, n, prime):
    """Coordinates of the reduced Hecke operator applied to the n-th power of
    the reduced cusp form, on the cusp-power exponent ladder.

    Computed natively mod T with closed-form Goss columns, independently of
    the characteristic-zero route.  Returns a dict exponent -> coefficient
    with zero entries omitted."""
    if prime.is_T():
        raise ValueError("the mod-T action excludes the prime T")
    if n < 0:
        raise ValueError("the power must be nonnegative")
    q = field.q
    k = n * (q + 1)
    n_out = max(n, 1)
    p_in = required_input_precision(q, n_out, prime.degree)
    if n == 0:
        codes = [1] + [0] * p_in
    else:
        codes = _hbar_power_codes(field, n, p_in)
    img = _hecke_mod_T_on_codes(field, codes, k, prime, n_out)
    qm1 = max(q - 1, 1)
    ladder = list(range(n % qm1, n + 1, qm1))
    coords = {}
    residual = list(img)
    for e in ladder:
        c = residual[e] if e < len(residual) else 0
        if c:
            coords[e] = FqElem(field, c)
            pw = _hbar_power_codes(field, e, n_out) if e else [1] + [0] * n_out
            kf = field.kf
            mul, sub, q_ = kf.mul, kf.sub, kf.q
            for idx in range(e, n_out + 1):
                v = pw[idx] if idx < len(pw) else 0
                if v:
                    residual[idx] = sub[residual[idx] * q_ + mul[c * q_ + v]]
    for idx, v in enumerate(residual):
        if v:
            raise StructureError(
                f"reduced image of power {n} at {prime} is not spanned by "
                f"cusp powers: residual at t^{idx}")
    return coords


def matrix_mod_T_independent(field, k, m, prime):
    """Second route to the reduced matrix: native mod-T series and
    closed-form Goss columns throughout (row-as-image convention)."""
    basis = monomial_basis(field, k, m)
    if not basis:
        raise ValueError(f"the ({k}, {m}) space is zero")
    exponents = [b.j for b in basis]
    n_out = exponents[-1]
    p_in = required_input_precision(field.q, n_out, prime.degree)
    rows = []
    for e in exponents:
        codes = _hbar_power_codes(field, e, max(p_in, n_out)) if e else \
            [1] + [0] * max(p_in, n_out)
        img = _hecke_mod_T_on_codes(field, codes, k, prime, n_out)
        residual = list(img)
        row = []
        for e2 in exponents:
            c = residual[e2] if e2 < len(residual) else 0
            row.append(FqElem(field, c))
            if c:
                pw = _hbar_power_codes(field, e2, n_out) if e2 else \
                    [1] + [0] * n_out
                kf = field.kf
                for idx in range(e2, n_out + 1):
                    v = pw[idx] if idx < len(pw) else 0
                    if v:
                        residual[idx] = kf.sub[residual[idx] * kf.q +
                                               kf.mul[c * kf.q + v]]
        if any(residual):
            raise StructureError(
                f"mod-T image of exponent {e} not spanned by the ladder")
        rows.append(tuple(row))
    diag = prime.residue ** m
    return ModTHeckeMatrix(field, k, m, prime, field.zero, tuple(exponents),
                           tuple(rows), diag)


# ---------------------------------------------------------------------------
# certificates and composites


class EigenReport(NamedTuple):
    eigenvalue: Optional[RatK]
    violation: Optional[int]   # first violating coordinate index

    @property
    def is_eigenform(self):
        return self.eigenvalue is not None


def eigenform_check(field, coords, k, m, prime, matrix=None):
    """Exact proportionality test of the matrix action on a coordinate
    vector; returns the eigenvalue or the first violating index."""
    if all(not c for c in coords):
        raise ValueError("the zero vector is not an eigenvector candidate")
    if matrix is None:
        matrix = hecke_matrix(field, k, m, prime)
    if len(coords) != matrix.dim:
        raise ValueError("coordinate length does not match the space")
    base = RatField(field)
    coords = [base.element(c) for c in coords]
    image = matrix.apply(coords)
    pivot = next(i for i, c in enumerate(coords) if c)
    lam = image[pivot] / coords[pivot]
    for i in range(matrix.dim):
        if image[i] != lam * coords[i]:
            return EigenReport(None, i)
    return EigenReport(lam, None)


class WilsonReport(NamedTuple):
    matrix: ModTHeckeMatrix
    scalar: FqElem                    # product of residue_i^m
    plus_identity_nilpotent: bool
    minus_scalar_nilpotent: bool


def hecke_product_mod_T(field, k, m, primes):
    """Product of the reduced matrices of exactly q-1 primes with nonzero,
    pairwise distinct residues.  Reports whether product + I is nilpotent
    and whether product - (prod residue^m) I is nilpotent (the latter is the
    structural content of the triangular shape)."""
    from .exactla import MatrixK, is_nilpotent
    q = field.q
    if len(primes) != q - 1:
        raise ValueError(f"need exactly q - 1 = {q - 1} primes, got {len(primes)}")
    residues = [pp.residue for pp in primes]
    if any(not rr for rr in residues):
        raise ValueError("all residues must be nonzero (primes distinct from T)")
    if len({rr.code for rr in residues}) != len(residues):
        raise ValueError("residues must be pairwise distinct")
    mats = [hecke_matrix_mod_T(field, k, m, pp) for pp in primes]
    exps = mats[0].exponents
    n = len(exps)
    prod = [[field.one if i == j else field.zero for j in range(n)]
            for i in range(n)]
    for mt in mats:
        nxt = [[field.zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = field.zero
                for l in range(n):
                    if prod[i][l] and mt.entries[l][j]:
                        acc = acc + prod[i][l] * mt.entries[l][j]
                nxt[i][j] = acc
        prod = nxt
    scalar = field.one
    for rr in residues:
        scalar = scalar * rr ** m
    M = MatrixK(field, [list(row) for row in prod])
    plus_i = is_nilpotent(M + MatrixK.identity(field, n))
    shifted = is_nilpotent(M - MatrixK.identity(field, n).scale(scalar))
    pm = ModTHeckeMatrix(field, k, m, primes[0], field.zero, exps,
                         tuple(tuple(row) for row in prod), scalar)
    return WilsonReport(pm, scalar, plus_i, shifted)


def commutation_check(f, prime, n_out=None):
    """Derivative intertwining: ell * theta(T_ell,k f) equals
    T_ell,k+2(theta f) coefficient-wise to a shared output precision."""
    field = f.field
    q = field.q
    d = prime.degree
    if n_out is None:
        n_out = f.prec // q ** d + 1
    need = (n_out - 1) * q ** d
    if f.prec < need:
        raise ValueError(
            f"precision {f.prec} too small for commutation at output "
            f"{n_out}; need {need}")
    lhs = hecke_on_series(f.series, f.weight, prime, n_out - 1).theta()
    ell = RatK.from_poly(prime.poly)
    lhs = lhs.scale(ell)
    rhs = hecke_on_series(f.series.theta(), f.weight + 2, prime, n_out)
    return lhs.agrees_to(rhs, n_out)


def _factor_monic(a):
    """Prime-power factorization of a monic polynomial by trial division."""
    field = a.field
    out = []
    rest = a
    d = 1
    while rest.degree >= 1:
        if d > rest.degree // 2 and rest.degree >= 1:
            out.append((PrimePoly(rest.monic(), _trusted=True), 1))
            break
        found = False
        for cand in monic_polys(field, d):
            if (rest % cand).is_zero():
                e = 0
                while (rest % cand).is_zero():
                    rest = rest // cand
                    e += 1
                out.append((PrimePoly(cand), e))
                found = True
                break
        if not found:
            d += 1
    return out


def hecke_composite(f, a, k, n_out):
    """The composite operator for a monic a: the product over the prime
    powers of a, using that prime powers act as iterated prime operators."""
    if not a.is_monic():
        raise ValueError("composite Hecke operators need monic a")
    if a.degree == 0:
        return f.truncate(min(f.prec, n_out)) if f.prec > n_out else f
    factors = _factor_monic(a)
    factors.sort(key=lambda t: (t[0].degree, t[0].poly.vals))
    apps = []
    for pp, e in factors:
        apps.extend([pp] * e)
    precs = [n_out]
    for pp in reversed(apps[1:]):
        precs.append(required_input_precision(f.base.field.q, precs[-1],
                                              pp.degree))
    precs.reverse()
    cur = f
    for pp, target in zip(apps, precs):
        cur = hecke_on_series(cur, k, pp, target)
    return cur
