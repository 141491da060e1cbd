"""Low-level packed arithmetic for polynomials and truncated series over F_q.

Everything here works on "vals": tuples of element codes (ints in [0, q)),
little-endian, with no trailing zeros, so () is the zero polynomial.  Codes
encode F_q elements in the polynomial basis, code = sum(coords[i] * p**i).

Dense polynomial products pack coefficient vectors into one big integer with
fixed-width digit slots (Kronecker substitution) and let GMP multiply; digits
are then reduced mod p with numpy.  For extension fields (r > 1) a polynomial
splits into r coordinate "planes" over F_p and plane cross-products are
folded back through the reduction of u^k by the field modulus.  A truncated
series over A = F_q[T] is packed a second time, one slot per t-power, so a
series product is again a single GMP multiply.

Overflow discipline: a digit of a raw product of packed operands is bounded
by min(len_a, len_b) * (p-1)^2, times (p-1)*(2r-1) when planes are folded;
the slot width (16 or 32 bits) is chosen per operation so that bound fits.
"""

import numpy as np
from gmpy2 import mpz

MPZ_0 = mpz(0)
W = 16  # storage digit width (bits) for packed planes


class KernelField:
    """Precomputed arithmetic tables for one F_q, indexed by element code."""

    def __init__(self, p, r, mul_codes, add_codes, inv_codes, frob_codes, red):
        self.p = p
        self.r = r
        self.q = q = p ** r
        self.mul = mul_codes          # mul[a*q+b]
        self.add = add_codes          # add[a*q+b]
        self.inv = inv_codes          # inv[a], inv[0] unused
        self.frob = frob_codes        # frob[a] = a**p
        neg = [0] * q
        for a in range(q):
            for b in range(q):
                if add_codes[a * q + b] == 0:
                    neg[a] = b
                    break
        self.neg = neg
        self.sub = [add_codes[a * q + neg[b]] for a in range(q) for b in range(q)]
        self.mul_np = np.array(mul_codes, dtype=np.int64).reshape(q, q)
        self.sub_np = np.array(self.sub, dtype=np.int64).reshape(q, q)
        self.red = red                # red[k]: F_p coords of u^k, r <= k <= 2r-2

    def elem_pow(self, a, e):
        if e < 0:
            a = self.inv[a]
            e = -e
        res, base = 1, a
        while e:
            if e & 1:
                res = self.mul[res * self.q + base]
            base = self.mul[base * self.q + base]
            e >>= 1
        return res


def make_kernel_field(p, r, modulus_digits):
    """Build tables for F_q = F_p[u]/(modulus); modulus monic of length r+1."""
    q = p ** r
    if r == 1:
        mul_codes = [(a * b) % p for a in range(q) for b in range(q)]
        add_codes = [(a + b) % p for a in range(q) for b in range(q)]
        inv_codes = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        frob_codes = list(range(p))
        return KernelField(p, r, mul_codes, add_codes, inv_codes, frob_codes, [])

    def from_digits(ds):
        return sum(d * p ** i for i, d in enumerate(ds))

    # u^k for k in [r, 2r-2] expressed on the u^0..u^{r-1} basis
    red_rows = {}
    cur = [(-modulus_digits[i]) % p for i in range(r)]
    red_rows[r] = tuple(cur)
    for k in range(r + 1, 2 * r - 1):
        nxt = [0] * r
        for i, d in enumerate(cur):
            if d:
                if i + 1 < r:
                    nxt[i + 1] = (nxt[i + 1] + d) % p
                else:
                    for j in range(r):
                        nxt[j] = (nxt[j] + d * red_rows[r][j]) % p
        cur = nxt
        red_rows[k] = tuple(cur)
    red = [red_rows.get(k, ()) for k in range(2 * r - 1)]

    def mul_digits(da, db):
        acc = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    acc[i + j] = (acc[i + j] + x * y) % p
        out = acc[:r]
        for k in range(r, 2 * r - 1):
            if acc[k]:
                row = red_rows[k]
                for j in range(r):
                    out[j] = (out[j] + acc[k] * row[j]) % p
        return out

    digits = [[(a // p ** i) % p for i in range(r)] for a in range(q)]
    mul_codes = [0] * (q * q)
    add_codes = [0] * (q * q)
    for a in range(q):
        da = digits[a]
        for b in range(q):
            db = digits[b]
            add_codes[a * q + b] = from_digits([(x + y) % p for x, y in zip(da, db)])
            mul_codes[a * q + b] = from_digits(mul_digits(da, db))

    def code_pow(a, e):
        res, base = 1, a
        while e:
            if e & 1:
                res = mul_codes[res * q + base]
            base = mul_codes[base * q + base]
            e >>= 1
        return res

    inv_codes = [0] + [code_pow(a, q - 2) for a in range(1, q)]
    frob_codes = [code_pow(a, p) for a in range(q)]
    return KernelField(p, r, mul_codes, add_codes, inv_codes, frob_codes, red)


# ---------------------------------------------------------------------------
# vals-level polynomial arithmetic


def strip(vals):
    n = len(vals)
    while n and not vals[n - 1]:
        n -= 1
    if isinstance(vals, np.ndarray):
        return tuple(vals[:n].tolist())
    return tuple(vals[:n])


def poly_add(kf, a, b):
    if len(a) < len(b):
        a, b = b, a
    q, add = kf.q, kf.add
    out = list(a)
    for i, c in enumerate(b):
        out[i] = add[out[i] * q + c]
    return strip(out)


def poly_neg(kf, a):
    neg = kf.neg
    return tuple(neg[c] for c in a)


def poly_sub(kf, a, b):
    return poly_add(kf, a, poly_neg(kf, b))


def poly_scalar(kf, a, c):
    if c == 0:
        return ()
    if c == 1:
        return tuple(a)
    q, mul = kf.q, kf.mul
    cq = c * q
    return tuple(mul[cq + x] for x in a)


def _pack(arr, w):
    b = np.asarray(arr, dtype='<u2' if w == 16 else '<u4').tobytes()
    return mpz(int.from_bytes(b, 'little'))


def _unpack(x, w, n, p):
    b = x.to_bytes(n * (w // 8), 'little')
    arr = np.frombuffer(b, '<u2' if w == 16 else '<u4')
    return arr.astype(np.int64) % p


def _planes(kf, vals):
    arr = np.asarray(vals, dtype=np.int64)
    p = kf.p
    return [(arr // p ** j) % p for j in range(kf.r)]


def _codes_from_planes(kf, planes):
    p = kf.p
    acc = planes[0].copy()
    for j in range(1, kf.r):
        acc += planes[j] * p ** j
    return acc


def _fold_buckets(kf, buckets):
    """Fold plane cross-product buckets u^k, k >= r, back onto u^0..u^{r-1}."""
    r = kf.r
    out = [buckets[j] for j in range(r)]
    for k in range(r, 2 * r - 1):
        if buckets[k]:
            row = kf.red[k]
            for j in range(r):
                if row[j]:
                    out[j] += row[j] * buckets[k]
    return out


def poly_mul(kf, a, b):
    la, lb = len(a), len(b)
    if not la or not lb:
        return ()
    if la > lb:
        a, b, la, lb = b, a, lb, la
    q, mul, add = kf.q, kf.mul, kf.add
    if la * lb <= 256:
        out = [0] * (la + lb - 1)
        for i, x in enumerate(a):
            if x:
                xq = x * q
                for j, y in enumerate(b):
                    if y:
                        k = i + j
                        out[k] = add[out[k] * q + mul[xq + y]]
        return strip(out)
    p, r = kf.p, kf.r
    fold = 1 if r == 1 else (p - 1) * (2 * r - 1)
    bound = la * (p - 1) * (p - 1) * fold
    w = 16 if bound < 1 << 16 else 32
    n_out = la + lb - 1
    if r == 1:
        x = _pack(a, w) * _pack(b, w)
        return strip(_unpack(x, w, n_out, p))
    pa = [_pack(pl, w) for pl in _planes(kf, a)]
    pb = [_pack(pl, w) for pl in _planes(kf, b)]
    buckets = [MPZ_0] * (2 * r - 1)
    for i in range(r):
        if pa[i]:
            for j in range(r):
                if pb[j]:
                    buckets[i + j] += pa[i] * pb[j]
    planes = [_unpack(x, w, n_out, p) for x in _fold_buckets(kf, buckets)]
    return strip(_codes_from_planes(kf, planes))


def poly_divmod(kf, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    la, lb = len(a), len(b)
    if la < lb:
        return (), tuple(a)
    q, mul, sub = kf.q, kf.mul, kf.sub
    inv_lead = kf.inv[b[-1]]
    if la <= 64 or lb <= 4:
        rem = list(a)
        quo = [0] * (la - lb + 1)
        for k in range(la - lb, -1, -1):
            lead = rem[k + lb - 1]
            if lead:
                f = mul[lead * q + inv_lead]
                quo[k] = f
                fq = f * q
                for j in range(lb - 1):
                    if b[j]:
                        rem[k + j] = sub[rem[k + j] * q + mul[fq + b[j]]]
                rem[k + lb - 1] = 0
        return strip(quo), strip(rem[:lb - 1])
    rem = np.array(a, dtype=np.int64)
    barr = np.array(b, dtype=np.int64)
    quo = np.zeros(la - lb + 1, dtype=np.int64)
    if kf.r == 1:
        p = kf.p
        il = int(inv_lead)
        for k in range(la - lb, -1, -1):
            lead = int(rem[k + lb - 1])
            if lead:
                f = (lead * il) % p
                quo[k] = f
                rem[k:k + lb] = (rem[k:k + lb] - f * barr) % p
    else:
        mul_np, sub_np = kf.mul_np, kf.sub_np
        for k in range(la - lb, -1, -1):
            lead = int(rem[k + lb - 1])
            if lead:
                f = mul[lead * q + inv_lead]
                quo[k] = f
                seg = rem[k:k + lb]
                rem[k:k + lb] = sub_np[seg, mul_np[f, barr]]
    return strip(quo), strip(rem[:lb - 1])


def poly_mulmod(kf, a, b, mod):
    return poly_divmod(kf, poly_mul(kf, a, b), mod)[1]


def poly_gcd(kf, a, b):
    if len(a) <= 64 and len(b) <= 64:
        while b:
            a, b = b, poly_divmod(kf, a, b)[1]
        if not a:
            return ()
        return poly_scalar(kf, a, kf.inv[a[-1]])
    # in-place Euclid on int64 arrays; lengths tracked by hand
    A = np.array(a, dtype=np.int64)
    la = len(a)
    B = np.array(b, dtype=np.int64)
    lb = len(b)
    q, mul, inv = kf.q, kf.mul, kf.inv
    if kf.r == 1:
        p = kf.p
        while lb:
            while la >= lb:
                lead = int(A[la - 1])
                if lead:
                    f = mul[lead * q + inv[int(B[lb - 1])]]
                    A[la - lb:la] = (A[la - lb:la] - f * B[:lb]) % p
                la -= 1
                while la and not A[la - 1]:
                    la -= 1
            A, B, la, lb = B, A, lb, la
    else:
        mul_np, sub_np = kf.mul_np, kf.sub_np
        while lb:
            while la >= lb:
                lead = int(A[la - 1])
                if lead:
                    f = mul[lead * q + inv[int(B[lb - 1])]]
                    seg = A[la - lb:la]
                    A[la - lb:la] = sub_np[seg, mul_np[f, B[:lb]]]
                la -= 1
                while la and not A[la - 1]:
                    la -= 1
            A, B, la, lb = B, A, lb, la
    if not la:
        return ()
    out = strip(A[:la])
    return poly_scalar(kf, out, kf.inv[out[-1]])


def poly_frob(kf, a, e=1):
    """(sum a_i T^i)^(p^e): Frobenius on coefficients, exponents scaled."""
    if not a or e == 0:
        return tuple(a)
    pe = kf.p ** e
    cs = list(a)
    for _ in range(e):
        frob = kf.frob
        cs = [frob[c] for c in cs]
    out = [0] * ((len(a) - 1) * pe + 1)
    for i, c in enumerate(cs):
        out[i * pe] = c
    return tuple(out)


def poly_eval(kf, a, c):
    q, mul, add = kf.q, kf.mul, kf.add
    acc = 0
    for coef in reversed(a):
        acc = add[mul[acc * q + c] * q + coef]
    return acc


def poly_pow_mod(kf, a, e, mod):
    res = (1,)
    base = poly_divmod(kf, a, mod)[1]
    while e:
        if e & 1:
            res = poly_mulmod(kf, res, base, mod)
        e >>= 1
        if e:
            base = poly_mulmod(kf, base, base, mod)
    return res


# ---------------------------------------------------------------------------
# packed series over A = F_q[T]
#
# A packed series of precision N is a list of N+1 coefficients, each an
# r-tuple of mpz packing the F_p planes of an A-coefficient at width W,
# always digit-normalized (every digit < p).


def pack_vals(kf, vals):
    if not vals:
        return (MPZ_0,) * kf.r
    if kf.r == 1:
        return (_pack(vals, W),)
    return tuple(_pack(pl, W) for pl in _planes(kf, vals))


def unpack_vals(kf, planes):
    n = 0
    for x in planes:
        if x:
            bl = (x.bit_length() + W - 1) // W
            if bl > n:
                n = bl
    if n == 0:
        return ()
    p = kf.p
    if kf.r == 1:
        return strip(_unpack(planes[0], W, n, p))
    arrs = [_unpack(x, W, n, p) for x in planes]
    return strip(_codes_from_planes(kf, arrs))


def normalize_planes(kf, planes):
    """Reduce every W-bit digit mod p (digits must still fit in W bits)."""
    p = kf.p
    out = []
    for x in planes:
        if not x:
            out.append(MPZ_0)
        else:
            n = (x.bit_length() + W - 1) // W
            out.append(_pack(_unpack(x, W, n, p), W))
    return tuple(out)


def planes_digit_len(planes):
    n = 0
    for x in planes:
        if x:
            bl = (x.bit_length() + W - 1) // W
            if bl > n:
                n = bl
    return n


def planes_mul(kf, a, b, la=None, lb=None):
    """Product of two normalized packed coefficients; result normalized.

    la/lb: digit lengths if already known (used for the overflow bound).
    """
    if la is None:
        la = planes_digit_len(a)
    if lb is None:
        lb = planes_digit_len(b)
    if la == 0 or lb == 0:
        return (MPZ_0,) * kf.r
    p, r = kf.p, kf.r
    fold = 1 if r == 1 else (p - 1) * (2 * r - 1)
    bound = min(la, lb) * (p - 1) * (p - 1) * fold
    if bound >= 1 << 16:
        # rare large-by-large case: go through vals with 32-bit packing
        return pack_vals(kf, poly_mul(kf, unpack_vals(kf, a), unpack_vals(kf, b)))
    if r == 1:
        return normalize_planes(kf, (a[0] * b[0],))
    buckets = [MPZ_0] * (2 * r - 1)
    for i in range(r):
        if a[i]:
            for j in range(r):
                if b[j]:
                    buckets[i + j] += a[i] * b[j]
    return normalize_planes(kf, tuple(_fold_buckets(kf, buckets)))


def ser_from_vals(kf, vals_list, prec):
    coeffs = [pack_vals(kf, v) for v in vals_list[:prec + 1]]
    zero = (MPZ_0,) * kf.r
    while len(coeffs) < prec + 1:
        coeffs.append(zero)
    return coeffs


def ser_to_vals(kf, coeffs):
    return [unpack_vals(kf, c) for c in coeffs]


def ser_zero(kf, prec):
    z = (MPZ_0,) * kf.r
    return [z] * (prec + 1)


def _ser_digit_len(coeffs):
    n = 1
    for planes in coeffs:
        for x in planes:
            if x:
                bl = (x.bit_length() + W - 1) // W
                if bl > n:
                    n = bl
    return n


def ser_mul(kf, f, g, out_prec):
    """Truncated Cauchy product via a single two-level packed multiply."""
    lf = min(len(f), out_prec + 1)
    lg = min(len(g), out_prec + 1)
    f = f[:lf]
    g = g[:lg]
    p, r = kf.p, kf.r
    cf = _ser_digit_len(f)
    cg = _ser_digit_len(g)
    stride = cf + cg
    fold = 1 if r == 1 else (p - 1) * (2 * r - 1)
    bound = min(lf, lg) * min(cf, cg) * (p - 1) * (p - 1) * fold
    w = 16 if bound < 1 << 16 else 32
    sb = stride * (w // 8)

    def pack_series(coeffs, plane):
        if w == 16:
            parts = [c[plane].to_bytes(sb, 'little') for c in coeffs]
        else:
            parts = []
            for c in coeffs:
                x = c[plane]
                if x:
                    nd = (x.bit_length() + W - 1) // W
                    b = _unpack(x, W, nd, p).astype('<u4').tobytes()
                    parts.append(b + b'\0' * (sb - len(b)))
                else:
                    parts.append(b'\0' * sb)
        return mpz(int.from_bytes(b''.join(parts), 'little'))

    n_out = out_prec + 1
    if r == 1:
        out_planes = [pack_series(f, 0) * pack_series(g, 0)]
    else:
        pf = [pack_series(f, j) for j in range(r)]
        pg = [pack_series(g, j) for j in range(r)]
        buckets = [MPZ_0] * (2 * r - 1)
        for i in range(r):
            if pf[i]:
                for j in range(r):
                    if pg[j]:
                        buckets[i + j] += pf[i] * pg[j]
        out_planes = _fold_buckets(kf, buckets)
    total_slots = lf + lg  # product occupies lf+lg-1 slots; one slack slot
    plane_arrs = []
    for x in out_planes:
        b = x.to_bytes(total_slots * sb, 'little')[:n_out * sb]
        arr = np.frombuffer(b, '<u2' if w == 16 else '<u4').astype(np.int64) % p
        plane_arrs.append(arr.reshape(n_out, stride))
    res = []
    for n in range(n_out):
        res.append(tuple(_pack(pa[n], W) for pa in plane_arrs))
    return res


def ser_add(kf, f, g, out_prec):
    lf, lg = len(f), len(g)
    zero = (MPZ_0,) * kf.r
    out = []
    for n in range(out_prec + 1):
        a = f[n] if n < lf else zero
        b = g[n] if n < lg else zero
        out.append(normalize_planes(kf, tuple(x + y for x, y in zip(a, b))))
    return out


def ser_sum(kf, series_list, out_prec):
    """Sum many normalized packed series: raw mpz adds, few normalizations."""
    r = kf.r
    acc = [[MPZ_0] * r for _ in range(out_prec + 1)]
    count = 0
    limit = ((1 << 16) - 1) // (kf.p - 1) - 1
    for f in series_list:
        for n in range(min(len(f), out_prec + 1)):
            c = f[n]
            a = acc[n]
            for j in range(r):
                if c[j]:
                    a[j] += c[j]
        count += 1
        if count >= limit:
            acc = [list(normalize_planes(kf, tuple(a))) for a in acc]
            count = 1
    return [normalize_planes(kf, tuple(a)) for a in acc]


def ser_scalar_poly(kf, f, vals):
    """Multiply every coefficient of a packed series by a fixed small poly."""
    zero = (MPZ_0,) * kf.r
    if not vals:
        return [zero] * len(f)
    pv = pack_vals(kf, vals)
    lv = planes_digit_len(pv)
    return [planes_mul(kf, c, pv, lb=lv) for c in f]


def ser_scalar_elem(kf, f, code):
    """Multiply every coefficient by an element of F_q (given as code)."""
    if code == 0:
        return ser_zero(kf, len(f) - 1)
    if code == 1:
        return list(f)
    return ser_scalar_poly(kf, f, (code,))


def ser_frobenius(kf, f, e, out_prec):
    """f^(p^e) for a packed series: coefficient Frobenius, exponents scaled."""
    pe = kf.p ** e
    out = ser_zero(kf, out_prec)
    for n in range(len(f)):
        if n * pe > out_prec:
            break
        vals = unpack_vals(kf, f[n])
        if vals:
            out[n * pe] = pack_vals(kf, poly_frob(kf, vals, e))
    return out


def ser_inv_unit(kf, f, out_prec):
    """Newton inversion; f[0] must be a nonzero constant of F_q."""
    c0 = unpack_vals(kf, f[0])
    if len(c0) != 1:
        raise ValueError("series inverse requires a unit constant term")
    x = [pack_vals(kf, (kf.inv[c0[0]],))]
    one = [pack_vals(kf, (1,))]
    known = 0
    p1 = kf.p - 1
    while known < out_prec:
        known = min(2 * known + 1, out_prec)
        fx = ser_mul(kf, f, x, known)
        neg_fx = [normalize_planes(kf, tuple(p1 * y for y in c)) if any(c)
                  else c for c in fx]
        err = ser_add(kf, one, neg_fx, known)       # 1 - f*x
        corr = ser_mul(kf, x, err, known)
        x = ser_add(kf, x, corr, known)
    return x[:out_prec + 1]
