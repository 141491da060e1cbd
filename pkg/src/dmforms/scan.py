"""Separability scan: for each weight and each prime, the minimal polynomial
of the Hecke matrix and whether it is separable over K.

Tasks are the (weight, prime) pairs with a nonzero space, ordered by weight
and then by (degree, coefficient tuple) of the prime.  Workers are pure;
results are emitted in canonical task order no matter how many workers run,
so the output is byte-identical for any job count.
"""

import multiprocessing as mp
from dataclasses import dataclass

from .exactla import MatrixK, is_separable, minimal_polynomial
from .hecke import hecke_matrix, required_input_precision
from .modforms import _packed_monomial, monomial_basis
from .polyring import monic_irreducibles


@dataclass(frozen=True)
class ScanRow:
    q: int
    k: int
    m: int
    prime: str
    dim: int
    minpoly_degree: int
    separable: bool
    inseparable_for_all_primes_so_far: bool


def scan_primes(field, prime_deg_max):
    """All primes other than T of degree <= prime_deg_max, in scan order."""
    out = []
    for d in range(1, prime_deg_max + 1):
        out.extend(monic_irreducibles(field, d, exclude_T=True))
    return out


def _warm_caches(field, weights, m, prime_deg_max):
    dmax = prime_deg_max
    for k in weights:
        basis = monomial_basis(field, k, m)
        if not basis:
            continue
        n_out = basis[-1].j
        prec = max(required_input_precision(field.q, n_out, dmax), n_out)
        for b in basis:
            _packed_monomial(field, b.i, b.j, prec)


def _scan_task(args):
    field, k, m, prime = args
    try:
        matrix = hecke_matrix(field, k, m, prime)
        mu = minimal_polynomial(MatrixK.from_hecke(matrix))
        return matrix.dim, mu.degree, is_separable(mu)
    except Exception as exc:  # collected per task by the driver
        return RuntimeError(f"{type(exc).__name__}: {exc}")


def separability_scan(field, k_max, prime_deg_max, m=0, jobs=1,
                      progress=None):
    """Run the scan; returns (rows, summary) where summary is the sorted
    list of weights whose minimal polynomial is inseparable at every
    scanned prime.  Per-task failures are collected and raised together
    after the sweep, never silently dropped."""
    weights = [k for k in range(1, k_max + 1) if monomial_basis(field, k, m)]
    primes = scan_primes(field, prime_deg_max)
    _warm_caches(field, weights, m, prime_deg_max)
    tasks = [(field, k, m, pp) for k in weights for pp in primes]
    if jobs > 1 and len(tasks) > 1:
        ctx = mp.get_context("fork")
        with ctx.Pool(jobs) as pool:
            results = []
            for idx, res in enumerate(pool.imap(_scan_task, tasks,
                                                chunksize=1)):
                results.append(res)
                if progress:
                    progress(idx + 1, len(tasks))
    else:
        results = []
        for idx, t in enumerate(tasks):
            results.append(_scan_task(t))
            if progress:
                progress(idx + 1, len(tasks))
    rows = []
    failures = []
    i = 0
    summary = []
    for k in weights:
        all_insep = True
        for pp in primes:
            res = results[i]
            i += 1
            if isinstance(res, Exception):
                failures.append((k, str(pp), res))
                all_insep = False
                continue
            dim, deg, sep = res
            all_insep = all_insep and not sep
            rows.append(ScanRow(field.q, k, m, str(pp), dim, deg, sep,
                                all_insep))
        if all_insep:
            summary.append(k)
    if failures:
        detail = "; ".join(f"k={k} prime={p}: {e}" for k, p, e in failures)
        raise RuntimeError(f"scan tasks failed: {detail}")
    return rows, summary


def rows_to_csv(rows):
    header = ("q,k,m,prime,dim,minpoly_degree,separable,"
              "inseparable_for_all_primes_so_far")
    lines = [header]
    for r in rows:
        lines.append(f"{r.q},{r.k},{r.m},{r.prime},{r.dim},"
                     f"{r.minpoly_degree},{str(r.separable).lower()},"
                     f"{str(r.inseparable_for_all_primes_so_far).lower()}")
    return "\n".join(lines) + "\n"


def rows_to_json(rows, summary):
    import json
    return json.dumps({
        "rows": [r.__dict__ for r in rows],
        "summary_weights": summary,
    }, indent=1, sort_keys=True) + "\n"


def rows_to_pretty(rows, summary):
    out = []
    fmt = "{:>3} {:>4} {:>2} {:<22} {:>4} {:>7} {:>9} {:>8}"
    out.append(fmt.format("q", "k", "m", "prime", "dim", "mindeg",
                          "separable", "all-insep"))
    for r in rows:
        out.append(fmt.format(r.q, r.k, r.m, r.prime, r.dim,
                              r.minpoly_degree,
                              "yes" if r.separable else "no",
                              "yes" if r.inseparable_for_all_primes_so_far
                              else "no"))
    out.append("inseparable for all scanned primes at weights: "
               + ", ".join(str(k) for k in summary))
    return "\n".join(out) + "\n"
