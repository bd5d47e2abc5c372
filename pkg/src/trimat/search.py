"""Exhaustive scans over matrix subspaces for extremal dimensions.

Subspaces of a fixed dimension are enumerated through their unique
reduced-row-echelon bases: pivot patterns in colexicographic order,
free entries in big-endian odometer order.  The scan treats one
(pattern, state-chunk) pair as a unit of work, so worker pools of any
size produce the same counters and the same first witness (least
pattern, then least odometer state).

Two interchangeable engines evaluate members.  The generic engine
builds field elements and asks the splitting oracle per matrix, with a
cache keyed by characteristic polynomial.  The numpy engine, available
for prime fields at n <= 3, evaluates whole chunks of subspaces in
parallel rounds of the same projective member order, filtering
survivors; the two engines agree member for member, so the exact
matrices_checked counters coincide.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import struct
import time
import zlib
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .field import FieldCtx, InfiniteField, field_by_name
from .matspace import Matrix, Subspace, conjugate_space
from .poly import Poly, char_poly, split_completely
from .spaces import (
    diagonal_space,
    diagonalisable,
    full_space,
    joint,
    projective_coefficients,
    sl_space,
    upper_triangular_space,
    weakly_diagonalisable,
    weakly_triangularizable,
)

try:
    import numpy as _np
except ImportError:          # pragma: no cover - numpy is a hard dependency
    _np = None


class TooLarge(Exception):
    """Requested exhaustive computation exceeds the supported size."""


class BudgetExceeded(Exception):
    """Search ran out of budget; carries the partial report."""

    def __init__(self, report):
        super().__init__("search budget exhausted")
        self.report = report


class _DeadlineHit(Exception):
    """Internal signal: scan interrupted, carries partial dim stats."""

    def __init__(self, stats):
        self.stats = stats


BASE_SCAN_CAP = 10 ** 6      # full census of the base dimension only below this
CHUNK_STATES = 1 << 18       # odometer states per work unit
GL_ORBIT_CAP = 10 ** 5       # exact orbit classification bound
CHECKPOINT_MAGIC = b"TMCK"
CHECKPOINT_VERSION = 1
CHECKPOINT_SAVE_INTERVAL = 10.0


# ---------------------------------------------------------------------------
# counting and enumeration
# ---------------------------------------------------------------------------

def gaussian_binomial(m: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^m."""
    if d < 0 or d > m:
        return 0
    num = den = 1
    for i in range(d):
        num *= q ** m - q ** i
        den *= q ** d - q ** i
    return num // den


def pivot_patterns(m: int, d: int) -> list[tuple[int, ...]]:
    """All strictly increasing pivot index tuples, colex order."""
    return sorted(itertools.combinations(range(m), d), key=lambda t: t[::-1])


def free_slots(pattern: Sequence[int], m: int) -> list[tuple[int, int]]:
    """Row-major (row index, column) positions of free RREF entries."""
    pivots = set(pattern)
    return [(i, c) for i, p in enumerate(pattern)
            for c in range(p + 1, m) if c not in pivots]


def _state_rows(ctx, pattern, slots, k, state, m, elems):
    rows = [[ctx.zero] * m for _ in pattern]
    for i, p in enumerate(pattern):
        rows[i][p] = ctx.one
    for j in range(k - 1, -1, -1):
        i, c = slots[j]
        rows[i][c] = elems[state % len(elems)]
        state //= len(elems)
    return tuple(tuple(r) for r in rows)


def enumerate_rref_bases(m: int, d: int, ctx: FieldCtx):
    """All RREF bases of d-dimensional subspaces of ctx^m, canonical order."""
    if not ctx.is_finite():
        raise InfiniteField(f"cannot enumerate subspaces over {ctx.name()}")
    elems = list(ctx.elements())
    q = len(elems)
    for pattern in pivot_patterns(m, d):
        slots = free_slots(pattern, m)
        k = len(slots)
        for state in range(q ** k):
            yield _state_rows(ctx, pattern, slots, k, state, m, elems)


def enumerate_subspaces(n: int, d: int, ctx: FieldCtx) -> Iterator[Subspace]:
    """All d-dimensional subspaces of Mat_n(ctx), canonical order."""
    for rows in enumerate_rref_bases(n * n, d, ctx):
        yield Subspace(ctx, n, rows)


def gl_order(q: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


_GL_CACHE: dict = {}


def enumerate_gl(ctx: FieldCtx, n: int) -> list[Matrix]:
    """All invertible n x n matrices; cached, guarded by GL_ORBIT_CAP."""
    if not ctx.is_finite():
        raise InfiniteField(f"cannot enumerate GL over {ctx.name()}")
    if gl_order(ctx.order(), n) > GL_ORBIT_CAP:
        raise TooLarge(f"|GL_{n}({ctx.name()})| exceeds {GL_ORBIT_CAP}")
    key = (ctx.spec, n)
    if key not in _GL_CACHE:
        elems = list(ctx.elements())
        out = []
        for entries in itertools.product(elems, repeat=n * n):
            mat = Matrix(ctx, [entries[i * n:(i + 1) * n] for i in range(n)])
            if mat.det():
                out.append(mat)
        _GL_CACHE[key] = out
    return _GL_CACHE[key]


# ---------------------------------------------------------------------------
# scan workers (module level for fork pickling)
# ---------------------------------------------------------------------------

_W: dict = {}


def _worker_init(spec: str, n: int, d: int, patterns, oracle: str,
                 engine: str, collect: bool):
    ctx = field_by_name(spec)
    elems = list(ctx.elements())
    W = {
        "ctx": ctx, "n": n, "d": d, "w": n * n, "q": len(elems),
        "elems": elems, "patterns": patterns, "oracle": oracle,
        "engine": engine, "collect": collect, "memo": {},
        "proj": list(projective_coefficients(ctx, d)) if d else [],
    }
    if engine == "numpy":
        p = ctx.char()
        W["p"] = p
        W["pmat"] = _np.array(
            [[c.val for c in row] for row in W["proj"]], dtype=_np.int16)
        if oracle == "split":
            W["table"] = _split_table(ctx, n)
    _W.clear()
    _W.update(W)


def _split_table(ctx, n):
    """Split status of t^n - a1 t^(n-1) + a2 t^(n-2) - ... indexed by
    digits (a1, ..., an) base p, most significant first."""
    p = ctx.char()
    table = _np.zeros(p ** n, dtype=bool)
    for digits in itertools.product(range(p), repeat=n):
        coeffs = [ctx.one]
        for i, a in enumerate(digits):
            e = ctx.from_int(a)
            coeffs.append(-e if i % 2 == 0 else e)
        idx = 0
        for a in digits:
            idx = idx * p + a
        table[idx] = split_completely(Poly(ctx, list(reversed(coeffs)))).splits
    return table


def _scan_unit(args):
    pattern_idx, chunk_idx, s0, s1 = args
    if _W["engine"] == "numpy":
        return _scan_unit_numpy(pattern_idx, chunk_idx, s0, s1)
    return _scan_unit_generic(pattern_idx, chunk_idx, s0, s1)


def _scan_unit_generic(pattern_idx, chunk_idx, s0, s1):
    W = _W
    ctx, n, w = W["ctx"], W["n"], W["w"]
    pattern, slots, k = W["patterns"][pattern_idx]
    elems, proj, memo = W["elems"], W["proj"], W["memo"]
    oracle = W["oracle"]
    mats = 0
    first = None
    passes = []
    for state in range(s0, s1):
        rows = _state_rows(ctx, pattern, slots, k, state, w, elems)
        good = True
        for coeffs in proj:
            vec = [ctx.zero] * w
            for c, b in zip(coeffs, rows):
                if c:
                    vec = [acc + c * e for acc, e in zip(vec, b)]
            m = Matrix.from_vec(ctx, n, tuple(vec))
            mats += 1
            if oracle == "split":
                chi = char_poly(m)
                key = chi.coeffs
                if key not in memo:
                    memo[key] = split_completely(chi).splits
                ok = memo[key]
            else:
                ok = diagonalisable(m)
            if not ok:
                good = False
                break
        if good:
            if first is None:
                first = state
            passes.append(state)
    return (pattern_idx, chunk_idx, s1 - s0, mats, first, len(passes),
            passes if W["collect"] else None)


def _scan_unit_numpy(pattern_idx, chunk_idx, s0, s1):
    W = _W
    n, w, p, d = W["n"], W["w"], W["p"], W["d"]
    pattern, slots, k = W["patterns"][pattern_idx]
    count = s1 - s0
    states = _np.arange(s0, s1, dtype=_np.int64)
    bases = _np.zeros((count, d, w), dtype=_np.int16)
    for i, piv in enumerate(pattern):
        bases[:, i, piv] = 1
    for j, (i, c) in enumerate(slots):
        bases[:, i, c] = (states // p ** (k - 1 - j)) % p
    ids = _np.arange(count)
    pmat = W["pmat"]
    oracle = W["oracle"]
    table = W.get("table")
    mats = 0
    for row in pmat:
        mem = _np.einsum("d,adw->aw", row, bases) % p
        mats += len(mem)
        if oracle == "split":
            ok = table[_chi_digits(mem, n, p)]
        else:
            ok = _diag_ok(mem, n, p, W["q"])
        ids = ids[ok]
        bases = bases[ok]
        if not len(ids):
            break
    passes = [s0 + int(i) for i in ids]
    first = passes[0] if passes else None
    return (pattern_idx, chunk_idx, count, mats, first, len(passes),
            passes if W["collect"] else None)


def _chi_digits(mem, n, p):
    """Index (a1*p + a2)*p + ... for chi = t^n - a1 t^(n-1) + a2 ... """
    if n == 1:
        return mem[:, 0]
    if n == 2:
        tr = (mem[:, 0] + mem[:, 3]) % p
        det = (mem[:, 0] * mem[:, 3] - mem[:, 1] * mem[:, 2]) % p
        return tr * p + det
    v = [mem[:, i].astype(_np.int64) for i in range(9)]
    tr = (v[0] + v[4] + v[8]) % p
    c2 = (v[0] * v[4] - v[1] * v[3] + v[0] * v[8] - v[2] * v[6]
          + v[4] * v[8] - v[5] * v[7]) % p
    det = (v[0] * (v[4] * v[8] - v[5] * v[7])
           - v[1] * (v[3] * v[8] - v[5] * v[6])
           + v[2] * (v[3] * v[7] - v[4] * v[6])) % p
    return (tr * p + c2) * p + det


def _diag_ok(mem, n, p, q):
    """Diagonalisable over F_q iff M^q = M."""
    m = mem.reshape(-1, n, n).astype(_np.int64)
    acc = m
    for _ in range(q - 1):
        acc = _np.einsum("aij,ajk->aik", acc, m) % p
    return (acc == m % p).all(axis=(1, 2))


# ---------------------------------------------------------------------------
# dimension scan driver
# ---------------------------------------------------------------------------

@dataclass
class DimScan:
    d: int
    subspaces: int
    matrices: int
    pass_count: int
    first_witness: Optional[Subspace]
    witnesses: Optional[list[Subspace]]


def _pick_engine(engine: str, ctx: FieldCtx, n: int) -> str:
    if engine == "generic":
        return "generic"
    eligible = (_np is not None and ctx.spec.kind == "prime" and n <= 3)
    if engine == "numpy":
        if not eligible:
            raise ValueError("numpy engine needs a prime field and n <= 3")
        return "numpy"
    return "numpy" if eligible else "generic"


def _witness_from_state(ctx, n, pattern, slots, k, state) -> Subspace:
    elems = list(ctx.elements())
    rows = _state_rows(ctx, pattern, slots, k, state, n * n, elems)
    return Subspace(ctx, n, rows)


def scan_dimension(ctx: FieldCtx, n: int, d: int, *, oracle: str = "split",
                   threads: int = 1, collect: bool = False,
                   engine: str = "auto", deadline: Optional[float] = None,
                   checkpoint_path: Optional[str] = None) -> DimScan:
    """Weak-check every d-dimensional subspace of Mat_n; exact counters."""
    if not ctx.is_finite():
        raise InfiniteField(f"cannot scan over {ctx.name()}")
    engine = _pick_engine(engine, ctx, n)
    w = n * n
    q = ctx.order()
    patterns = []
    for pat in pivot_patterns(w, d):
        slots = free_slots(pat, w)
        patterns.append((pat, tuple(slots), len(slots)))

    stats, chunk_results = _checkpoint_load(
        checkpoint_path, ctx, n, d, len(patterns))
    chunks_total = {}
    units = []
    for pi, (pat, slots, k) in enumerate(patterns):
        total = q ** k
        starts = range(0, total, CHUNK_STATES)
        chunks_total[pi] = len(starts)
        if pi in stats:
            continue
        done = chunk_results.get(pi, {})
        for ci, s0 in enumerate(starts):
            if ci not in done:
                units.append((pi, ci, s0, min(s0 + CHUNK_STATES, total)))

    def settle(pi):
        # all chunks in: fold them in chunk order into the pattern entry
        acc = [0, 0, None, 0, []]
        for ci in sorted(chunk_results[pi]):
            subs, mats, first, cnt, passes = chunk_results[pi][ci]
            acc[0] += subs
            acc[1] += mats
            if first is not None and acc[2] is None:
                acc[2] = first
            acc[3] += cnt
            if passes:
                acc[4].extend(passes)
        stats[pi] = acc
        del chunk_results[pi]

    for pi in [p for p in chunk_results if len(chunk_results[p]) == chunks_total[p]]:
        settle(pi)

    def merge(res):
        pi, ci, subs, mats, first, cnt, passes = res
        chunk_results.setdefault(pi, {})[ci] = (subs, mats, first, cnt, passes)
        if len(chunk_results[pi]) == chunks_total[pi]:
            settle(pi)

    init_args = (ctx.name(), n, d, patterns, oracle, engine, collect)
    last_save = time.monotonic()

    def maybe_save(force=False):
        nonlocal last_save
        if checkpoint_path is None:
            return
        now = time.monotonic()
        if force or now - last_save >= CHECKPOINT_SAVE_INTERVAL:
            _checkpoint_save(checkpoint_path, ctx, n, d, len(patterns),
                             stats, chunk_results)
            last_save = now

    def finish_partial():
        subs = sum(v[0] for v in stats.values())
        mats = sum(v[1] for v in stats.values())
        for per in chunk_results.values():
            subs += sum(c[0] for c in per.values())
            mats += sum(c[1] for c in per.values())
        return {"subspaces": subs, "matrices": mats}

    try:
        if threads <= 1 or len(units) <= 1:
            _worker_init(*init_args)
            for unit in units:
                if deadline is not None and time.monotonic() > deadline:
                    maybe_save(force=True)
                    raise _DeadlineHit(finish_partial())
                merge(_scan_unit(unit))
                maybe_save()
        else:
            import multiprocessing as mp
            mpctx = mp.get_context("fork")
            with mpctx.Pool(threads, initializer=_worker_init,
                            initargs=init_args) as pool:
                for res in pool.imap(_scan_unit, units):
                    merge(res)
                    maybe_save()
                    if deadline is not None and time.monotonic() > deadline:
                        pool.terminate()
                        maybe_save(force=True)
                        raise _DeadlineHit(finish_partial())
    except _DeadlineHit:
        raise

    subs_total = sum(v[0] for v in stats.values())
    mats_total = sum(v[1] for v in stats.values())
    pass_total = sum(v[3] for v in stats.values())
    first_witness = None
    for pi in sorted(stats):
        st = stats[pi]
        if st[2] is not None:
            pat, slots, k = patterns[pi]
            first_witness = _witness_from_state(ctx, n, pat, slots, k, st[2])
            break
    witnesses = None
    if collect:
        witnesses = []
        for pi in sorted(stats):
            pat, slots, k = patterns[pi]
            for state in sorted(stats[pi][4]):
                witnesses.append(_witness_from_state(ctx, n, pat, slots, k, state))
    if checkpoint_path is not None and os.path.exists(checkpoint_path):
        os.unlink(checkpoint_path)
    return DimScan(d, subs_total, mats_total, pass_total, first_witness, witnesses)


# ---------------------------------------------------------------------------
# checkpoints
# ---------------------------------------------------------------------------

def _checkpoint_header(ctx, n, d, pattern_count) -> bytes:
    return struct.pack(
        ">4sHIBBI", CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
        zlib.crc32(ctx.name().encode()), n, d, pattern_count)


def _checkpoint_save(path, ctx, n, d, pattern_count, stats, chunk_results):
    bitmap = bytearray((pattern_count + 7) // 8)
    done = {}
    for pi, st in stats.items():
        bitmap[pi // 8] |= 1 << (pi % 8)
        done[str(pi)] = st
    partial = {str(pi): {str(ci): list(res) for ci, res in per.items()}
               for pi, per in chunk_results.items() if per}
    trailer = {"chunk_states": CHUNK_STATES, "patterns": done,
               "partial": partial}
    blob = (_checkpoint_header(ctx, n, d, pattern_count) + bytes(bitmap)
            + json.dumps(trailer).encode())
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(blob)
    os.replace(tmp, path)


def _checkpoint_load(path, ctx, n, d, pattern_count):
    if path is None or not os.path.exists(path):
        return {}, {}
    with open(path, "rb") as fh:
        blob = fh.read()
    header = _checkpoint_header(ctx, n, d, pattern_count)
    if len(blob) < len(header) or blob[:len(header)] != header:
        return {}, {}
    bm_len = (pattern_count + 7) // 8
    trailer = json.loads(blob[len(header) + bm_len:].decode())
    if trailer.get("chunk_states") != CHUNK_STATES:
        return {}, {}
    stats = {int(k): v for k, v in trailer["patterns"].items()}
    chunks = {int(pi): {int(ci): tuple(res) for ci, res in per.items()}
              for pi, per in trailer["partial"].items()}
    return stats, chunks


# ---------------------------------------------------------------------------
# extremal dimension drivers
# ---------------------------------------------------------------------------

@dataclass
class SearchReport:
    field: str
    n: int
    quantity: str                 # "t_n" | "d_n"
    value: int
    witness: Optional[Subspace]
    exhaustive: bool
    subspaces_scanned: int
    matrices_checked: int
    wall_ms: int
    optimal_count: Optional[int] = None
    base_census: bool = False


def _default_threads(threads: Optional[int]) -> int:
    if threads is not None:
        return max(1, threads)
    return max(1, int(os.environ.get("TRIMAT_THREADS", "1")))


def tn_base_witness(ctx: FieldCtx, n: int) -> Subspace:
    """A weakly triangularizable space of the benchmark dimension
    n(n+1)/2: upper triangulars in odd characteristic, a chain of
    trace-zero 2x2 blocks (plus a 1x1 for odd n) in characteristic 2,
    where each block space is member-wise split by perfectness."""
    if ctx.char() != 2:
        return upper_triangular_space(ctx, n)
    blocks = [sl_space(ctx, 2)] * (n // 2)
    if n % 2:
        blocks.append(full_space(ctx, 1))
    out = blocks[0]
    for b in blocks[1:]:
        out = joint(out, b)
    return out


def _compute_extremal(ctx: FieldCtx, n: int, quantity: str,
                      budget: Optional[float], threads: Optional[int],
                      checkpoint: Optional[str], engine: str) -> SearchReport:
    t0 = time.monotonic()
    deadline = None if budget is None else t0 + budget
    if not ctx.is_finite():
        raise InfiniteField(f"{quantity} scan needs a finite field")
    threads = _default_threads(threads)
    q = ctx.order()
    oracle = "split" if quantity == "t_n" else "diag"

    def partial_report(value, witness, subs, mats, opt, census):
        return SearchReport(ctx.name(), n, quantity, value, witness, False,
                            subs, mats, int((time.monotonic() - t0) * 1000),
                            opt, census)

    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceeded(partial_report(0, None, 0, 0, None, False))

    if quantity == "t_n":
        base = n * (n + 1) // 2
        witness = tn_base_witness(ctx, n)
        check = weakly_triangularizable(witness)
    else:
        base = n
        witness = diagonal_space(ctx, n)
        check = weakly_diagonalisable(witness)
    assert check.ok, "benchmark witness failed its own weak check"
    value = base
    subs = mats = 0
    optimal_count = None
    base_census = False

    def run_scan(d, collect=False):
        return scan_dimension(ctx, n, d, oracle=oracle, threads=threads,
                              collect=collect, engine=engine,
                              deadline=deadline, checkpoint_path=checkpoint)

    try:
        if quantity == "t_n" and gaussian_binomial(n * n, base, q) <= BASE_SCAN_CAP:
            scan = run_scan(base)
            subs += scan.subspaces
            mats += scan.matrices
            base_census = True
            optimal_count = scan.pass_count
            assert scan.first_witness is not None
            witness = scan.first_witness
        d = base + 1
        while d <= n * n:
            scan = run_scan(d)
            subs += scan.subspaces
            mats += scan.matrices
            if scan.pass_count == 0:
                break
            value = d
            witness = scan.first_witness
            d += 1
    except _DeadlineHit as hit:
        raise BudgetExceeded(partial_report(
            value, witness, subs + hit.stats["subspaces"],
            mats + hit.stats["matrices"], optimal_count, base_census)) from None

    if quantity == "d_n":
        assert value <= n * (n + 1) // 2
    return SearchReport(ctx.name(), n, quantity, value, witness, True,
                        subs, mats, int((time.monotonic() - t0) * 1000),
                        optimal_count, base_census)


def compute_tn(ctx: FieldCtx, n: int, budget: Optional[float] = None,
               threads: Optional[int] = None, checkpoint: Optional[str] = None,
               engine: str = "auto") -> SearchReport:
    """Largest dimension of a subspace all of whose members have
    splitting characteristic polynomials."""
    return _compute_extremal(ctx, n, "t_n", budget, threads, checkpoint, engine)


def compute_dn(ctx: FieldCtx, n: int, budget: Optional[float] = None,
               threads: Optional[int] = None, checkpoint: Optional[str] = None,
               engine: str = "auto") -> SearchReport:
    """Largest dimension of a subspace of diagonalisable matrices."""
    return _compute_extremal(ctx, n, "d_n", budget, threads, checkpoint, engine)


# ---------------------------------------------------------------------------
# similarity classification of optimal spaces
# ---------------------------------------------------------------------------

@dataclass
class OptimalClass:
    representative: Subspace
    orbit_size: int


def _space_key(s: Subspace):
    return tuple(tuple(s.ctx.sort_key(e) for e in row) for row in s.basis)


def classify_optimal(ctx: FieldCtx, n: int, threads: Optional[int] = None,
                     engine: str = "auto") -> list[OptimalClass]:
    """Group the maximal-dimension passing spaces into conjugacy orbits."""
    if not ctx.is_finite():
        raise InfiniteField("classification needs a finite field")
    q = ctx.order()
    if gl_order(q, n) > GL_ORBIT_CAP:
        raise TooLarge(f"|GL_{n}({ctx.name()})| exceeds {GL_ORBIT_CAP}")
    report = compute_tn(ctx, n, threads=threads, engine=engine)
    scan = scan_dimension(ctx, n, report.value, oracle="split",
                          threads=_default_threads(threads), collect=True,
                          engine=engine)
    remaining = {_space_key(s): s for s in scan.witnesses}
    gl = enumerate_gl(ctx, n)
    classes = []
    while remaining:
        key = min(remaining)
        seed = remaining[key]
        orbit = {}
        for g in gl:
            conj = conjugate_space(seed, g)
            orbit[_space_key(conj)] = conj
        for k in orbit:
            remaining.pop(k, None)
        rep_key = min(orbit)
        classes.append(OptimalClass(orbit[rep_key], len(orbit)))
    classes.sort(key=lambda c: _space_key(c.representative))
    return classes
