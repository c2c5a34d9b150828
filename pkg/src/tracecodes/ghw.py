"""Generalized Hamming weights of the defining-set codes.

For a code of full formal dimension K = 2s, the r-th GHW is
``n - max |D cap H_r^perp|`` over r-dimensional message subspaces H_r,
the annihilator being taken under the trace pairing Tr(u x + v y).
Equivalently ``n - max |D cap H|`` over (K - r)-dimensional point
subspaces H.  Brute force enumerates whichever side is cheaper:

* dual side: r-dim H_r; |D cap H_r^perp| is the popcount of the AND of
  precomputed per-message indicator bitsets over D;
* direct side: (K-r)-dim H; |D cap H| sums a membership histogram over
  the span of H.

Both run in "column coordinates": the j-th column of the generator matrix
is L2(d_j), where Tr(u x + v y) = <(u, v), L2(x, y)>.  For degenerate
codes (nonzero messages giving the zero word) the engine runs on the
columns of an independent subset of generator rows instead.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import numpy as np

from . import gf2
from .codegen import (
    CodeSpec,
    build_defining_set,
    closed_form_degenerate,
    empirical_dimension,
    generator_matrix,
    generator_rows_int,
    point_dual_coords,
    trace_product_table,
    unpack,
)
from .expsum import parity_classes, s_value
from .numtheory import gaussian_binomial
from .subspaces import (
    BudgetExceeded,
    SubspaceBasis,
    batch_span,
    decode,
    iter_batches,
    pivot_sets,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**10

Side = Literal["dual", "direct"]


# -- trace pairing on F_q^2 ----------------------------------------------------


def _pairing_rows(spec_or_ctx) -> list[int]:
    ctx = getattr(spec_or_ctx, "ctx", spec_or_ctx)
    s = ctx.s
    lc = ctx.dual_coords
    # column j of the L2 matrix is L2(e_j)
    cols = [int(lc[1 << j]) if j < s else int(lc[1 << (j - s)]) << s for j in range(2 * s)]
    return gf2.transpose(cols, 2 * s)


@lru_cache(maxsize=8)
def _pairing(ctx) -> tuple[tuple[int, ...], tuple[int, ...]]:
    rows = _pairing_rows(ctx)
    return tuple(rows), tuple(gf2.inverse(rows))


def l2_map(ctx, z: int) -> int:
    return gf2.mat_vec(_pairing(ctx)[0], z)


def l2_inverse(ctx, y: int) -> int:
    return gf2.mat_vec(_pairing(ctx)[1], y)


def trace_pairing(ctx, w: int, z: int) -> int:
    """Tr(w_1 z_1 + w_2 z_2) for packed pairs."""
    s = ctx.s
    mask = (1 << s) - 1
    return ctx.trace(ctx.mul(w & mask, z & mask) ^ ctx.mul(w >> s, z >> s))


def dual_subspace(ctx, H: SubspaceBasis) -> SubspaceBasis:
    """Annihilator of H in F_q^2 under the trace pairing."""
    K = 2 * ctx.s
    if H.ambient_dim != K:
        raise ValueError(f"expected a subspace of GF(2)^{K}")
    null = gf2.nullspace(H.rows, K)
    return SubspaceBasis.span_of([l2_inverse(ctx, y) for y in null], K)


# -- column engine -------------------------------------------------------------


@dataclass
class SearchResult:
    best: int
    witness: tuple[int, ...]  # rows of the maximising subspace (engine coordinates)
    side: Side
    count: int  # subspaces enumerated
    identity_checked: int = 0
    identity_failures: int = 0


class ColumnEngine:
    """Max-intersection search for a multiset of columns in GF(2)^K."""

    def __init__(self, columns: np.ndarray, ambient_dim: int):
        self.K = ambient_dim
        self.columns = np.asarray(columns, dtype=np.int64)
        self.n = len(self.columns)
        self.words = max(1, math.ceil(self.n / 64))
        self.hist = np.bincount(self.columns, minlength=1 << ambient_dim).astype(np.int64)
        self._indicators: np.ndarray | None = None

    @property
    def indicators(self) -> np.ndarray:
        """Row w: bitset over columns j with <w, c_j> = 0, as uint64 words."""
        if self._indicators is None:
            size = 1 << self.K
            out = np.zeros((size, self.words), dtype=np.uint64)
            step = max(1, (1 << 22) // max(self.n, 1))
            for start in range(0, size, step):
                w = np.arange(start, min(start + step, size), dtype=np.int64)[:, None]
                zero = (np.bitwise_count(w & self.columns[None, :]) & 1) == 0
                packed = np.packbits(zero, axis=1, bitorder="little")
                pad = self.words * 8 - packed.shape[1]
                if pad:
                    packed = np.pad(packed, ((0, 0), (0, pad)))
                out[start : start + len(w)] = packed.view(np.uint64)
            self._indicators = out
        return self._indicators

    def cost(self, r: int, side: Side) -> int:
        """Estimated word operations: RREF construction plus evaluation."""
        if side == "dual":
            return gaussian_binomial(self.K, r) * (r * self.K + r * self.words)
        k = self.K - r
        return gaussian_binomial(self.K, k) * (k * self.K + (1 << k))

    def cheaper_side(self, r: int) -> Side:
        return "dual" if self.cost(r, "dual") <= self.cost(r, "direct") else "direct"

    def annihilated(self, rows) -> int:
        """#{j : <w, c_j> = 0 for every row w}."""
        if len(rows) == 0:
            return self.n
        acc = self.indicators[int(rows[0])].copy()
        for w in rows[1:]:
            acc &= self.indicators[int(w)]
        return int(np.bitwise_count(acc).sum())

    def contained(self, rows) -> int:
        """#{j : c_j in span(rows)}."""
        return int(self.hist[gf2.span([int(r) for r in rows])].sum())

    def _eval_dual(self, rows: np.ndarray, spectrum, q2: int):
        ind = self.indicators
        acc = ind[rows[:, 0]]
        for i in range(1, rows.shape[1]):
            acc &= ind[rows[:, i]]
        counts = np.bitwise_count(acc).sum(axis=1, dtype=np.int64)
        failures = 0
        if spectrum is not None:
            r = rows.shape[1]
            b_sum = spectrum[batch_span(rows)].sum(axis=1)
            failures = int(np.count_nonzero((counts + 1) << (r + 1) != q2 + b_sum))
        return counts, failures

    def _eval_direct(self, rows: np.ndarray):
        return self.hist[batch_span(rows)].sum(axis=1)

    def _search_pivot_set(self, pivots, side: Side, spectrum, q2: int):
        best, best_t, checked, failures = -1, 0, 0, 0
        for start, rows in iter_batches(self.K, pivots):
            if side == "dual":
                counts, fails = self._eval_dual(rows, spectrum, q2)
                if spectrum is not None:
                    checked += len(rows)
                    failures += fails
            else:
                counts = self._eval_direct(rows)
            i = int(np.argmax(counts))
            if counts[i] > best:
                best, best_t = int(counts[i]), start + i
        return best, best_t, checked, failures

    def search(
        self,
        r: int,
        side: Side | None = None,
        budget: int | None = DEFAULT_BUDGET,
        spectrum: np.ndarray | None = None,
        q2: int = 0,
        threads: int = 1,
    ) -> SearchResult:
        """max over r-dim H of #{j: c_j in H^perp}, enumerated on ``side``.

        ``spectrum`` (dual side only) enables the per-subspace check
        2^(r+1) (count + 1) == q2 + sum_{beta in H} spectrum[beta].
        """
        if not 1 <= r <= self.K:
            raise ValueError(f"r must lie in 1..{self.K}")
        side = side or self.cheaper_side(r)
        cost = self.cost(r, side)
        if budget is not None and cost > budget:
            raise BudgetExceeded(cost, budget, "word operations")
        dim = r if side == "dual" else self.K - r
        psets = pivot_sets(self.K, dim)

        def run(p):
            return self._search_pivot_set(p, side, spectrum if side == "dual" else None, q2)

        if side == "dual":
            self.indicators  # build once before any worker touches it
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, psets))
        else:
            results = [run(p) for p in psets]

        best, witness = -1, ()
        checked = failures = 0
        for p, (b, t, c, f) in zip(psets, results):
            checked += c
            failures += f
            if b > best:
                best, witness = b, decode(self.K, p, t)
        if side == "direct":
            witness = gf2.rref(gf2.nullspace(witness, self.K))
        return SearchResult(
            best=best,
            witness=tuple(witness),
            side=side,
            count=gaussian_binomial(self.K, dim),
            identity_checked=checked,
            identity_failures=failures,
        )


@dataclass(frozen=True, eq=False)
class CodeColumns:
    """Engine plus the map from engine coordinates back to messages (u, v)."""

    engine: ColumnEngine
    message_of: tuple[int, ...]  # engine basis vector i -> packed message
    kernel: tuple[int, ...]  # kernel of (u, v) -> c(u, v), RREF
    full: bool  # engine coordinates are the packed messages themselves

    def lift(self, rows) -> SubspaceBasis:
        """Preimage in F_q^2 of the code subspace spanned by engine rows."""
        msgs = []
        for w in rows:
            m = 0
            for i, base in enumerate(self.message_of):
                if int(w) >> i & 1:
                    m ^= base
            msgs.append(m)
        K = len(self.message_of) + len(self.kernel)
        return SubspaceBasis.span_of(msgs + list(self.kernel), K)


@lru_cache(maxsize=16)
def code_columns(spec: CodeSpec) -> CodeColumns:
    dset = build_defining_set(spec)
    K = 2 * spec.s
    rank, kernel = empirical_dimension(spec)
    if rank == K:
        cols = point_dual_coords(spec, dset.points)
        return CodeColumns(ColumnEngine(cols, K), tuple(1 << j for j in range(K)), (), True)
    gen = generator_matrix(spec).astype(np.int64)
    independent, _ = gf2.row_dependencies(generator_rows_int(spec))
    cols = np.zeros(dset.n, dtype=np.int64)
    for i, row in enumerate(independent):
        cols |= gen[row] << i
    kernel_basis = gf2.rref(kernel)
    return CodeColumns(ColumnEngine(cols, rank), tuple(1 << j for j in independent), kernel_basis, False)


@lru_cache(maxsize=16)
def message_engine(spec: CodeSpec) -> ColumnEngine:
    """Engine indexed by packed messages, regardless of degeneracy."""
    return ColumnEngine(point_dual_coords(spec, build_defining_set(spec).points), 2 * spec.s)


def intersect_count(spec: CodeSpec, H: SubspaceBasis) -> int:
    """|D cap H| for a point subspace H, via AND/popcount over H^perp."""
    perp = dual_subspace(spec.ctx, H)
    return message_engine(spec).annihilated(perp.rows)


def intersect_count_direct(spec: CodeSpec, H: SubspaceBasis) -> int:
    member = build_defining_set(spec).member
    return int(sum(member[v] for v in H.elements()))


# -- character sums B_H ---------------------------------------------------------


def defining_function_tables(spec: CodeSpec) -> tuple[np.ndarray, np.ndarray]:
    """(Tr(a x^e))_x and (Tr(b y))_y."""
    ctx = spec.ctx
    fx = ctx.trace_array(ctx.mul_array(spec.a, ctx.power_table(spec.params.exponent)))
    fy = ctx.trace_array(ctx.mul_array(spec.b, ctx.elements))
    return fx, fy


def b_h_sum(spec: CodeSpec, H: SubspaceBasis) -> int:
    """sum over (x,y) in F_q^2 and beta in H of (-1)^Tr(beta.(x,y) + a x^e + b y)."""
    table = trace_product_table(spec.ctx)
    fx, fy = defining_function_tables(spec)
    q = spec.q
    pts = np.arange(q * q, dtype=np.int64)
    xs, ys = unpack(pts, spec.s)
    base = fx[xs] ^ fy[ys]
    total = 0
    for beta in H.elements():
        b1, b2 = unpack(beta, spec.s)
        bits = table[b1, xs] ^ table[b2, ys] ^ base
        total += q * q - 2 * int(bits.sum())
    return total


@lru_cache(maxsize=16)
def b_spectrum(spec: CodeSpec) -> np.ndarray:
    """Per-message term of B_H: W[beta] = sum_{(x,y)} (-1)^Tr(beta.(x,y) + a x^e + b y).

    The sum factors over x and y; each factor is summed directly from the
    trace-product table.
    """
    table = trace_product_table(spec.ctx).astype(np.int64)
    fx, fy = defining_function_tables(spec)
    wx = (1 - 2 * (table ^ fx[None, :])).sum(axis=1)
    wy = (1 - 2 * (table ^ fy[None, :])).sum(axis=1)
    return np.outer(wy, wx).reshape(-1)  # index beta_1 | beta_2 << s


# -- brute force and closed forms ---------------------------------------------------


class Inapplicable(ValueError):
    pass


@dataclass
class BruteResult:
    r: int
    value: int
    side: Side
    subspaces: int
    witness: SubspaceBasis  # message subspace H_r (preimage of the optimal code subspace)
    identity_checked: int = 0
    identity_failures: int = 0


def ghw_bruteforce(
    spec: CodeSpec,
    r: int,
    budget: int | None = DEFAULT_BUDGET,
    side: Side | None = None,
    threads: int = 1,
    check_identity: bool = False,
    actual_code: bool = False,
) -> BruteResult:
    """Exact d_r by exhaustive subspace search.

    Raises BudgetExceeded rather than approximating.  Degenerate specs are
    refused with Inapplicable unless ``actual_code`` is set, in which case
    the hierarchy of the actual (lower-dimensional) code is computed.
    """
    if not actual_code and closed_form_degenerate(spec):
        raise Inapplicable(f"{spec!r} is degenerate: (u, v) -> c(u, v) is not injective")
    cc = code_columns(spec)
    eng = cc.engine
    spectrum = b_spectrum(spec) if check_identity and cc.full else None
    res = eng.search(r, side=side, budget=budget, spectrum=spectrum, q2=spec.q**2, threads=threads)
    return BruteResult(
        r=r,
        value=eng.n - res.best,
        side=res.side,
        subspaces=res.count,
        witness=cc.lift(res.witness),
        identity_checked=res.identity_checked,
        identity_failures=res.identity_failures,
    )


def ghw_closed(spec: CodeSpec, r: int) -> int | Fraction | None:
    """Closed-form d_r, or None where the closed forms are inapplicable."""
    K = 2 * spec.s
    if not 1 <= r <= K:
        raise ValueError(f"r must lie in 1..{K}")
    if closed_form_degenerate(spec):
        return None
    p = spec.params
    q, sq = Fraction(spec.q), Fraction(p.sqrt_q)
    s_a = s_value(spec.ctx, spec.a, "closed")
    assert s_a != 0, "S(a) = l^m - 4j is odd"
    ratio = Fraction(s_a, p.lm)
    two_r = Fraction(2) ** r
    small_r = r <= Fraction(spec.s, 2)
    if spec.b == 0:
        if small_r:
            value = q / 2 * (1 - 1 / two_r) * (q - sq + (q + sq) * ratio)
        else:
            value = q / 2 * (q + 1 + (q - 1) * ratio) - q * q / two_r
    elif small_r:
        value = q * q / 2 * (1 - 1 / two_r) - q * (sq + 1) / 4 * (1 - ratio)
        if s_a > 0:
            value += q * sq / (2 * two_r) * (1 - (sq + 1) * ratio)
    else:
        value = q * q / 2 * (1 - 2 / two_r)
    return int(value) if value.denominator == 1 else value


# -- constructions from the proofs ---------------------------------------------------


@dataclass(frozen=True)
class Witness:
    r: int
    side: Side  # "dual": r-dim message subspace; "direct": (2s-r)-dim point subspace
    basis: SubspaceBasis
    construction: str


def _half_field_basis(spec: CodeSpec) -> list[int]:
    """RREF basis of the subfield of order sqrt(q)."""
    return list(gf2.rref(spec.ctx.subfield(spec.s // 2)))


def even_parity_element(spec: CodeSpec) -> int:
    """Smallest beta with wt((a beta^-e)^(0)) even."""
    odd = parity_classes(spec.ctx, spec.a)
    return int(np.flatnonzero(odd == 0)[0]) + 1


def zero_trace_x(spec: CodeSpec) -> int:
    """Smallest nonzero x with Tr(a x^e) = 0."""
    fx, _ = defining_function_tables(spec)
    return int(np.flatnonzero(fx[1:] == 0)[0]) + 1


def witness_subspaces(spec: CodeSpec, r: int) -> Witness:
    """The maximising subspace exhibited in the closed-form derivation."""
    if closed_form_degenerate(spec):
        raise Inapplicable(f"{spec!r} is degenerate; the constructions do not apply")
    ctx, s, K = spec.ctx, spec.s, 2 * spec.s
    if not 1 <= r <= K:
        raise ValueError(f"r must lie in 1..{K}")
    half = _half_field_basis(spec)
    if 2 * r <= s:
        beta = even_parity_element(spec)
        line = [ctx.mul(beta, h) for h in half]  # basis of beta * F_sqrt(q)
        if spec.b == 0:
            rows = line[:r]
            how = "L_r x {0}, L_r inside beta*F_sqrt(q)"
        elif s_value(ctx, spec.a, "closed") < 0:
            xi = line[r - 1]
            rows = line[: r - 1] + [xi | (spec.b << s)]
            how = "{(u,0)} u {(xi+u,b)}, u in L_(r-1) inside beta*F_sqrt(q)"
        else:
            rows = line[: r - 1] + [spec.b << s]
            how = "L_(r-1) x b*F_2"
        return Witness(r, "dual", SubspaceBasis.span_of(rows, K), how)
    x0 = zero_trace_x(spec)
    xpart = [ctx.mul(x0, h) for h in half]
    if spec.b == 0:
        ypart = [1 << j for j in range(s)]
        how = "inside x*F_sqrt(q) x F_q"
    else:
        tb_mask = sum(ctx.trace(ctx.mul(spec.b, 1 << j)) << j for j in range(s))
        ypart = gf2.nullspace([tb_mask], s)
        how = "inside x*F_sqrt(q) x T_b"
    pool = xpart + [y << s for y in ypart]
    k = K - r
    if k > len(pool):
        raise Inapplicable(f"no {k}-dim subspace inside a {len(pool)}-dim container")
    return Witness(r, "direct", SubspaceBasis.span_of(pool[:k], K), how)


def witness_value(spec: CodeSpec, w: Witness) -> int:
    """d_r bound attained by the witness: n - |D cap H|."""
    n = build_defining_set(spec).n
    if w.side == "dual":
        return n - message_engine(spec).annihilated(w.basis.rows)
    return n - intersect_count_direct(spec, w.basis)


# -- tables -------------------------------------------------------------------------


@dataclass
class GhwEntry:
    r: int
    d_r: int | None
    method: str  # brute | closed | both | skipped-budget | inapplicable
    brute: int | None = None
    closed: int | Fraction | None = None
    side: str | None = None
    witness: SubspaceBasis | None = None
    note: str = ""

    def as_dict(self) -> dict:
        out = {"r": self.r, "d_r": self.d_r, "method": self.method}
        if self.brute is not None:
            out["brute"] = self.brute
        if self.closed is not None:
            out["closed"] = str(self.closed) if isinstance(self.closed, Fraction) else self.closed
        if self.side:
            out["side"] = self.side
        if self.witness is not None:
            out["witness"] = self.witness.hex_rows()
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class GhwTable:
    spec: CodeSpec
    dimension: int
    entries: list[GhwEntry] = field(default_factory=list)
    discrepancies: list[dict] = field(default_factory=list)
    identity_checked: int = 0
    identity_failures: int = 0

    def values(self) -> dict[int, int]:
        return {e.r: e.d_r for e in self.entries if e.d_r is not None}

    def as_dict(self) -> dict:
        return {
            "schema": 1,
            "spec": self.spec.as_dict(),
            "dimension": self.dimension,
            "table": [e.as_dict() for e in self.entries],
            "discrepancies": self.discrepancies,
        }


def ghw_table(
    spec: CodeSpec,
    budget: int | None = DEFAULT_BUDGET,
    rs=None,
    method: str = "both",
    threads: int = 1,
    check_identity: bool = False,
    actual_code: bool = False,
) -> GhwTable:
    cc = code_columns(spec)
    dim = cc.engine.K
    degenerate = closed_form_degenerate(spec)
    rs = list(rs) if rs is not None else list(range(1, 2 * spec.s + 1))
    table = GhwTable(spec=spec, dimension=dim)
    for r in rs:
        entry = GhwEntry(r=r, d_r=None, method="closed")
        skipped = False
        if method in ("closed", "both"):
            entry.closed = None if degenerate else ghw_closed(spec, r)
        if method in ("brute", "both"):
            if degenerate and not actual_code:
                entry.note = "degenerate spec; brute force on the actual code needs actual_code=True"
            elif r > dim:
                entry.note = f"actual code has dimension {dim}"
            else:
                try:
                    res = ghw_bruteforce(
                        spec, r, budget=budget, threads=threads, check_identity=check_identity, actual_code=True
                    )
                except BudgetExceeded as exc:
                    skipped = True
                    entry.note = f"brute force skipped-budget: {exc}"
                else:
                    entry.brute, entry.side, entry.witness = res.value, res.side, res.witness
                    table.identity_checked += res.identity_checked
                    table.identity_failures += res.identity_failures
        if entry.brute is not None and entry.closed is not None:
            entry.method, entry.d_r = "both", entry.brute
            if entry.brute != entry.closed:
                table.discrepancies.append(
                    {"r": r, "brute": entry.brute, "closed": str(entry.closed), "kind": "closed-form mismatch"}
                )
                log.warning("%r r=%d: brute %s != closed %s", spec, r, entry.brute, entry.closed)
        elif entry.brute is not None:
            entry.method, entry.d_r = "brute", entry.brute
            if degenerate and method == "both":
                entry.note = "closed form inapplicable (degenerate)"
        elif entry.closed is not None:
            entry.d_r = entry.closed if isinstance(entry.closed, int) else None
            entry.method = "closed"
        else:
            entry.method = "skipped-budget" if skipped else "inapplicable"
        table.entries.append(entry)
    return table


__all__ = [
    "BruteResult",
    "CodeColumns",
    "ColumnEngine",
    "DEFAULT_BUDGET",
    "GhwEntry",
    "GhwTable",
    "Inapplicable",
    "Witness",
    "b_h_sum",
    "b_spectrum",
    "code_columns",
    "dual_subspace",
    "ghw_bruteforce",
    "ghw_closed",
    "ghw_table",
    "intersect_count",
    "intersect_count_direct",
    "l2_inverse",
    "l2_map",
    "message_engine",
    "trace_pairing",
    "witness_subspaces",
    "witness_value",
]
