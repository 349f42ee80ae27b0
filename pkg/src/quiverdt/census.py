"""Brute-force censuses of quiver representations over prime fields.

The enumeration engine walks the full representation space lexicographically
(every matrix entry is a base-p digit of the point index), in chunks, with all
per-point work vectorized through :mod:`quiverdt.modp`.  On top of raw point
counts it computes:

* stack counts  |X(F_p)| / |GL_d(F_p)|,
* isomorphism-class counts by Burnside's lemma (sum of |Aut|/|GL| over points),
* indecomposable and absolutely indecomposable class counts via endomorphism
  algebras, and
* Kac polynomials by Lagrange interpolation over prime nodes with a reserved
  consistency-check node.

Supported restrictions: the preprojective relation (the moment map
``sum_a [rho(a), rho(a*)] = 0`` on the doubled quiver) and Serre-type
constraints (cycle nilpotency/invertibility, whole-module nilpotency).

Counting facts the classifier relies on, for A = End(rho) with #A = p^e:

* ``|Aut(rho)| = #units(A)``;
* rho is indecomposable  iff  A is local  iff  every element of A is a unit
  or nilpotent  iff  #units + #nilpotents = p^e  (Fitting's lemma);
* rho is absolutely indecomposable  iff  #nilpotents = p^(e-1).  Writing
  A/J(A) = prod_i Mat_{n_i}(F_{p^{r_i}}), nilpotents biject with
  J x prod_i {nilpotents of Mat_{n_i}}, and #nilpotent matrices in
  Mat_n(F_q) is q^(n^2-n), so #nilpotents(A) = p^(e - sum_i r_i n_i); this
  equals p^(e-1) exactly when A/J(A) = F_p.

Unit/nilpotent counts are gathered projectively: lambda*x is a unit (resp.
nilpotent) iff x is, so only vectors with leading coefficient 1 are tested
and counts are rescaled by p-1.

All caps are explicit and raise :class:`CapExceeded`; nothing truncates
silently.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .exactalg import LaurentPoly
from .modp import (
    all_zero_mats,
    combos_with_leading_one,
    det_mod,
    field_dtype,
    first_primes,
    index_to_digits,
    is_prime,
    mat_mul_mod,
    mat_pow_mod,
    mod_range,
    nullspace_by_pattern,
    pow2_at_least,
    rref_mod,
)
from .quiver import (
    DimVector,
    Quiver,
    QuiverError,
    SerreConstraint,
    StabilityCondition,
    double,
    euler_form,
    slope,
    TRIVIAL_CONSTRAINT,
)

__all__ = [
    "CapExceeded",
    "CensusError",
    "MatrixRep",
    "EndAlgebra",
    "Classification",
    "CensusReport",
    "DEFAULT_POINT_BUDGET",
    "DEFAULT_END_BUDGET",
    "gl_order",
    "point_count",
    "stack_count",
    "endomorphism_algebra",
    "classify",
    "count_abs_indecomposable",
    "kac_polynomial",
    "semistable_point_count",
    "census_report",
]

DEFAULT_POINT_BUDGET = 200_000_000
DEFAULT_END_BUDGET = 1 << 20
DEFAULT_WORD_BUDGET = 20_000
DEFAULT_SUBSPACE_BUDGET = 1_000_000
_MAX_CHUNK = 1 << 16
_PAIR_BLOCK = 1 << 20  # (point, line) pairs classified per vectorized block


class CapExceeded(RuntimeError):
    """A configured enumeration cap would be exceeded; nothing was computed."""

    def __init__(self, kind: str, required: int, budget: int):
        self.kind = kind
        self.required = required
        self.budget = budget
        super().__init__(
            f"{kind} needs {required} evaluations but the budget is {budget}; "
            f"raise the relevant budget to proceed"
        )


class CensusError(RuntimeError):
    """An internal consistency assertion failed (non-integral Burnside sum,
    interpolation check-node mismatch)."""


# ---------------------------------------------------------------------------
# Data model
# ---------------------------------------------------------------------------

@dataclass
class MatrixRep:
    """A representation over F_p: one d_t x d_s matrix per arrow.

    ``mats`` maps arrow label to an integer matrix with canonical residues;
    shapes are validated against ``dim`` (rows = target, cols = source).
    """

    quiver: Quiver
    p: int
    dim: DimVector
    mats: dict

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise CensusError(f"modulus {self.p} is not prime")
        if self.dim.vertices != self.quiver.vertices:
            raise QuiverError("dimension vector does not match the quiver")
        norm = {}
        for a in self.quiver.arrows:
            nt, ns = self.dim[a.tgt], self.dim[a.src]
            m = np.asarray(self.mats.get(a.label, np.zeros((nt, ns))), dtype=np.int64) % self.p
            if m.shape != (nt, ns):
                raise QuiverError(
                    f"matrix for arrow {a.label!r} has shape {m.shape}, expected {(nt, ns)}"
                )
            norm[a.label] = m
        extra = set(self.mats) - {a.label for a in self.quiver.arrows}
        if extra:
            raise QuiverError(f"matrices given for unknown arrows {sorted(extra)}")
        self.mats = norm

    def matrix(self, label: str) -> np.ndarray:
        return self.mats[label]


@dataclass
class EndAlgebra:
    """The endomorphism algebra of a representation.

    ``basis`` spans the solution space of the intertwining system, one
    block-diagonal matrix per basis element represented as a map
    vertex -> block.  The radical is the set of non-units when the algebra is
    local, and the largest nil ideal {x : x*y nilpotent for all y} otherwise.
    """

    dim: int
    basis: list
    unit_count: int
    nilpotent_count: int
    radical_dim: int
    is_local: bool


@dataclass(frozen=True)
class Classification:
    """Result of :func:`classify`: decomposable, or indecomposable with the
    dimension of End/J over F_p (absolutely indecomposable iff 1)."""

    kind: str  # "decomposable" | "indecomposable"
    residue_dim: int | None = None

    def is_indecomposable(self) -> bool:
        return self.kind == "indecomposable"

    def is_absolutely_indecomposable(self) -> bool:
        return self.kind == "indecomposable" and self.residue_dim == 1


@dataclass(frozen=True)
class CensusReport:
    """Aggregate census of one (quiver, dim, prime, restriction) instance."""

    p: int
    dim: tuple[int, ...]
    relations: str
    constraint: str
    point_count: int
    stack_count: Fraction
    iso_classes: int
    indecomposable_classes: int
    abs_indecomposable_classes: int

    def to_json_dict(self) -> dict:
        return {
            "p": str(self.p),
            "dim": ",".join(str(x) for x in self.dim),
            "relations": self.relations,
            "constraint": self.constraint,
            "point_count": str(self.point_count),
            "stack_count": str(self.stack_count),
            "iso_classes": str(self.iso_classes),
            "indecomposable_classes": str(self.indecomposable_classes),
            "abs_indecomposable_classes": str(self.abs_indecomposable_classes),
        }


# ---------------------------------------------------------------------------
# Basic counts
# ---------------------------------------------------------------------------

def gl_order(d: DimVector, p: int) -> int:
    """|GL_d(F_p)| = prod_i prod_{k=0}^{d_i-1} (p^{d_i} - p^k)."""
    if not is_prime(p):
        raise CensusError(f"modulus {p} is not prime")
    total = 1
    for n in d.values:
        for k in range(n):
            total *= p ** n - p ** k
    return total


# ---------------------------------------------------------------------------
# Enumeration workspace
# ---------------------------------------------------------------------------

class _Workspace:
    """Cell layout of one census: which quiver is actually enumerated
    (the double for preprojective relations), matrix shapes per arrow,
    endomorphism-system geometry, and the active constraint."""

    def __init__(
        self,
        quiver: Quiver,
        d: DimVector,
        relations: str,
        constraint: SerreConstraint | None,
    ):
        if relations not in ("none", "preprojective"):
            raise QuiverError(f"unknown relations mode {relations!r}")
        if d.vertices != quiver.vertices:
            raise QuiverError("dimension vector does not match the quiver")
        self.base = quiver
        self.relations = relations
        self.work = double(quiver) if relations == "preprojective" else quiver
        self.constraint = constraint if constraint is not None else TRIVIAL_CONSTRAINT
        self.constraint.validate(self.work)
        self.d = d
        self.vdims = {v: d[v] for v in self.work.vertices}
        self.cells: list[tuple[str, int, int]] = []
        off = 0
        self.cell_offsets: dict[str, int] = {}
        for a in self.work.arrows:
            nt, ns = d[a.tgt], d[a.src]
            self.cell_offsets[a.label] = off
            self.cells.append((a.label, nt, ns))
            off += nt * ns
        self.total_cells = off
        # endomorphism-system geometry
        self.col_offsets: dict[str, int] = {}
        c = 0
        for v in self.work.vertices:
            self.col_offsets[v] = c
            c += d[v] ** 2
        self.end_cols = c
        self.pos_blocks = [
            (self.col_offsets[v], d[v], pow2_at_least(d[v]))
            for v in self.work.vertices
            if d[v] > 0
        ]

    def matrices_for_range(self, lo: int, hi: int, p: int) -> dict[str, np.ndarray]:
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = index_to_digits(idx, self.total_cells, p)
        mats = {}
        off = 0
        for label, nt, ns in self.cells:
            sz = nt * ns
            mats[label] = digits[:, off : off + sz].reshape(digits.shape[0], nt, ns)
            off += sz
        return mats


def _word_products_nilpotent_mask(
    ws: _Workspace, mats: Mapping[str, np.ndarray], p: int, word_budget: int, B: int
) -> np.ndarray:
    """Mask of points whose module is nilpotent: every composable arrow word
    of length sum(d) has zero product.  Words through a zero-dimensional
    vertex vanish automatically and are skipped."""
    length = ws.d.total()
    arrows = [a for a in ws.work.arrows if ws.vdims[a.src] > 0 and ws.vdims[a.tgt] > 0]
    if not arrows or length == 0:
        return np.ones(B, dtype=bool)
    by_src: dict[str, list] = {}
    for a in arrows:
        by_src.setdefault(a.src, []).append(a)
    # Budget check: count composable words of the target length first.
    frontier = {v: 1 for v in ws.work.vertices}
    for _ in range(length):
        nxt: dict[str, int] = {}
        for a in arrows:
            nxt[a.tgt] = nxt.get(a.tgt, 0) + frontier.get(a.src, 0)
        frontier = nxt
    total_words = sum(frontier.values())
    if total_words > word_budget:
        raise CapExceeded("nilpotent-module word enumeration", total_words, word_budget)
    mask = np.ones(B, dtype=bool)

    def rec(prefix_prod: np.ndarray | None, at_vertex: str | None, depth: int) -> None:
        nonlocal mask
        if depth == length:
            mask &= all_zero_mats(prefix_prod)
            return
        if prefix_prod is not None and not prefix_prod.any():
            return  # zero for every point: all longer words vanish too
        candidates = arrows if at_vertex is None else by_src.get(at_vertex, [])
        for a in candidates:
            x = mats[a.label]
            prod = x if prefix_prod is None else mat_mul_mod(x, prefix_prod, p)
            rec(prod, a.tgt, depth + 1)

    rec(None, None, 0)
    return mask


def _filter_mask(
    ws: _Workspace, mats: Mapping[str, np.ndarray], p: int, word_budget: int, B: int
) -> np.ndarray:
    mask = np.ones(B, dtype=bool)
    # Serre clauses on cycle matrices.
    for cycle, kind in ws.constraint.clauses:
        prod = None
        for lbl in cycle:
            x = mats[lbl]
            prod = x if prod is None else mat_mul_mod(x, prod, p)
        n = prod.shape[1]
        if kind == "nilpotent":
            if n > 0:
                power = mat_pow_mod(prod, pow2_at_least(ws.d.total()), p)
                mask &= all_zero_mats(power)
        else:  # invertible
            mask &= det_mod(prod, p) != 0
    if ws.constraint.nilpotent_module:
        mask &= _word_products_nilpotent_mask(ws, mats, p, word_budget, B)
    # Moment-map relation on the doubled quiver.
    if ws.relations == "preprojective":
        for v in ws.base.vertices:
            n = ws.d[v]
            if n == 0:
                continue
            acc = np.zeros((B, n, n), dtype=field_dtype(p))
            terms = 0
            for a in ws.base.arrows:
                if a.tgt == v:
                    acc += mat_mul_mod(mats[a.label], mats[a.label + "*"], p)
                    terms += 1
                if a.src == v:
                    acc -= mat_mul_mod(mats[a.label + "*"], mats[a.label], p)
                    terms += 1
            bound = terms * (p - 1)
            mask &= all_zero_mats(mod_range(acc, p, -bound, bound))
    return mask


# ---------------------------------------------------------------------------
# Endomorphism pipeline
# ---------------------------------------------------------------------------

def _end_system(ws: _Workspace, mats: Mapping[str, np.ndarray], p: int, B: int) -> np.ndarray:
    """The batched intertwining system: for each arrow a, the linear equations
    Phi_{t(a)} X_a - X_a Phi_{s(a)} = 0 in the per-vertex unknowns vec(Phi_v)
    (row-major).  Returns shape (B, R, C).

    Row (i, j) of arrow a reads sum_l Phi_t[i,l] X[l,j] - sum_k X[i,k] Phi_s[k,j]:
    the Phi_t[i,l] coefficient is X[l,j] (an X^T block on the row band of fixed
    i), the Phi_s[k,j] coefficient is -X[i,k] (a strided -X block at fixed j).
    Both are written with slice assignment; no dense delta tensors.
    """
    rows = sum(nt * ns for _, nt, ns in ws.cells)
    K = np.zeros((B, rows, ws.end_cols), dtype=field_dtype(p))
    roff = 0
    for a in ws.work.arrows:
        nt, ns = ws.vdims[a.tgt], ws.vdims[a.src]
        sz = nt * ns
        if sz == 0:
            continue
        X = mats[a.label]
        Xt = X.transpose(0, 2, 1)
        ct, cs = ws.col_offsets[a.tgt], ws.col_offsets[a.src]
        for i in range(nt):
            K[:, roff + i * ns : roff + (i + 1) * ns, ct + i * nt : ct + (i + 1) * nt] += Xt
        for j in range(ns):
            K[:, roff + j : roff + sz : ns, cs + j : cs + ns * ns : ns] -= X
        roff += sz
    return mod_range(K, p, -(p - 1), p - 1)


def _classify_elements(
    pos_blocks: Sequence[tuple[int, int, int]], elems: np.ndarray, p: int
) -> tuple[np.ndarray, np.ndarray]:
    """For packed endomorphism vectors (N, C): per-element unit and nilpotent
    flags.  A vector is a unit iff every vertex block is invertible, nilpotent
    iff every vertex block is nilpotent (only possible when every block is
    singular, which is what makes the power test affordable)."""
    N = elems.shape[0]
    unit = np.ones(N, dtype=bool)
    all_sing = np.ones(N, dtype=bool)
    for off, n, _m in pos_blocks:
        blk = elems[:, off : off + n * n].reshape(N, n, n)
        dt = det_mod(blk, p)
        unit &= dt != 0
        all_sing &= dt == 0
    nilp = np.zeros(N, dtype=bool)
    idx = np.nonzero(all_sing)[0]
    if idx.size:
        ok = np.ones(idx.size, dtype=bool)
        sub = elems[idx]
        for off, n, m in pos_blocks:
            if n <= 1:
                continue  # 1x1 singular == zero == nilpotent
            blk = sub[:, off : off + n * n].reshape(idx.size, n, n)
            ok &= all_zero_mats(mat_pow_mod(blk, m, p))
        nilp[idx] = ok
    return unit, nilp


def _end_counts(
    ws: _Workspace, mats: Mapping[str, np.ndarray], p: int, end_budget: int, B: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-point endomorphism data: (e, unit_count, nilpotent_count)."""
    K = _end_system(ws, mats, p, B)
    rref, rank, pivmask = rref_mod(K, p)
    e_arr = np.full(B, ws.end_cols, dtype=np.int64) - rank
    units = np.zeros(B, dtype=np.int64)
    nilps = np.zeros(B, dtype=np.int64)
    for idx, basis in nullspace_by_pattern(rref, rank, pivmask, p):
        eg = basis.shape[1]
        if eg == 0:
            units[idx] = 1
            nilps[idx] = 1
            continue
        n_proj = (p ** eg - 1) // (p - 1)
        if n_proj > end_budget:
            raise CapExceeded("endomorphism enumeration", n_proj, end_budget)
        combos = combos_with_leading_one(p, eg)
        G = idx.size
        pu = np.zeros(G, dtype=np.int64)
        pn = np.zeros(G, dtype=np.int64)
        # classify all (point, projective line) pairs jointly, in blocks
        step = max(1, _PAIR_BLOCK // n_proj)
        for lo in range(0, G, step):
            bs = basis[lo : lo + step]  # (g, eg, C)
            g = bs.shape[0]
            elems = mod_range(combos[None] @ bs, p, 0, eg * (p - 1) ** 2)
            elems = elems.reshape(g * n_proj, -1)
            u, nl = _classify_elements(ws.pos_blocks, elems, p)
            pu[lo : lo + step] = u.reshape(g, n_proj).sum(axis=1)
            pn[lo : lo + step] = nl.reshape(g, n_proj).sum(axis=1)
        units[idx] = (p - 1) * pu
        nilps[idx] = (p - 1) * pn + 1
    return e_arr, units, nilps


# ---------------------------------------------------------------------------
# Chunked census engine
# ---------------------------------------------------------------------------

@dataclass
class _Totals:
    points: int = 0
    units: int = 0
    units_indec: int = 0
    units_absindec: int = 0

    def __iadd__(self, other: "_Totals") -> "_Totals":
        self.points += other.points
        self.units += other.units
        self.units_indec += other.units_indec
        self.units_absindec += other.units_absindec
        return self


def _scan(
    ws: _Workspace,
    p: int,
    *,
    need_classes: bool,
    point_budget: int,
    end_budget: int,
    word_budget: int,
    workers: int,
) -> _Totals:
    if not is_prime(p):
        raise CensusError(f"modulus {p} is not prime")
    raw = p ** ws.total_cells
    if raw > point_budget:
        raise CapExceeded("point enumeration", raw, point_budget)
    workers = max(1, int(workers))
    chunk = min(_MAX_CHUNK, max(1, -(-raw // (4 * workers)) if workers > 1 else raw))
    chunk = min(chunk, _MAX_CHUNK)
    spans = [(lo, min(lo + chunk, raw)) for lo in range(0, raw, chunk)]

    def run(span: tuple[int, int]) -> _Totals:
        lo, hi = span
        mats = ws.matrices_for_range(lo, hi, p)
        mask = _filter_mask(ws, mats, p, word_budget, hi - lo)
        t = _Totals(points=int(mask.sum()))
        if not need_classes or t.points == 0:
            return t
        kept = {k: v[mask] for k, v in mats.items()}
        e_arr, units, nilps = _end_counts(ws, kept, p, end_budget, t.points)
        pe = np.power(np.int64(p), e_arr)
        indec = units + nilps == pe
        absin = nilps * p == pe
        t.units = int(units.sum())
        t.units_indec = int(units[indec].sum())
        t.units_absindec = int(units[absin].sum())
        return t

    total = _Totals()
    if workers == 1 or len(spans) == 1:
        for span in spans:
            total += run(span)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for part in ex.map(run, spans):
                total += part
    return total


def point_count(
    q: Quiver,
    d: DimVector,
    p: int,
    relations: str = "none",
    s: SerreConstraint | None = None,
    *,
    point_budget: int = DEFAULT_POINT_BUDGET,
    word_budget: int = DEFAULT_WORD_BUDGET,
    workers: int = 1,
) -> int:
    """Number of F_p-points of the constrained representation space.

    ``relations="preprojective"`` enumerates the doubled quiver and keeps the
    zero fiber of the moment map; Serre clauses may then reference starred
    arrow labels.
    """
    ws = _Workspace(q, d, relations, s)
    t = _scan(
        ws,
        p,
        need_classes=False,
        point_budget=point_budget,
        end_budget=DEFAULT_END_BUDGET,
        word_budget=word_budget,
        workers=workers,
    )
    return t.points


def stack_count(
    q: Quiver,
    d: DimVector,
    p: int,
    relations: str = "none",
    s: SerreConstraint | None = None,
    **kwargs,
) -> Fraction:
    """point_count / |GL_d(F_p)| as an exact rational."""
    return Fraction(point_count(q, d, p, relations, s, **kwargs), gl_order(d, p))


def census_report(
    q: Quiver,
    d: DimVector,
    p: int,
    relations: str = "none",
    s: SerreConstraint | None = None,
    *,
    point_budget: int = DEFAULT_POINT_BUDGET,
    end_budget: int = DEFAULT_END_BUDGET,
    word_budget: int = DEFAULT_WORD_BUDGET,
    workers: int = 1,
) -> CensusReport:
    """Full census: point/stack counts plus Burnside-weighted class counts."""
    if d.is_zero():
        raise QuiverError("census of the zero dimension vector is not defined")
    ws = _Workspace(q, d, relations, s)
    t = _scan(
        ws,
        p,
        need_classes=True,
        point_budget=point_budget,
        end_budget=end_budget,
        word_budget=word_budget,
        workers=workers,
    )
    gl = gl_order(d, p)
    iso = Fraction(t.units, gl)
    indec = Fraction(t.units_indec, gl)
    absin = Fraction(t.units_absindec, gl)
    for name, val in (("iso", iso), ("indecomposable", indec), ("abs-indecomposable", absin)):
        if val.denominator != 1:
            raise CensusError(f"Burnside sum for {name} classes is not an integer: {val}")
    return CensusReport(
        p=p,
        dim=d.values,
        relations=relations,
        constraint=ws.constraint.describe(),
        point_count=t.points,
        stack_count=Fraction(t.points, gl),
        iso_classes=int(iso),
        indecomposable_classes=int(indec),
        abs_indecomposable_classes=int(absin),
    )


def count_abs_indecomposable(
    q: Quiver,
    d: DimVector,
    p: int,
    s: SerreConstraint | None = None,
    *,
    relations: str = "none",
    point_budget: int = DEFAULT_POINT_BUDGET,
    end_budget: int = DEFAULT_END_BUDGET,
    word_budget: int = DEFAULT_WORD_BUDGET,
    workers: int = 1,
) -> int:
    """Number of absolutely indecomposable iso classes (Burnside-weighted
    count of points whose endomorphism nilpotent count is p^(e-1))."""
    if d.is_zero():
        raise QuiverError("the zero representation is not indecomposable")
    ws = _Workspace(q, d, relations, s)
    t = _scan(
        ws,
        p,
        need_classes=True,
        point_budget=point_budget,
        end_budget=end_budget,
        word_budget=word_budget,
        workers=workers,
    )
    val = Fraction(t.units_absindec, gl_order(d, p))
    if val.denominator != 1:
        raise CensusError(f"Burnside sum is not an integer: {val}")
    return int(val)


# ---------------------------------------------------------------------------
# Single-representation analysis
# ---------------------------------------------------------------------------

def _rep_as_batch(rho: MatrixRep) -> tuple[_Workspace, dict[str, np.ndarray]]:
    ws = _Workspace(rho.quiver, rho.dim, "none", None)
    dt = field_dtype(rho.p)
    mats = {lbl: m[None, :, :].astype(dt) for lbl, m in rho.mats.items()}
    return ws, mats


def endomorphism_algebra(
    rho: MatrixRep, *, end_budget: int = DEFAULT_END_BUDGET
) -> EndAlgebra:
    """End(rho) with exhaustive unit/nilpotent/radical analysis.

    Enumerates all p^e endomorphisms (cap: ``end_budget``), so unlike the
    census fast path it also produces the radical: the non-units when the
    algebra is local, else the largest nil ideal {x : xy nilpotent for all y}
    found by exhaustive pair testing.
    """
    p = rho.p
    if rho.dim.is_zero():
        return EndAlgebra(
            dim=0, basis=[], unit_count=1, nilpotent_count=1, radical_dim=0, is_local=True
        )
    ws, mats = _rep_as_batch(rho)
    K = _end_system(ws, mats, p, 1)
    rref, rank, pivmask = rref_mod(K, p)
    groups = nullspace_by_pattern(rref, rank, pivmask, p)
    basis_vecs = groups[0][1][0]  # (e, C)
    e = basis_vecs.shape[0]
    if p ** e > end_budget:
        raise CapExceeded("endomorphism enumeration", p ** e, end_budget)
    # identity must lie in the span: verify it satisfies the system
    ident = np.zeros(ws.end_cols, dtype=np.int64)
    for v in ws.work.vertices:
        n = ws.vdims[v]
        off = ws.col_offsets[v]
        ident[off : off + n * n] = np.eye(n, dtype=np.int64).reshape(-1)
    if np.any((K[0] @ ident) % p):
        raise CensusError("identity endomorphism fails the intertwining system")
    coeffs = index_to_digits(np.arange(p ** e, dtype=np.int64), e, p)
    elems = (coeffs @ basis_vecs) % p
    unit, nilp = _classify_elements(ws.pos_blocks, elems, p)
    unit_count = int(unit.sum())
    nilp_count = int(nilp.sum())
    local = unit_count + nilp_count == p ** e
    if local:
        rad_size = p ** e - unit_count
    else:
        rad_size = _radical_size_by_pairs(ws, elems, unit, p)
    rad_dim = rad_size.bit_length() - 1 if p == 2 else round(math.log(rad_size, p))
    if p ** rad_dim != rad_size:
        raise CensusError(f"radical candidate has size {rad_size}, not a power of {p}")
    basis = [_unpack_blocks(ws, vec) for vec in basis_vecs]
    return EndAlgebra(
        dim=e,
        basis=basis,
        unit_count=unit_count,
        nilpotent_count=nilp_count,
        radical_dim=rad_dim,
        is_local=local,
    )


def _unpack_blocks(ws: _Workspace, vec: np.ndarray) -> dict[str, np.ndarray]:
    out = {}
    for v in ws.work.vertices:
        n = ws.vdims[v]
        off = ws.col_offsets[v]
        out[v] = vec[off : off + n * n].reshape(n, n).copy()
    return out


def _radical_size_by_pairs(
    ws: _Workspace, elems: np.ndarray, unit: np.ndarray, p: int
) -> int:
    """|J(End)| by the nil-ideal characterization: x is in the radical iff
    x*y is nilpotent for every y (pairwise exhaustive; budget-bounded by the
    caller's end cap since both factors range over End)."""
    n_elems = elems.shape[0]
    candidates = np.nonzero(~unit)[0]
    rad = 0
    for ci in candidates:
        x_blocks = {
            off: elems[ci, off : off + n * n].reshape(n, n) for off, n, _m in ws.pos_blocks
        }
        prods = np.empty_like(elems)
        for off, n, _m in ws.pos_blocks:
            yb = elems[:, off : off + n * n].reshape(n_elems, n, n)
            prods[:, off : off + n * n] = mat_mul_mod(
                np.broadcast_to(x_blocks[off], (n_elems, n, n)), yb, p
            ).reshape(n_elems, n * n)
        _u, nl = _classify_elements(ws.pos_blocks, prods, p)
        if bool(nl.all()):
            rad += 1
    return rad


def classify(rho: MatrixRep, *, end_budget: int = DEFAULT_END_BUDGET) -> Classification:
    """Decomposable, or indecomposable with residue dimension dim(End/J).

    Indecomposable iff End is local (no nontrivial idempotent); absolutely
    indecomposable iff additionally the residue field is F_p itself
    (residue_dim == 1).
    """
    if rho.dim.is_zero():
        return Classification("decomposable")
    alg = endomorphism_algebra(rho, end_budget=end_budget)
    if not alg.is_local:
        return Classification("decomposable")
    return Classification("indecomposable", residue_dim=alg.dim - alg.radical_dim)


# ---------------------------------------------------------------------------
# Kac polynomials by interpolation
# ---------------------------------------------------------------------------

def _lagrange(xs: Sequence[int], ys: Sequence[int]) -> list[Fraction]:
    """Coefficients (low to high) of the unique polynomial through (xs, ys)."""
    coeffs = [Fraction(0)] * len(xs)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num = [Fraction(1)]
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = [
                (num[k - 1] if k > 0 else Fraction(0)) - xj * (num[k] if k < len(num) else 0)
                for k in range(len(num) + 1)
            ]
            den *= xi - xj
        scale = Fraction(yi) / den
        for k, c in enumerate(num):
            coeffs[k] += c * scale
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def kac_polynomial(
    q: Quiver,
    d: DimVector,
    s: SerreConstraint | None = None,
    nodes: Sequence[int] | None = None,
    *,
    point_budget: int = DEFAULT_POINT_BUDGET,
    end_budget: int = DEFAULT_END_BUDGET,
    word_budget: int = DEFAULT_WORD_BUDGET,
    workers: int = 1,
) -> LaurentPoly:
    """The polynomial (in q) counting absolutely indecomposable classes.

    Interpolated through the first max(1-(d,d), 0)+1 primes and verified at
    one extra reserved prime; a mismatch there raises :class:`CensusError`
    (signalling a non-polynomial count or a bug) rather than returning a
    wrong answer.
    """
    if d.is_zero():
        raise QuiverError("Kac polynomials are defined for nonzero dimension vectors")
    bound = max(1 - euler_form(q, d, d), 0)
    need = bound + 2
    if nodes is None:
        ps = first_primes(need)
    else:
        ps = [int(x) for x in nodes]
        if sorted(set(ps)) != ps or not all(is_prime(x) for x in ps):
            raise QuiverError("interpolation nodes must be strictly increasing primes")
        if len(ps) < need:
            raise QuiverError(f"need at least {need} prime nodes (degree bound {bound})")
    counts = [
        count_abs_indecomposable(
            q,
            d,
            p,
            s,
            point_budget=point_budget,
            end_budget=end_budget,
            word_budget=word_budget,
            workers=workers,
        )
        for p in ps[:need]
    ]
    coeffs = _lagrange(ps[: bound + 1], counts[: bound + 1])
    for k, c in enumerate(coeffs):
        if c.denominator != 1:
            raise CensusError(f"interpolated coefficient of q^{k} is not an integer: {c}")
    check_p, check_count = ps[bound + 1], counts[bound + 1]
    value = sum(int(c) * check_p ** k for k, c in enumerate(coeffs))
    if value != check_count:
        raise CensusError(
            f"check node failed: polynomial gives {value} at p={check_p}, census says {check_count}"
        )
    for p_i, y_i in zip(ps[: bound + 1], counts[: bound + 1]):
        assert sum(int(c) * p_i ** k for k, c in enumerate(coeffs)) == y_i
    return LaurentPoly.from_q_dict({k: int(c) for k, c in enumerate(coeffs) if c != 0})


# ---------------------------------------------------------------------------
# Semistability
# ---------------------------------------------------------------------------

def _subspaces(n: int, k: int, p: int) -> list[np.ndarray]:
    """All k-dimensional subspaces of F_p^n as reduced-echelon basis matrices
    of shape (k, n)."""
    from itertools import combinations, product

    out: list[np.ndarray] = []
    if k == 0:
        return [np.zeros((0, n), dtype=np.int64)]
    for pivots in combinations(range(n), k):
        free_slots = [
            (j, c)
            for j in range(k)
            for c in range(pivots[j] + 1, n)
            if c not in pivots
        ]
        for values in product(range(p), repeat=len(free_slots)):
            m = np.zeros((k, n), dtype=np.int64)
            for j, pc in enumerate(pivots):
                m[j, pc] = 1
            for (j, c), val in zip(free_slots, values):
                m[j, c] = val
            out.append(m)
    return out


def semistable_point_count(
    q: Quiver,
    d: DimVector,
    p: int,
    z: StabilityCondition,
    relations: str = "none",
    s: SerreConstraint | None = None,
    *,
    point_budget: int = DEFAULT_POINT_BUDGET,
    word_budget: int = DEFAULT_WORD_BUDGET,
    subspace_budget: int = DEFAULT_SUBSPACE_BUDGET,
) -> int:
    """Count of semistable points: no arrow-invariant proper nonzero graded
    subspace of slope exceeding the slope of d.

    Brute force: every candidate destabilizing sub-dimension-vector e (with
    slope(e) > slope(d)) is checked via exhaustive enumeration of echelon
    subspace tuples, vectorized across the point set.
    """
    if d.is_zero():
        raise QuiverError("semistability of the zero dimension vector is undefined")
    ws = _Workspace(q, d, relations, s)
    raw = p ** ws.total_cells
    if raw > point_budget:
        raise CapExceeded("point enumeration", raw, point_budget)
    mats = ws.matrices_for_range(0, raw, p)
    mask = _filter_mask(ws, mats, p, word_budget, raw)
    slope_d = slope(z, d)
    # destabilizing candidate dimension vectors: 0 < e < d, slope(e) > slope(d)
    destab_dims = []
    for vals in _sub_boxes(d.values):
        e = DimVector(d.vertices, vals)
        if e.is_zero() or vals == d.values:
            continue
        if slope(z, e) > slope_d:
            destab_dims.append(e)
    destabilized = np.zeros(mask.shape[0], dtype=bool)
    for e in destab_dims:
        per_vertex = []
        count = 1
        for v in d.vertices:
            subs = _subspaces(d[v], e[v], p)
            per_vertex.append(subs)
            count *= len(subs)
        if count > subspace_budget:
            raise CapExceeded("subspace enumeration", count, subspace_budget)
        for combo in _cartesian(per_vertex):
            bases = dict(zip(d.vertices, combo))
            inv = np.ones(mask.shape[0], dtype=bool)
            for a in ws.work.arrows:
                ns_, nt_ = d[a.src], d[a.tgt]
                ks, kt = e[a.src], e[a.tgt]
                if ns_ == 0 or ks == 0:
                    continue  # image of the zero space is zero: always inside
                X = mats[a.label]
                Us, Ut = bases[a.src], bases[a.tgt]
                W = (X @ Us.T[None, :, :]) % p  # (B, nt, ks)
                if kt == 0:
                    inv &= ~np.any(W.reshape(W.shape[0], -1), axis=1)
                    continue
                piv = [int(np.argmax(Ut[j] != 0)) for j in range(kt)]
                coords = W[:, piv, :]  # (B, kt, ks)
                rec = (Ut.T[None, :, :] @ coords) % p
                diff = (W - rec) % p
                inv &= ~np.any(diff.reshape(diff.shape[0], -1), axis=1)
            destabilized |= inv & mask
    return int((mask & ~destabilized).sum())


def _sub_boxes(limits: tuple[int, ...]):
    if not limits:
        yield ()
        return
    for head in range(limits[0] + 1):
        for tail in _sub_boxes(limits[1:]):
            yield (head,) + tail


def _cartesian(groups: Sequence[list]):
    if not groups:
        yield ()
        return
    for head in groups[0]:
        for tail in _cartesian(groups[1:]):
            yield (head,) + tail
