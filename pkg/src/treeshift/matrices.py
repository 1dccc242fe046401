"""Finite matrix truncations of shifts and matrix-side verification.

A truncation keeps the basis vectors up to a cut depth and represents
the shift as a square matrix in that basis.  Entries involving vectors
near the cut are artifacts; every result here tracks an interior depth
up to which a single application of the matrix agrees exactly with the
operator, and identities are asserted only on interior blocks, shrinking
by one depth level per operator application.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (ClassificationError, DomainError,
                     NotLeftInvertibleError, RangeError)
from .moments import _comb_pattern_valency, _table1_value, _TABLE1_ROWS
from .shifts import (DEFAULT_TOL, WeightedShift, classify_adjacency,
                     is_two_isometry, satisfies_kernel_condition,
                     two_isometry_weight)
from .trees import generation

__all__ = [
    "TruncatedOperator",
    "Table1Report",
    "truncate",
    "defect",
    "dual_matrix",
    "gram_diag",
    "verify_table1",
    "build_brownian_shift",
    "block_shift_from_atoms",
    "dump_matrix",
]


@dataclass(frozen=True)
class TruncatedOperator:
    """Square matrix of a shift on the span of basis vectors.

    depths[i] is the depth grading of basis vector i; applying the
    matrix once is exact on vectors supported at depths <=
    interior_depth, so identities involving n applications hold on the
    block of depths <= interior_depth - n.
    """

    matrix: np.ndarray
    basis: tuple[str, ...]
    depths: tuple[int, ...]
    interior_depth: int
    name: str = ""

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"matrix must be square, got {m.shape}")
        if len(self.basis) != m.shape[0] or len(self.depths) != m.shape[0]:
            raise DomainError("basis/depths length must match matrix size")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def index(self, label: str) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise DomainError(f"no basis vector labelled {label!r}") from None

    def interior_indices(self, order: int = 0) -> list[int]:
        """Basis indices free of truncation artifacts after `order`
        applications of the operator."""
        top = self.interior_depth - order
        return [i for i, d in enumerate(self.depths) if d <= top]


def truncate(shift: WeightedShift,
             depth: Optional[int] = None) -> TruncatedOperator:
    """Matrix of the shift on basis vectors of depth <= depth.

    Columns of cut-depth vertices are zero (their children fall outside
    the basis), so the interior depth is depth - 1.
    """
    tree = shift.tree
    cut = tree.materialized_depth if depth is None else depth
    if cut < 1 or cut > tree.materialized_depth:
        raise RangeError(
            f"cut depth must be in [1, {tree.materialized_depth}], "
            f"got {cut}")
    basis: list[str] = []
    depths: list[int] = []
    for g in range(cut + 1):
        for u in generation(tree, g):
            basis.append(u)
            depths.append(g)
    pos = {u: i for i, u in enumerate(basis)}
    m = np.zeros((len(basis), len(basis)))
    for u in basis:
        if depths[pos[u]] == cut:
            continue
        for v in tree.children_of(u):
            m[pos[v], pos[u]] = shift.weight(v)
    return TruncatedOperator(m, tuple(basis), tuple(depths), cut - 1,
                             name=f"truncate({shift.name or 'shift'}, "
                                  f"{cut})")


def defect(op: Union[WeightedShift, TruncatedOperator],
           m: int) -> np.ndarray:
    """Defect matrix sum of (-1)^k C(m,k) (T*)^k T^k, k = 0..m.

    Vanishing of the defect characterizes m-isometries.  The meaningful
    part is the block of rows/columns with depth <= interior_depth - m.
    """
    if m < 1:
        raise DomainError(f"defect order must be >= 1, got {m}")
    trunc = truncate(op) if isinstance(op, WeightedShift) else op
    if m > trunc.interior_depth:
        raise RangeError(
            f"defect order {m} exceeds interior depth "
            f"{trunc.interior_depth}")
    a = trunc.matrix
    out = np.zeros_like(a)
    power = np.eye(trunc.dim)
    for k in range(m + 1):
        out += (-1.0) ** k * comb(m, k) * (power.T @ power)
        if k < m:
            power = a @ power
    return out


def dual_matrix(trunc: TruncatedOperator) -> TruncatedOperator:
    """Matrix of the Cauchy dual T (T*T)^(-1) of a truncation.

    The Gram matrix T*T is inverted on its positive eigenspace; null
    eigenvectors are tolerated only when supported strictly beyond the
    interior depth (truncation artifacts), otherwise the operator is
    not left invertible.
    """
    a = trunc.matrix
    gram = a.T @ a
    eigval, eigvec = np.linalg.eigh(gram)
    cutoff = max(float(eigval[-1]), 0.0) * 1e-12 + 1e-300
    inv = np.zeros_like(eigval)
    for i, lam in enumerate(eigval):
        if lam > cutoff:
            inv[i] = 1.0 / lam
        else:
            support = np.abs(eigvec[:, i]) > 1e-8
            for j in np.nonzero(support)[0]:
                if trunc.depths[j] <= trunc.interior_depth:
                    raise NotLeftInvertibleError(
                        f"Gram matrix is singular on the interior (basis "
                        f"vector {trunc.basis[j]!r})")
    gram_inv = eigvec @ np.diag(inv) @ eigvec.T
    return TruncatedOperator(a @ gram_inv, trunc.basis, trunc.depths,
                             trunc.interior_depth,
                             name=f"dual({trunc.name or 'truncation'})")


def gram_diag(trunc: TruncatedOperator, n: int) -> np.ndarray:
    """Diagonal of (T*)^n T^n, i.e. squared norms of T^n on basis
    vectors.  Exact at depths <= interior_depth - n + 1."""
    if n < 0:
        raise DomainError(f"power must be >= 0, got {n}")
    if n > trunc.interior_depth:
        raise RangeError(
            f"power {n} exceeds interior depth {trunc.interior_depth}")
    p = np.linalg.matrix_power(trunc.matrix, n)
    return np.einsum("ij,ij->j", p, p)


@dataclass(frozen=True)
class Table1Report:
    """Per-order comparison of dual power norms against a closed form."""

    row: str
    holds: bool
    max_abs_error: float
    nmax: int
    tolerance: float
    checked: int
    verified_depth: int
    per_order: tuple[tuple[int, float, int], ...]
    note: str = ""


def _require_row_membership(shift: WeightedShift, row: str,
                            tol: float) -> str:
    if row == "kernel":
        two = is_two_isometry(shift, tol)
        if not two.holds:
            raise ClassificationError(
                f"row 'kernel' needs the expansion identity; witness "
                f"{two.witness}")
        kc0 = satisfies_kernel_condition(shift, 0, tol)
        if not kc0.holds:
            raise ClassificationError(
                f"row 'kernel' needs sibling norm constancy; witness "
                f"{kc0.witness}")
        return "sibling-constant expansive shift"
    if not shift.is_adjacency:
        raise ClassificationError(
            f"row {row!r} applies to adjacency shifts (all weights 1)")
    cls = classify_adjacency(shift.tree, tol)
    if row == "quasi_brownian":
        if not cls.quasi_brownian_isometry.holds:
            raise ClassificationError(
                "row 'quasi_brownian' needs a quasi-Brownian adjacency "
                f"shift; witness {cls.quasi_brownian_isometry.witness}")
        return "quasi-Brownian adjacency shift"
    valency = _comb_pattern_valency(shift.tree)
    if valency is None:
        raise ClassificationError(
            "row 'adjacency_pattern' needs a comb-pattern tree")
    return f"comb-pattern adjacency shift of valency {valency}"


def verify_table1(op: Union[WeightedShift, TruncatedOperator], row: str,
                  nmax: int = 8, depth: Optional[int] = None,
                  tol: float = DEFAULT_TOL) -> Table1Report:
    """Check the closed-form identity (T')* ^n (T')^n = r_n(T*T) on the
    interior blocks of a truncation, order by order.

    The left side is computed by repeated multiplication of the dual
    matrix, the right side by spectral decomposition of the symmetric
    Gram matrix T*T, applying r_n to eigenvalues above 0.5 (truncation
    artifacts contribute spurious zero eigenvalues; genuine Gram
    eigenvalues of the covered classes are >= 1).  For weighted shifts
    the class membership matching the row is verified first.
    """
    if row not in _TABLE1_ROWS:
        raise DomainError(
            f"unknown row {row!r}; expected one of {list(_TABLE1_ROWS)}")
    if nmax < 1:
        raise DomainError(f"nmax must be >= 1, got {nmax}")
    note = ""
    if isinstance(op, WeightedShift):
        note = _require_row_membership(op, row, tol)
        trunc = truncate(op, depth)
    else:
        trunc = op
    if nmax > trunc.interior_depth:
        raise RangeError(
            f"nmax {nmax} exceeds interior depth {trunc.interior_depth}")
    dual = dual_matrix(trunc)
    gram = trunc.matrix.T @ trunc.matrix
    eigval, eigvec = np.linalg.eigh(gram)
    max_err = 0.0
    scale = 1.0
    holds = True
    checked = 0
    per_order: list[tuple[int, float, int]] = []
    power = np.eye(trunc.dim)
    for n in range(nmax + 1):
        if n > 0:
            power = dual.matrix @ power
        lhs = power.T @ power
        fvals = np.array([
            _table1_value(row, float(lam), n) if lam > 0.5
            else (1.0 if n == 0 else 0.0)
            for lam in eigval])
        rhs = eigvec @ np.diag(fvals) @ eigvec.T
        idx = trunc.interior_indices(n)
        block = np.ix_(idx, idx)
        err = float(np.max(np.abs(lhs[block] - rhs[block]))) if idx else 0.0
        if idx:
            scale = max(scale, float(np.max(np.abs(rhs[block]))))
        max_err = max(max_err, err)
        checked += len(idx)
        per_order.append((n, err, len(idx)))
    holds = max_err <= tol * (1.0 + scale)
    return Table1Report(row, holds, max_err, nmax, tol, checked,
                        trunc.interior_depth, tuple(per_order), note)


def build_brownian_shift(sigma: float, size: int) -> TruncatedOperator:
    """Truncated two-block expansion: a ray v_0..v_(size-1) shifted one
    step per application, plus a fixed direction c with image
    sigma * v_0 + c.  The Gram matrix is diag(1, ..., 1, 1 + sigma^2)
    up to the cut artifact, and the defect T*T - I has rank one."""
    if sigma <= 0.0:
        raise DomainError(f"sigma must be > 0, got {sigma}")
    if size < 4:
        raise RangeError(f"size must be >= 4, got {size}")
    basis = tuple(f"v{i}" for i in range(size)) + ("c",)
    depths = tuple(range(size)) + (0,)
    m = np.zeros((size + 1, size + 1))
    for i in range(size - 1):
        m[i + 1, i] = 1.0
    m[0, size] = sigma
    m[size, size] = 1.0
    return TruncatedOperator(m, basis, depths, size - 2,
                             name=f"brownian(sigma={sigma}, size={size})")


def block_shift_from_atoms(atoms: Sequence[tuple[float, int]], size: int
                           ) -> tuple[TruncatedOperator,
                                      tuple[float, ...]]:
    """Orthogonal sum of expansive unilateral shifts, one block per
    atom copy: the atom (x, m) contributes m components with weight
    sequence two_isometry_weight(n, x).

    Returns the block operator together with the decomposition multiset
    (the component labels x, one per copy, sorted) — the complete datum
    the unitary-equivalence comparison consumes.
    """
    if size < 2:
        raise RangeError(f"size must be >= 2, got {size}")
    cleaned: list[tuple[float, int]] = []
    for x, mult in atoms:
        x = float(x)
        if x < 1.0:
            raise DomainError(f"atom location {x} < 1")
        if mult < 1:
            raise DomainError(f"multiplicity {mult} < 1")
        cleaned.append((x, int(mult)))
    if len({x for x, _ in cleaned}) != len(cleaned):
        raise DomainError("atom locations must be distinct")
    labels: list[str] = []
    depths: list[int] = []
    weights: list[list[float]] = []
    decomposition: list[float] = []
    for j, (x, mult) in enumerate(sorted(cleaned)):
        for c in range(mult):
            decomposition.append(x)
            labels.extend(f"a{j}c{c}:g{n}" for n in range(size + 1))
            depths.extend(range(size + 1))
            weights.append([two_isometry_weight(n, x) for n in range(size)])
    dim = len(labels)
    m = np.zeros((dim, dim))
    offset = 0
    for comp in weights:
        for n, w in enumerate(comp):
            m[offset + n + 1, offset + n] = w
        offset += size + 1
    trunc = TruncatedOperator(m, tuple(labels), tuple(depths), size - 1,
                              name=f"block sum of {len(weights)} "
                                   f"expansive shifts")
    return trunc, tuple(decomposition)


def dump_matrix(trunc: TruncatedOperator, path: str) -> None:
    """Write the matrix row-major, space-separated, one row per line."""
    np.savetxt(path, trunc.matrix, fmt="%.17g", delimiter=" ")
