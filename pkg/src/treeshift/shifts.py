"""Weighted shifts on rooted directed trees.

A shift maps the basis vector at a vertex u to the weighted sum of the
basis vectors at the children of u.  Everything computed here derives from
the weight map: vertex norms, the expansion (2-isometry) identity, sibling
norm constancy, the Cauchy dual, adjacency-operator classification, and
the complete unitary invariants for the sibling-constant class.

All property checks are depth-bounded: a check at a vertex needs the norms
of its children, so verdicts cover vertices of depth <= N-2 and every
verdict records that verified depth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (ClassificationError, ComparisonError, ConfigurationError,
                     DomainError, NotLeftInvertibleError, RangeError)
from .trees import DirectedTree, classify_tree, generation, branching_degree

__all__ = [
    "WeightedShift",
    "WeightSpec",
    "PropertyVerdict",
    "AdjacencyClassification",
    "ShiftInvariants",
    "two_isometry_weight",
    "build_shift",
    "vertex_norm",
    "operator_norm",
    "is_two_isometry",
    "satisfies_kernel_condition",
    "cauchy_dual",
    "classify_adjacency",
    "shift_invariants",
    "are_unitarily_equivalent",
    "are_unitarily_equivalent_multiset",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9

_SQRT2 = math.sqrt(2.0)


def two_isometry_weight(n: int, x: float) -> float:
    """n-th weight of the expansive unilateral shift with first weight x.

    Equals sqrt((1 + (n+1)(x^2-1)) / (1 + n(x^2-1))).  The family is a
    semigroup under composition in x, is strictly decreasing in n for
    x > 1, and fixes x = 1.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if x < 1.0:
        raise DomainError(f"x must be >= 1, got {x}")
    a = x * x - 1.0
    return math.sqrt((1.0 + (n + 1) * a) / (1.0 + n * a))


class WeightedShift:
    """A tree plus a nonnegative weight per non-root vertex."""

    def __init__(self, tree: DirectedTree, weights: Mapping[str, float],
                 name: Optional[str] = None):
        self._tree = tree
        w: dict[str, float] = {}
        for vid in tree.ids():
            if vid == tree.root:
                if vid in weights:
                    raise ConfigurationError("root must not carry a weight")
                continue
            if vid not in weights:
                raise ConfigurationError(f"missing weight for vertex {vid!r}")
            val = float(weights[vid])
            if not math.isfinite(val) or val < 0.0:
                raise ConfigurationError(
                    f"weight at {vid!r} must be finite and >= 0, got {val}")
            w[vid] = val
        extra = set(weights) - set(w)
        if extra:
            raise ConfigurationError(
                f"weights given for unknown vertices: {sorted(extra)[:3]}")
        self._weights = w
        self.name = name

    @property
    def tree(self) -> DirectedTree:
        return self._tree

    def weight(self, vid: str) -> float:
        try:
            return self._weights[vid]
        except KeyError:
            raise RangeError(f"no weight for vertex {vid!r}") from None

    def weights(self) -> dict[str, float]:
        return dict(self._weights)

    @property
    def has_zero_weights(self) -> bool:
        return any(v == 0.0 for v in self._weights.values())

    @property
    def is_adjacency(self) -> bool:
        return all(v == 1.0 for v in self._weights.values())


@dataclass(frozen=True)
class WeightSpec:
    """Declarative weight assignment.

    kind:
      - "explicit": ``values`` maps every non-root vertex id to a weight.
      - "adjacency": every weight 1.
      - "kernel_condition": sibling groups share their parent's generation
        norm target; a vertex in generation n has squared norm
        two_isometry_weight(n, x)^2, split equally among children or
        according to ``proportions``.
      - "glowny": on a degree-2 root with two infinite rays; branch i gets
        first weight 1/sqrt(2(2-y_i^2)) and then the two-isometry weight
        ladder started at y_i.
      - "dirichlet": path weights two_isometry_weight(n, sqrt(2)).
      - "bergman_dual": path weights sqrt((n+1)/(n+2)).
      - "treiso": path weights sqrt(phi(n+1)/phi(n)) with phi(n) = n^2+1.
    """

    kind: str
    values: Optional[Mapping[str, float]] = None
    x: Optional[float] = None
    split: str = "equal"
    proportions: Optional[Mapping[str, float]] = None
    y1: Optional[float] = None
    y2: Optional[float] = None

    _KINDS = ("explicit", "adjacency", "kernel_condition", "glowny",
              "dirichlet", "bergman_dual", "treiso")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ConfigurationError(
                f"unknown weight kind {self.kind!r}; expected one of "
                f"{list(self._KINDS)}")
        if self.kind == "explicit" and self.values is None:
            raise ConfigurationError("explicit weights require values")
        if self.kind == "kernel_condition":
            if self.x is None:
                raise ConfigurationError("kernel_condition requires x")
            if self.x < 1.0:
                raise DomainError(f"x must be >= 1, got {self.x}")
            if self.split not in ("equal", "given"):
                raise ConfigurationError(
                    f"split must be 'equal' or 'given', got {self.split!r}")
            if self.split == "given" and self.proportions is None:
                raise ConfigurationError(
                    "split='given' requires proportions")
        if self.kind == "glowny":
            for label, y in (("y1", self.y1), ("y2", self.y2)):
                if y is None:
                    raise ConfigurationError(f"glowny requires {label}")
                if not 1.0 < y < _SQRT2:
                    raise DomainError(
                        f"{label} must lie in the open interval "
                        f"(1, sqrt(2)), got {y}")


def _require_path(tree: DirectedTree, kind: str) -> None:
    for g in range(tree.materialized_depth):
        for u in generation(tree, g):
            if tree.degree(u) != 1:
                raise ConfigurationError(
                    f"weight kind {kind!r} requires a path; vertex {u!r} "
                    f"has degree {tree.degree(u)}")


def build_shift(spec: WeightSpec, tree: DirectedTree) -> WeightedShift:
    """Assign weights per the spec; the tree must be compatible."""
    n = tree.materialized_depth
    if spec.kind == "explicit":
        assert spec.values is not None
        return WeightedShift(tree, spec.values, name="explicit")
    if spec.kind == "adjacency":
        w = {v: 1.0 for v in tree.ids() if v != tree.root}
        return WeightedShift(tree, w, name="adjacency")
    if spec.kind in ("dirichlet", "bergman_dual", "treiso"):
        _require_path(tree, spec.kind)
        w = {}
        for d in range(1, n + 1):
            (vid,) = generation(tree, d)
            if spec.kind == "dirichlet":
                w[vid] = two_isometry_weight(d - 1, _SQRT2)
            elif spec.kind == "bergman_dual":
                w[vid] = math.sqrt(d / (d + 1.0))
            else:  # treiso
                phi = lambda k: k * k + 1.0
                w[vid] = math.sqrt(phi(d) / phi(d - 1))
        return WeightedShift(tree, w, name=spec.kind)
    if spec.kind == "kernel_condition":
        assert spec.x is not None
        w = {}
        for g in range(n):
            target = two_isometry_weight(g, spec.x) ** 2
            for u in generation(tree, g):
                ch = tree.children_of(u)
                if not ch:
                    raise ConfigurationError(
                        f"kernel_condition weights need a leafless tree; "
                        f"vertex {u!r} at depth {g} has no children")
                if spec.split == "equal":
                    lam = math.sqrt(target / len(ch))
                    for v in ch:
                        w[v] = lam
                else:
                    assert spec.proportions is not None
                    props = [float(spec.proportions.get(v, 1.0)) for v in ch]
                    if min(props) <= 0:
                        raise ConfigurationError(
                            f"proportions must be > 0 (children of {u!r})")
                    s = sum(p * p for p in props)
                    scale = math.sqrt(target / s)
                    for v, p in zip(ch, props):
                        w[v] = scale * p
        return WeightedShift(tree, w, name=f"kernel_condition(x={spec.x})")
    # glowny
    assert spec.y1 is not None and spec.y2 is not None
    root_children = tree.children_of(tree.root)
    if len(root_children) != 2:
        raise ConfigurationError(
            f"glowny weights require a degree-2 root, got degree "
            f"{len(root_children)}")
    for g in range(1, n):
        for u in generation(tree, g):
            if tree.degree(u) != 1:
                raise ConfigurationError(
                    f"glowny weights require two infinite rays; vertex "
                    f"{u!r} has degree {tree.degree(u)}")
    w = {}
    for i, (first, y) in enumerate(zip(root_children, (spec.y1, spec.y2))):
        w[first] = 1.0 / math.sqrt(2.0 * (2.0 - y * y))
        u, j = first, 2
        while tree.children_of(u):
            (v,) = tree.children_of(u)
            w[v] = two_isometry_weight(j - 2, y)
            u, j = v, j + 1
    return WeightedShift(tree, w,
                         name=f"glowny(y1={spec.y1}, y2={spec.y2})")


def vertex_norm(shift: WeightedShift, u: str) -> float:
    """Norm of the image of the basis vector at u: sqrt(sum of squared
    child weights).  Requires depth(u) <= N-1."""
    tree = shift.tree
    v = tree.vertex(u)
    if v.depth > tree.materialized_depth - 1:
        raise RangeError(
            f"children of {u!r} at depth {v.depth} are not materialized")
    return math.sqrt(sum(shift.weight(c) ** 2 for c in v.children))


def operator_norm(shift: WeightedShift) -> float:
    """Largest vertex norm over the materialized range (the operator norm
    for shifts whose vertex norms are monotone along rays)."""
    tree = shift.tree
    return max(
        (vertex_norm(shift, u)
         for g in range(tree.materialized_depth)
         for u in generation(tree, g)),
        default=0.0)


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of a depth-bounded operator property check."""

    holds: bool
    verified_depth: int
    witness: Optional[tuple[str, float]] = None
    tolerance: float = DEFAULT_TOL
    note: str = ""
    details: Mapping[str, float] = field(default_factory=dict)


def _scaled(residual: float, lhs: float) -> float:
    return residual / (1.0 + abs(lhs))


def is_two_isometry(shift: WeightedShift,
                    tol: float = DEFAULT_TOL) -> PropertyVerdict:
    """Check the expansion identity at every vertex of depth <= N-2:
    sum over children v of weight(v)^2 * (2 - norm(v)^2) must equal 1."""
    tree = shift.tree
    n = tree.materialized_depth
    if n < 2:
        raise RangeError("need materialized depth >= 2")
    norms = {}
    min_norm = math.inf
    for g in range(n):
        for u in generation(tree, g):
            norms[u] = vertex_norm(shift, u)
            min_norm = min(min_norm, norms[u])
    note = f"min vertex norm = {min_norm:.12g}"
    if shift.has_zero_weights:
        note += "; zero weights present"
    for g in range(n - 1):
        for u in generation(tree, g):
            lhs = sum(shift.weight(v) ** 2 * (2.0 - norms[v] ** 2)
                      for v in tree.children_of(u))
            res = _scaled(abs(lhs - 1.0), lhs)
            if res > tol:
                return PropertyVerdict(False, n - 2, (u, res), tol, note,
                                       {"min_vertex_norm": min_norm})
    return PropertyVerdict(True, n - 2, None, tol, note,
                           {"min_vertex_norm": min_norm})


def satisfies_kernel_condition(shift: WeightedShift, k: int = 0,
                               tol: float = DEFAULT_TOL) -> PropertyVerdict:
    """Sibling norm constancy from generation k on.

    For every vertex u with k <= depth(u) <= N-2, the norms of the
    children of u that carry a nonzero weight must coincide (relative
    spread within tolerance).  k = 0 is the plain condition; k >= 1 is
    the perturbed variant.
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    tree = shift.tree
    n = tree.materialized_depth
    if n < k + 2:
        raise RangeError(
            f"need materialized depth >= {k + 2} for k = {k}")
    note = ""
    if shift.has_zero_weights:
        note = "zero-weight children excluded from constancy groups"
    for g in range(k, n - 1):
        for u in generation(tree, g):
            ns = [vertex_norm(shift, v) for v in tree.children_of(u)
                  if shift.weight(v) != 0.0]
            if len(ns) < 2:
                continue
            spread = max(ns) - min(ns)
            if spread > tol * (1.0 + max(ns)):
                return PropertyVerdict(False, n - 2, (u, spread), tol, note)
    return PropertyVerdict(True, n - 2, None, tol, note)


def cauchy_dual(shift: WeightedShift) -> WeightedShift:
    """Dual shift: weight(v) divided by the squared norm at parent(v).

    Requires every vertex norm to be positive (left invertibility on the
    materialized part).  The result lives on the same tree; treat its
    deepest level as one step less reliable than the original's.
    """
    tree = shift.tree
    norms = {}
    for g in range(tree.materialized_depth):
        for u in generation(tree, g):
            nu = vertex_norm(shift, u)
            if nu == 0.0:
                raise NotLeftInvertibleError(
                    f"vertex norm is 0 at {u!r}; the shift is not left "
                    f"invertible")
            norms[u] = nu
    w = {}
    for vid, lam in shift.weights().items():
        p = tree.parent_of(vid)
        w[vid] = lam / norms[p] ** 2
    return WeightedShift(tree, w,
                         name=f"dual({shift.name})" if shift.name else None)


@dataclass(frozen=True)
class AdjacencyClassification:
    """Class membership of the all-weights-one shift on a tree.

    Flags are mutually consistent: isometry implies all others.  The
    kernel_condition flag reports membership in the joint class
    (expansion identity plus sibling constancy), which for adjacency
    shifts holds exactly on paths.
    """

    two_isometry: PropertyVerdict
    kernel_condition: PropertyVerdict
    quasi_brownian_isometry: PropertyVerdict
    brownian_isometry: PropertyVerdict
    isometry: PropertyVerdict


def classify_adjacency(tree: DirectedTree,
                       tol: float = DEFAULT_TOL) -> AdjacencyClassification:
    """Classify the adjacency (all weights one) shift on the tree."""
    n = tree.materialized_depth
    if n < 2:
        raise RangeError("need materialized depth >= 2")
    vd = n - 2

    def verdict(holds, witness=None, res=0.0, note=""):
        return PropertyVerdict(holds, vd,
                               None if holds else (witness, res), tol, note)

    # expansion identity: child degrees sum to 2*deg - 1
    two_iso = verdict(True)
    for g in range(n - 1):
        for u in generation(tree, g):
            lhs = sum(tree.degree(v) for v in tree.children_of(u))
            rhs = 2 * tree.degree(u) - 1
            if lhs != rhs:
                two_iso = verdict(False, u, _scaled(abs(lhs - rhs), lhs),
                                  note=f"degree sum {lhs} != {rhs}")
                break
        if not two_iso.holds:
            break

    # all degrees one (isometry; on rooted leafless trees: a path)
    path_witness = None
    for g in range(n - 1):
        for u in generation(tree, g):
            if tree.degree(u) != 1:
                path_witness = u
                break
        if path_witness:
            break
    iso = verdict(path_witness is None, path_witness,
                  float(tree.degree(path_witness) - 1) if path_witness else 0.0)

    kernel = verdict(
        iso.holds and two_iso.holds,
        None if (iso.holds and two_iso.holds) else
        (path_witness if path_witness else two_iso.witness[0]),
        0.0 if (iso.holds and two_iso.holds) else 1.0,
        note="adjacency shifts satisfy the joint sibling-constant class "
             "exactly on paths")

    structure = classify_tree(tree)
    qb_holds = two_iso.holds and (iso.holds or structure.quasi_brownian.holds)
    qb_witness = None
    if not qb_holds:
        if not two_iso.holds:
            qb_witness = two_iso.witness[0]
        elif structure.quasi_brownian.witness is not None:
            qb_witness = structure.quasi_brownian.witness
        else:
            qb_witness = tree.root
    qb = verdict(qb_holds, qb_witness, 0.0 if qb_holds else 1.0,
                 note=f"valency {structure.valency}" if structure.valency
                 else "")

    brownian = verdict(
        two_iso.holds and iso.holds,
        None if (two_iso.holds and iso.holds) else
        (path_witness if path_witness else two_iso.witness[0]),
        0.0 if (two_iso.holds and iso.holds) else 1.0,
        note="rooted case: requires a path")
    return AdjacencyClassification(two_iso, kernel, qb, brownian, iso)


@dataclass(frozen=True)
class ShiftInvariants:
    """Complete unitary invariants within the sibling-constant class:
    root norm and the per-generation branching degrees."""

    root_norm: float
    branching: tuple[int, ...]
    verified_depth: int
    truncated: bool = True


def shift_invariants(shift: WeightedShift,
                     tol: float = DEFAULT_TOL) -> ShiftInvariants:
    """Invariants of a shift in the sibling-constant expansion class.

    Raises ClassificationError outside that class: the pair is a complete
    invariant only there.
    """
    two = is_two_isometry(shift, tol)
    if not two.holds:
        raise ClassificationError(
            f"invariants require the expansion identity; witness "
            f"{two.witness}")
    kc = satisfies_kernel_condition(shift, 0, tol)
    if not kc.holds:
        raise ClassificationError(
            f"invariants require sibling norm constancy; witness "
            f"{kc.witness}")
    tree = shift.tree
    n = tree.materialized_depth
    return ShiftInvariants(
        vertex_norm(shift, tree.root),
        tuple(branching_degree(tree, k) for k in range(1, n + 1)),
        verified_depth=n)


def are_unitarily_equivalent(a: ShiftInvariants, b: ShiftInvariants,
                             tol: float = 1e-12) -> bool:
    """Equivalence decision from invariant tuples computed at equal depth.

    True iff the root norms agree above 1 and the branching sequences
    agree elementwise, or both root norms are 1 and the branching sums
    agree.
    """
    if a.verified_depth != b.verified_depth:
        raise ComparisonError(
            f"invariants computed to different depths "
            f"({a.verified_depth} vs {b.verified_depth})")
    a_one = math.isclose(a.root_norm, 1.0, rel_tol=tol, abs_tol=tol)
    b_one = math.isclose(b.root_norm, 1.0, rel_tol=tol, abs_tol=tol)
    if a_one and b_one:
        return sum(a.branching) == sum(b.branching)
    if a_one != b_one:
        return False
    return (math.isclose(a.root_norm, b.root_norm, rel_tol=tol, abs_tol=tol)
            and a.branching == b.branching)


def are_unitarily_equivalent_multiset(
        a: Iterable[Sequence[float]], b: Iterable[Sequence[float]]) -> bool:
    """Multiset comparison of scalar-shift weight prefixes (exact)."""
    sa = sorted(tuple(s) for s in a)
    sb = sorted(tuple(s) for s in b)
    return sa == sb
