"""Rooted directed trees: finite-depth materialization, generators, classifiers.

A tree is materialized to a finite depth N: every vertex of depth <= N is
present and none deeper.  All structural verdicts are statements about the
materialized part only and carry the depth to which they were verified.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConfigurationError, RangeError, StructureError

__all__ = [
    "Vertex",
    "DirectedTree",
    "TreeSpec",
    "TreeStructureReport",
    "StructureVerdict",
    "materialize",
    "generation",
    "branching_degree",
    "classify_tree",
    "comb_tree_spec",
    "hub_comb_tree_spec",
    "two_plus_three_tree_spec",
]


@dataclass(frozen=True)
class Vertex:
    """One vertex: opaque id, depth, optional parent id, ordered child ids."""

    id: str
    depth: int
    parent: Optional[str]
    children: tuple[str, ...]


class DirectedTree:
    """Immutable rooted directed tree truncated at ``materialized_depth``.

    Every non-root vertex has exactly one parent; depth(child) equals
    depth(parent) + 1; the depth-n slice equals the n-th generation of
    descendants of the root.
    """

    def __init__(self, vertices: Mapping[str, Vertex], root: str,
                 materialized_depth: int):
        self._vertices = dict(vertices)
        self._root = root
        self._depth = materialized_depth
        self._validate()
        gens: list[list[str]] = [[] for _ in range(materialized_depth + 1)]
        for v in self._vertices.values():
            gens[v.depth].append(v.id)
        # canonical order: parent order first, then child index within parent
        order: dict[str, int] = {root: 0}
        for n in range(materialized_depth):
            nxt: list[str] = []
            for u in sorted(gens[n], key=order.__getitem__):
                nxt.extend(self._vertices[u].children)
            for i, w in enumerate(nxt):
                order[w] = i
            gens[n + 1] = nxt
        self._generations: tuple[tuple[str, ...], ...] = tuple(
            tuple(g) for g in gens)

    def _validate(self) -> None:
        roots = [v for v in self._vertices.values() if v.parent is None]
        if len(roots) != 1 or roots[0].id != self._root:
            extra = [v.id for v in roots if v.id != self._root]
            raise StructureError(
                f"tree must have exactly one parentless vertex (the root); "
                f"offenders: {extra or [self._root]}")
        if roots[0].depth != 0:
            raise StructureError(f"root {self._root!r} must have depth 0")
        for v in self._vertices.values():
            if v.depth > self._depth:
                raise StructureError(
                    f"vertex {v.id!r} at depth {v.depth} exceeds "
                    f"materialized depth {self._depth}")
            if v.parent is not None:
                p = self._vertices.get(v.parent)
                if p is None:
                    raise StructureError(
                        f"vertex {v.id!r} names missing parent {v.parent!r}")
                if v.depth != p.depth + 1:
                    raise StructureError(
                        f"vertex {v.id!r}: depth {v.depth} is not parent "
                        f"depth {p.depth} + 1")
                if v.id not in p.children:
                    raise StructureError(
                        f"vertex {v.id!r} missing from children of "
                        f"{v.parent!r}")
            for c in v.children:
                cv = self._vertices.get(c)
                if cv is None:
                    raise StructureError(
                        f"vertex {v.id!r} lists missing child {c!r}")
                if cv.parent != v.id:
                    raise StructureError(
                        f"vertex {c!r} has two parents "
                        f"({cv.parent!r} and {v.id!r})")

    # -- read API ---------------------------------------------------------
    @property
    def root(self) -> str:
        return self._root

    @property
    def materialized_depth(self) -> int:
        return self._depth

    @property
    def vertex_count(self) -> int:
        return len(self._vertices)

    def ids(self) -> Iterable[str]:
        for g in self._generations:
            yield from g

    def __contains__(self, vid: str) -> bool:
        return vid in self._vertices

    def vertex(self, vid: str) -> Vertex:
        try:
            return self._vertices[vid]
        except KeyError:
            raise RangeError(f"unknown vertex {vid!r}") from None

    def depth_of(self, vid: str) -> int:
        return self.vertex(vid).depth

    def parent_of(self, vid: str) -> Optional[str]:
        return self.vertex(vid).parent

    def children_of(self, vid: str) -> tuple[str, ...]:
        return self.vertex(vid).children

    def degree(self, vid: str) -> int:
        """Number of children.  Meaningful for depth <= N-1 only."""
        v = self.vertex(vid)
        if v.depth > self._depth - 1:
            raise RangeError(
                f"degree of {vid!r} at depth {v.depth} is unknown: children "
                f"beyond depth {self._depth} are not materialized")
        return len(v.children)

    def generations(self) -> tuple[tuple[str, ...], ...]:
        return self._generations

    def resolve_path(self, indices: Sequence[int]) -> str:
        """Vertex reached from the root by successive child indices."""
        vid = self._root
        for i in indices:
            ch = self.children_of(vid)
            if not 0 <= i < len(ch):
                raise RangeError(
                    f"child index {i} out of range at vertex {vid!r} "
                    f"(degree {len(ch)})")
            vid = ch[i]
        return vid


@dataclass(frozen=True)
class TreeSpec:
    """Declarative description of a tree family.

    kind:
      - "path": one child per vertex.
      - "t_eta_kappa": root with ``eta`` children, every other vertex one
        child (only ``kappa`` = 0 is supported).
      - "quasi_brownian": every vertex has degree 1 or ``valency`` l, and
        each degree-l vertex has exactly one degree-l child; generation n
        has 1 + n(l-1) vertices.
      - "explicit": ``edges`` is a (parent, child) list over opaque ids.
      - "generation_rule": ``rule[g][i]`` is the child count of the i-th
        vertex of generation g; generations beyond the rule continue with
        one child each.
    """

    kind: str
    eta: Optional[int] = None
    kappa: int = 0
    valency: Optional[int] = None
    edges: Optional[tuple[tuple[str, str], ...]] = None
    rule: Optional[tuple[tuple[int, ...], ...]] = None
    depth: Optional[int] = None

    _KINDS = ("path", "t_eta_kappa", "quasi_brownian", "explicit",
              "generation_rule")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ConfigurationError(
                f"unknown tree kind {self.kind!r}; expected one of "
                f"{list(self._KINDS)}")
        if self.kind == "t_eta_kappa":
            if self.eta is None or self.eta < 2:
                raise ConfigurationError("t_eta_kappa requires eta >= 2")
            if self.kappa != 0:
                raise ConfigurationError(
                    "only kappa = 0 trees are generated")
        if self.kind == "quasi_brownian":
            if self.valency is None or self.valency < 2:
                raise ConfigurationError(
                    "quasi_brownian requires valency >= 2")
        if self.kind == "explicit" and not self.edges:
            raise ConfigurationError("explicit tree requires an edge list")
        if self.kind == "generation_rule" and self.rule is None:
            raise ConfigurationError("generation_rule requires a rule table")


def _gen_ids(depth: int, count: int) -> list[str]:
    return [f"g{depth}:{i}" for i in range(count)]


def _build_from_degree_table(degrees: list[list[int]],
                             depth: int) -> DirectedTree:
    """Build a tree from per-generation child counts (generation order)."""
    vertices: dict[str, Vertex] = {}
    prev = _gen_ids(0, 1)
    rows: list[list[str]] = [prev]
    parents: dict[str, Optional[str]] = {prev[0]: None}
    child_lists: dict[str, list[str]] = {prev[0]: []}
    for g in range(depth):
        degs = degrees[g]
        if len(degs) != len(prev):
            raise StructureError(
                f"generation {g} rule lists {len(degs)} degrees for "
                f"{len(prev)} vertices")
        nxt = _gen_ids(g + 1, sum(degs))
        k = 0
        for u, d in zip(prev, degs):
            if d < 0:
                raise StructureError(
                    f"negative child count at generation {g}")
            for _ in range(d):
                w = nxt[k]
                parents[w] = u
                child_lists[u].append(w)
                child_lists[w] = []
                k += 1
        rows.append(nxt)
        prev = nxt
    for g, row in enumerate(rows):
        for vid in row:
            vertices[vid] = Vertex(vid, g, parents[vid],
                                   tuple(child_lists[vid]))
    return DirectedTree(vertices, rows[0][0], depth)


def _quasi_brownian_degrees(valency: int, depth: int) -> list[list[int]]:
    degs: list[list[int]] = []
    kinds = ["V"]  # V = degree-valency vertex, R = ray vertex
    for _ in range(depth):
        degs.append([valency if k == "V" else 1 for k in kinds])
        nxt: list[str] = []
        for k in kinds:
            if k == "V":
                nxt.append("V")
                nxt.extend(["R"] * (valency - 1))
            else:
                nxt.append("R")
        kinds = nxt
    return degs


def _comb_degrees(valency: int, depth: int) -> list[list[int]]:
    """Root of degree l; its children are one ray and l-1 comb spines;
    every spine vertex has one ray child and one spine child."""
    degs: list[list[int]] = []
    kinds = ["root"]
    deg_of = {"root": valency, "ray": 1, "spine": 2}
    child_of = {"root": ["ray"] + ["spine"] * (valency - 1),
                "ray": ["ray"], "spine": ["ray", "spine"]}
    for _ in range(depth):
        degs.append([deg_of[k] for k in kinds])
        kinds = [c for k in kinds for c in child_of[k]]
    return degs


def _hub_comb_degrees(valency: int, depth: int) -> list[list[int]]:
    """Root of degree l with l-1 ray children and one degree-l hub child;
    the hub's children are one ray and l-1 comb spines."""
    degs: list[list[int]] = []
    kinds = ["root"]
    deg_of = {"root": valency, "hub": valency, "ray": 1, "spine": 2}
    child_of = {"root": ["ray"] * (valency - 1) + ["hub"],
                "hub": ["ray"] + ["spine"] * (valency - 1),
                "ray": ["ray"], "spine": ["ray", "spine"]}
    for _ in range(depth):
        degs.append([deg_of[k] for k in kinds])
        kinds = [c for k in kinds for c in child_of[k]]
    return degs


def comb_tree_spec(valency: int, depth: int) -> TreeSpec:
    """Generation rule for the comb tree of the given valency."""
    if valency < 2:
        raise ConfigurationError("comb tree requires valency >= 2")
    return TreeSpec(kind="generation_rule",
                    rule=tuple(tuple(r) for r in _comb_degrees(valency, depth)),
                    depth=depth)


def hub_comb_tree_spec(valency: int, depth: int) -> TreeSpec:
    """Generation rule for the hub-comb tree of the given valency."""
    if valency < 2:
        raise ConfigurationError("hub-comb tree requires valency >= 2")
    return TreeSpec(kind="generation_rule",
                    rule=tuple(tuple(r) for r in
                               _hub_comb_degrees(valency, depth)),
                    depth=depth)


def two_plus_three_tree_spec(variant: str, depth: int) -> TreeSpec:
    """The two non-isomorphic trees with branching degrees (1, 2, 0, ...).

    Variant "a": root degree 2, generation-1 degrees (3, 1).
    Variant "b": root degree 2, generation-1 degrees (2, 2).
    All later vertices have one child.
    """
    if variant not in ("a", "b"):
        raise ConfigurationError("variant must be 'a' or 'b'")
    if depth < 2:
        raise ConfigurationError("two-plus-three trees need depth >= 2")
    start: list[tuple[int, ...]] = [(2,), (3, 1) if variant == "a" else (2, 2)]
    return TreeSpec(kind="generation_rule", rule=tuple(start), depth=depth)


def _build_explicit(edges: Sequence[tuple[str, str]],
                    depth: int) -> DirectedTree:
    parents: dict[str, str] = {}
    child_lists: dict[str, list[str]] = {}
    nodes: set[str] = set()
    for p, c in edges:
        nodes.add(p)
        nodes.add(c)
        child_lists.setdefault(p, [])
        child_lists.setdefault(c, [])
        if c in parents and parents[c] != p:
            raise StructureError(f"vertex {c!r} has two parents")
        if c in parents:
            continue
        if p == c:
            raise StructureError(f"vertex {c!r} is its own parent (cycle)")
        parents[c] = p
        child_lists[p].append(c)
    roots = sorted(nodes - set(parents))
    if len(roots) != 1:
        raise StructureError(
            f"edge list must describe one tree; parentless vertices: {roots}")
    root = roots[0]
    depths: dict[str, int] = {}
    for v in nodes:
        chain = []
        cur = v
        while cur not in depths and cur in parents:
            if cur in chain:
                raise StructureError(f"cycle through vertex {cur!r}")
            chain.append(cur)
            cur = parents[cur]
        base = depths.get(cur, 0)
        for i, u in enumerate(reversed(chain)):
            depths[u] = base + i + 1
        depths.setdefault(v, depths.get(v, 0))
    depths[root] = 0
    too_deep = sorted(v for v, d in depths.items() if d > depth)
    if too_deep:
        raise StructureError(
            f"vertex {too_deep[0]!r} at depth {depths[too_deep[0]]} exceeds "
            f"requested depth {depth}")
    vertices = {
        v: Vertex(v, depths[v], parents.get(v), tuple(child_lists[v]))
        for v in nodes
    }
    return DirectedTree(vertices, root, depth)


def materialize(spec: TreeSpec, depth: Optional[int] = None) -> DirectedTree:
    """Materialize a tree spec to the given depth (default: spec.depth)."""
    if depth is None:
        depth = spec.depth
    if depth is None:
        raise ConfigurationError("no materialization depth given")
    if depth < 0:
        raise RangeError(f"depth must be >= 0, got {depth}")
    if spec.kind == "path":
        return _build_from_degree_table([[1]] * depth if depth else [], depth)
    if spec.kind == "t_eta_kappa":
        assert spec.eta is not None
        degs = [[spec.eta]] + [[1] * spec.eta for _ in range(depth - 1)]
        return _build_from_degree_table(degs[:depth], depth)
    if spec.kind == "quasi_brownian":
        assert spec.valency is not None
        return _build_from_degree_table(
            _quasi_brownian_degrees(spec.valency, depth), depth)
    if spec.kind == "explicit":
        assert spec.edges is not None
        return _build_explicit(spec.edges, depth)
    # generation_rule
    assert spec.rule is not None
    degs2: list[list[int]] = [list(r) for r in spec.rule[:depth]]
    width = 1
    for row in degs2:
        if len(row) != width:
            raise StructureError(
                f"generation rule row of length {len(row)} does not match "
                f"generation size {width}")
        width = sum(row)
    while len(degs2) < depth:
        degs2.append([1] * width)
    return _build_from_degree_table(degs2, depth)


def generation(tree: DirectedTree, n: int) -> tuple[str, ...]:
    """Vertices of depth n, in canonical order."""
    if not 0 <= n <= tree.materialized_depth:
        raise RangeError(
            f"generation {n} out of range [0, {tree.materialized_depth}]")
    return tree.generations()[n]


def branching_degree(tree: DirectedTree, k: int) -> int:
    """Sum over generation k-1 of (degree - 1)."""
    if not 1 <= k <= tree.materialized_depth:
        raise RangeError(
            f"branching degree index {k} out of range "
            f"[1, {tree.materialized_depth}]")
    return sum(tree.degree(u) - 1 for u in generation(tree, k - 1))


@dataclass(frozen=True)
class StructureVerdict:
    """Outcome of a structural check, bounded by the verified depth."""

    holds: bool
    verified_depth: int
    witness: Optional[str] = None
    note: str = ""


@dataclass(frozen=True)
class TreeStructureReport:
    """Structure report: verdicts are claims about depth <= verified_depth
    only, never about the unmaterialized tail."""

    leafless_to_depth: bool
    locally_finite: bool
    max_degree: int
    degree_multiset_per_generation: tuple[tuple[int, ...], ...]
    quasi_brownian: StructureVerdict
    valency: Optional[int] = None


def classify_tree(tree: DirectedTree) -> TreeStructureReport:
    """Structural classification of the materialized tree.

    The quasi-Brownian verdict checks, for every vertex u of depth
    <= N-2: the degree of u and of each child is 1 or l (l = the maximum
    degree), and the child degrees sum to 2*deg(u) - 1.
    """
    n = tree.materialized_depth
    known = [u for g in range(n) for u in generation(tree, g)]
    leafless = all(tree.degree(u) >= 1 for u in known)
    max_deg = max((tree.degree(u) for u in known), default=0)
    multisets = tuple(
        tuple(sorted(tree.degree(u) for u in generation(tree, g)))
        for g in range(n))
    if n < 2:
        verdict = StructureVerdict(
            False, max(n - 2, 0),
            note="materialized depth < 2: quasi-Brownian condition "
                 "unverifiable")
        return TreeStructureReport(leafless, True, max_deg, multisets,
                                   verdict, None)
    if max_deg < 2:
        verdict = StructureVerdict(
            False, n - 2, note="no vertex of degree >= 2")
        return TreeStructureReport(leafless, True, max_deg, multisets,
                                   verdict, None)
    valency = max_deg
    witness = None
    for g in range(n - 1):
        for u in generation(tree, g):
            du = tree.degree(u)
            child_degs = [tree.degree(v) for v in tree.children_of(u)]
            ok = (du in (1, valency)
                  and all(d in (1, valency) for d in child_degs)
                  and sum(child_degs) == 2 * du - 1)
            if not ok:
                witness = u
                break
        if witness:
            break
    if witness is not None:
        verdict = StructureVerdict(False, n - 2, witness=witness,
                                   note="verified to depth N-2")
        return TreeStructureReport(leafless, True, max_deg, multisets,
                                   verdict, None)
    verdict = StructureVerdict(True, n - 2, note="verified to depth N-2")
    return TreeStructureReport(leafless, True, max_deg, multisets, verdict,
                               valency)
