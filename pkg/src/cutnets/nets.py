"""Graph model for binary phylogenetic networks, unrooted and rooted.

Everything here is immutable after construction: operations return new
networks and never touch their input.  Vertex ids are allocated by a
monotone per-network counter and never reused, so a chain of reductions
can always be traced back through stable ids.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import (
    EndpointIsLeaf,
    IsCutEdge,
    LabelSetMismatch,
    NotCutEdge,
    NotDegreeTwo,
    TooLarge,
    UnknownEdge,
    WouldCreateParallelEdge,
)

VertexId = int
Edge = tuple[int, int]   # canonical (min, max)
Arc = tuple[int, int]    # (tail, head)


def canon_edge(u: VertexId, v: VertexId) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Split:
    """A bipartition of the leaf-label set, canonically ordered.

    ``side_a`` holds the lexicographically smallest label, so equal splits
    compare and hash equal and can key containers.
    """

    side_a: frozenset[str]
    side_b: frozenset[str]

    @staticmethod
    def of(side_a, side_b) -> "Split":
        a, b = frozenset(side_a), frozenset(side_b)
        if not a or not b:
            raise ValueError("split sides must be nonempty")
        if a & b:
            raise ValueError("split sides must be disjoint")
        if min(min(a), min(b)) in b:
            a, b = b, a
        return Split(a, b)

    @property
    def labels(self) -> frozenset[str]:
        return self.side_a | self.side_b

    @property
    def is_trivial(self) -> bool:
        return len(self.side_a) == 1 or len(self.side_b) == 1

    def is_compatible_with(self, other: "Split") -> bool:
        # Compatible iff one of the four pairwise side intersections is empty.
        return (
            not (self.side_a & other.side_a)
            or not (self.side_a & other.side_b)
            or not (self.side_b & other.side_a)
            or not (self.side_b & other.side_b)
        )

    def sort_key(self):
        return (tuple(sorted(self.side_a)), tuple(sorted(self.side_b)))

    def __str__(self) -> str:
        return ",".join(sorted(self.side_a)) + "|" + ",".join(sorted(self.side_b))


@dataclass(frozen=True)
class Blob:
    """A maximal bridgeless subgraph that is not a single vertex."""

    vertices: frozenset[VertexId]
    edges: frozenset[Edge]

    @property
    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.vertices) + 1


@dataclass(frozen=True)
class Chain:
    """A path of same-blob vertices, each incident to a cut-edge.

    ``incident_cut_edges`` holds, per path vertex, the cut-edge hanging off
    it.  Length is the number of vertices.
    """

    path_vertices: tuple[VertexId, ...]
    incident_cut_edges: tuple[Edge, ...]

    @property
    def length(self) -> int:
        return len(self.path_vertices)


class UndirectedNet:
    """Simple undirected graph whose labeled degree-1 vertices are leaves.

    The container itself accepts arbitrary simple graphs; ``validate_unrooted``
    reports how far an instance is from a binary phylogenetic network.
    """

    __slots__ = ("vertices", "edges", "leaf_labels", "next_id",
                 "_adj", "_cuts", "_blob_list", "_chain_list", "_by_label")

    def __init__(self, vertices, edges, leaf_labels, next_id=None):
        self.vertices = frozenset(vertices)
        self.edges = frozenset(canon_edge(u, v) for u, v in edges)
        for u, v in self.edges:
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge ({u},{v}) references an undeclared vertex")
        self.leaf_labels = dict(leaf_labels)
        for v in self.leaf_labels:
            if v not in self.vertices:
                raise ValueError(f"label on undeclared vertex {v}")
        top = max(self.vertices, default=0) + 1
        self.next_id = top if next_id is None else max(next_id, top)
        self._adj = None
        self._cuts = None
        self._blob_list = None
        self._chain_list = None
        self._by_label = None

    @staticmethod
    def build(edges, leaf_labels, extra_vertices=()) -> "UndirectedNet":
        vertices = set(extra_vertices) | set(leaf_labels)
        for u, v in edges:
            vertices.add(u)
            vertices.add(v)
        return UndirectedNet(vertices, edges, leaf_labels)

    # -- structure queries ----------------------------------------------------

    def adjacency(self) -> dict[VertexId, tuple[VertexId, ...]]:
        if self._adj is None:
            adj = {v: [] for v in self.vertices}
            for u, v in self.edges:
                adj[u].append(v)
                if u != v:
                    adj[v].append(u)
            self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        return self._adj

    def neighbors(self, v: VertexId) -> tuple[VertexId, ...]:
        return self.adjacency()[v]

    def degree(self, v: VertexId) -> int:
        return len(self.adjacency()[v])

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return canon_edge(u, v) in self.edges

    def leaves(self) -> frozenset[VertexId]:
        return frozenset(self.leaf_labels)

    def labels(self) -> frozenset[str]:
        return frozenset(self.leaf_labels.values())

    def vertex_of_label(self, label: str) -> VertexId:
        if self._by_label is None:
            self._by_label = {lab: v for v, lab in self.leaf_labels.items()}
        return self._by_label[label]

    def internal_vertices(self) -> frozenset[VertexId]:
        return self.vertices - self.leaves()

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = _component_of(self.adjacency(), next(iter(self.vertices)))
        return len(seen) == len(self.vertices)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    # -- bridges, blobs, chains -----------------------------------------------

    def cut_edges(self) -> frozenset[Edge]:
        """All bridges, via an iterative lowpoint DFS."""
        if self._cuts is None:
            adj = self.adjacency()
            index = {}
            low = {}
            bridges = set()
            counter = 0
            for root in self.vertices:
                if root in index:
                    continue
                stack = [(root, None, iter(adj[root]))]
                index[root] = low[root] = counter
                counter += 1
                while stack:
                    v, parent_edge, it = stack[-1]
                    advanced = False
                    for w in it:
                        e = canon_edge(v, w)
                        if e == parent_edge or w == v:
                            continue
                        if w in index:
                            low[v] = min(low[v], index[w])
                        else:
                            index[w] = low[w] = counter
                            counter += 1
                            stack.append((w, e, iter(adj[w])))
                            advanced = True
                            break
                    if not advanced:
                        stack.pop()
                        if stack:
                            p = stack[-1][0]
                            low[p] = min(low[p], low[v])
                            if low[v] > index[p]:
                                bridges.add(canon_edge(p, v))
            self._cuts = frozenset(bridges)
        return self._cuts

    def trivial_cut_edges(self) -> frozenset[Edge]:
        leaves = self.leaves()
        return frozenset(e for e in self.cut_edges() if e[0] in leaves or e[1] in leaves)

    def is_simple_network(self) -> bool:
        """True when every cut-edge is trivial (incident to a leaf)."""
        return self.cut_edges() == self.trivial_cut_edges()

    def blobs(self) -> tuple[Blob, ...]:
        if self._blob_list is None:
            cuts = self.cut_edges()
            adj = {v: [] for v in self.vertices}
            for u, v in self.edges:
                if (u, v) not in cuts:
                    adj[u].append(v)
                    adj[v].append(u)
            seen = set()
            out = []
            for v in sorted(self.vertices):
                if v in seen:
                    continue
                comp = _component_of(adj, v)
                seen |= comp
                if len(comp) > 1:
                    edges = frozenset(e for e in self.edges
                                      if e not in cuts and e[0] in comp and e[1] in comp)
                    out.append(Blob(frozenset(comp), edges))
            self._blob_list = tuple(out)
        return self._blob_list

    def maximal_chains(self) -> tuple[Chain, ...]:
        """Every maximal chain, each reported once.

        Within a blob, the cut-edge-incident vertices induce a subgraph of
        maximum degree 2 (each such vertex spends one of its three edges on
        the cut-edge), so chains are simply the components of that subgraph:
        a path component is itself the maximal chain, and a fully qualifying
        cycle is reported as the path that starts at its lowest vertex id and
        proceeds toward the lower-id neighbor.
        """
        if self._chain_list is not None:
            return self._chain_list
        cuts = self.cut_edges()
        cut_at = {}
        for e in sorted(cuts):
            for v in e:
                cut_at.setdefault(v, e)
        chains = []
        for blob in self.blobs():
            marked = {v for v in blob.vertices if v in cut_at}
            if not marked:
                continue
            adj = {v: [] for v in marked}
            for u, v in blob.edges:
                if u in marked and v in marked:
                    adj[u].append(v)
                    adj[v].append(u)
            seen = set()
            for start in sorted(marked):
                if start in seen:
                    continue
                comp = _component_of(adj, start)
                seen |= comp
                if any(len(adj[v]) > 2 for v in comp):
                    raise AssertionError("chain subgraph has a degree-3 vertex; input is not binary")
                if all(len(adj[v]) == 2 for v in comp) and len(comp) >= 3:
                    first = min(comp)
                    path = _walk_path(adj, first, min(adj[first]), len(comp))
                else:
                    ends = sorted(v for v in comp if len(adj[v]) <= 1)
                    first = ends[0]
                    nxt = adj[first][0] if adj[first] else None
                    path = _walk_path(adj, first, nxt, len(comp))
                chains.append(Chain(tuple(path), tuple(cut_at[v] for v in path)))
        chains.sort(key=lambda c: c.path_vertices)
        self._chain_list = tuple(chains)
        return self._chain_list

    def reticulation_number(self) -> int:
        return len(self.edges) - (len(self.vertices) - 1)

    def level(self) -> int:
        return max((b.cycle_rank for b in self.blobs()), default=0)

    # -- derivation helpers ----------------------------------------------------

    def replace(self, *, vertices=None, edges=None, leaf_labels=None, next_id=None) -> "UndirectedNet":
        return UndirectedNet(
            self.vertices if vertices is None else vertices,
            self.edges if edges is None else edges,
            self.leaf_labels if leaf_labels is None else leaf_labels,
            self.next_id if next_id is None else next_id,
        )

    def __repr__(self) -> str:
        return (f"UndirectedNet(|V|={len(self.vertices)}, |E|={len(self.edges)}, "
                f"X={sorted(self.leaf_labels.values())})")


class RootedNet:
    """Rooted binary phylogenetic network: a DAG container with labeled sinks."""

    __slots__ = ("vertices", "arcs", "root", "leaf_labels", "next_id",
                 "_succ", "_pred", "_by_label", "_topo")

    def __init__(self, vertices, arcs, root, leaf_labels, next_id=None):
        self.vertices = frozenset(vertices)
        self.arcs = frozenset((u, v) for u, v in arcs)
        self.root = root
        self.leaf_labels = dict(leaf_labels)
        if root not in self.vertices:
            raise ValueError("root is not a vertex")
        for u, v in self.arcs:
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"arc ({u},{v}) references an undeclared vertex")
        top = max(self.vertices, default=0) + 1
        self.next_id = top if next_id is None else max(next_id, top)
        self._succ = None
        self._pred = None
        self._by_label = None
        self._topo = None

    @staticmethod
    def build(arcs, root, leaf_labels) -> "RootedNet":
        vertices = {root} | set(leaf_labels)
        for u, v in arcs:
            vertices.add(u)
            vertices.add(v)
        return RootedNet(vertices, arcs, root, leaf_labels)

    def _maps(self):
        if self._succ is None:
            succ = {v: [] for v in self.vertices}
            pred = {v: [] for v in self.vertices}
            for u, v in self.arcs:
                succ[u].append(v)
                pred[v].append(u)
            self._succ = {v: tuple(sorted(c)) for v, c in succ.items()}
            self._pred = {v: tuple(sorted(p)) for v, p in pred.items()}
        return self._succ, self._pred

    def children(self, v: VertexId) -> tuple[VertexId, ...]:
        return self._maps()[0][v]

    def parents(self, v: VertexId) -> tuple[VertexId, ...]:
        return self._maps()[1][v]

    def out_degree(self, v: VertexId) -> int:
        return len(self.children(v))

    def in_degree(self, v: VertexId) -> int:
        return len(self.parents(v))

    def leaves(self) -> frozenset[VertexId]:
        return frozenset(self.leaf_labels)

    def labels(self) -> frozenset[str]:
        return frozenset(self.leaf_labels.values())

    def vertex_of_label(self, label: str) -> VertexId:
        if self._by_label is None:
            self._by_label = {lab: v for v, lab in self.leaf_labels.items()}
        return self._by_label[label]

    def reticulations(self) -> frozenset[VertexId]:
        return frozenset(v for v in self.vertices if self.in_degree(v) >= 2)

    def tree_vertices(self) -> frozenset[VertexId]:
        return frozenset(v for v in self.vertices
                         if self.in_degree(v) == 1 and self.out_degree(v) == 2)

    def reticulation_number(self) -> int:
        return len(self.reticulations())

    def topological_order(self):
        """Vertices in topological order, or None if the digraph has a cycle."""
        if self._topo is None:
            succ, pred = self._maps()
            indeg = {v: len(pred[v]) for v in self.vertices}
            ready = sorted(v for v in self.vertices if indeg[v] == 0)
            queue = deque(ready)
            order = []
            while queue:
                v = queue.popleft()
                order.append(v)
                for w in succ[v]:
                    indeg[w] -= 1
                    if indeg[w] == 0:
                        queue.append(w)
            self._topo = tuple(order) if len(order) == len(self.vertices) else ("<cyclic>",)
        return None if self._topo == ("<cyclic>",) else self._topo

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def find_directed_cycle(self):
        """Some directed cycle as a vertex tuple, or None."""
        if self.is_acyclic():
            return None
        succ, _ = self._maps()
        color = {}
        stack = []

        def dfs(v):
            color[v] = 1
            stack.append(v)
            for w in succ[v]:
                if color.get(w, 0) == 1:
                    return stack[stack.index(w):]
                if w not in color:
                    found = dfs(w)
                    if found:
                        return found
            stack.pop()
            color[v] = 2
            return None

        for v in sorted(self.vertices):
            if v not in color:
                found = dfs(v)
                if found:
                    return tuple(found)
        raise AssertionError("cycle detection disagreed with topological sort")

    def replace(self, *, vertices=None, arcs=None, root=None, leaf_labels=None, next_id=None) -> "RootedNet":
        return RootedNet(
            self.vertices if vertices is None else vertices,
            self.arcs if arcs is None else arcs,
            self.root if root is None else root,
            self.leaf_labels if leaf_labels is None else leaf_labels,
            self.next_id if next_id is None else next_id,
        )

    def __repr__(self) -> str:
        return (f"RootedNet(|V|={len(self.vertices)}, |A|={len(self.arcs)}, "
                f"r={self.reticulation_number()}, X={sorted(self.leaf_labels.values())})")


@dataclass(frozen=True)
class MixedGraph:
    """Partially oriented graph: disjoint sets of edges and arcs."""

    vertices: frozenset[VertexId]
    edges: frozenset[Edge]
    arcs: frozenset[Arc]
    root: VertexId | None = None

    def __post_init__(self):
        overlap = {canon_edge(*a) for a in self.arcs} & self.edges
        if overlap:
            raise ValueError(f"vertex pairs both edge and arc: {sorted(overlap)}")


# -- validation ----------------------------------------------------------------

def validate_unrooted(net: UndirectedNet) -> ValidationReport:
    """Report every violation of the unrooted-network invariants; never raises."""
    bad = []
    if not net.vertices:
        return ValidationReport(("network is empty",))
    for u, v in sorted(net.edges):
        if u == v:
            bad.append(f"self-loop at vertex {u}")
    if not net.is_connected():
        bad.append("network is disconnected")
    labeled = net.leaves()
    for v in sorted(net.vertices):
        d = net.degree(v)
        if d not in (1, 3):
            bad.append(f"vertex {v} has degree {d} (expected 1 or 3)")
        if d == 1 and v not in labeled:
            bad.append(f"degree-1 vertex {v} is unlabeled")
        if v in labeled and d != 1:
            bad.append(f"labeled vertex {v} has degree {d} (leaves must have degree 1)")
    seen: dict[str, VertexId] = {}
    for v in sorted(net.leaf_labels):
        lab = net.leaf_labels[v]
        if lab in seen:
            bad.append(f"duplicate label {lab!r} on vertices {seen[lab]} and {v}")
        else:
            seen[lab] = v
    if not net.leaf_labels:
        bad.append("network has no labeled leaves")
    return ValidationReport(tuple(bad))


def validate_rooted(net: RootedNet) -> ValidationReport:
    """Report every violation of the rooted-network invariants; never raises."""
    bad = []
    if not net.vertices:
        return ValidationReport(("network is empty",))
    for u, v in sorted(net.arcs):
        if u == v:
            bad.append(f"self-arc at vertex {u}")
    sources = sorted(v for v in net.vertices if net.in_degree(v) == 0)
    if sources != [net.root]:
        bad.append(f"in-degree-0 vertices are {sources}, expected exactly the root {net.root}")
    if net.out_degree(net.root) != 2:
        bad.append(f"root has out-degree {net.out_degree(net.root)} (expected 2)")
    labeled = net.leaves()
    for v in sorted(net.vertices):
        indeg, outdeg = net.in_degree(v), net.out_degree(v)
        if v == net.root:
            continue
        if outdeg == 0:
            if indeg != 1:
                bad.append(f"leaf {v} has in-degree {indeg} (expected 1)")
            if v not in labeled:
                bad.append(f"sink vertex {v} is unlabeled")
        elif (indeg, outdeg) not in ((1, 2), (2, 1)):
            bad.append(f"vertex {v} has degrees (in={indeg}, out={outdeg})")
    for v in sorted(labeled):
        if net.out_degree(v) != 0:
            bad.append(f"labeled vertex {v} is not a sink")
    seen: dict[str, VertexId] = {}
    for v in sorted(net.leaf_labels):
        lab = net.leaf_labels[v]
        if lab in seen:
            bad.append(f"duplicate label {lab!r} on vertices {seen[lab]} and {v}")
        else:
            seen[lab] = v
    if not net.is_acyclic():
        bad.append(f"digraph has a directed cycle: {list(net.find_directed_cycle())}")
    return ValidationReport(tuple(bad))


# -- subdivision, suppression, elimination --------------------------------------

def subdivide(net, edge):
    """Replace an edge (or arc) by two through a fresh vertex.

    Returns ``(net2, new_vertex)``.  For rooted networks ``edge`` is the arc
    (u, w) and the result carries arcs (u, v), (v, w).
    """
    if isinstance(net, RootedNet):
        u, w = edge
        if (u, w) not in net.arcs:
            raise UnknownEdge(f"no arc ({u},{w})")
        v = net.next_id
        arcs = (net.arcs - {(u, w)}) | {(u, v), (v, w)}
        return net.replace(vertices=net.vertices | {v}, arcs=arcs, next_id=v + 1), v
    e = canon_edge(*edge)
    if e not in net.edges:
        raise UnknownEdge(f"no edge {e}")
    v = net.next_id
    edges = (net.edges - {e}) | {canon_edge(e[0], v), canon_edge(v, e[1])}
    return net.replace(vertices=net.vertices | {v}, edges=edges, next_id=v + 1), v


def suppress(net, vertex):
    """Delete a degree-2 (or in-1/out-1) vertex and join its neighbors."""
    if isinstance(net, RootedNet):
        if net.in_degree(vertex) != 1 or net.out_degree(vertex) != 1:
            raise NotDegreeTwo(f"vertex {vertex} has degrees "
                               f"(in={net.in_degree(vertex)}, out={net.out_degree(vertex)})")
        p = net.parents(vertex)[0]
        c = net.children(vertex)[0]
        if (p, c) in net.arcs:
            raise WouldCreateParallelEdge(f"arc ({p},{c}) already exists")
        if p == c:
            raise WouldCreateParallelEdge(f"suppressing {vertex} would create a self-arc at {p}")
        arcs = {a for a in net.arcs if vertex not in a} | {(p, c)}
        return net.replace(vertices=net.vertices - {vertex}, arcs=arcs)
    if net.degree(vertex) != 2:
        raise NotDegreeTwo(f"vertex {vertex} has degree {net.degree(vertex)}")
    a, b = net.neighbors(vertex)
    if net.has_edge(a, b):
        raise WouldCreateParallelEdge(f"edge {canon_edge(a, b)} already exists")
    edges = {e for e in net.edges if vertex not in e} | {canon_edge(a, b)}
    return net.replace(vertices=net.vertices - {vertex}, edges=edges)


def delete_vertex(net: UndirectedNet, vertex) -> UndirectedNet:
    """Drop a vertex with its incident edges (and label, if any)."""
    edges = {e for e in net.edges if vertex not in e}
    labels = {v: lab for v, lab in net.leaf_labels.items() if v != vertex}
    return net.replace(vertices=net.vertices - {vertex}, edges=edges, leaf_labels=labels)


def eliminate_edge(net: UndirectedNet, edge) -> UndirectedNet:
    """Delete a non-cut edge and suppress the two degree-2 endpoints."""
    e = canon_edge(*edge)
    if e not in net.edges:
        raise UnknownEdge(f"no edge {e}")
    if e in net.cut_edges():
        raise IsCutEdge(f"{e} is a cut-edge")
    leaves = net.leaves()
    if e[0] in leaves or e[1] in leaves:
        raise EndpointIsLeaf(f"{e} touches a leaf")
    out = net.replace(edges=net.edges - {e})
    out = suppress(out, e[0])
    out = suppress(out, e[1])
    return out


# -- splits ----------------------------------------------------------------------

def split_of_cut_edge(net: UndirectedNet, edge) -> Split | None:
    """The leaf bipartition induced by a cut-edge, or None if a side is leafless."""
    e = canon_edge(*edge)
    if e not in net.cut_edges():
        raise NotCutEdge(f"{e} is not a cut-edge")
    adj = net.adjacency()
    side = _component_of(adj, e[0], forbidden_edge=e)
    labels_a = {net.leaf_labels[v] for v in side if v in net.leaf_labels}
    labels_b = set(net.leaf_labels.values()) - labels_a
    if not labels_a or not labels_b:
        return None
    return Split.of(labels_a, labels_b)


def splits_of(net: UndirectedNet) -> list[tuple[Edge, Split]]:
    """(cut-edge, split) pairs for every split-inducing cut-edge, canonically ordered."""
    out = []
    for e in sorted(net.cut_edges()):
        s = split_of_cut_edge(net, e)
        if s is not None:
            out.append((e, s))
    return out


# -- paths and cycles -------------------------------------------------------------

def all_simple_paths(net: UndirectedNet, u, v, max_paths=100_000):
    """All simple u-v paths as vertex tuples, in DFS (sorted-neighbor) order."""
    adj = net.adjacency()
    out = []
    path = [u]
    on_path = {u}

    def extend(x):
        if x == v:
            out.append(tuple(path))
            if len(out) > max_paths:
                raise TooLarge(f"more than {max_paths} simple paths")
            return
        for w in adj[x]:
            if w not in on_path:
                path.append(w)
                on_path.add(w)
                extend(w)
                path.pop()
                on_path.remove(w)

    if u == v:
        return [(u,)]
    extend(u)
    return out


def simple_cycles(net: UndirectedNet, max_combinations=100_000) -> list[tuple[VertexId, ...]]:
    """Every simple cycle, each as a canonical vertex tuple.

    Enumerates the GF(2) cycle space spanned by the fundamental cycles of a
    spanning forest and keeps the members that form a single simple cycle;
    each simple cycle corresponds to exactly one combination, so nothing is
    missed or duplicated.
    """
    adj = net.adjacency()
    parent: dict[VertexId, tuple[VertexId, Edge] | None] = {}
    tree_edges = set()
    for root in sorted(net.vertices):
        if root in parent:
            continue
        parent[root] = None
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for w in adj[x]:
                if w not in parent:
                    parent[w] = (x, canon_edge(x, w))
                    tree_edges.add(canon_edge(x, w))
                    queue.append(w)
    chords = sorted(e for e in net.edges if e not in tree_edges and e[0] != e[1])
    r = len(chords)
    if r and (1 << r) - 1 > max_combinations:
        raise TooLarge(f"cycle space has 2^{r}-1 members, budget {max_combinations}")

    def tree_path_edges(a, b):
        seen_a = {a: None}
        x = a
        while parent[x] is not None:
            p, e = parent[x]
            seen_a[p] = e
            x = p
        path_b = []
        x = b
        while x not in seen_a:
            p, e = parent[x]
            path_b.append(e)
            x = p
        meet = x
        edges = set(path_b)
        x = a
        while x != meet:
            p, e = parent[x]
            edges.add(e)
            x = p
        return frozenset(edges)

    fundamental = [tree_path_edges(u, v) | {canon_edge(u, v)} for u, v in chords]
    cycles = []
    for mask in range(1, 1 << r):
        edges: set[Edge] = set()
        m = mask
        i = 0
        while m:
            if m & 1:
                edges ^= fundamental[i]
            m >>= 1
            i += 1
        cyc = _as_simple_cycle(edges)
        if cyc is not None:
            cycles.append(cyc)
    cycles.sort()
    return cycles


def _as_simple_cycle(edges) -> tuple[VertexId, ...] | None:
    if not edges:
        return None
    deg: dict[VertexId, list[VertexId]] = {}
    for u, v in edges:
        deg.setdefault(u, []).append(v)
        deg.setdefault(v, []).append(u)
    if any(len(ns) != 2 for ns in deg.values()):
        return None
    start = min(deg)
    walk = [start]
    prev = None
    cur = start
    while True:
        a, b = sorted(deg[cur])
        nxt = a if a != prev else b
        if nxt == start:
            break
        walk.append(nxt)
        prev, cur = cur, nxt
    if len(walk) != len(deg):
        return None
    return _canon_cycle(walk)


def _canon_cycle(walk) -> tuple[VertexId, ...]:
    i = walk.index(min(walk))
    walk = walk[i:] + walk[:i]
    if len(walk) > 2 and walk[-1] < walk[1]:
        walk = [walk[0]] + walk[1:][::-1]
    return tuple(walk)


# -- isomorphism -------------------------------------------------------------------

def labeled_isomorphic(a: UndirectedNet, b: UndirectedNet) -> bool:
    """Graph isomorphism fixing leaf labels; backtracking with degree pruning."""
    if a.labels() != b.labels():
        raise LabelSetMismatch(f"{sorted(a.labels())} vs {sorted(b.labels())}")
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return False
    if sorted(a.degree(v) for v in a.vertices) != sorted(b.degree(v) for v in b.vertices):
        return False
    if sorted(len(blob.vertices) for blob in a.blobs()) != sorted(len(blob.vertices) for blob in b.blobs()):
        return False
    mapping = {}
    used = set()
    for v, lab in a.leaf_labels.items():
        w = b.vertex_of_label(lab)
        mapping[v] = w
        used.add(w)
    order = _bfs_internal_order(a)
    b_internal = sorted(b.internal_vertices())

    def consistent(v, w):
        for n in a.neighbors(v):
            if n in mapping and not b.has_edge(mapping[n], w):
                return False
        return True

    def assign(i):
        if i == len(order):
            return all(b.has_edge(mapping[u], mapping[v]) for u, v in a.edges)
        v = order[i]
        for w in b_internal:
            if w in used or b.degree(w) != a.degree(v):
                continue
            if not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if assign(i + 1):
                return True
            del mapping[v]
            used.remove(w)
        return False

    return assign(0)


def rooted_isomorphic(a: RootedNet, b: RootedNet) -> bool:
    """Digraph isomorphism fixing leaf labels and mapping root to root."""
    if a.labels() != b.labels():
        raise LabelSetMismatch(f"{sorted(a.labels())} vs {sorted(b.labels())}")
    if len(a.vertices) != len(b.vertices) or len(a.arcs) != len(b.arcs):
        return False
    mapping = {a.root: b.root}
    used = {b.root}
    for v, lab in a.leaf_labels.items():
        w = b.vertex_of_label(lab)
        mapping[v] = w
        used.add(w)
    order = [v for v in (a.topological_order() or sorted(a.vertices))
             if v not in mapping]
    b_pool = sorted(b.vertices - used)

    def consistent(v, w):
        for n in a.children(v):
            if n in mapping and mapping[n] not in b.children(w):
                return False
        for n in a.parents(v):
            if n in mapping and mapping[n] not in b.parents(w):
                return False
        return True

    def assign(i):
        if i == len(order):
            return all((mapping[u], mapping[v]) in b.arcs for u, v in a.arcs)
        v = order[i]
        for w in b_pool:
            if w in used:
                continue
            if b.in_degree(w) != a.in_degree(v) or b.out_degree(w) != a.out_degree(v):
                continue
            if not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if assign(i + 1):
                return True
            del mapping[v]
            used.remove(w)
        return False

    return assign(0)


# -- internals ----------------------------------------------------------------------

def _component_of(adj, start, forbidden_edge=None):
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for w in adj[x]:
            if forbidden_edge and canon_edge(x, w) == forbidden_edge:
                continue
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def _walk_path(adj, first, second, count):
    path = [first]
    if second is None:
        return path
    prev, cur = first, second
    path.append(cur)
    while len(path) < count:
        ns = [w for w in adj[cur] if w != prev]
        nxt = ns[0]
        path.append(nxt)
        prev, cur = cur, nxt
    return path


def _bfs_internal_order(net: UndirectedNet):
    """Internal vertices ordered so each has a previously seen neighbor."""
    seen = set(net.leaves())
    order = []
    queue = deque(sorted(seen))
    while queue:
        v = queue.popleft()
        for w in net.neighbors(v):
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    for v in sorted(net.vertices):
        if v not in seen:
            seen.add(v)
            order.append(v)
            queue.append(v)
            while queue:
                x = queue.popleft()
                for w in net.neighbors(x):
                    if w not in seen:
                        seen.add(w)
                        order.append(w)
                        queue.append(w)
    return order
