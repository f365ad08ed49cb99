"""Orientations of unrooted networks.

The centerpiece is the constructive tree-child orientation for 2-cuttable
networks: delete a well-chosen set of chain edges to get a spanning tree,
orient the tree away from a root placed on a cut-edge, and then fix the
directions of the deleted edges blob by blob via an auxiliary multigraph
whose components are paths and cycles.  A desk-scale exhaustive searcher
and a cherry-picking searcher act as its oracles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .cuttable import is_q_cuttable
from .errors import (
    BudgetExceeded,
    CyclicOrientation,
    DegreeViolation,
    NotReducible,
    NotTwoCuttable,
    TooLarge,
    UnknownEdge,
    WouldCreateParallelEdge,
)
from .nets import (
    Arc,
    Edge,
    RootedNet,
    UndirectedNet,
    canon_edge,
    delete_vertex,
    subdivide,
    suppress,
    validate_rooted,
)


@dataclass(frozen=True)
class OrientationSpec:
    """A root edge plus a direction for every other edge.

    The two halves of the subdivided root edge always point away from the
    new root, so they carry no explicit entry.
    """

    root_edge: Edge
    directions: dict[Edge, Arc]


@dataclass(frozen=True)
class CherryPickingSequence:
    pairs: tuple[tuple[str, str], ...]


def apply_orientation(net: UndirectedNet, spec: OrientationSpec) -> RootedNet:
    """Subdivide the root edge and direct every edge as specified."""
    root_edge = canon_edge(*spec.root_edge)
    if root_edge not in net.edges:
        raise UnknownEdge(f"root edge {root_edge} is not an edge")
    directions = {}
    for e, (a, b) in spec.directions.items():
        ce = canon_edge(*e)
        if ce not in net.edges:
            raise UnknownEdge(f"directed non-edge {ce}")
        if canon_edge(a, b) != ce:
            raise ValueError(f"direction ({a},{b}) does not match its edge {ce}")
        directions[ce] = (a, b)
    expected = net.edges - {root_edge}
    if set(directions) != expected:
        missing = sorted(expected - set(directions))
        extra = sorted(set(directions) - expected)
        raise ValueError(f"spec must cover every non-root edge exactly once "
                         f"(missing {missing}, extra {extra})")

    rho = net.next_id
    arcs = set(directions.values()) | {(rho, root_edge[0]), (rho, root_edge[1])}
    indeg = {v: 0 for v in net.vertices | {rho}}
    outdeg = {v: 0 for v in net.vertices | {rho}}
    for a, b in arcs:
        outdeg[a] += 1
        indeg[b] += 1
    leaves = net.leaves()
    for v in sorted(net.vertices):
        want = ((1, 0),) if v in leaves else ((1, 2), (2, 1))
        if (indeg[v], outdeg[v]) not in want:
            raise DegreeViolation(v, f"vertex {v} has degrees (in={indeg[v]}, out={outdeg[v]})")
    rooted = RootedNet(net.vertices | {rho}, arcs, rho, net.leaf_labels, next_id=rho + 1)
    if not rooted.is_acyclic():
        raise CyclicOrientation(rooted.find_directed_cycle())
    report = validate_rooted(rooted)
    if not report.ok:
        raise AssertionError("orientation slipped through checks: " + "; ".join(report.violations))
    return rooted


def underlying_unrooted(net: RootedNet) -> UndirectedNet:
    """Forget directions and suppress the root."""
    edges = {canon_edge(a, b) for a, b in net.arcs}
    if len(edges) != len(net.arcs):
        raise WouldCreateParallelEdge("antiparallel arcs collapse onto one edge")
    flat = UndirectedNet(net.vertices, edges, net.leaf_labels, next_id=net.next_id)
    return suppress(flat, net.root)


def is_tree_child(net: RootedNet) -> bool:
    """Both characterizations, cross-checked: every non-leaf vertex has a
    non-reticulation child, equivalently no stack and no sibling reticulations."""
    retics = net.reticulations()
    direct = all(
        any(c not in retics for c in net.children(v))
        for v in net.vertices if net.out_degree(v) > 0
    )
    no_stack = not any(a in retics and b in retics for a, b in net.arcs)
    no_siblings = all(
        sum(1 for c in net.children(v) if c in retics) < 2
        for v in net.vertices
    )
    if direct != (no_stack and no_siblings):
        raise AssertionError("tree-child characterizations disagree; input is not a valid network")
    return direct


# --- constructive orientation for 2-cuttable networks -----------------------------

def chain_edge_set(net: UndirectedNet) -> frozenset[Edge]:
    """Edges lying in a maximal chain of length at least 2: non-cut edges with
    both endpoints incident to cut-edges."""
    cuts = net.cut_edges()
    cut_incident = {v for e in cuts for v in e}
    return frozenset(e for e in net.edges
                     if e not in cuts and e[0] in cut_incident and e[1] in cut_incident)


def choose_s_prime(net: UndirectedNet, chain_edges=None) -> frozenset[Edge]:
    """Deterministic subset of the chain edges whose deletion leaves a spanning tree.

    The non-chain edges of a 2-cuttable network already form a spanning
    forest, so the tree is grown by taking all of them and then adding chain
    edges in canonical order while they join distinct components; whatever
    is left over is the answer.  Two structural facts are asserted on the
    way out: no vertex meets two leftover edges, and no non-leftover edge
    joins two vertices that each meet one (they underpin the blob
    orientation step and must hold for any valid choice).
    """
    if not is_q_cuttable(net, 2):
        raise NotTwoCuttable("input is not 2-cuttable")
    s_edges = chain_edge_set(net) if chain_edges is None else frozenset(chain_edges)
    parent = {v: v for v in net.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
        return True

    for u, v in sorted(net.edges - s_edges):
        if not union(u, v):
            raise AssertionError("non-chain edges contain a cycle; input is not 2-cuttable")
    s_prime = set()
    for u, v in sorted(s_edges):
        if not union(u, v):
            s_prime.add((u, v))
    if len(s_prime) != net.reticulation_number():
        raise AssertionError("spanning-tree completion dropped the wrong number of edges")

    incident = {}
    for e in s_prime:
        for v in e:
            if v in incident:
                raise AssertionError(f"vertex {v} meets two leftover chain edges (OB1)")
            incident[v] = e
    for u, v in net.edges - s_prime - net.cut_edges():
        if u in incident and v in incident:
            raise AssertionError(f"blob edge ({u},{v}) joins two leftover-edge endpoints (OB2)")
    return frozenset(s_prime)


def tree_child_orient_2cuttable(net: UndirectedNet) -> RootedNet:
    """Constructive tree-child orientation of a 2-cuttable network."""
    if not is_q_cuttable(net, 2):
        raise NotTwoCuttable("input is not 2-cuttable")
    s_prime = choose_s_prime(net)
    tree_edges = net.edges - s_prime
    root_edge = min(net.cut_edges()) if net.cut_edges() else None
    if root_edge is None:
        # cut-edge-free 2-cuttable networks do not exist: any cycle needs a
        # 2-chain of cut-edge-incident vertices
        raise AssertionError("2-cuttable network without a cut-edge")

    rho = net.next_id
    tree_adj = {v: [] for v in net.vertices}
    tree_adj[rho] = list(root_edge)
    for u, v in tree_edges:
        if (u, v) == root_edge:
            continue
        tree_adj[u].append(v)
        tree_adj[v].append(u)
    tree_adj[root_edge[0]].append(rho)
    tree_adj[root_edge[1]].append(rho)

    parent_of = {rho: None}
    queue = deque([rho])
    order = [rho]
    while queue:
        x = queue.popleft()
        for w in sorted(tree_adj[x]):
            if w not in parent_of:
                parent_of[w] = x
                order.append(w)
                queue.append(w)
    if len(parent_of) != len(net.vertices) + 1:
        raise AssertionError("spanning tree does not reach every vertex")
    arcs = {(parent_of[v], v) for v in order if parent_of[v] is not None}

    for blob in net.blobs():
        entry = [v for v in blob.vertices if parent_of[v] not in blob.vertices]
        if len(entry) != 1:
            raise AssertionError(f"blob has {len(entry)} entry vertices, expected 1")
        arcs |= _orient_blob_leftovers(net, blob, s_prime, entry[0])

    rooted = RootedNet(net.vertices | {rho}, arcs, rho, net.leaf_labels, next_id=rho + 1)
    report = validate_rooted(rooted)
    if not report.ok:
        raise AssertionError("constructive orientation is invalid: " + "; ".join(report.violations))
    if not is_tree_child(rooted):
        raise AssertionError("constructive orientation is not tree-child")
    return rooted


def _orient_blob_leftovers(net, blob, s_prime, entry):
    """Direct the blob's leftover chain edges along traversal paths.

    The auxiliary multigraph joins two leftover edges whenever a five-vertex
    path runs end-to-end between them; its components are paths and cycles,
    each realized as a walk through the blob that is reversed, if necessary,
    so the blob's entry vertex comes first along its own leftover edge.
    """
    local = sorted(e for e in s_prime if e[0] in blob.vertices and e[1] in blob.vertices)
    if not local:
        return set()
    s_at = {}
    for e in local:
        for v in e:
            s_at[v] = e

    # connectors: middle vertex u joining leftover edges at neighbors t and v
    conn_at: dict[tuple[Edge, int], tuple[int, Edge, int]] = {}
    degree = {e: 0 for e in local}
    neighbors_of: dict[Edge, list[Edge]] = {e: [] for e in local}
    for u in sorted(blob.vertices):
        nbs = sorted(w for w in net.neighbors(u) if w in blob.vertices)
        for i in range(len(nbs)):
            for j in range(i + 1, len(nbs)):
                t, v = nbs[i], nbs[j]
                e, f = s_at.get(t), s_at.get(v)
                if e is None or f is None or e == f:
                    continue
                if u in e or u in f:
                    continue
                for end_a, edge_a, end_b, edge_b in ((t, e, v, f), (v, f, t, e)):
                    key = (edge_a, end_a)
                    if key in conn_at:
                        raise AssertionError(f"two connectors attach at endpoint {end_a} of {edge_a}")
                    conn_at[key] = (u, edge_b, end_b)
                degree[e] += 1
                degree[f] += 1
                neighbors_of[e].append(f)
                neighbors_of[f].append(e)

    if any(d > 2 for d in degree.values()):
        raise AssertionError("auxiliary multigraph has a vertex of degree 3")

    arcs = set()
    seen: set[Edge] = set()
    for start in local:
        if start in seen:
            continue
        component = _component_edges(neighbors_of, start)
        seen |= set(component)
        is_cycle = all(degree[e] == 2 for e in component)
        if is_cycle:
            first = min(component)
            # drop one of the two connectors at the lowest edge: keep the one
            # with the smaller middle vertex as the forward direction
            cands = sorted(
                (conn_at[(first, end)][0], end) for end in first if (first, end) in conn_at
            )
            forward_end = cands[0][1]
            start_vertex = first[0] if first[1] == forward_end else first[1]
        else:
            first = min(e for e in component if degree[e] <= 1)
            attached = [end for end in first if (first, end) in conn_at]
            if attached:
                start_vertex = first[0] if first[1] == attached[0] else first[1]
            else:
                start_vertex = first[0]

        path = [start_vertex, first[0] if first[1] == start_vertex else first[1]]
        cur_edge, cur_end = first, path[-1]
        traversed = {cur_edge}
        while len(traversed) < len(component):
            middle, nxt_edge, nxt_end = conn_at[(cur_edge, cur_end)]
            path.append(middle)
            path.append(nxt_end)
            path.append(nxt_edge[0] if nxt_edge[1] == nxt_end else nxt_edge[1])
            traversed.add(nxt_edge)
            cur_edge, cur_end = nxt_edge, path[-1]

        if len(set(path)) != len(path):
            raise AssertionError("traversal path repeats a vertex")
        # entry-first rule: if the path walks the entry vertex's own leftover
        # edge head-first, flip the whole walk
        if entry in path and entry in s_at:
            er = s_at[entry]
            for i in range(len(path) - 1):
                if canon_edge(path[i], path[i + 1]) == er and path[i + 1] == entry:
                    path.reverse()
                    break
        for i in range(len(path) - 1):
            if canon_edge(path[i], path[i + 1]) in s_prime:
                arcs.add((path[i], path[i + 1]))
    return arcs


def _component_edges(neighbors_of, start):
    comp = {start}
    queue = deque([start])
    while queue:
        e = queue.popleft()
        for f in neighbors_of[e]:
            if f not in comp:
                comp.add(f)
                queue.append(f)
    return sorted(comp)


# --- exhaustive orientation search --------------------------------------------------

def brute_force_tree_child_orientation(net: UndirectedNet, max_edges: int = 16) -> RootedNet | None:
    """First tree-child orientation in lexicographic (root edge, direction)
    order, or None after exhausting the whole space."""
    if len(net.edges) > max_edges:
        raise TooLarge(f"{len(net.edges)} edges exceeds the brute-force budget {max_edges}")
    for root_edge in sorted(net.edges):
        spec = _search_orientation(net, root_edge)
        if spec is not None:
            return apply_orientation(net, spec)
    return None


def _search_orientation(net, root_edge):
    edges = _edges_from(net, root_edge)
    leaves = net.leaves()
    deg = {v: net.degree(v) for v in net.vertices}
    indeg = {v: 0 for v in net.vertices}
    outdeg = {v: 0 for v in net.vertices}
    assigned = {v: 0 for v in net.vertices}
    for v in root_edge:
        indeg[v] += 1
        assigned[v] += 1

    def feasible(v):
        if v in leaves:
            return outdeg[v] == 0 and indeg[v] <= 1
        if indeg[v] > 2 or outdeg[v] > 2:
            return False
        if assigned[v] == deg[v]:
            return (indeg[v], outdeg[v]) in ((1, 2), (2, 1))
        return True

    choice: dict[Edge, Arc] = {}

    def place(i):
        if i == len(edges):
            return _accepts(net, root_edge, choice)
        u, v = edges[i]
        for a, b in ((u, v), (v, u)):
            indeg[b] += 1
            outdeg[a] += 1
            assigned[a] += 1
            assigned[b] += 1
            if feasible(a) and feasible(b):
                choice[(u, v)] = (a, b)
                if place(i + 1):
                    return True
                del choice[(u, v)]
            indeg[b] -= 1
            outdeg[a] -= 1
            assigned[a] -= 1
            assigned[b] -= 1
        return False

    if place(0):
        return OrientationSpec(root_edge, dict(choice))
    return None


def _edges_from(net, root_edge):
    """Non-root edges ordered so vertices complete early (BFS from the root edge)."""
    seen = set(root_edge)
    out = []
    queue = deque(sorted(root_edge))
    emitted = set()
    while queue:
        x = queue.popleft()
        for w in net.neighbors(x):
            e = canon_edge(x, w)
            if e == root_edge or e in emitted:
                continue
            emitted.add(e)
            out.append(e)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return out


def _accepts(net, root_edge, choice):
    rho = net.next_id
    arcs = set(choice.values()) | {(rho, root_edge[0]), (rho, root_edge[1])}
    succ = {v: [] for v in net.vertices | {rho}}
    indeg = {v: 0 for v in net.vertices | {rho}}
    for a, b in arcs:
        succ[a].append(b)
        indeg[b] += 1
    queue = deque(v for v in succ if indeg[v] == 0)
    visited = 0
    while queue:
        x = queue.popleft()
        visited += 1
        for w in succ[x]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if visited != len(succ):
        return False
    retics = {v for v in net.vertices if sum(1 for a, b in arcs if b == v) == 2}
    for a, b in arcs:
        if a in retics and b in retics:
            return False
    for v, children in succ.items():
        if children and all(c in retics for c in children):
            return False
    return True


# --- cherry picking -------------------------------------------------------------------

def reduce_pair(net: UndirectedNet, pair) -> UndirectedNet:
    """Reduce an ordered leaf pair: drop the first leaf of a cherry, or cut
    the central edge of a reticulated cherry."""
    x_lab, y_lab = pair
    try:
        x = net.vertex_of_label(x_lab)
        y = net.vertex_of_label(y_lab)
    except KeyError as missing:
        raise NotReducible(f"no leaf labeled {missing}") from None
    if x == y:
        raise NotReducible("pair must name two distinct leaves")
    if len(net.vertices) == 2:
        return net.replace(vertices={y}, edges=frozenset(), leaf_labels={y: y_lab})
    (u,) = net.neighbors(x)
    (v,) = net.neighbors(y)
    if u == v:
        if len(net.leaf_labels) < 3:
            raise NotReducible("cherry reduction on a two-leaf reticulate network "
                               "would not yield a network")
        return suppress(delete_vertex(net, x), u)
    central = canon_edge(u, v)
    if central in net.edges and central not in net.cut_edges():
        out = net.replace(edges=net.edges - {central})
        out = suppress(out, u)
        return suppress(out, v)
    raise NotReducible(f"({x_lab},{y_lab}) is neither a cherry nor a reticulated cherry")


def reducible_pairs(net: UndirectedNet) -> list[tuple[str, str]]:
    """Candidate ordered pairs in lexicographic label order.

    Cherries contribute both orders (they keep different leaves); reticulated
    cherries are symmetric and contribute the sorted order only.
    """
    out = []
    if len(net.vertices) == 2 and len(net.leaf_labels) == 2:
        a, b = sorted(net.leaf_labels.values())
        return [(a, b), (b, a)]
    leaves = sorted(net.leaves(), key=lambda v: net.leaf_labels[v])
    for x in leaves:
        (u,) = net.neighbors(x)
        for y in leaves:
            if y == x:
                continue
            (v,) = net.neighbors(y)
            lx, ly = net.leaf_labels[x], net.leaf_labels[y]
            if u == v and len(net.leaf_labels) >= 3:
                out.append((lx, ly))
            elif u != v and lx < ly:
                central = canon_edge(u, v)
                if central in net.edges and central not in net.cut_edges():
                    out.append((lx, ly))
    return sorted(out)


def cherry_picking_sequence(net: UndirectedNet, max_states: int = 200_000) -> CherryPickingSequence | None:
    """Exhaustive memoized search for a cherry-picking sequence.

    Reductions never mint vertex ids, so states reached along commuting
    reduction orders coincide exactly and the failure memo is sound.
    """
    failed: set = set()
    visited = 0

    def key(u: UndirectedNet):
        return (u.edges, frozenset(u.leaf_labels.items()))

    def search(u: UndirectedNet):
        nonlocal visited
        if len(u.vertices) == 1:
            return []
        k = key(u)
        if k in failed:
            return None
        visited += 1
        if visited > max_states:
            raise BudgetExceeded(f"more than {max_states} reduction states explored")
        for pair in reducible_pairs(u):
            child = reduce_pair(u, pair)
            tail = search(child)
            if tail is not None:
                return [pair] + tail
        failed.add(k)
        return None

    found = search(net)
    return None if found is None else CherryPickingSequence(tuple(found))


def replay_sequence(net: UndirectedNet, sequence: CherryPickingSequence) -> UndirectedNet:
    """Apply every pair in order; each must match a cherry or reticulated cherry."""
    for pair in sequence.pairs:
        net = reduce_pair(net, pair)
    return net
