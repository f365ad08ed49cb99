"""Unrooted tree containment for 3-cuttable networks.

The decision procedure branches on non-trivial cut-edges until every piece
is simple, then shrinks each piece with four reduction rules built on
entangled paths (paths whose interior touches no cut-edge off the path).
A backtracking embedding search acts as the ground-truth oracle at desk
scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cuttable import is_q_cuttable
from .errors import (
    BudgetExceeded,
    LabelSetMismatch,
    NoMatchingTreeEdge,
    NotSimple,
    NotThreeCuttable,
    TooFewLeaves,
    TrivialCutEdge,
)
from .nets import (
    Edge,
    Split,
    UndirectedNet,
    canon_edge,
    eliminate_edge,
    split_of_cut_edge,
    splits_of,
)


# --- embeddings ----------------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    """Images of tree vertices and edges inside a network.

    ``edge_map`` keys are canonical tree edges; each value is the image path
    as a vertex tuple running from the image of the smaller endpoint.
    """

    vertex_map: dict[int, int]
    edge_map: dict[Edge, tuple[int, ...]]


def embedding_violations(tree: UndirectedNet, net: UndirectedNet, emb: Embedding) -> list[str]:
    """Check the five embedding properties; report each failure by its index."""
    bad = []
    vm = emb.vertex_map
    for v in sorted(tree.vertices):
        if v not in vm or vm[v] not in net.vertices:
            bad.append(f"(i) tree vertex {v} has no image in the network")
    for v, lab in tree.leaf_labels.items():
        if vm.get(v) != net.vertex_of_label(lab):
            bad.append(f"(ii) leaf {lab} is not mapped to itself")
    images = [vm[v] for v in tree.vertices if v in vm]
    if len(set(images)) != len(images):
        bad.append("(iii) vertex images are not pairwise distinct")
    used: dict[Edge, Edge] = {}
    for e in sorted(tree.edges):
        path = emb.edge_map.get(e)
        if path is None:
            bad.append(f"(iv) tree edge {e} has no image path")
            continue
        if len(set(path)) != len(path) or len(path) < 2:
            bad.append(f"(iv) image of {e} is not a path")
            continue
        if any(not net.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1)):
            bad.append(f"(iv) image of {e} uses a non-edge")
            continue
        if path[0] != vm.get(e[0]) or path[-1] != vm.get(e[1]):
            bad.append(f"(iv) image of {e} does not run between its endpoint images")
        for i in range(len(path) - 1):
            ue = canon_edge(path[i], path[i + 1])
            if ue in used and used[ue] != e:
                bad.append(f"(v) images of {used[ue]} and {e} share the edge {ue}")
            used[ue] = e
    return bad


def verify_embedding(tree: UndirectedNet, net: UndirectedNet, emb: Embedding) -> bool:
    if tree.labels() != net.labels():
        raise LabelSetMismatch(f"{sorted(tree.labels())} vs {sorted(net.labels())}")
    return not embedding_violations(tree, net, emb)


def display_oracle(tree: UndirectedNet, net: UndirectedNet,
                   max_nodes: int = 2_000_000) -> Embedding | None:
    """Exhaustive backtracking search for an embedding.

    Processes tree edges outward from the smallest leaf; for each edge it
    enumerates simple paths over unused network edges, assigning the far
    image on the fly.  A path may neither pass through an existing image nor
    end on a touched vertex, since a degree-3 image needs all three of its
    edge slots.  None is returned only after exhausting the space.
    """
    if tree.labels() != net.labels():
        raise LabelSetMismatch(f"{sorted(tree.labels())} vs {sorted(net.labels())}")
    adj = net.adjacency()
    vmap: dict[int, int] = {}
    for v, lab in tree.leaf_labels.items():
        vmap[v] = net.vertex_of_label(lab)
    used_images = set(vmap.values())
    order = _edge_order(tree)
    used_edges: set[Edge] = set()
    used_deg = {v: 0 for v in net.vertices}
    edge_map: dict[Edge, tuple[int, ...]] = {}
    net_leaves = net.leaves()
    nodes = 0

    def solve(idx: int) -> bool:
        nonlocal nodes
        if idx == len(order):
            return True
        a, b = order[idx]
        start = vmap[a]
        target = vmap.get(b)
        path = [start]

        def record_and_descend() -> bool:
            e = canon_edge(a, b)
            walk = tuple(path) if e[0] == a else tuple(reversed(path))
            edge_map[e] = walk
            fresh = target is None
            if fresh:
                vmap[b] = path[-1]
                used_images.add(path[-1])
            if solve(idx + 1):
                return True
            if fresh:
                used_images.discard(path[-1])
                del vmap[b]
            del edge_map[e]
            return False

        def extend(x: int) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > max_nodes:
                raise BudgetExceeded(f"embedding search exceeded {max_nodes} nodes")
            for w in adj[x]:
                e = canon_edge(x, w)
                if e in used_edges or w in path:
                    continue
                if target is not None:
                    if w == target:
                        used_edges.add(e)
                        used_deg[x] += 1
                        used_deg[w] += 1
                        path.append(w)
                        if record_and_descend():
                            return True
                        path.pop()
                        used_edges.discard(e)
                        used_deg[x] -= 1
                        used_deg[w] -= 1
                        continue
                    if w in used_images or w in net_leaves:
                        continue
                else:
                    if w in used_images or w in net_leaves:
                        continue
                used_edges.add(e)
                used_deg[x] += 1
                used_deg[w] += 1
                path.append(w)
                # stop here: w becomes the image of b (needs an untouched
                # degree-3 vertex: one slot for this path, two for later edges)
                if target is None and used_deg[w] == 1 and len(adj[w]) == 3:
                    if record_and_descend():
                        return True
                if extend(w):
                    return True
                path.pop()
                used_edges.discard(e)
                used_deg[x] -= 1
                used_deg[w] -= 1
            return False

        return extend(start)

    if solve(0):
        return Embedding(dict(vmap), dict(edge_map))
    return None


def _edge_order(tree: UndirectedNet) -> list[tuple[int, int]]:
    """Tree edges BFS-ordered from the smallest leaf; first endpoint already mapped."""
    start = tree.vertex_of_label(min(tree.labels()))
    seen = {start}
    out = []
    queue = [start]
    while queue:
        x = queue.pop(0)
        for w in tree.neighbors(x):
            e = (x, w)
            if (w, x) in out or (x, w) in out:
                continue
            out.append(e)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return out


# --- conflicting splits -----------------------------------------------------------

def conflicting_split(tree: UndirectedNet, net: UndirectedNet) -> tuple[Split, Split] | None:
    """First (canonical order) incompatible pair of a network split and a tree split."""
    if tree.labels() != net.labels():
        raise LabelSetMismatch(f"{sorted(tree.labels())} vs {sorted(net.labels())}")
    net_splits = sorted((s for _, s in splits_of(net)), key=Split.sort_key)
    tree_splits = sorted((s for _, s in splits_of(tree)), key=Split.sort_key)
    for us in net_splits:
        for ts in tree_splits:
            if not us.is_compatible_with(ts):
                return us, ts
    return None


# --- branching ---------------------------------------------------------------------

def branch_on_cut_edge(tree: UndirectedNet, net: UndirectedNet, edge):
    """Split the instance at a non-trivial cut-edge into two sub-instances.

    Both sides get a fresh leaf closing the severed stubs; the tree is split
    at its unique edge inducing the same leaf bipartition.
    """
    e = canon_edge(*edge)
    if e not in net.cut_edges():
        raise TrivialCutEdge(f"{e} is not a cut-edge")
    leaves = net.leaves()
    if e[0] in leaves or e[1] in leaves:
        raise TrivialCutEdge(f"{e} is a trivial cut-edge")
    split = split_of_cut_edge(net, e)
    if split is None:
        raise AssertionError("a non-trivial cut-edge of a 3-cuttable network must induce a split")
    tree_edge = None
    for te, ts in splits_of(tree):
        if ts == split:
            tree_edge = te
            break
    if tree_edge is None:
        raise NoMatchingTreeEdge(f"tree has no edge inducing {split}; instance has a conflicting split")

    existing = net.labels()
    k = 1
    while f"x{k}" in existing or f"x{k + 1}" in existing:
        k += 1
    fresh = (f"x{k}", f"x{k + 1}")

    side_u = _component_vertices(net, e[0], e)
    labels_u = frozenset(net.leaf_labels[v] for v in side_u if v in net.leaf_labels)
    sub_nets = [
        _halve(net, e, e[0], fresh[0]),
        _halve(net, e, e[1], fresh[1]),
    ]
    t_side_0 = _component_vertices(tree, tree_edge[0], tree_edge)
    t_labels_0 = frozenset(tree.leaf_labels[v] for v in t_side_0 if v in tree.leaf_labels)
    if t_labels_0 == labels_u:
        sub_trees = [_halve(tree, tree_edge, tree_edge[0], fresh[0]),
                     _halve(tree, tree_edge, tree_edge[1], fresh[1])]
    else:
        sub_trees = [_halve(tree, tree_edge, tree_edge[1], fresh[0]),
                     _halve(tree, tree_edge, tree_edge[0], fresh[1])]
    return (sub_trees[0], sub_nets[0]), (sub_trees[1], sub_nets[1])


def _component_vertices(net, start, severed):
    seen = {start}
    queue = [start]
    while queue:
        x = queue.pop()
        for w in net.neighbors(x):
            if canon_edge(x, w) == severed or w in seen:
                continue
            seen.add(w)
            queue.append(w)
    return seen


def _halve(net, severed, keep_endpoint, fresh_label):
    side = _component_vertices(net, keep_endpoint, severed)
    nv = net.next_id
    edges = {e for e in net.edges if e[0] in side and e[1] in side and e != severed}
    edges.add(canon_edge(keep_endpoint, nv))
    labels = {v: lab for v, lab in net.leaf_labels.items() if v in side}
    labels[nv] = fresh_label
    return UndirectedNet(side | {nv}, edges, labels, next_id=nv + 1)


# --- entangled paths ----------------------------------------------------------------

def entangled_path(net: UndirectedNet, u: int, v: int) -> tuple[int, ...] | None:
    """The unique entangled u-v path of a simple 3-cuttable network, or None.

    Deletes every vertex incident to a cut-edge not incident to u or v; any
    surviving u-v path is entangled, and uniqueness makes BFS exact.
    """
    if u == v:
        raise ValueError("endpoints must differ")
    doomed = set()
    for e in net.cut_edges():
        if u in e or v in e:
            continue
        doomed.update(e)
    parent = {u: None}
    queue = [u]
    while queue:
        x = queue.pop(0)
        if x == v:
            path = []
            while x is not None:
                path.append(x)
                x = parent[x]
            return tuple(reversed(path))
        for w in net.neighbors(x):
            if w in doomed or w in parent:
                continue
            parent[w] = x
            queue.append(w)
    return None


def is_entangled(net: UndirectedNet, path) -> bool:
    """Literal predicate: no internal path vertex meets a cut-edge off the path."""
    path_edges = {canon_edge(path[i], path[i + 1]) for i in range(len(path) - 1)}
    cuts = net.cut_edges()
    for x in path[1:-1]:
        for w in net.neighbors(x):
            e = canon_edge(x, w)
            if e in cuts and e not in path_edges:
                return False
    return True


# --- pendant structures ----------------------------------------------------------------

@dataclass(frozen=True)
class PendantTriple:
    x: str
    y: str
    z: str


@dataclass(frozen=True)
class PendantQuad:
    w: str
    x: str
    y: str
    z: str


def find_pendant_structures(tree: UndirectedNet):
    """A pendant three-leaf subtree with a cherry, else a pendant four-leaf
    subtree with two cherries; deepest cherry first, labels break ties."""
    if len(tree.leaf_labels) < 4:
        raise TooFewLeaves("need at least 4 leaves")
    leaves = tree.leaves()
    anchor_leaf = tree.vertex_of_label(min(tree.labels()))
    root = tree.neighbors(anchor_leaf)[0]
    depth = {root: 0}
    queue = [root]
    while queue:
        x = queue.pop(0)
        for w in tree.neighbors(x):
            if w not in depth:
                depth[w] = depth[x] + 1
                queue.append(w)

    def cherry_at(p):
        ls = sorted(tree.leaf_labels[w] for w in tree.neighbors(p) if w in leaves)
        return ls if len(ls) == 2 else None

    candidates = []
    for p in tree.internal_vertices():
        ls = cherry_at(p)
        if ls:
            candidates.append((-depth[p], ls[0], p))
    candidates.sort()

    for _, _, p in candidates:
        x, y = cherry_at(p)
        (q,) = [w for w in tree.neighbors(p) if w not in leaves]
        zs = sorted(tree.leaf_labels[w] for w in tree.neighbors(q) if w in leaves)
        if zs:
            return PendantTriple(x, y, zs[0])
    for _, _, p in candidates:
        x, y = cherry_at(p)
        (q,) = [w for w in tree.neighbors(p) if w not in leaves]
        for p2 in sorted(w for w in tree.neighbors(q) if w != p and w not in leaves):
            pair = cherry_at(p2)
            if pair:
                return PendantQuad(pair[0], x, y, pair[1])
    raise AssertionError("every tree on 4+ leaves has a pendant triple or quad")


# --- the four reduction rules -------------------------------------------------------------

@dataclass(frozen=True)
class RuleOutcome:
    verdict: str                     # "yes" | "no" | "reduced"
    rule_id: int
    case: str | None = None         # I..IV where the rule splits into cases
    reduced_net: UndirectedNet | None = None
    eliminated_edge: Edge | None = None
    certificate: str | None = None


def apply_reduction(tree: UndirectedNet, net: UndirectedNet) -> RuleOutcome:
    """Try the rules in order on a simple instance; exactly one applies."""
    if not net.is_simple_network():
        raise NotSimple("network has a non-trivial cut-edge")
    if not is_q_cuttable(net, 3):
        raise NotThreeCuttable("network is not 3-cuttable")
    if len(net.leaf_labels) <= 3:
        return RuleOutcome("yes", 1, certificate="at most three leaves")
    outcome = _rule2(tree, net)
    if outcome is not None:
        return outcome
    structure = find_pendant_structures(tree)
    if isinstance(structure, PendantTriple):
        return _rule3(tree, net, structure)
    return _rule4(tree, net, structure)


def _rule2(tree, net):
    """Three consecutive leaf-hung vertices plus a fourth path vertex, with a
    matching pendant triple in the tree: eliminate the path's leading edge."""
    tree_splits = {s for _, s in splits_of(tree)}
    leaves = net.leaves()
    cuts = net.cut_edges()
    all_labels = net.labels()

    def leaf_labels_at(v):
        return sorted(net.leaf_labels[w] for w in net.neighbors(v) if w in leaves)

    for v1 in sorted(net.vertices - leaves):
        for v2 in net.neighbors(v1):
            if v2 in leaves:
                continue
            xs = leaf_labels_at(v2)
            if not xs:
                continue
            for v3 in net.neighbors(v2):
                if v3 in (v1,) or v3 in leaves:
                    continue
                ys = leaf_labels_at(v3)
                if not ys:
                    continue
                for v4 in net.neighbors(v3):
                    if v4 in (v1, v2) or v4 in leaves:
                        continue
                    zs = leaf_labels_at(v4)
                    if not zs:
                        continue
                    quad = (v1, v2, v3, v4)
                    if any(canon_edge(a, b) in cuts
                           for i, a in enumerate(quad) for b in quad[i + 1:]
                           if net.has_edge(a, b)):
                        continue
                    for x in xs:
                        for y in ys:
                            if y == x:
                                continue
                            if Split.of({x, y}, all_labels - {x, y}) not in tree_splits:
                                continue
                            for z in zs:
                                if z in (x, y):
                                    continue
                                if Split.of({x, y, z}, all_labels - {x, y, z}) not in tree_splits:
                                    continue
                                e = canon_edge(v1, v2)
                                return RuleOutcome(
                                    "reduced", 2, reduced_net=eliminate_edge(net, e),
                                    eliminated_edge=e,
                                    certificate=f"chain {quad} with leaves {x},{y},{z}")
    return None


def _rule3(tree, net, triple: PendantTriple):
    x, y, z = triple.x, triple.y, triple.z
    ux, uy, uz = (net.vertex_of_label(l) for l in (x, y, z))
    p = entangled_path(net, ux, uy)
    if p is None:
        return RuleOutcome("no", 3, "I", certificate=f"no entangled path between {x} and {y}")
    p_edges = {canon_edge(p[i], p[i + 1]) for i in range(len(p) - 1)}
    chosen_v = None
    chosen = None
    saw_any = False
    for v in p[1:-1]:
        p2 = entangled_path(net, uz, v)
        if p2 is None:
            continue
        saw_any = True
        p2_edges = {canon_edge(p2[i], p2[i + 1]) for i in range(len(p2) - 1)}
        if p_edges & p2_edges:
            continue
        chosen_v, chosen = v, p2
        break
    if not saw_any:
        return RuleOutcome("no", 3, "II",
                           certificate=f"no entangled path from {z} into the {x}-{y} path")
    if chosen_v is None:
        raise AssertionError("an edge-disjoint entangled prefix must exist")
    e = _pick_off_path_edge(net, p, forbidden=chosen_v)
    return RuleOutcome("reduced", 3, "III", reduced_net=eliminate_edge(net, e),
                       eliminated_edge=e, certificate=f"paths anchored at {chosen_v}")


def _rule4(tree, net, quad: PendantQuad):
    w, x, y, z = quad.w, quad.x, quad.y, quad.z
    ux, uy, uw, uz = (net.vertex_of_label(l) for l in (x, y, w, z))
    p1 = entangled_path(net, ux, uy)
    p2 = entangled_path(net, uw, uz)
    if p1 is None or p2 is None:
        return RuleOutcome("no", 4, "I", certificate="a cherry has no entangled path")
    p1_edges = {canon_edge(p1[i], p1[i + 1]) for i in range(len(p1) - 1)}
    p2_edges = {canon_edge(p2[i], p2[i + 1]) for i in range(len(p2) - 1)}
    if p1_edges & p2_edges:
        return RuleOutcome("no", 4, "II",
                           certificate=f"entangled paths of {x},{y} and {w},{z} share an edge")
    for v1 in p1[1:-1]:
        for v2 in p2[1:-1]:
            p3 = entangled_path(net, v1, v2)
            if p3 is None or len(p3) < 3:
                continue
            p3_edges = {canon_edge(p3[i], p3[i + 1]) for i in range(len(p3) - 1)}
            if (p3_edges & p1_edges) or (p3_edges & p2_edges):
                continue
            e = _pick_off_path_edge(net, p1, forbidden=v1)
            return RuleOutcome("reduced", 4, "IV", reduced_net=eliminate_edge(net, e),
                               eliminated_edge=e, certificate=f"bridge path {v1}..{v2}")
    return RuleOutcome("no", 4, "III",
                       certificate="no two-edge entangled path joins the two cherry paths")


def _pick_off_path_edge(net, path, forbidden):
    """First internal path vertex (from the path's start, skipping the anchor)
    whose third edge leaves the path; that edge is never a cut-edge."""
    on_path = set(path)
    path_edges = {canon_edge(path[i], path[i + 1]) for i in range(len(path) - 1)}
    cuts = net.cut_edges()
    for u in path[1:-1]:
        if u == forbidden:
            continue
        for t in net.neighbors(u):
            e = canon_edge(u, t)
            if e in path_edges or t in on_path or e in cuts:
                continue
            return e
    raise AssertionError("no eliminable edge off the entangled path")


# --- the decision procedure ------------------------------------------------------------

@dataclass(frozen=True)
class TraceEvent:
    kind: str                      # SPLIT-CONFLICT | BRANCH | RULE | ELIM | YES | NO
    detail: str = ""
    trees: tuple = field(default=(), repr=False)
    nets: tuple = field(default=(), repr=False)


def serialize_trace(events) -> str:
    lines = ["TCTRACE/1"]
    for ev in events:
        lines.append(f"{ev.kind} {ev.detail}".rstrip())
    return "\n".join(lines) + "\n"


def three_cuttable_tc(tree: UndirectedNet, net: UndirectedNet) -> tuple[bool, list[TraceEvent]]:
    """Polynomial-time tree containment on a 3-cuttable network, with a trace."""
    if tree.labels() != net.labels():
        raise LabelSetMismatch(f"{sorted(tree.labels())} vs {sorted(net.labels())}")
    if not is_q_cuttable(net, 3):
        raise NotThreeCuttable("network is not 3-cuttable")
    trace: list[TraceEvent] = []
    verdict = _solve(tree, net, trace)
    trace.append(TraceEvent("YES" if verdict else "NO"))
    return verdict, trace


def _solve(tree, net, trace):
    while True:
        conflict = conflicting_split(tree, net)
        if conflict is not None:
            trace.append(TraceEvent("SPLIT-CONFLICT", f"{conflict[0]} vs {conflict[1]}"))
            return False
        nontrivial = sorted(net.cut_edges() - net.trivial_cut_edges())
        if nontrivial:
            e = nontrivial[0]
            (t1, u1), (t2, u2) = branch_on_cut_edge(tree, net, e)
            trace.append(TraceEvent("BRANCH", f"{e[0]}-{e[1]}", trees=(t1, t2), nets=(u1, u2)))
            if not _solve(t1, u1, trace):
                return False
            tree, net = t2, u2
            continue
        outcome = apply_reduction(tree, net)
        case = f" {outcome.case}" if outcome.case else ""
        trace.append(TraceEvent("RULE", f"{outcome.rule_id}{case}", trees=(tree,), nets=(net,)))
        if outcome.verdict == "yes":
            return True
        if outcome.verdict == "no":
            return False
        e = outcome.eliminated_edge
        trace.append(TraceEvent("ELIM", f"{e[0]}-{e[1]}",
                                trees=(tree,), nets=(net, outcome.reduced_net)))
        net = outcome.reduced_net
