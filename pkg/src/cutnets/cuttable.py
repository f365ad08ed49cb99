"""Recognition of q-cuttable networks.

Three recognizers are kept deliberately independent so they can be
differential-tested against each other: the primary one deletes all
vertices lying on long chains, the second deletes one edge per long
maximal chain, and the third checks the definition literally on an
explicit cycle enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidQ
from .nets import UndirectedNet, VertexId, canon_edge, simple_cycles


@dataclass(frozen=True)
class CuttabilityReport:
    q: int
    is_cuttable: bool
    witness_cycle: tuple[VertexId, ...] | None = None

    def __bool__(self) -> bool:
        return self.is_cuttable


def is_q_cuttable(net: UndirectedNet, q: int) -> CuttabilityReport:
    """Decide q-cuttability; on failure return a chordless witness cycle.

    Deletes every vertex that lies on a chain of at least q vertices and
    tests the rest for acyclicity.  A surviving cycle avoids all long
    chains, so no q consecutive vertices on it can all be cut-edge
    incident; it is minimized to a chordless cycle before reporting.
    """
    _check_q(q)
    doomed = set()
    for chain in net.maximal_chains():
        if chain.length >= q:
            doomed.update(chain.path_vertices)
    cycle = _find_cycle_avoiding(net, doomed)
    if cycle is None:
        return CuttabilityReport(q, True)
    return CuttabilityReport(q, False, _make_chordless(net, cycle, doomed))


def is_q_cuttable_via_chain_deletion(net: UndirectedNet, q: int) -> bool:
    """Independent recognizer: drop one edge per maximal chain of length >= q.

    A single-vertex chain (possible only for q = 1) has no chain edges, and
    skipping it breaks the equivalence with the definition: a cycle whose
    only cut-edge-incident vertex is such a chain would survive.  Cutting
    one blob edge at that vertex restores it, since every cycle through the
    vertex uses both of its blob edges.
    """
    _check_q(q)
    cuts = net.cut_edges()
    dropped = set()
    for chain in net.maximal_chains():
        if chain.length < q:
            continue
        path = chain.path_vertices
        if len(path) == 1:
            dropped.add(min(canon_edge(path[0], w) for w in net.neighbors(path[0])
                            if canon_edge(path[0], w) not in cuts))
            continue
        dropped.add(min(canon_edge(path[i], path[i + 1]) for i in range(len(path) - 1)))
    return _is_forest(net.vertices, net.edges - dropped)


def is_q_cuttable_bruteforce(net: UndirectedNet, q: int, max_cycles: int = 100_000) -> bool:
    """Literal definition check: every cycle carries q consecutive
    cut-edge-incident vertices.  Desk-scale oracle."""
    _check_q(q)
    cut_incident = {v for e in net.cut_edges() for v in e}
    for cycle in simple_cycles(net, max_combinations=max_cycles):
        if not _cycle_has_q_chain(cycle, cut_incident, q):
            return False
    return True


def max_cuttability(net: UndirectedNet) -> int | None:
    """Largest q for which the net is q-cuttable.

    None means unbounded (the net is a tree); 0 means not even 1-cuttable,
    a case the definition itself does not name.
    """
    if net.reticulation_number() == 0:
        return None
    best = 0
    q = 1
    while is_q_cuttable(net, q).is_cuttable:
        best = q
        q += 1
        if q > len(net.vertices) + 1:
            raise AssertionError("q-cuttability failed to turn false on a non-tree")
    return best


def _check_q(q: int) -> None:
    if not isinstance(q, int) or q < 1:
        raise InvalidQ(f"q must be an integer >= 1, got {q!r}")


def _cycle_has_q_chain(cycle, cut_incident, q) -> bool:
    n = len(cycle)
    if q > n:
        return False
    flags = [v in cut_incident for v in cycle]
    if q == n:
        return all(flags)
    # wrap-around windows of q consecutive cycle vertices
    doubled = flags + flags
    run = 0
    for i in range(2 * n):
        run = run + 1 if doubled[i] else 0
        if run >= q and i >= q - 1:
            return True
    return False


def _is_forest(vertices, edges) -> bool:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def _find_cycle_avoiding(net: UndirectedNet, doomed):
    """A cycle in the subgraph induced by the surviving vertices, or None."""
    adj = {v: [w for w in net.neighbors(v) if w not in doomed]
           for v in net.vertices if v not in doomed}
    seen = set()
    for root in sorted(adj):
        if root in seen:
            continue
        stack = [(root, None)]
        parent = {root: None}
        seen.add(root)
        while stack:
            v, pv = stack.pop()
            for w in adj[v]:
                if w == pv:
                    continue
                if w in parent:
                    # non-tree edge: walk both endpoints up to their meeting point
                    return _close_cycle(parent, v, w)
                parent[w] = v
                seen.add(w)
                stack.append((w, v))
    return None


def _close_cycle(parent, v, w):
    anc_v = []
    x = v
    while x is not None:
        anc_v.append(x)
        x = parent[x]
    anc_set = set(anc_v)
    path_w = []
    x = w
    while x not in anc_set:
        path_w.append(x)
        x = parent[x]
    meet = x
    path_v = anc_v[:anc_v.index(meet)]
    return tuple(path_v + [meet] + list(reversed(path_w)))


def _make_chordless(net: UndirectedNet, cycle, doomed):
    """Shrink a witness cycle along chords until no chord remains.

    Chord endpoints stay inside the surviving vertex set, so the shrunken
    cycle still avoids every deleted long-chain vertex and remains a valid
    witness.
    """
    cycle = list(cycle)
    changed = True
    while changed:
        changed = False
        n = len(cycle)
        pos = {v: i for i, v in enumerate(cycle)}
        for i in range(n):
            if changed:
                break
            v = cycle[i]
            for w in net.neighbors(v):
                if w in doomed or w not in pos:
                    continue
                j = pos[w]
                gap = (j - i) % n
                if gap in (1, n - 1):
                    continue
                # shortcut: keep the shorter side of the chord
                side_a = cycle[i:j + 1] if i < j else cycle[i:] + cycle[:j + 1]
                side_b = cycle[j:i + 1] if j < i else cycle[j:] + cycle[:i + 1]
                cycle = side_a if len(side_a) <= len(side_b) else side_b
                changed = True
                break
    i = cycle.index(min(cycle))
    cycle = cycle[i:] + cycle[:i]
    if len(cycle) > 2 and cycle[-1] < cycle[1]:
        cycle = [cycle[0]] + cycle[1:][::-1]
    return tuple(cycle)
