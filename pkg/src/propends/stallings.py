"""Stallings foldings: membership testing for finitely generated
subgroups of free groups.

The subgroup graph is built by wedging one loop per generator word at a
base vertex and folding until no vertex has two equal-labeled outgoing
edges.  A word lies in the subgroup iff it traces a closed path at the
base vertex of the folded graph.
"""

from __future__ import annotations

from .errors import PropEndsError
from .words import Word, free_reduce


class SubgroupGraph:
    """Folded core graph of a subgroup of a free group."""

    def __init__(self, free_rank: int, gen_words):
        if free_rank < 0:
            raise PropEndsError("free rank must be nonnegative")
        self.free_rank = free_rank
        self._edges = [[]]  # vertex -> list of (signed letter, target)
        self._parent = [0]
        for w in gen_words:
            w = free_reduce(w)
            for s in w:
                if abs(s) > free_rank:
                    raise PropEndsError(f"letter {s} outside free({free_rank})")
            self._add_loop(w)
        self._fold()
        self._compress()

    def _new_vertex(self):
        self._edges.append([])
        self._parent.append(len(self._parent))
        return len(self._edges) - 1

    def _find(self, v):
        root = v
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[v] != root:
            self._parent[v], v = root, self._parent[v]
        return root

    def _add_edge(self, a, s, b):
        self._edges[a].append((s, b))
        self._edges[b].append((-s, a))

    def _add_loop(self, w: Word):
        if not w:
            return
        cur = 0
        for s in w[:-1]:
            nxt = self._new_vertex()
            self._add_edge(cur, s, nxt)
            cur = nxt
        self._add_edge(cur, w[-1], 0)

    def _fold(self):
        queue = list(range(len(self._edges)))
        while queue:
            v = self._find(queue.pop())
            targets = {}
            conflict = None
            for s, t in self._edges[v]:
                t = self._find(t)
                if s in targets and targets[s] != t:
                    conflict = (targets[s], t)
                    break
                targets[s] = t
            if conflict is None:
                continue
            a, b = conflict
            a, b = self._find(a), self._find(b)
            if a != b:
                if a > b:
                    a, b = b, a
                self._parent[b] = a
                self._edges[a].extend(self._edges[b])
                self._edges[b] = []
                queue.append(a)
            queue.append(v)

    def _compress(self):
        alive = [v for v in range(len(self._edges)) if self._find(v) == v]
        remap = {v: i for i, v in enumerate(alive)}
        adj = []
        for v in alive:
            row = {}
            for s, t in self._edges[v]:
                t = remap[self._find(t)]
                if s in row and row[s] != t:
                    raise PropEndsError("graph is not fully folded")
                row[s] = t
            adj.append(row)
        self._adj = adj
        self.n_vertices = len(adj)

    def contains(self, w: Word) -> bool:
        cur = 0
        for s in free_reduce(w):
            nxt = self._adj[cur].get(s)
            if nxt is None:
                return False
            cur = nxt
        return cur == 0


def stallings_membership(free_rank: int, sub_gens, w: Word) -> bool:
    """True iff w lies in the subgroup of free(free_rank) generated by
    sub_gens."""
    return SubgroupGraph(free_rank, sub_gens).contains(w)


def same_subgroup(free_rank: int, gens_a, gens_b) -> bool:
    """True iff the two generating sets span the same subgroup of the
    free group (mutual membership in both directions)."""
    ga = SubgroupGraph(free_rank, gens_a)
    gb = SubgroupGraph(free_rank, gens_b)
    return all(gb.contains(w) for w in gens_a) and all(
        ga.contains(w) for w in gens_b
    )
