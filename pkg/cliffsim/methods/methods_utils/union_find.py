from typing import Dict, Hashable, Iterable, List


class UnionFind(object):
    """Disjoint sets with union by rank and path compression."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self._leader = {}
        self._size = {}
        self._rank = {}
        self.n_clusters = 0
        for s in items:
            self.add(s)

    def __repr__(self):
        return "UnionFind: contains {0} clusters.".format(self.n_clusters)

    def __contains__(self, s):
        return s in self._leader

    def add(self, s):
        if s not in self._leader:
            self._leader[s] = s
            self._size[s] = 1
            self._rank[s] = 0
            self.n_clusters += 1

    def size(self, s) -> int:
        return self._size[self.find(s)]

    def find(self, s):
        path = [s]
        parent = self._leader[s]
        while parent != self._leader[parent]:
            path.append(parent)
            parent = self._leader[parent]
        for a in path:
            self._leader[a] = parent
        return parent

    def union(self, a, b):
        s1, s2 = self.find(a), self.find(b)
        if s1 == s2:
            return
        if self._rank[s2] > self._rank[s1]:
            s1, s2 = s2, s1
        if self._rank[s1] == self._rank[s2]:
            self._rank[s1] += 1
        self._leader[s2] = s1
        self._size[s1] += self._size[s2]
        self.n_clusters -= 1

    def union_all(self, items: Iterable[Hashable]):
        it = iter(items)
        first = next(it, None)
        if first is None:
            return
        self.add(first)
        for s in it:
            self.add(s)
            self.union(first, s)

    def clusters(self) -> Dict[Hashable, List[Hashable]]:
        out = {}
        for s in self._leader:
            out.setdefault(self.find(s), []).append(s)
        return out
