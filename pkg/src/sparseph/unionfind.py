"""Disjoint-set forest over the integers 0..n-1."""
from __future__ import annotations


class DisjointSet:
    """Union by rank with path halving.

    >>> ds = DisjointSet(4)
    >>> ds.union(0, 1), ds.union(1, 0), ds.components
    (True, False, 3)
    """

    __slots__ = ("parent", "rank", "components")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets holding a and b; return False if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.components -= 1
        return True

    def __len__(self):
        return len(self.parent)
