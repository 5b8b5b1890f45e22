from typing import List


class UnionFind:
    """Disjoint sets with union by size and path compression."""

    def __init__(self, length: int):
        self.length = length
        self.parents = list(range(length))
        self.sizes = [1] * length

    def find(self, i: int) -> int:
        root = i
        while self.parents[root] != root:
            root = self.parents[root]
        while i != root:
            nxt = self.parents[i]
            self.parents[i] = root
            i = nxt
        return root

    def merge(self, i: int, j: int) -> None:
        i = self.find(i)
        j = self.find(j)
        if i == j:
            return
        if self.sizes[i] < self.sizes[j]:
            i, j = j, i
        self.parents[j] = i
        self.sizes[i] += self.sizes[j]

    def largest_component(self) -> List[int]:
        """Members of the largest set, ties broken by smallest root."""
        best_root, best_size = -1, 0
        for i in range(self.length):
            if self.parents[i] == i and self.sizes[i] > best_size:
                best_root, best_size = i, self.sizes[i]
        return [i for i in range(self.length) if self.find(i) == best_root]
