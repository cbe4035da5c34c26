"""Union-find that tracks an Euler characteristic per component."""

from __future__ import annotations


class ChiUnionFind:
    def __init__(self):
        self.parent: dict = {}
        self.chi: dict = {}

    def add(self, key, chi: int) -> None:
        if key not in self.parent:
            self.parent[key] = key
            self.chi[key] = chi

    def find(self, key):
        root = key
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[key] != root:
            self.parent[key], key = root, self.parent[key]
        return root

    def glue(self, x, y, cost: int = 1) -> None:
        """Glue along an open arc: chi drops by one overall."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            self.chi[rx] -= cost
            return
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.chi[rx] += self.chi.pop(ry) - cost

    def bump(self, x, amount: int) -> None:
        self.chi[self.find(x)] += amount

    def roots(self) -> list:
        return sorted({self.find(k) for k in self.parent})

    def component_chi(self, x) -> int:
        return self.chi[self.find(x)]
