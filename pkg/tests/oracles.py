"""Independent group models used to cross-check the Coxeter engine.

These deliberately avoid the canonical-word machinery: dihedral groups are
rotation/reflection pairs, symmetric groups are permutation tuples, word
lengths come from breadth-first search over the Cayley graph, and the
Bruhat order comes from brute-force subsequence enumeration.
"""

from collections import deque
from itertools import permutations


class DihedralOracle:
    """I2(m) with elements (k, e): rotation r^k for e=0, reflection r^k*s
    for e=1, where r = s*t."""

    def __init__(self, m: int):
        self.m = m
        self.identity = (0, 0)
        s = (0, 1)
        t = ((m - 1) % m, 1)
        self.gens = [s, t]

    def mult(self, a, b):
        (x, e), (y, f) = a, b
        if e == 0:
            return ((x + y) % self.m, f)
        return ((x - y) % self.m, 1 - f)

    def inverse(self, a):
        k, e = a
        return ((-k) % self.m, 0) if e == 0 else a

    def elements(self):
        return [(k, e) for e in (0, 1) for k in range(self.m)]


class SymmetricOracle:
    """S_n on position tuples; generator i swaps slots i and i+1.
    mult(p, q) applies p first, then q."""

    def __init__(self, n: int):
        self.n = n
        self.identity = tuple(range(n))
        self.gens = []
        for i in range(n - 1):
            g = list(range(n))
            g[i], g[i + 1] = g[i + 1], g[i]
            self.gens.append(tuple(g))

    def mult(self, p, q):
        return tuple(q[p[i]] for i in range(self.n))

    def inverse(self, p):
        out = [0] * self.n
        for i, v in enumerate(p):
            out[v] = i
        return tuple(out)

    def elements(self):
        return [tuple(p) for p in permutations(range(self.n))]

    def inversions(self, p) -> int:
        return sum(
            1 for i in range(self.n) for j in range(i + 1, self.n) if p[i] > p[j]
        )


def word_to_element(oracle, word):
    e = oracle.identity
    for s in word:
        e = oracle.mult(e, oracle.gens[s])
    return e


def cayley_bfs(oracle):
    """(length, one reduced word) per element, from the Cayley graph."""
    dist = {oracle.identity: 0}
    words = {oracle.identity: ()}
    queue = deque([oracle.identity])
    while queue:
        u = queue.popleft()
        for s, g in enumerate(oracle.gens):
            v = oracle.mult(u, g)
            if v not in dist:
                dist[v] = dist[u] + 1
                words[v] = words[u] + (s,)
                queue.append(v)
    return dist, words


def subword_bruhat_leq(oracle, u, w_reduced_word) -> bool:
    """u <= w iff some subsequence of a reduced word of w multiplies to u."""
    n = len(w_reduced_word)
    for mask in range(1 << n):
        sub = [w_reduced_word[i] for i in range(n) if mask >> i & 1]
        if word_to_element(oracle, sub) == u:
            return True
    return False
