"""Root systems from Cartan types: construction, root arithmetic, diagram
automorphisms, subsystems, and the bad-prime data of the highest root.

Simple roots are numbered 1..rank following Bourbaki.  A root is a plain
tuple of integer coefficients over the simple roots, so all arithmetic is
exact and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

Root = tuple[int, ...]

_FAMILIES = ("A", "B", "C", "D", "E", "F", "G")


@dataclass(frozen=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        n = self.rank
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 2,
            "D": n >= 3,
            "E": n in (6, 7, 8),
            "F": n == 4,
            "G": n == 2,
        }[self.family]
        if not ok:
            raise ValueError(f"rank {n} not admissible for family {self.family}")

    @staticmethod
    def parse(text) -> "CartanType":
        if isinstance(text, CartanType):
            return text
        text = str(text).strip()
        if len(text) < 2 or not text[1:].isdigit():
            raise ValueError(f"cannot parse Cartan type {text!r}")
        return CartanType(text[0].upper(), int(text[1:]))

    def __str__(self):
        return f"{self.family}{self.rank}"


def cartan_matrix(ct: CartanType) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix with A[i][j] = <alpha_i, alpha_j^vee>, Bourbaki numbering."""
    n = ct.rank
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        A[i - 1][j - 1] = aij
        A[j - 1][i - 1] = aji

    f = ct.family
    if f in ("A", "B", "C"):
        for i in range(1, n):
            bond(i, i + 1)
        if f == "B" and n >= 2:
            # alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
            bond(n - 1, n, -2, -1)
        if f == "C" and n >= 2:
            bond(n - 1, n, -1, -2)
    elif f == "D":
        for i in range(1, n - 1):
            bond(i, i + 1)
        bond(n - 2, n)
    elif f == "E":
        for i, j in [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)][: n - 2]:
            bond(i, j)
        bond(2, 4)
    elif f == "F":
        bond(1, 2)
        bond(2, 3, -2, -1)
        bond(3, 4)
    elif f == "G":
        bond(1, 2, -1, -3)
    return tuple(tuple(row) for row in A)


def _symmetrizer(A) -> tuple[int, ...]:
    """Integers d_i with d_i*A[j][i] = d_j*A[i][j]; short roots get d=1."""
    n = len(A)
    d = [0] * n
    for start in range(n):
        if d[start]:
            continue
        d[start] = 1
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and A[i][j] != 0 and not d[j]:
                    # d_j / d_i = A[j][i] / A[i][j]
                    num = d[i] * A[j][i]
                    if num % A[i][j]:
                        raise ValueError("non-symmetrizable Cartan matrix")
                    d[j] = num // A[i][j]
                    stack.append(j)
        comp = [k for k in range(n) if d[k]]
        # propagate signs: both entries of a bond are negative, so ratios > 0
        m = min(d[k] for k in comp)
        for k in comp:
            if d[k] % m:
                raise ValueError("unexpected symmetrizer ratio")
        for k in comp:
            d[k] //= m
    return tuple(d)


class RootSystem:
    """Immutable root system: all roots as integer vectors over the simple roots.

    positive_roots are sorted by height, ties broken lexicographically on
    coordinates; roots lists the positives followed by their negatives in the
    same order.
    """

    def __init__(self, ct: CartanType):
        self.cartan_type = ct
        self.rank = ct.rank
        self.cartan_matrix = cartan_matrix(ct)
        d = _symmetrizer(self.cartan_matrix)
        # symmetric form (alpha_i, alpha_j) = d_j * A[i][j]; short roots have norm 2
        self.form = tuple(
            tuple(d[j] * self.cartan_matrix[i][j] for j in range(ct.rank))
            for i in range(ct.rank)
        )
        self.simple_roots = tuple(
            tuple(1 if k == i else 0 for k in range(ct.rank)) for i in range(ct.rank)
        )
        pos = self._close_up()
        self.positive_roots = tuple(sorted(pos, key=lambda r: (sum(r), r)))
        self.roots = self.positive_roots + tuple(
            tuple(-c for c in r) for r in self.positive_roots
        )
        self._root_set = frozenset(self.roots)

    def _close_up(self):
        A = self.cartan_matrix
        n = self.rank
        seen = set(self.simple_roots)
        frontier = list(self.simple_roots)
        while frontier:
            new = []
            for g in frontier:
                for j in range(n):
                    c = sum(g[k] * A[k][j] for k in range(n))
                    if c == 0:
                        continue
                    img = list(g)
                    img[j] -= c
                    img = tuple(img)
                    if img not in seen:
                        seen.add(img)
                        new.append(img)
            frontier = new
        return [r for r in seen if all(c >= 0 for c in r)]

    # -- basic queries -------------------------------------------------

    def is_root(self, v) -> bool:
        return tuple(v) in self._root_set

    def check_root(self, v) -> Root:
        v = tuple(v)
        if v not in self._root_set:
            raise ValueError(f"{v} is not a root of {self.cartan_type}")
        return v

    def inner(self, x, y) -> int:
        """Symmetrized Cartan form (x, y)."""
        F = self.form
        n = self.rank
        return sum(x[i] * F[i][j] * y[j] for i in range(n) for j in range(n) if x[i] and y[j])

    def pairing(self, g, b) -> int:
        """<g, b^vee> = 2(g,b)/(b,b); always an integer for roots b."""
        num = 2 * self.inner(g, b)
        den = self.inner(b, b)
        if num % den:
            raise ValueError("non-integral pairing")
        return num // den

    def height(self, r) -> int:
        return sum(r)

    def __repr__(self):
        return f"RootSystem({self.cartan_type})"


@lru_cache(maxsize=None)
def build(ct) -> RootSystem:
    """Construct (and cache) the root system of a Cartan type like 'D4'."""
    return RootSystem(CartanType.parse(ct))


def reflect(rs: RootSystem, b, g) -> Root:
    """Reflection s_b(g) = g - <g, b^vee> b; both arguments must be roots."""
    b = rs.check_root(b)
    g = rs.check_root(g)
    c = rs.pairing(g, b)
    return tuple(g[i] - c * b[i] for i in range(rs.rank))


def highest_root(rs: RootSystem) -> Root:
    return rs.positive_roots[-1]


def bad_primes(rs: RootSystem) -> frozenset[int]:
    """Primes dividing a coefficient of the highest root (the bad primes).

    A characteristic is good exactly when it is not in this set.
    """
    coeffs = set(highest_root(rs)) - {0, 1}
    out = set()
    for c in coeffs:
        d = 2
        while d * d <= c:
            if c % d == 0:
                out.add(d)
                while c % d == 0:
                    c //= d
            d += 1
        if c > 1:
            out.add(c)
    return frozenset(out)


@dataclass(frozen=True)
class DiagramAut:
    """A Cartan-matrix-preserving permutation of the simple-root indices 1..rank."""

    perm: tuple[int, ...]  # perm[i-1] = theta(i), values 1-based

    @property
    def order(self) -> int:
        seen = [False] * len(self.perm)
        out = 1
        for i in range(len(self.perm)):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = self.perm[j] - 1
                length += 1
            out = _lcm(out, length)
        return out

    def is_identity(self) -> bool:
        return all(self.perm[i] == i + 1 for i in range(len(self.perm)))

    def apply_index(self, i: int) -> int:
        return self.perm[i - 1]

    def inverse_index(self, i: int) -> int:
        return self.perm.index(i) + 1

    def apply_root(self, r) -> Root:
        out = [0] * len(self.perm)
        for i, c in enumerate(r):
            out[self.perm[i] - 1] = c
        return tuple(out)

    def inverse(self) -> "DiagramAut":
        inv = [0] * len(self.perm)
        for i, v in enumerate(self.perm):
            inv[v - 1] = i + 1
        return DiagramAut(tuple(inv))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial cycles, each rotated to start at its minimum."""
        seen = [False] * len(self.perm)
        out = []
        for i in range(len(self.perm)):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = self.perm[j] - 1
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return tuple(out)

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


@lru_cache(maxsize=None)
def _diagram_auts_cached(ct: CartanType):
    rs = build(ct)
    A = rs.cartan_matrix
    n = rs.rank
    found = []
    for p in permutations(range(n)):
        if all(A[p[i]][p[j]] == A[i][j] for i in range(n) for j in range(n)):
            found.append(DiagramAut(tuple(x + 1 for x in p)))
    identity = DiagramAut(tuple(range(1, n + 1)))
    rest = sorted((a for a in found if a != identity), key=lambda a: a.perm)
    return (identity, *rest)


def diagram_auts(rs: RootSystem) -> tuple[DiagramAut, ...]:
    """All diagram automorphisms, identity first, then sorted by permutation."""
    return _diagram_auts_cached(rs.cartan_type)


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


def perp(rs: RootSystem, pi) -> frozenset[Root]:
    """All roots orthogonal (symmetrized form) to every simple root in pi."""
    pi = sorted(set(pi))
    for i in pi:
        if not 1 <= i <= rs.rank:
            raise ValueError(f"simple index {i} out of range")
    simples = [rs.simple_roots[i - 1] for i in pi]
    return frozenset(r for r in rs.roots if all(rs.inner(r, a) == 0 for a in simples))


def subsystem(rs: RootSystem, seed_roots):
    """Closed symmetric subsystem generated by a set of roots.

    Returns (roots_closed, simple_system, type_multiset): the smallest
    root-closed symmetric subset containing the input, its simple system
    (positive members not expressible as a sum of two positive members),
    and the Cartan classification of the simple system as a sorted tuple
    of irreducible CartanTypes.
    """
    current = set()
    for r in seed_roots:
        r = rs.check_root(r)
        current.add(r)
        current.add(tuple(-c for c in r))
    changed = True
    while changed:
        changed = False
        items = list(current)
        for x, y in combinations(items, 2):
            s = tuple(a + b for a, b in zip(x, y))
            if s in rs._root_set and s not in current:
                current.add(s)
                changed = True
    closed = frozenset(current)
    positives = sorted((r for r in closed if r in set(rs.positive_roots)),
                       key=lambda r: (sum(r), r))
    pos_set = set(positives)
    simple = []
    for r in positives:
        decomposable = any(
            tuple(a - b for a, b in zip(r, s)) in pos_set for s in positives if s != r
        )
        if not decomposable:
            simple.append(r)
    types = _classify_simple_system(rs, simple)
    return closed, tuple(simple), types


def _classify_simple_system(rs: RootSystem, simple) -> tuple[CartanType, ...]:
    if not simple:
        return ()
    k = len(simple)
    gram = [[rs.inner(simple[i], simple[j]) for j in range(k)] for i in range(k)]
    # connected components of the bond graph
    comp_of = [-1] * k
    ncomp = 0
    for start in range(k):
        if comp_of[start] >= 0:
            continue
        stack = [start]
        comp_of[start] = ncomp
        while stack:
            i = stack.pop()
            for j in range(k):
                if j != i and gram[i][j] != 0 and comp_of[j] < 0:
                    comp_of[j] = ncomp
                    stack.append(j)
        ncomp += 1
    types = []
    for c in range(ncomp):
        nodes = [i for i in range(k) if comp_of[i] == c]
        types.append(_classify_component(gram, nodes))
    return tuple(sorted(types, key=lambda t: (t.family, t.rank)))


def _classify_component(gram, nodes) -> CartanType:
    n = len(nodes)
    if n == 1:
        return CartanType("A", 1)
    norm = {i: gram[i][i] for i in nodes}
    # bond multiplicity <a_i, a_j^vee><a_j, a_i^vee> between adjacent nodes
    def mult(i, j):
        return (2 * gram[i][j]) ** 2 // (norm[i] * norm[j])

    edges = [(i, j) for a, i in enumerate(nodes) for j in nodes[a + 1 :] if gram[i][j] != 0]
    if len(edges) != n - 1:
        raise ValueError("simple system is not a tree")
    mults = {e: mult(*e) for e in edges}
    if any(m == 3 for m in mults.values()):
        if n != 2:
            raise ValueError("unrecognizable simple system")
        return CartanType("G", 2)
    if any(m == 2 for m in mults.values()):
        if any(len([e for e in edges if i in e]) > 2 for i in nodes):
            raise ValueError("unrecognizable simple system")
        shorts = sum(1 for i in nodes if norm[i] == min(norm.values()))
        if n == 2:
            return CartanType("B", 2)
        if shorts == 1:
            return CartanType("B", n)
        if shorts == n - 1:
            return CartanType("C", n)
        if n == 4 and shorts == 2:
            return CartanType("F", 4)
        raise ValueError("unrecognizable simple system")
    # simply laced: path -> A, one branch node -> D/E by arm lengths
    degree = {i: len([e for e in edges if i in e]) for i in nodes}
    branch = [i for i in nodes if degree[i] == 3]
    if any(degree[i] > 3 for i in nodes) or len(branch) > 1:
        raise ValueError("unrecognizable simple system")
    if not branch:
        return CartanType("A", n)
    b = branch[0]
    arms = []
    for i in nodes:
        if gram[b][i] != 0 and i != b:
            length = 1
            prev, cur = b, i
            while True:
                nxt = [j for j in nodes if j not in (prev,) and gram[cur][j] != 0 and j != cur]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                length += 1
            arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return CartanType("D", n)
    if arms == [1, 2, 2]:
        return CartanType("E", 6)
    if arms == [1, 2, 3]:
        return CartanType("E", 7)
    if arms == [1, 2, 4]:
        return CartanType("E", 8)
    raise ValueError("unrecognizable simple system")


def positive_count_formula(ct: CartanType) -> int:
    """Independent oracle for |Phi^+| by family."""
    n = ct.rank
    return {
        "A": n * (n + 1) // 2,
        "B": n * n,
        "C": n * n,
        "D": n * (n - 1),
        "E": {6: 36, 7: 63, 8: 120}[n] if ct.family == "E" else 0,
        "F": 24,
        "G": 6,
    }[ct.family]


def to_json(rs: RootSystem) -> dict:
    return {
        "type": str(rs.cartan_type),
        "rank": rs.rank,
        "cartan_matrix": [list(row) for row in rs.cartan_matrix],
        "positive_roots": [list(r) for r in rs.positive_roots],
    }
