"""Exact Weyl group engine: elements, words, length, longest elements,
Bruhat order, and full enumeration by Cayley-graph BFS.

An element is stored as the tuple of images of the simple roots together
with the images under the inverse, so inversion is free and products cost
O(rank^3) integer operations.  Words are tuples of 1-based simple indices.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import BudgetExceededError
from .rootsys import CartanType, Root, RootSystem, build

DEFAULT_BUDGET = 10_000_000


class WeylElement:
    __slots__ = ("rs", "images", "inv_images", "_hash", "_len", "_word")

    def __init__(self, rs, images, inv_images):
        self.rs = rs
        self.images = images
        self.inv_images = inv_images
        self._hash = None
        self._len = None
        self._word = None

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.rs is other.rs and self.images == other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __mul__(self, other):
        return mult(self, other)

    def __call__(self, root):
        return apply(self, root)

    def inverse(self) -> "WeylElement":
        return WeylElement(self.rs, self.inv_images, self.images)

    def is_identity(self) -> bool:
        return self.images == self.rs.simple_roots

    def length(self) -> int:
        if self._len is None:
            self._len = sum(
                1 for g in self.rs.positive_roots if _is_negative(_apply(self, g))
            )
        return self._len

    def word(self) -> tuple[int, ...]:
        return reduced_word(self)

    def __repr__(self):
        return f"W({self.rs.cartan_type}; {list(self.word())})"


def _is_negative(coords) -> bool:
    return any(c < 0 for c in coords)


def _apply(w, coords):
    n = w.rs.rank
    imgs = w.images
    out = [0] * n
    for i, c in enumerate(coords):
        if c:
            img = imgs[i]
            for k in range(n):
                out[k] += c * img[k]
    return tuple(out)


def _apply_inv(w, coords):
    n = w.rs.rank
    imgs = w.inv_images
    out = [0] * n
    for i, c in enumerate(coords):
        if c:
            img = imgs[i]
            for k in range(n):
                out[k] += c * img[k]
    return tuple(out)


def _reflect_simple(rs, coords, i0):
    """s_{alpha_{i0+1}} applied to an arbitrary coordinate vector (0-based i0)."""
    A = rs.cartan_matrix
    c = sum(coords[k] * A[k][i0] for k in range(rs.rank) if coords[k])
    if not c:
        return tuple(coords)
    out = list(coords)
    out[i0] -= c
    return tuple(out)


def identity(rs: RootSystem) -> WeylElement:
    return WeylElement(rs, rs.simple_roots, rs.simple_roots)


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    if not 1 <= i <= rs.rank:
        raise ValueError(f"simple index {i} out of range for {rs.cartan_type}")
    imgs = tuple(_reflect_simple(rs, a, i - 1) for a in rs.simple_roots)
    return WeylElement(rs, imgs, imgs)


def _mul_gen_right(w, i0):
    """w * s_{i0+1}: touches only the columns bonded to i0."""
    rs = w.rs
    A = rs.cartan_matrix
    n = rs.rank
    wi = w.images[i0]
    images = list(w.images)
    for j in range(n):
        a = A[j][i0]
        if a:
            images[j] = tuple(images[j][k] - a * wi[k] for k in range(n))
    inv_images = tuple(_reflect_simple(rs, v, i0) for v in w.inv_images)
    return WeylElement(rs, tuple(images), inv_images)


def _mul_gen_left(w, i0):
    """s_{i0+1} * w."""
    rs = w.rs
    A = rs.cartan_matrix
    n = rs.rank
    images = tuple(_reflect_simple(rs, v, i0) for v in w.images)
    vi = w.inv_images[i0]
    inv_images = list(w.inv_images)
    for j in range(n):
        a = A[j][i0]
        if a:
            inv_images[j] = tuple(inv_images[j][k] - a * vi[k] for k in range(n))
    return WeylElement(rs, images, tuple(inv_images))


def from_word(rs: RootSystem, letters) -> WeylElement:
    w = identity(rs)
    for i in letters:
        if not 1 <= i <= rs.rank:
            raise ValueError(f"letter {i} out of range for {rs.cartan_type}")
        w = _mul_gen_right(w, i - 1)
    return w


def _same_rs(u, w):
    if u.rs is not w.rs:
        raise ValueError("elements belong to different root systems")


def mult(u: WeylElement, w: WeylElement) -> WeylElement:
    _same_rs(u, w)
    images = tuple(_apply(u, v) for v in w.images)
    inv_images = tuple(_apply_inv(w, v) for v in u.inv_images)
    return WeylElement(u.rs, images, inv_images)


def inv(w: WeylElement) -> WeylElement:
    return w.inverse()


def apply(w: WeylElement, root) -> Root:
    root = w.rs.check_root(root)
    out = _apply(w, root)
    return out


def length(w: WeylElement) -> int:
    return w.length()


def reduced_word(w: WeylElement) -> tuple[int, ...]:
    """Lexicographically smallest reduced word (greedy smallest left descent)."""
    if w._word is not None:
        return w._word
    letters = []
    u = w.inverse()  # right descents of u are left descents of w
    while True:
        for i0 in range(w.rs.rank):
            if _is_negative(u.images[i0]):
                letters.append(i0 + 1)
                u = _mul_gen_right(u, i0)
                break
        else:
            break
    word = tuple(letters)
    w._word = word
    if w._len is None:
        w._len = len(word)
    return word


def descents_left(w) -> list[int]:
    return [i + 1 for i in range(w.rs.rank) if _is_negative(w.inv_images[i])]


def descents_right(w) -> list[int]:
    return [i + 1 for i in range(w.rs.rank) if _is_negative(w.images[i])]


def longest_element(rs: RootSystem, pi=None) -> WeylElement:
    """Longest element of the parabolic W_pi (all of W when pi is None)."""
    if pi is None:
        idx = list(range(rs.rank))
    else:
        idx = sorted(set(i - 1 for i in pi))
        for i0 in idx:
            if not 0 <= i0 < rs.rank:
                raise ValueError("simple index out of range")
    w = identity(rs)
    while True:
        for i0 in idx:
            if not _is_negative(w.images[i0]):
                w = _mul_gen_right(w, i0)
                break
        else:
            return w


def reflection(rs: RootSystem, root) -> WeylElement:
    """The reflection s_root as a Weyl group element."""
    root = rs.check_root(root)
    imgs = []
    for a in rs.simple_roots:
        c = rs.pairing(a, root)
        imgs.append(tuple(a[k] - c * root[k] for k in range(rs.rank)))
    imgs = tuple(imgs)
    return WeylElement(rs, imgs, imgs)


def bruhat_leq(u: WeylElement, w: WeylElement) -> bool:
    """Bruhat order by the standard descent recursion (smallest descent first)."""
    _same_rs(u, w)
    while True:
        if u.is_identity():
            return True
        for i0 in range(w.rs.rank):
            if _is_negative(w.inv_images[i0]):
                break
        else:
            return False  # w = 1 but u != 1
        if _is_negative(u.inv_images[i0]):
            u = _mul_gen_left(u, i0)
        w = _mul_gen_left(w, i0)


def bruhat_interval_below(w: WeylElement) -> frozenset[WeylElement]:
    """{u : u <= w} via the subword characterization of a fixed reduced word."""
    out = {identity(w.rs)}
    for i in reduced_word(w):
        grown = set()
        for v in out:
            if not _is_negative(v.images[i - 1]):  # length increases
                grown.add(_mul_gen_right(v, i - 1))
        out |= grown
    return frozenset(out)


def bruhat_leq_subword(u: WeylElement, w: WeylElement) -> bool:
    """Independent subword-characterization oracle for the Bruhat order."""
    _same_rs(u, w)
    return u in bruhat_interval_below(w)


def weyl_order(ct: CartanType) -> int:
    """Closed-form group order (independent of any enumeration)."""
    n = ct.rank
    if ct.family == "A":
        return _factorial(n + 1)
    if ct.family in ("B", "C"):
        return 2**n * _factorial(n)
    if ct.family == "D":
        return 2 ** (n - 1) * _factorial(n)
    if ct.family == "E":
        return {6: 51840, 7: 2903040, 8: 696729600}[n]
    if ct.family == "F":
        return 1152
    return 12  # G2


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def enumerate_weyl(rs: RootSystem, budget: int = DEFAULT_BUDGET) -> list[WeylElement]:
    """All elements by Cayley-graph BFS from the identity.

    Deterministic order: by length, then by lexicographically smallest
    reduced word; each element's cached word is that canonical word.
    """
    expected = weyl_order(rs.cartan_type)
    if expected > budget:
        raise BudgetExceededError(
            f"|W({rs.cartan_type})| = {expected} exceeds budget {budget}",
            partial_count=0,
        )
    e = identity(rs)
    e._word = ()
    out = [e]
    seen = {e.images}
    frontier = [e]
    while frontier:
        new = []
        for w in frontier:
            base = w._word
            for i0 in range(rs.rank):
                if _is_negative(w.images[i0]):
                    continue  # length would drop
                v = _mul_gen_right(w, i0)
                if v.images in seen:
                    continue
                seen.add(v.images)
                v._word = base + (i0 + 1,)
                v._len = len(v._word)
                new.append(v)
        out.extend(new)
        frontier = new
    return out


# --- type-A permutation bridge -----------------------------------------


def permutation_of(w: WeylElement) -> tuple[int, ...]:
    """For type A_{n}: w as a permutation of {0..n} (sigma[j] = w(j), 0-based)."""
    rs = w.rs
    if rs.cartan_type.family != "A":
        raise ValueError("permutation bridge is defined for type A only")
    m = rs.rank + 1
    sigma = tuple(range(m))
    for i in reduced_word(w):
        t = list(range(m))
        t[i - 1], t[i] = t[i], t[i - 1]
        sigma = tuple(sigma[t[j]] for j in range(m))
    return sigma


def from_permutation(rs: RootSystem, sigma) -> WeylElement:
    """Inverse of permutation_of; sigma is a 0-based permutation of {0..rank}."""
    if rs.cartan_type.family != "A":
        raise ValueError("permutation bridge is defined for type A only")
    m = rs.rank + 1
    sigma = list(sigma)
    if sorted(sigma) != list(range(m)):
        raise ValueError("not a permutation of 0..rank")
    letters = []
    while True:
        for j in range(m - 1):
            if sigma[j] > sigma[j + 1]:
                sigma[j], sigma[j + 1] = sigma[j + 1], sigma[j]
                letters.append(j + 1)
                break
        else:
            break
    return from_word(rs, reversed(letters))
