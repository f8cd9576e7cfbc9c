"""Twisted-involution calculus: the action of a diagram automorphism on the
Weyl group, twisted involutions and twisted identities, the complex/imaginary/
real root decomposition, candidate maximal elements w_C = w_0 w_Pi with their
necessary conditions, and the dimension formula l(w_C) + rk(1 - w_C theta).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .errors import BudgetExceededError
from .rootsys import CartanType, DiagramAut, RootSystem, build, perp, subsystem
from .weyl import (
    DEFAULT_BUDGET,
    WeylElement,
    _is_negative,
    _mul_gen_left,
    _mul_gen_right,
    enumerate_weyl,
    identity,
    longest_element,
    mult,
    permutation_of,
    from_permutation,
    reduced_word,
    reflection,
    weyl_order,
)


@dataclass(frozen=True)
class TwistedSetting:
    rs: RootSystem
    theta: DiagramAut

    def __post_init__(self):
        A = self.rs.cartan_matrix
        p = self.theta.perm
        n = self.rs.rank
        if sorted(p) != list(range(1, n + 1)):
            raise ValueError("theta is not a permutation of 1..rank")
        for i in range(n):
            for j in range(n):
                if A[p[i] - 1][p[j] - 1] != A[i][j]:
                    raise ValueError("theta does not preserve the Cartan matrix")


def setting(ct, theta_perm) -> TwistedSetting:
    """Convenience constructor from a Cartan type and a 1-based perm tuple."""
    return TwistedSetting(build(ct), DiagramAut(tuple(theta_perm)))


def theta_on_w(st: TwistedSetting, w: WeylElement) -> WeylElement:
    """theta(w) = theta o w o theta^{-1}; on words this relabels i -> theta(i)."""
    th = st.theta
    inv = th.inverse().perm
    images = tuple(th.apply_root(w.images[inv[j] - 1]) for j in range(st.rs.rank))
    inv_images = tuple(th.apply_root(w.inv_images[inv[j] - 1]) for j in range(st.rs.rank))
    return WeylElement(st.rs, images, inv_images)


def is_twisted_involution(st: TwistedSetting, w: WeylElement) -> bool:
    return mult(w, theta_on_w(st, w)).is_identity()


def twisted_identity_witness(st: TwistedSetting, w: WeylElement,
                             budget: int = DEFAULT_BUDGET):
    """Witness u with w = u theta(u)^{-1}, or None when w is not a twisted identity.

    BFS of the orbit of the identity under x -> s_i x s_{theta(i)}; that orbit
    is exactly the set of twisted identities.
    """
    rs = st.rs
    perm = st.theta.perm
    e = identity(rs)
    if w == e:
        return e
    parent = {e.images: None}
    frontier = [e]
    found = None
    while frontier and found is None:
        new = []
        for x in frontier:
            for i0 in range(rs.rank):
                y = _mul_gen_right(_mul_gen_left(x, i0), perm[i0] - 1)
                if y.images in parent:
                    continue
                parent[y.images] = (x, i0)
                if len(parent) > budget:
                    raise BudgetExceededError(
                        "twisted-identity orbit exceeded budget",
                        partial_count=len(parent))
                new.append(y)
                if y == w:
                    found = y
                    break
            if found is not None:
                break
        frontier = new
    if found is None:
        return None
    # each step x -> s_i x s_(theta i) multiplies the witness by s_i on the left
    u = identity(rs)
    node = found.images
    while parent[node] is not None:
        x, i0 = parent[node]
        u = _mul_gen_right(u, i0)
        node = x.images
    return u


def is_twisted_identity(st: TwistedSetting, w: WeylElement,
                        budget: int = DEFAULT_BUDGET) -> bool:
    return twisted_identity_witness(st, w, budget) is not None


def _folded_generators(st: TwistedSetting) -> list[WeylElement]:
    """Products of simple reflections over each theta orbit; the orbits must
    be pairwise orthogonal (true for every diagram automorphism here)."""
    rs = st.rs
    A = rs.cartan_matrix
    gens = []
    done = set()
    for i in range(1, rs.rank + 1):
        if i in done:
            continue
        orb = {i}
        j = st.theta.apply_index(i)
        while j not in orb:
            orb.add(j)
            j = st.theta.apply_index(j)
        done |= orb
        orb = sorted(orb)
        for a in orb:
            for b in orb:
                if a != b and A[a - 1][b - 1] != 0:
                    raise ValueError("theta orbit is not orthogonal")
        w = identity(rs)
        for a in orb:
            w = _mul_gen_right(w, a - 1)
        gens.append(w)
    return gens


class StepType(Enum):
    UP = "UP"
    MIDDLE = "MIDDLE"
    DOWN = "DOWN"


def step_type(st: TwistedSetting, w: WeylElement, i: int) -> StepType:
    """Trichotomy for a twisted involution w and a simple index i."""
    if not is_twisted_involution(st, w):
        raise ValueError("step_type requires a twisted involution")
    i0 = i - 1
    ti0 = st.theta.perm[i0] - 1
    left = _mul_gen_left(w, i0)
    right = _mul_gen_right(w, ti0)
    if left == right:
        return StepType.MIDDLE
    ww = _mul_gen_right(left, ti0)
    if ww.length() == w.length() + 2:
        return StepType.UP
    if ww.length() == w.length() - 2:
        return StepType.DOWN
    raise AssertionError("trichotomy violated")  # cannot happen for twisted involutions


def twisted_step(st: TwistedSetting, w: WeylElement, i: int) -> WeylElement:
    """The neighbor of w in direction i: s_i w s_(theta i) in the UP/DOWN cases,
    s_i w in the MIDDLE case."""
    kind = step_type(st, w, i)
    i0 = i - 1
    ti0 = st.theta.perm[i0] - 1
    if kind is StepType.MIDDLE:
        return _mul_gen_left(w, i0)
    return _mul_gen_right(_mul_gen_left(w, i0), ti0)


def enumerate_twisted_involutions(st: TwistedSetting, budget: int = DEFAULT_BUDGET,
                                  cross_check: bool = False) -> list[WeylElement]:
    """All twisted involutions, by BFS from the identity via UP/MIDDLE steps.

    When theta has order 3 (triality) the simple-reflection step
    s_i w s_(theta i) leaves the twisted-involution set, so the BFS instead
    conjugates by the theta-fixed folded generators (products over theta
    orbits of pairwise orthogonal simple reflections), which do preserve it.
    With cross_check=True the independent method (filtering the full Weyl
    enumeration through is_twisted_involution) must return the same set.
    Output is sorted by (length, reduced word).
    """
    rs = st.rs
    if weyl_order(rs.cartan_type) > budget:
        raise BudgetExceededError(
            f"|W({rs.cartan_type})| exceeds budget {budget}", partial_count=0)
    perm = st.theta.perm
    e = identity(rs)
    seen = {e.images: e}
    frontier = [e]
    if st.theta.order <= 2:
        while frontier:
            new = []
            for w in frontier:
                for i0 in range(rs.rank):
                    if _is_negative(w.inv_images[i0]):
                        continue  # left descent: the step would go down
                    left = _mul_gen_left(w, i0)
                    right = _mul_gen_right(w, perm[i0] - 1)
                    v = left if left == right else _mul_gen_right(left, perm[i0] - 1)
                    if v.images not in seen:
                        seen[v.images] = v
                        new.append(v)
            frontier = new
    else:
        gens = _folded_generators(st)
        while frontier:
            new = []
            for w in frontier:
                for t in gens:
                    txt = mult(mult(t, w), t)
                    v = mult(t, w) if txt == w else txt
                    if v.images not in seen:
                        seen[v.images] = v
                        new.append(v)
            frontier = new
    out = sorted(seen.values(), key=lambda w: (w.length(), reduced_word(w)))
    if cross_check:
        by_filter = {w.images for w in enumerate_weyl(rs, budget)
                     if is_twisted_involution(st, w)}
        if by_filter != set(seen):
            raise AssertionError(
                f"twisted-involution enumeration methods disagree on "
                f"{rs.cartan_type}, theta={st.theta}")
    return out


# --- root classification and profiles -----------------------------------


def roots_classification(st: TwistedSetting, w: WeylElement):
    """(C_w, I_w, R_w): complex, imaginary and real positive roots for w theta."""
    rs = st.rs
    th = st.theta
    cw, iw, rw = set(), set(), set()
    for a in rs.positive_roots:
        img = tuple(w(th.apply_root(a)))
        neg = tuple(-c for c in a)
        if img == a:
            iw.add(a)
        elif img == neg:
            rw.add(a)
        elif _is_negative(img):
            cw.add(a)
    return frozenset(cw), frozenset(iw), frozenset(rw)


def pi_of(st: TwistedSetting, w: WeylElement) -> frozenset[int]:
    """Pi = {alpha in Delta : w theta alpha = alpha}, as 1-based indices."""
    rs = st.rs
    out = set()
    for i in range(1, rs.rank + 1):
        a = rs.simple_roots[i - 1]
        if tuple(w(st.theta.apply_root(a))) == a:
            out.add(i)
    return frozenset(out)


def _integer_rank(rows) -> int:
    """Exact rank of an integer matrix by fraction-free (Bareiss) elimination."""
    M = [list(r) for r in rows]
    nr = len(M)
    nc = len(M[0]) if nr else 0
    rank = 0
    prev = 1
    for c in range(nc):
        piv = next((r for r in range(rank, nr) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(rank + 1, nr):
            for c2 in range(c + 1, nc):
                M[r][c2] = (M[r][c2] * M[rank][c] - M[r][c] * M[rank][c2]) // prev
            M[r][c] = 0
        prev = M[rank][c]
        rank += 1
        if rank == nr:
            break
    return rank


def twist_matrix(st: TwistedSetting, w: WeylElement):
    """Matrix of w o theta on the root lattice in simple-root coordinates."""
    n = st.rs.rank
    perm = st.theta.perm
    cols = [w.images[perm[j] - 1] for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def rank_term(st: TwistedSetting, w: WeylElement) -> int:
    """rk(1 - w theta) on the root lattice, computed exactly."""
    M = twist_matrix(st, w)
    n = st.rs.rank
    return _integer_rank([[(1 if i == j else 0) - M[i][j] for j in range(n)]
                          for i in range(n)])


def dimension_formula(st: TwistedSetting, w: WeylElement) -> int:
    """l(w) + rk(1 - w theta): the dimension of a spherical class with w_C = w."""
    return w.length() + rank_term(st, w)


@dataclass(frozen=True)
class ClassProfile:
    setting: TwistedSetting
    pi: frozenset[int]
    w_c: WeylElement
    complex_roots: frozenset
    imaginary_roots: frozenset
    real_roots: frozenset
    delta_r: tuple
    r_type: tuple[CartanType, ...]
    length: int
    rank_term: int
    dim_value: int


def profile(st: TwistedSetting, pi) -> ClassProfile:
    """Full derived data for the candidate class with w_C = w_0 w_Pi."""
    pi = frozenset(pi)
    for i in pi:
        if not 1 <= i <= st.rs.rank:
            raise ValueError(f"simple index {i} out of range")
        if st.theta.apply_index(i) not in pi:
            raise ValueError(f"Pi={sorted(pi)} is not theta-invariant")
    w0 = longest_element(st.rs)
    wpi = longest_element(st.rs, pi) if pi else identity(st.rs)
    wc = mult(w0, wpi)
    cw, iw, rw = roots_classification(st, wc)
    if rw:
        _, delta_r, r_type = subsystem(st.rs, rw)
    else:
        delta_r, r_type = (), ()
    rt = rank_term(st, wc)
    return ClassProfile(
        setting=st, pi=pi, w_c=wc,
        complex_roots=cw, imaginary_roots=iw, real_roots=rw,
        delta_r=delta_r, r_type=r_type,
        length=wc.length(), rank_term=rt, dim_value=wc.length() + rt,
    )


def profile_to_json(p: ClassProfile) -> dict:
    return {
        "type": str(p.setting.rs.cartan_type),
        "theta": str(p.setting.theta),
        "Pi": sorted(p.pi),
        "w_C_word": list(reduced_word(p.w_c)),
        "length": p.length,
        "rank_term": p.rank_term,
        "dim": p.dim_value,
        "sizes": {"complex": len(p.complex_roots),
                  "imaginary": len(p.imaginary_roots),
                  "real": len(p.real_roots)},
        "delta_R": [list(r) for r in p.delta_r],
        "R_type": [str(t) for t in p.r_type],
    }


# --- the classification table and candidate scan ------------------------


def neg_w0_aut(rs: RootSystem) -> DiagramAut:
    """The permutation i -> j with w_0(alpha_i) = -alpha_j, computed from w_0."""
    w0 = longest_element(rs)
    perm = []
    for i in range(rs.rank):
        img = w0.images[i]
        neg = [k for k in range(rs.rank) if img[k] == -1]
        if sum(abs(c) for c in img) != 1 or len(neg) != 1:
            raise AssertionError("w_0 does not negate a simple root")
        perm.append(neg[0] + 1)
    return DiagramAut(tuple(perm))


def list2_pis(st: TwistedSetting):
    """Rows (Phi, Pi) of the classification table matching this setting's theta.

    Returns a list of frozensets of 1-based simple indices, or None when theta
    is trivial (the table is stated for non-trivial diagram automorphisms).
    """
    th = st.theta
    if th.is_identity():
        return None
    ct = st.rs.cartan_type
    n = ct.rank
    rows = [frozenset()]
    if ct.family == "A" and n % 2 == 1 and th == neg_w0_aut(st.rs):
        rows.append(frozenset(range(1, n + 1, 2)))
    elif ct == CartanType("D", 4):
        if th.order == 3:
            rows.append(frozenset({2}))
        elif th.order == 2:
            moved = [i for i in (1, 3, 4) if th.apply_index(i) != i]
            rows.append(frozenset({2, *moved}))
    elif ct.family == "D" and n >= 5 and th.apply_index(n - 1) == n:
        if n % 2 == 0:
            m = n // 2
            for l in range(1, m):
                rows.append(frozenset(range(2 * l, n + 1)))
        else:
            m = (n - 1) // 2
            for l in range(1, m + 1):
                rows.append(frozenset(range(2 * l, n + 1)))
    elif ct == CartanType("E", 6) and th == neg_w0_aut(st.rs):
        rows.append(frozenset({2, 3, 4, 5}))
    return rows


def theta_invariant_subsets(st: TwistedSetting):
    """All theta-invariant subsets of the simple indices, lexicographic order."""
    orbits = []
    seen = set()
    for i in range(1, st.rs.rank + 1):
        if i in seen:
            continue
        orb = {i}
        j = st.theta.apply_index(i)
        while j not in orb:
            orb.add(j)
            j = st.theta.apply_index(j)
        seen |= orb
        orbits.append(frozenset(orb))
    subsets = []
    for k in range(len(orbits) + 1):
        for combo in combinations(orbits, k):
            subsets.append(frozenset().union(*combo) if combo else frozenset())
    return sorted(subsets, key=lambda s: sorted(s))


CONDITION_NAMES = ("twisted_involution", "involution", "theta_commutes",
                   "w0_commutes", "pi_recovered")


@dataclass(frozen=True)
class Candidate:
    pi: frozenset[int]
    profile: ClassProfile
    conditions: tuple[tuple[str, bool], ...]
    all_pass: bool
    in_list: bool | None


def wc_candidates(st: TwistedSetting) -> list[Candidate]:
    """Test w = w_0 w_Pi for every theta-invariant Pi against the five
    necessary conditions, and flag agreement with the classification table."""
    rows = list2_pis(st)
    w0 = longest_element(st.rs)
    out = []
    for pi in theta_invariant_subsets(st):
        prof = profile(st, pi)
        w = prof.w_c
        conds = (
            ("twisted_involution", is_twisted_involution(st, w)),
            ("involution", mult(w, w).is_identity()),
            ("theta_commutes", theta_on_w(st, w) == w),
            ("w0_commutes", mult(w, w0) == mult(w0, w)),
            ("pi_recovered", pi_of(st, w) == pi),
        )
        all_pass = all(v for _, v in conds)
        in_list = None if rows is None else (pi in rows)
        out.append(Candidate(pi, prof, conds, all_pass, in_list))
    return out


def rw_formula_value(st: TwistedSetting, pi):
    """The displayed R_w formula: Pi-perp positives when w_0 = -theta, their
    theta-fixed part when w_0 = -1; None when neither case applies."""
    n0 = neg_w0_aut(st.rs)
    pos = set(st.rs.positive_roots)
    perp_pos = {r for r in perp(st.rs, pi) if r in pos}
    if n0 == st.theta:
        return frozenset(perp_pos)
    if n0.is_identity():
        return frozenset(r for r in perp_pos if st.theta.apply_root(r) == r)
    return None


# --- paper witnesses and the triality remark -----------------------------


def corollary_witness(st: TwistedSetting, pi) -> WeylElement:
    """The explicit element u with w_C = u theta(u)^{-1} for the semisimple
    rows: (A_{2n+1}, odd indices), (D_n, {2..n}), (E6, {2,3,4,5})."""
    pi = frozenset(pi)
    ct = st.rs.cartan_type
    n = ct.rank
    if ct.family == "A" and n % 2 == 1 and pi == frozenset(range(1, n + 1, 2)):
        return _witness_type_a(st, pi)
    if ct.family == "D" and pi == frozenset(range(2, n + 1)):
        root = tuple([1] * (n - 1) + [0])
        return reflection(st.rs, root)
    if ct == CartanType("E", 6) and pi == frozenset({2, 3, 4, 5}):
        return reflection(st.rs, (1, 1, 1, 2, 2, 1))
    raise ValueError(f"no stated witness for ({ct}, {sorted(pi)})")


def _witness_type_a(st: TwistedSetting, pi) -> WeylElement:
    """Pair the commuting transpositions of w_C with their theta-images and
    take one per pair."""
    rs = st.rs
    m = rs.rank + 1
    w0 = longest_element(rs)
    wc = mult(w0, longest_element(rs, pi))
    sigma = permutation_of(wc)
    transpositions = set()
    for a in range(m):
        b = sigma[a]
        if b != a:
            if sigma[b] != a:
                raise AssertionError("w_C is not an involution")
            transpositions.add((min(a, b), max(a, b)))
    flip = lambda x: m - 1 - x
    chosen = []
    remaining = set(transpositions)
    while remaining:
        t = min(remaining)
        a, b = t
        mate = (min(flip(a), flip(b)), max(flip(a), flip(b)))
        if mate == t or mate not in remaining:
            raise AssertionError("transpositions do not pair under theta")
        remaining.discard(t)
        remaining.discard(mate)
        chosen.append(t)
    u = list(range(m))
    for a, b in chosen:
        u[a], u[b] = u[b], u[a]
    return from_permutation(rs, u)


def triality_remark_holds(st: TwistedSetting) -> bool:
    """In D4 with an order-3 theta, none of s1 w0 s2 s3, s1 w0 s2, s1 w0 s3,
    s1 w0 is a twisted involution."""
    if st.rs.cartan_type != CartanType("D", 4) or st.theta.order != 3:
        raise ValueError("the remark concerns D4 with an order-3 automorphism")
    rs = st.rs
    w0 = longest_element(rs)
    s1w0 = _mul_gen_left(w0, 0)
    candidates = [
        _mul_gen_right(_mul_gen_right(s1w0, 1), 2),
        _mul_gen_right(s1w0, 1),
        _mul_gen_right(s1w0, 2),
        s1w0,
    ]
    return not any(is_twisted_involution(st, w) for w in candidates)
