"""Finite Chevalley laboratory: SL_m(F_p) with the outer involution
theta(g) = J (g^T)^{-1} J^{-1} for an antidiagonal sign matrix J found by
exhaustive search against the pinning conditions.  Provides twisted-orbit
BFS at the 10^4..10^7 element scale (integer numpy), Bruhat-cell extraction,
and tangent-space dimensions of twisted stabilizers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import BudgetExceededError
from .rootsys import DiagramAut, build
from .twist import TwistedSetting, dimension_formula, is_twisted_involution
from .weyl import WeylElement, enumerate_weyl, from_permutation, reduced_word

DEFAULT_ORBIT_BUDGET = 4_000_000
_MAT_DTYPE = np.int16  # entries stay < p; products bounded by (p-1)^2 * m


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _rank_mod(rows, p) -> int:
    M = [[v % p for v in r] for r in rows]
    nr, nc = len(M), len(M[0]) if rows else 0
    rank = 0
    for c in range(nc):
        piv = next((r for r in range(rank, nr) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], p - 2, p)
        for r in range(nr):
            if r != rank and M[r][c]:
                f = M[r][c] * inv % p
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[rank])]
        rank += 1
        if rank == nr:
            break
    return rank


def _det_mod(mat, p) -> int:
    M = [[v % p for v in r] for r in mat]
    n = len(M)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det % p
        det = det * M[c][c] % p
        inv = pow(M[c][c], p - 2, p)
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] * inv % p
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[c])]
    return det % p


def _inv_mod(mat, p):
    n = len(mat)
    M = [[v % p for v in r] + [1 if i == j else 0 for j in range(n)]
         for i, r in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], p - 2, p)
        M[c] = [v * inv % p for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _primitive_root(p: int) -> int:
    factors = set()
    n = p - 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.add(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.add(n)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise AssertionError("no primitive root found")


def find_involution_matrix(m: int, p: int) -> np.ndarray:
    """Search antidiagonal sign matrices J for one where g -> J (g^T)^{-1} J^{-1}
    squares to the identity, preserves B and T, and satisfies the pinning
    theta(x_{alpha_i}(t)) = x_{alpha_{m-i}}(t) on all simple root subgroups.

    Fails loudly if no sign choice works (a wrong sign convention must not be
    papered over).
    """
    for signs in product((1, p - 1), repeat=m):
        J = [[0] * m for _ in range(m)]
        for b in range(m):
            J[m - 1 - b][b] = signs[b]
        Jinv = _inv_mod(J, p)

        def theta(g):
            gt_inv = _inv_mod([list(r) for r in zip(*g)], p)
            return _mat_mul(_mat_mul(J, gt_inv, p), Jinv, p)

        ok = True
        for i in range(m - 1):
            for t in range(1, p):
                xi = _unit_plus(m, i, i + 1, t, p)
                if theta(xi) != _unit_plus(m, m - 2 - i, m - 1 - i, t, p):
                    ok = False
                    break
                xmi = _unit_plus(m, i + 1, i, t, p)
                if theta(xmi) != _unit_plus(m, m - 1 - i, m - 2 - i, t, p):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        # theta^2 = Int(J (J^{-1})^T) must be inner by a scalar
        K = _mat_mul(J, [list(r) for r in zip(*Jinv)], p)
        lam = K[0][0]
        if lam == 0 or any(K[i][j] != (lam if i == j else 0)
                           for i in range(m) for j in range(m)):
            continue
        # Borel and torus preservation on a sample
        diag = [[(i % (p - 1)) + 1 if i == j else 0 for j in range(m)]
                for i in range(m)]
        if any(v % p and i != j for i, r in enumerate(theta(diag))
               for j, v in enumerate(r)):
            continue
        return np.array(J, dtype=np.int64)
    raise RuntimeError(
        f"no antidiagonal sign matrix satisfies the pinning for m={m}, p={p}")


def _unit_plus(m, i, j, t, p):
    out = [[1 if a == b else 0 for b in range(m)] for a in range(m)]
    out[i][j] = t % p
    return out


def _mat_mul(a, b, p):
    n = len(a)
    k = len(b[0])
    return [[sum(a[i][l] * b[l][j] for l in range(len(b))) % p for j in range(k)]
            for i in range(n)]


@dataclass
class OrbitResult:
    representative: tuple
    size: int
    complete: bool
    keys: np.ndarray
    cells: tuple          # sorted 0-based permutation tuples, when collected
    bad_cell: tuple | None  # first non-twisted-involution cell encountered
    levels: int


@dataclass(frozen=True)
class CellSummary:
    cells: tuple
    involutive: bool
    w_max: WeylElement | None
    unique_max: bool


@dataclass(frozen=True)
class StabilizerResult:
    stab_dim: int
    class_dim: int
    advisory: bool  # p | m: the orbit map may be inseparable


class TwistedSL:
    """SL_m(F_p), m even, with the diagram-flip outer involution."""

    def __init__(self, m: int, p: int):
        if m < 2 or m % 2:
            raise ValueError("m must be even and >= 2")
        if p == 2 or not _is_prime(p):
            raise ValueError("p must be an odd prime")
        if p >= 90:
            raise ValueError("p too large for the packed-int16 matrix kernels")
        self.m = m
        self.p = p
        self.separable = (m % p != 0)
        self.J = find_involution_matrix(m, p)
        self.Jinv = np.array(_inv_mod(self.J.tolist(), p), dtype=np.int64)
        self.rs = build(f"A{m - 1}")
        flip = DiagramAut(tuple(m - i for i in range(1, m)))
        self.setting = TwistedSetting(self.rs, flip)
        self._inv_table = np.array([0] + [pow(t, p - 2, p) for t in range(1, p)],
                                   dtype=np.int64)
        self._ti_cache = {}
        self._cell_elements = {}

    # -- element builders -------------------------------------------------

    def identity_matrix(self):
        return np.eye(self.m, dtype=np.int64)

    def x_plus(self, i, t):
        """x_{alpha_i}(t) = Id + t E_{i,i+1}, 1-based simple index."""
        g = self.identity_matrix()
        g[i - 1, i] = t % self.p
        return g

    def x_minus(self, i, t):
        g = self.identity_matrix()
        g[i, i - 1] = t % self.p
        return g

    def torus_h(self, i, c):
        """h_{alpha_i}(c) = diag(.., c, c^{-1}, ..), 1-based index."""
        g = self.identity_matrix()
        g[i - 1, i - 1] = c % self.p
        g[i, i] = pow(c, self.p - 2, self.p)
        return g

    def simple_reflection_lift(self, i):
        """x_i(1) x_{-i}(-1) x_i(1), the standard N(T) representative of s_i."""
        p = self.p
        return self.x_plus(i, 1) @ self.x_minus(i, p - 1) @ self.x_plus(i, 1) % p

    def weyl_lift(self, w_or_word):
        """Lift of a Weyl element (or word) through the s_i representatives."""
        if isinstance(w_or_word, WeylElement):
            word = reduced_word(w_or_word)
        else:
            word = tuple(w_or_word)
        g = self.identity_matrix()
        for i in word:
            g = g @ self.simple_reflection_lift(i) % self.p
        return g

    def random_element(self, rng):
        """Seeded random element of SL_m(F_p) (uniform up to a row rescale)."""
        p, m = self.p, self.m
        while True:
            mat = [[rng.randrange(p) for _ in range(m)] for _ in range(m)]
            d = _det_mod(mat, p)
            if d:
                break
        f = pow(d, p - 2, p)
        mat[0] = [v * f % p for v in mat[0]]
        return np.array(mat, dtype=np.int64)

    # -- the involution ----------------------------------------------------

    def theta(self, g):
        p = self.p
        gt_inv = np.array(_inv_mod(np.asarray(g).T.tolist(), p), dtype=np.int64)
        return self.J @ gt_inv @ self.Jinv % p

    def theta_inverse_of(self, g):
        """theta(g)^{-1} = J g^T J^{-1}; no matrix inversion needed."""
        return self.J @ np.asarray(g, dtype=np.int64).T @ self.Jinv % self.p

    def twisted_conjugate(self, g, x):
        return np.asarray(g) @ np.asarray(x) @ self.theta_inverse_of(g) % self.p

    # -- generators and encoding -------------------------------------------

    def generator_pairs(self, borel_only=False):
        """(g, theta(g)^{-1}) for the BFS generators, deterministic order."""
        gens = []
        for i in range(1, self.m):
            for t in range(1, self.p):
                gens.append(self.x_plus(i, t))
        if not borel_only:
            for i in range(1, self.m):
                for t in range(1, self.p):
                    gens.append(self.x_minus(i, t))
        c0 = _primitive_root(self.p)
        for i in range(1, self.m):
            gens.append(self.torus_h(i, c0))
        return [(g.astype(_MAT_DTYPE), self.theta_inverse_of(g).astype(_MAT_DTYPE))
                for g in gens]

    def _encode_pows(self):
        n = self.m * self.m
        if self.p ** n >= 2**63:
            raise BudgetExceededError(
                f"p^(m^2) = {self.p}^{n} does not fit a packed int64 key")
        return (self.p ** np.arange(n - 1, -1, -1)).astype(np.int64)

    def encode(self, mats):
        pows = self._encode_pows()
        flat = np.asarray(mats).reshape(len(mats), -1).astype(np.int64)
        return flat @ pows

    # -- orbit BFS ----------------------------------------------------------

    def orbit(self, x, budget=DEFAULT_ORBIT_BUDGET, collect_cells=True,
              raise_on_budget=True, stop_on_bad_cell=False,
              borel_only=False) -> OrbitResult:
        """BFS closure of x under g -> g * x * theta(g)^{-1} over the generators.

        The resulting set is schedule-independent; keys are the sorted packed
        encodings.  Exceeding the budget raises BudgetExceededError with the
        partial result attached (or returns it when raise_on_budget=False).
        With stop_on_bad_cell=True the BFS stops as soon as a cell that is not
        a twisted involution shows up; the result is then marked incomplete.
        """
        p = self.p
        x = np.asarray(x, dtype=np.int64) % p
        if _det_mod(x.tolist(), p) != 1:
            raise ValueError("representative must lie in SL_m(F_p)")
        gen_pairs = self.generator_pairs(borel_only=borel_only)
        seen = self.encode(x[None])
        frontier = x[None].astype(_MAT_DTYPE)
        cells = set()
        bad_cell = None
        levels = 0

        def absorb_cells(mats):
            nonlocal bad_cell
            if not collect_cells:
                return False
            perms = self.bruhat_cells_batch(mats)
            for row in np.unique(perms, axis=0):
                c = tuple(int(v) for v in row)
                cells.add(c)
                if bad_cell is None and not self.cell_is_twisted_involution(c):
                    bad_cell = c
            return stop_on_bad_cell and bad_cell is not None

        stopped = absorb_cells(frontier)
        truncated = False
        while len(frontier) and not stopped:
            parts_keys, parts_mats = [], []
            for g, h in gen_pairs:
                cand = np.matmul(g, frontier) % p
                cand = np.matmul(cand, h) % p
                keys = self.encode(cand)
                idx = np.searchsorted(seen, keys)
                idx[idx == len(seen)] = len(seen) - 1
                fresh = seen[idx] != keys
                if not fresh.any():
                    continue
                keys = keys[fresh]
                cand = cand[fresh]
                keys, first = np.unique(keys, return_index=True)
                parts_keys.append(keys)
                parts_mats.append(cand[first])
            if not parts_keys:
                break
            all_keys = np.concatenate(parts_keys)
            all_mats = np.concatenate(parts_mats)
            all_keys, first = np.unique(all_keys, return_index=True)
            new_mats = all_mats[first]
            if len(seen) + len(all_keys) > budget:
                truncated = True
                break
            seen = np.sort(np.concatenate([seen, all_keys]))
            frontier = new_mats
            levels += 1
            stopped = absorb_cells(frontier)

        result = OrbitResult(
            representative=tuple(tuple(int(v) for v in row) for row in x),
            size=int(len(seen)),
            complete=not (truncated or stopped),
            keys=seen,
            cells=tuple(sorted(cells)),
            bad_cell=bad_cell,
            levels=levels,
        )
        if truncated and raise_on_budget:
            raise BudgetExceededError(
                f"twisted orbit exceeded budget {budget} "
                f"(partial size {result.size})",
                partial_count=result.size, partial=result)
        return result

    # -- Bruhat cells ---------------------------------------------------------

    def bruhat_cell(self, g) -> tuple[int, ...]:
        """Reference corner-rank algorithm: the permutation w with g in BwB,
        w(j) = i iff r(i,j) - r(i+1,j) - r(i,j-1) + r(i+1,j-1) = 1 where
        r(i,j) is the rank of rows i..m, columns 1..j."""
        p, m = self.p, self.m
        mat = [[int(v) % p for v in row] for row in np.asarray(g)]
        if _det_mod(mat, p) == 0:
            raise ValueError("singular matrix has no Bruhat cell")

        def r(i, j):  # 1-based, rows i..m x cols 1..j
            if i > m or j < 1:
                return 0
            return _rank_mod([row[:j] for row in mat[i - 1:]], p)

        perm = [-1] * m
        for j in range(1, m + 1):
            for i in range(1, m + 1):
                if r(i, j) - r(i + 1, j) - r(i, j - 1) + r(i + 1, j - 1) == 1:
                    perm[j - 1] = i - 1
                    break
        return tuple(perm)

    def bruhat_cells_batch(self, mats) -> np.ndarray:
        """Vectorized bottom-most-pivot elimination; row operations from below
        preserve every lower-left corner rank, so the surviving pattern is the
        Bruhat permutation.  Returns (N, m) with perm[n, j] = row of pivot."""
        p, m = self.p, self.m
        A = np.asarray(mats).astype(np.int64) % p
        N = len(A)
        used = np.zeros((N, m), dtype=bool)
        perm = np.zeros((N, m), dtype=np.int8)
        rows_idx = np.arange(N)
        for j in range(m):
            col = A[:, :, j]
            avail = (col != 0) & ~used
            piv = m - 1 - np.argmax(avail[:, ::-1], axis=1)
            perm[:, j] = piv
            used[rows_idx, piv] = True
            pivval = col[rows_idx, piv]
            factor = col * self._inv_table[pivval][:, None] % p
            mask = avail.copy()
            mask[rows_idx, piv] = False
            factor = np.where(mask, factor, 0)
            pivrow = A[rows_idx, piv, :]
            A = (A - factor[:, :, None] * pivrow[:, None, :]) % p
        return perm

    def cell_element(self, perm) -> WeylElement:
        if perm not in self._cell_elements:
            self._cell_elements[perm] = from_permutation(self.rs, perm)
        return self._cell_elements[perm]

    def cell_is_twisted_involution(self, perm) -> bool:
        if perm not in self._ti_cache:
            self._ti_cache[perm] = is_twisted_involution(
                self.setting, self.cell_element(perm))
        return self._ti_cache[perm]

    def cell_summary(self, cells) -> CellSummary:
        """Involutivity of every cell hit, plus the Bruhat-maximal cell."""
        from .weyl import bruhat_leq

        cells = tuple(sorted(cells))
        involutive = all(self.cell_is_twisted_involution(c) for c in cells)
        elements = [self.cell_element(c) for c in cells]
        w_max = max(elements, key=lambda w: (w.length(), reduced_word(w)))
        unique = all(bruhat_leq(w, w_max) for w in elements)
        return CellSummary(cells=cells, involutive=involutive,
                           w_max=w_max, unique_max=unique)

    def max_formula_dim(self) -> int:
        """max over all w in W of l(w) + rk(1 - w theta); bounds any w_max value."""
        return max(dimension_formula(self.setting, w)
                   for w in enumerate_weyl(self.rs))

    # -- tangent space ---------------------------------------------------------

    def stabilizer(self, x) -> StabilizerResult:
        """Dimension over F_p of {X in sl_m : X x - x dtheta(X) = 0} with
        dtheta(X) = -J X^T J^{-1}; class_dim is the codimension in sl_m."""
        p, m = self.p, self.m
        x = np.asarray(x, dtype=np.int64) % p
        basis = []
        for i in range(m):
            for j in range(m):
                if i != j:
                    E = np.zeros((m, m), dtype=np.int64)
                    E[i, j] = 1
                    basis.append(E)
        for k in range(m - 1):
            E = np.zeros((m, m), dtype=np.int64)
            E[k, k] = 1
            E[k + 1, k + 1] = p - 1
            basis.append(E)
        cols = []
        for X in basis:
            dth = (-(self.J @ X.T @ self.Jinv)) % p
            L = (X @ x - x @ dth) % p
            cols.append(L.reshape(-1))
        system = [[int(cols[b][r]) for b in range(len(basis))]
                  for r in range(m * m)]
        rank = _rank_mod(system, p)
        dim_sl = m * m - 1
        return StabilizerResult(stab_dim=dim_sl - rank, class_dim=rank,
                                advisory=not self.separable)


@lru_cache(maxsize=None)
def group(m: int, p: int) -> TwistedSL:
    return TwistedSL(m, p)


def orbit_report(g: TwistedSL, x, name="", budget=DEFAULT_ORBIT_BUDGET,
                 seed=None, stop_on_bad_cell=False) -> dict:
    """Joint empirical record for one representative: orbit, cells, w_max,
    involutivity, tangent-space class dimension, and the formula verdict."""
    stab = g.stabilizer(x)
    res = g.orbit(x, budget=budget, raise_on_budget=False,
                  stop_on_bad_cell=stop_on_bad_cell)
    report = {
        "m": g.m,
        "p": g.p,
        "name": name,
        "seed": seed,
        "representative": [list(map(int, row)) for row in np.asarray(x) % g.p],
        "orbit_size": res.size,
        "complete": res.complete,
        "cells": [list(reduced_word(g.cell_element(c))) for c in res.cells],
        "stabilizer_dim": stab.stab_dim,
        "class_dim": stab.class_dim,
        "separability_advisory": stab.advisory,
    }
    if res.complete:
        summary = g.cell_summary(res.cells)
        formula = dimension_formula(g.setting, summary.w_max)
        involutive = summary.involutive and summary.unique_max
        report.update({
            "involutive": involutive,
            "w_max": list(reduced_word(summary.w_max)),
            "unique_max": summary.unique_max,
            "formula_dim": formula,
            "verdict": ("consistent"
                        if involutive == (stab.class_dim == formula)
                        else "inconsistent"),
        })
    else:
        report.update({
            "involutive": False if res.bad_cell is not None else None,
            "w_max": None,
            "formula_dim": None,
        })
        if res.bad_cell is not None and stab.class_dim > g.max_formula_dim():
            # non-involutive for sure, and no w_max can make the formula hold
            report["verdict"] = "consistent-certified-partial"
        else:
            report["verdict"] = "advisory-budget"
    return report
