"""Check registry and orchestrator.

verify_all runs, in order: root-system sanity, Weyl oracles, the
classification-table conditions, R_w formulas, Delta_R types, the triality
remark, twisted-identity witnesses, and the finite Chevalley empirical suite.
Every check executes exactly once per requested scope and reports pass, fail,
or advisory; reports are deterministic given the seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from . import chevalley, twist, weyl
from .errors import BudgetExceededError
from .rootsys import (CartanType, DiagramAut, bad_primes, build, diagram_auts,
                      highest_root, positive_count_formula, subsystem)
from .twist import TwistedSetting
from .weyl import enumerate_weyl, longest_element, mult, reduced_word, weyl_order


@dataclass
class CheckResult:
    check_id: str
    scope: str
    status: str  # pass | fail | advisory
    details: dict

    def to_json(self):
        return {"check_id": self.check_id, "scope": self.scope,
                "status": self.status, "details": self.details}


# scope registry: (type, theta label, theta perm)
TWIST_SCOPES = (
    ("A3", "(1 3)", (3, 2, 1)),
    ("A5", "(1 5)(2 4)", (5, 4, 3, 2, 1)),
    ("D4", "(3 4)", (1, 2, 4, 3)),
    ("D4", "(1 3)", (3, 2, 1, 4)),
    ("D4", "(1 4)", (4, 2, 3, 1)),
    ("D4", "(1 3 4)", (3, 2, 4, 1)),
    ("D4", "(1 4 3)", (4, 2, 1, 3)),
    ("D5", "(4 5)", (1, 2, 3, 5, 4)),
    ("D6", "(5 6)", (1, 2, 3, 4, 6, 5)),
    ("E6", "(1 6)(3 5)", (6, 2, 5, 4, 3, 1)),
)

ROOT_TYPES = ("A3", "A5", "D4", "D5", "D6", "E6")
WEYL_COUNT_TYPES = ("A3", "D4", "D5", "E6")

ORBIT_BUDGETS = {3: 14_000_000, 5: 3_000_000}
DEFAULT_SEED = 0

_EXPECTED_AUTS = {"A1": 1, "A3": 2, "A5": 2, "D4": 6, "D5": 2, "D6": 2, "E6": 2}


def _scope_settings(scopes=None):
    if scopes is None:
        return TWIST_SCOPES
    wanted = {s.strip() for s in scopes}
    return tuple(s for s in TWIST_SCOPES if s[0] in wanted)


def check_rootsys(scopes=None):
    out = []
    types = ROOT_TYPES if scopes is None else [t for t in ROOT_TYPES if t in scopes]
    for t in types:
        rs = build(t)
        n_pos = len(rs.positive_roots)
        formula = positive_count_formula(rs.cartan_type)
        _, simple, rtypes = subsystem(rs, rs.positive_roots)
        roundtrip = (simple == rs.simple_roots
                     and rtypes == (rs.cartan_type,))
        auts = diagram_auts(rs)
        ok = (n_pos == formula
              and len(rs.roots) == 2 * n_pos
              and len(auts) == _EXPECTED_AUTS[t]
              and roundtrip)
        out.append(CheckResult(
            "10-rootsys-sanity", t, "pass" if ok else "fail",
            {"positive_roots": n_pos, "formula": formula,
             "highest_root": list(highest_root(rs)),
             "bad_primes": sorted(bad_primes(rs)),
             "diagram_auts": len(auts),
             "subsystem_roundtrip": roundtrip}))
    return out


def check_weyl_counts(scopes=None, budget=None):
    out = []
    types = (WEYL_COUNT_TYPES if scopes is None
             else [t for t in WEYL_COUNT_TYPES if t in scopes])
    cap = budget or weyl.DEFAULT_BUDGET
    for t in types:
        rs = build(t)
        expected = weyl_order(rs.cartan_type)
        t0 = time.monotonic()
        try:
            count = len(enumerate_weyl(rs, budget=cap))
        except BudgetExceededError as e:
            out.append(CheckResult("20-weyl-count", t, "advisory",
                                   {"error": str(e), "expected": expected}))
            continue
        elapsed = time.monotonic() - t0
        ok = count == expected
        out.append(CheckResult(
            "20-weyl-count", t, "pass" if ok else "fail",
            {"bfs_count": count, "product_formula": expected,
             "seconds": round(elapsed, 3)}))
    return out


def check_bruhat_oracle(seed=DEFAULT_SEED, n_random_pairs=10_000):
    out = []
    for t in ("A2", "A3"):
        rs = build(t)
        els = enumerate_weyl(rs)
        mismatches = sum(
            1 for u in els for w in els
            if weyl.bruhat_leq(u, w) != weyl.bruhat_leq_subword(u, w))
        out.append(CheckResult(
            "21-weyl-bruhat-oracle", t,
            "pass" if mismatches == 0 else "fail",
            {"pairs": len(els) ** 2, "mismatches": mismatches}))
    # seeded random pairs in D5, with the subword oracle on index tables
    rs = build("D5")
    els = enumerate_weyl(rs)
    index = {w.images: k for k, w in enumerate(els)}
    rank = rs.rank
    rtab = [[index[weyl._mul_gen_right(w, i).images] for i in range(rank)]
            for w in els]
    lengths = [len(reduced_word(w)) for w in els]
    words = [reduced_word(w) for w in els]
    cache = {}

    def interval(wi):
        if wi not in cache:
            S = {0}
            for i in words[wi]:
                grow = set()
                for v in S:
                    nxt = rtab[v][i - 1]
                    if lengths[nxt] > lengths[v]:
                        grow.add(nxt)
                S |= grow
            cache[wi] = S
        return cache[wi]

    rng = random.Random(seed * 1009 + 21)
    mism = 0
    for _ in range(n_random_pairs):
        ui = rng.randrange(len(els))
        wi = rng.randrange(len(els))
        if weyl.bruhat_leq(els[ui], els[wi]) != (ui in interval(wi)):
            mism += 1
    out.append(CheckResult(
        "21-weyl-bruhat-oracle", "D5",
        "pass" if mism == 0 else "fail",
        {"pairs": n_random_pairs, "mismatches": mism}))
    return out


def _expected_rank_term(st, pi):
    ct = st.rs.cartan_type
    if (ct.family == "D" and ct.rank % 2 == 0 and not pi
            and st.theta.order == 2):
        return ct.rank - 1
    return ct.rank - len(pi)


def check_list2(scopes=None):
    out = []
    for tname, tlabel, perm in _scope_settings(scopes):
        st = TwistedSetting(build(tname), DiagramAut(perm))
        scope = f"{tname} theta={tlabel}"
        rows = twist.list2_pis(st)
        cands = {c.pi: c for c in twist.wc_candidates(st)}
        failed = []
        for pi in rows:
            c = cands[pi]
            if not c.all_pass:
                failed.append({"Pi": sorted(pi),
                               "conditions": dict(c.conditions)})
        extras = [sorted(c.pi) for c in cands.values()
                  if c.all_pass and c.in_list is False]
        out.append(CheckResult(
            "30-twist-list2-conditions", scope,
            "pass" if not failed else "fail",
            {"rows": [sorted(r) for r in sorted(rows, key=sorted)],
             "failed_rows": failed,
             "candidates_passing_but_not_in_list": extras}))
    return out


def check_rw_formula(scopes=None):
    out = []
    for tname, tlabel, perm in _scope_settings(scopes):
        st = TwistedSetting(build(tname), DiagramAut(perm))
        scope = f"{tname} theta={tlabel}"
        bad = []
        for pi in twist.list2_pis(st):
            p = twist.profile(st, pi)
            formula = twist.rw_formula_value(st, pi)
            partition = (p.complex_roots | p.imaginary_roots | p.real_roots
                         == frozenset(st.rs.positive_roots))
            if formula != p.real_roots or not partition:
                bad.append({"Pi": sorted(pi),
                            "rw_matches": formula == p.real_roots,
                            "partition": partition})
        out.append(CheckResult(
            "31-twist-rw-formula", scope, "pass" if not bad else "fail",
            {"rows_checked": len(twist.list2_pis(st)), "failures": bad}))
    return out


def check_rank_identity(scopes=None):
    out = []
    for tname, tlabel, perm in _scope_settings(scopes):
        st = TwistedSetting(build(tname), DiagramAut(perm))
        scope = f"{tname} theta={tlabel}"
        rows = []
        ok = True
        for pi in twist.list2_pis(st):
            p = twist.profile(st, pi)
            expected = _expected_rank_term(st, pi)
            rows.append({"Pi": sorted(pi), "rank_term": p.rank_term,
                         "expected": expected, "dim": p.dim_value})
            ok = ok and p.rank_term == expected
        out.append(CheckResult("32-twist-rank-identity", scope,
                               "pass" if ok else "fail", {"rows": rows}))
    return out


def check_delta_r(scopes=None):
    out = []
    for tname, tlabel, perm in _scope_settings(scopes):
        st = TwistedSetting(build(tname), DiagramAut(perm))
        scope = f"{tname} theta={tlabel}"
        rows = []
        ok = True
        for pi in twist.list2_pis(st):
            p = twist.profile(st, pi)
            entry = {"Pi": sorted(pi),
                     "delta_R": [list(r) for r in p.delta_r],
                     "R_type": [str(t) for t in p.r_type]}
            if tname == "D4" and tlabel == "(3 4)" and not pi:
                want = {(1, 0, 0, 0), (0, 1, 0, 0), (0, 1, 1, 1)}
                entry["expected_delta_R"] = sorted(map(list, want))
                if set(p.delta_r) != want or p.r_type != (CartanType("A", 3),):
                    ok = False
            if tname == "D6" and not pi:
                entry["expected_R_type"] = ["D5"]
                if p.r_type != (CartanType("D", 5),):
                    ok = False
            rows.append(entry)
        out.append(CheckResult("33-twist-delta-r", scope,
                               "pass" if ok else "fail", {"rows": rows}))
    return out


def check_twinv_agreement(scopes=None, budget=None):
    out = []
    cap = budget or weyl.DEFAULT_BUDGET
    for tname, tlabel, perm in _scope_settings(scopes):
        st = TwistedSetting(build(tname), DiagramAut(perm))
        scope = f"{tname} theta={tlabel}"
        try:
            tis = twist.enumerate_twisted_involutions(st, budget=cap,
                                                      cross_check=True)
        except BudgetExceededError as e:
            out.append(CheckResult("34-twist-twinv-methods", scope,
                                   "advisory", {"error": str(e)}))
            continue
        except AssertionError as e:
            out.append(CheckResult("34-twist-twinv-methods", scope, "fail",
                                   {"error": str(e)}))
            continue
        out.append(CheckResult("34-twist-twinv-methods", scope, "pass",
                               {"count": len(tis)}))
    return out


def check_triality(scopes=None):
    if scopes is not None and "D4" not in scopes:
        return []
    out = []
    for tlabel, perm in (("(1 3 4)", (3, 2, 4, 1)), ("(1 4 3)", (4, 2, 1, 3))):
        st = TwistedSetting(build("D4"), DiagramAut(perm))
        ok = twist.triality_remark_holds(st)
        out.append(CheckResult("35-twist-triality-remark",
                               f"D4 theta={tlabel}",
                               "pass" if ok else "fail",
                               {"no_involutive_candidates": ok}))
    return out


_WITNESS_ROWS = (
    ("A3", (3, 2, 1), (1, 3)),
    ("A5", (5, 4, 3, 2, 1), (1, 3, 5)),
    ("D4", (1, 2, 4, 3), (2, 3, 4)),
    ("D5", (1, 2, 3, 5, 4), (2, 3, 4, 5)),
    ("E6", (6, 2, 5, 4, 3, 1), (2, 3, 4, 5)),
)


def check_witnesses(scopes=None):
    out = []
    for tname, perm, pi in _WITNESS_ROWS:
        if scopes is not None and tname not in scopes:
            continue
        st = TwistedSetting(build(tname), DiagramAut(perm))
        prof = twist.profile(st, pi)
        u = twist.corollary_witness(st, pi)
        ok = mult(u, twist.theta_on_w(st, u).inverse()) == prof.w_c
        out.append(CheckResult(
            "36-twist-identity-witness", f"{tname} Pi={sorted(pi)}",
            "pass" if ok else "fail",
            {"witness_word": list(reduced_word(u)),
             "w_C_word": list(reduced_word(prof.w_c)),
             "verified": ok}))
    return out


# --- chevalley empirical suite ------------------------------------------


def check_chevalley_identity(budget=None):
    g = chevalley.group(4, 3)
    cap = min(budget, ORBIT_BUDGETS[3]) if budget else ORBIT_BUDGETS[3]
    t0 = time.monotonic()
    rep = chevalley.orbit_report(g, g.identity_matrix(), name="identity",
                                 budget=cap)
    elapsed = time.monotonic() - t0
    wc = twist.profile(g.setting, frozenset(range(1, 4, 2))).w_c
    if not rep["complete"]:
        return [CheckResult("40-chev-identity-orbit", "m=4 p=3", "advisory",
                            {"report": rep})]
    ok = (rep["orbit_size"] == 234
          and rep["involutive"] is True
          and rep["w_max"] == list(reduced_word(wc))
          and rep["class_dim"] == 5
          and rep["formula_dim"] == 5
          and rep["verdict"] == "consistent")
    return [CheckResult("40-chev-identity-orbit", "m=4 p=3",
                        "pass" if ok else "fail",
                        {"seconds": round(elapsed, 3), "report": rep})]


def check_chevalley_properties(seed=DEFAULT_SEED):
    import numpy as np

    out = []
    for p in (3, 5):
        g = chevalley.group(4, p)
        rng = random.Random(seed * 7919 + p)
        n = 200
        theta_ok = 0
        star_ok = 0
        for _ in range(n):
            x = g.random_element(rng)
            if (g.theta(g.theta(x)) == x % p).all():
                theta_ok += 1
            y = x @ np.array(chevalley._inv_mod(g.theta(x).tolist(), p)) % p
            # theta(g theta(g)^-1) = (g theta(g)^-1)^-1
            lhs = g.theta(y)
            rhs = np.array(chevalley._inv_mod(y.tolist(), p))
            if (lhs == rhs % p).all():
                star_ok += 1
        # Bruhat cell: B-bi-invariance and batch agreement with the reference
        bi_ok = 0
        batch_ok = 0
        mats = []
        for _ in range(n):
            x = g.random_element(rng)
            mats.append(x)
            b1 = _random_upper(g, rng)
            b2 = _random_upper(g, rng)
            if g.bruhat_cell(b1 @ x @ b2 % p) == g.bruhat_cell(x):
                bi_ok += 1
        batch = g.bruhat_cells_batch(np.stack(mats))
        for k, x in enumerate(mats):
            if tuple(int(v) for v in batch[k]) == g.bruhat_cell(x):
                batch_ok += 1
        ok = theta_ok == n and star_ok == n and bi_ok == n and batch_ok == n
        out.append(CheckResult(
            "41-chev-involution-properties", f"m=4 p={p}",
            "pass" if ok else "fail",
            {"theta_squared": f"{theta_ok}/{n}",
             "unit_class_twisted_inverse": f"{star_ok}/{n}",
             "bruhat_bi_invariance": f"{bi_ok}/{n}",
             "batch_matches_reference": f"{batch_ok}/{n}"}))
    return out


def _random_upper(g, rng):
    import numpy as np

    p, m = g.p, g.m
    b = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        b[i, i] = rng.randrange(1, p)
        for j in range(i + 1, m):
            b[i, j] = rng.randrange(p)
    return b


def representative_roster(g, seed=DEFAULT_SEED):
    """Seeded representatives: torus lifts of each table w_C plus randoms.

    Returns (name, matrix, probe) triples; probe marks representatives whose
    orbit may exceed budget, enabling the early stop on a bad cell.
    """
    import numpy as np

    p = g.p
    rng = random.Random(seed * 104729 + p)
    rs = g.rs
    w0 = longest_element(rs)
    odd = frozenset(range(1, g.m, 2))
    wc = twist.profile(g.setting, odd).w_c
    lift_w0 = g.weyl_lift(w0)
    lift_wc = g.weyl_lift(wc)
    c0 = chevalley._primitive_root(p)
    lam = 2
    lam_inv = pow(lam, p - 2, p)
    diag = np.diag([lam, lam, lam_inv, lam_inv]).astype(np.int64) % p

    reps = [
        ("identity", g.identity_matrix(), False),
        ("lift-wC-odd", lift_wc, False),
        ("lift-wC-odd.h1", lift_wc @ g.torus_h(1, c0) % p, False),
        ("lift-wC-odd.h2", lift_wc @ g.torus_h(2, c0) % p, False),
        ("lift-w0", lift_w0, False),
        ("diag(l,l,1/l,1/l)", diag, False),
    ]
    if p == 3:
        reps += [
            ("lift-w0.h1", lift_w0 @ g.torus_h(1, c0) % p, False),
            ("lift-w0.h2", lift_w0 @ g.torus_h(2, c0) % p, False),
        ]
        for k in range(6):
            reps.append((f"random-{k}", g.random_element(rng), False))
    else:
        reps.append(("lift-wC-odd.h3", lift_wc @ g.torus_h(3, c0) % p, False))
        for k in range(3):
            reps.append((f"random-{k}", g.random_element(rng), True))
    return reps


def check_chevalley_biconditional(seed=DEFAULT_SEED, budget=None, primes=(3, 5)):
    """Empirical main theorem: involutive(orbit) <=> class_dim equals the
    dimension formula at w_max, over the seeded roster."""
    out = []
    for p in primes:
        g = chevalley.group(4, p)
        cap = ORBIT_BUDGETS[p]
        if budget:
            cap = min(cap, budget)
        reports = []
        n_fail = 0
        n_advisory = 0
        n_complete = 0
        for name, x, probe in representative_roster(g, seed):
            rep = chevalley.orbit_report(g, x, name=name, budget=cap,
                                         seed=seed, stop_on_bad_cell=probe)
            reports.append(rep)
            if rep["verdict"] == "inconsistent":
                n_fail += 1
            elif rep["verdict"] == "advisory-budget":
                n_advisory += 1
            if rep["complete"]:
                n_complete += 1
        status = ("fail" if n_fail else
                  ("advisory" if n_advisory else "pass"))
        out.append(CheckResult(
            "42-chev-main-theorem", f"m=4 p={p}", status,
            {"representatives": len(reports),
             "complete_orbits": n_complete,
             "inconsistent": n_fail,
             "advisory": n_advisory,
             "reports": reports}))
    return out


# --- orchestration --------------------------------------------------------


def verify_all(scopes=None, budget=None, seed=DEFAULT_SEED,
               with_chevalley=True, chevalley_primes=(3, 5)):
    checks = []
    checks += check_rootsys(scopes)
    checks += check_weyl_counts(scopes, budget)
    if scopes is None or {"A2", "A3", "D5"} & set(scopes):
        checks += check_bruhat_oracle(seed)
    checks += check_list2(scopes)
    checks += check_rw_formula(scopes)
    checks += check_rank_identity(scopes)
    checks += check_delta_r(scopes)
    checks += check_twinv_agreement(scopes, budget)
    checks += check_triality(scopes)
    checks += check_witnesses(scopes)
    if with_chevalley:
        checks += check_chevalley_identity(budget)
        checks += check_chevalley_properties(seed)
        checks += check_chevalley_biconditional(seed, budget, chevalley_primes)
    checks.sort(key=lambda c: (c.check_id, c.scope))
    return checks


def exit_code(checks) -> int:
    """0 all pass, 1 any failure, 3 budget exhausted (advisory)."""
    if any(c.status == "fail" for c in checks):
        return 1
    if any(c.status == "advisory" for c in checks):
        return 3
    return 0


def report_json(checks, seed=DEFAULT_SEED, budget=None) -> dict:
    statuses = [c.status for c in checks]
    return {
        "seed": seed,
        "budget": budget,
        "checks": [c.to_json() for c in checks],
        "summary": {
            "total": len(checks),
            "pass": statuses.count("pass"),
            "fail": statuses.count("fail"),
            "advisory": statuses.count("advisory"),
        },
        "exit_code": exit_code(checks),
    }
