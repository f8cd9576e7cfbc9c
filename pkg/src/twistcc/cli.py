"""Command-line interface.

Subcommands: roots, weyl (count|word|bruhat), twinv (list|count), classify,
dim, verify, orbit.  Exit codes: 0 all pass, 1 a check failed, 2 usage or
configuration error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys

from . import chevalley, twist, verify, weyl
from .errors import BudgetExceededError
from .rootsys import DiagramAut, build, diagram_auts, to_json
from .twist import TwistedSetting


class ConfigError(Exception):
    pass


def _emit(payload, as_json):
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        _emit_text(payload)


def _emit_text(payload, indent=0):
    pad = "  " * indent
    if isinstance(payload, dict):
        for k in sorted(payload):
            v = payload[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                print(f"{pad}{k}:")
                _emit_text(v, indent + 1)
            else:
                print(f"{pad}{k}: {v}")
    elif isinstance(payload, list):
        for v in payload:
            if isinstance(v, (dict, list)):
                _emit_text(v, indent)
                print()
            else:
                print(f"{pad}{v}")
    else:
        print(f"{pad}{payload}")


def _is_flat(v):
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def parse_theta(rs, text) -> DiagramAut:
    """Resolve '(1 3)(2 4)' cycle notation or a named alias."""
    text = (text or "id").strip()
    auts = diagram_auts(rs)
    if text in ("id", "identity", ""):
        return auts[0]
    if text == "neg-w0":
        return twist.neg_w0_aut(rs)
    if text == "swap-last":
        if rs.cartan_type.family != "D":
            raise ConfigError("swap-last is a D_n alias")
        perm = list(range(1, rs.rank + 1))
        perm[-2], perm[-1] = perm[-1], perm[-2]
        return DiagramAut(tuple(perm))
    if text in ("triality-a", "triality-b"):
        order3 = [a for a in auts if a.order == 3]
        if len(order3) != 2:
            raise ConfigError(f"no triality automorphisms for {rs.cartan_type}")
        return order3[0] if text.endswith("a") else order3[1]
    cycles = re.findall(r"\(([^()]*)\)", text)
    if not cycles or re.sub(r"\([^()]*\)|\s", "", text):
        raise ConfigError(f"cannot parse theta {text!r}")
    perm = list(range(1, rs.rank + 1))
    for cyc in cycles:
        idx = [int(tok) for tok in re.split(r"[,\s]+", cyc.strip()) if tok]
        if any(not 1 <= i <= rs.rank for i in idx) or len(set(idx)) != len(idx):
            raise ConfigError(f"bad cycle ({cyc}) for rank {rs.rank}")
        for a, b in zip(idx, idx[1:] + idx[:1]):
            perm[a - 1] = b
    aut = DiagramAut(tuple(perm))
    if aut not in auts:
        raise ConfigError(f"{text} is not a diagram automorphism of {rs.cartan_type}")
    return aut


def parse_indices(text) -> frozenset[int]:
    text = (text or "").strip()
    if not text or text == "-":
        return frozenset()
    return frozenset(int(t) for t in re.split(r"[,\s]+", text) if t)


def parse_word(text) -> tuple[int, ...]:
    text = (text or "").strip()
    if not text or text == "-":
        return ()
    return tuple(int(t) for t in re.split(r"[,\s]+", text) if t)


def _setting(args) -> TwistedSetting:
    rs = build(args.type)
    return TwistedSetting(rs, parse_theta(rs, args.theta))


def cmd_roots(args):
    _emit(to_json(build(args.type)), args.json)
    return 0


def cmd_weyl(args):
    rs = build(args.type)
    if args.weyl_cmd == "count":
        els = weyl.enumerate_weyl(rs, budget=args.budget or weyl.DEFAULT_BUDGET)
        _emit({"type": str(rs.cartan_type), "count": len(els),
               "product_formula": weyl.weyl_order(rs.cartan_type)}, args.json)
    elif args.weyl_cmd == "word":
        w = weyl.from_word(rs, parse_word(args.word))
        _emit({"input": list(parse_word(args.word)),
               "canonical_word": list(weyl.reduced_word(w)),
               "length": w.length()}, args.json)
    else:  # bruhat
        u = weyl.from_word(rs, parse_word(args.u))
        w = weyl.from_word(rs, parse_word(args.w))
        _emit({"u": list(weyl.reduced_word(u)), "w": list(weyl.reduced_word(w)),
               "leq": weyl.bruhat_leq(u, w)}, args.json)
    return 0


def cmd_twinv(args):
    st = _setting(args)
    tis = twist.enumerate_twisted_involutions(
        st, budget=args.budget or weyl.DEFAULT_BUDGET, cross_check=True)
    if args.twinv_cmd == "count":
        _emit({"type": str(st.rs.cartan_type), "theta": str(st.theta),
               "count": len(tis)}, args.json)
    else:
        _emit({"type": str(st.rs.cartan_type), "theta": str(st.theta),
               "count": len(tis),
               "words": [list(weyl.reduced_word(w)) for w in tis]}, args.json)
    return 0


def cmd_classify(args):
    st = _setting(args)
    rows = []
    for c in twist.wc_candidates(st):
        rows.append({
            "Pi": sorted(c.pi),
            "conditions": dict(c.conditions),
            "all_pass": c.all_pass,
            "in_list": c.in_list,
            "w_C_word": list(weyl.reduced_word(c.profile.w_c)),
            "dim": c.profile.dim_value,
        })
    _emit({"type": str(st.rs.cartan_type), "theta": str(st.theta),
           "candidates": rows}, args.json)
    return 0


def cmd_dim(args):
    st = _setting(args)
    prof = twist.profile(st, parse_indices(args.pi))
    _emit(twist.profile_to_json(prof), args.json)
    return 0


def cmd_orbit(args):
    g = chevalley.group(args.m, args.p)
    budget = args.budget or chevalley.DEFAULT_ORBIT_BUDGET
    rng = random.Random(args.seed)
    name = args.rep
    if args.rep == "identity":
        x = g.identity_matrix()
    elif args.rep == "w0":
        x = g.weyl_lift(weyl.longest_element(g.rs))
    elif args.rep == "wc":
        pi = frozenset(range(1, g.m, 2))
        x = g.weyl_lift(twist.profile(g.setting, pi).w_c)
    elif args.rep == "random":
        x = g.random_element(rng)
    else:
        raise ConfigError(f"unknown representative {args.rep!r}")
    if args.torus:
        for part in args.torus.split(","):
            i, c = part.split(":")
            x = x @ g.torus_h(int(i), int(c)) % g.p
    report = chevalley.orbit_report(g, x, name=name, budget=budget,
                                    seed=args.seed,
                                    stop_on_bad_cell=args.probe)
    _emit(report, args.json)
    return 3 if report["verdict"] == "advisory-budget" else 0


def cmd_verify(args):
    scopes = None
    primes = (3, 5)
    with_chev = True
    if args.scopes:
        tokens = {t.strip() for t in args.scopes.split(",") if t.strip()}
        chev_tokens = {t for t in tokens if t.startswith("chev")}
        scopes = tokens - chev_tokens or None
        primes = tuple(sorted(int(t[4:]) for t in chev_tokens)) or ()
        with_chev = bool(primes)
    checks = verify.verify_all(scopes=scopes, budget=args.budget,
                               seed=args.seed, with_chevalley=with_chev,
                               chevalley_primes=primes)
    code = verify.exit_code(checks)
    if args.json:
        print(json.dumps(verify.report_json(checks, seed=args.seed,
                                            budget=args.budget),
                         indent=2, sort_keys=True))
    else:
        for c in checks:
            print(f"[{c.status.upper():>8}] {c.check_id} :: {c.scope}")
        counts = verify.report_json(checks, args.seed, args.budget)["summary"]
        print(f"total={counts['total']} pass={counts['pass']} "
              f"fail={counts['fail']} advisory={counts['advisory']}")
    return code


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--budget", type=int, default=None,
                        help="enumeration element cap")
    common.add_argument("--seed", type=int, default=0, help="RNG seed")

    ap = argparse.ArgumentParser(prog="twistcc",
                                 description="twisted conjugacy class toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("roots", parents=[common], help="root system data")
    p.add_argument("--type", required=True)
    p.set_defaults(fn=cmd_roots)

    p = sub.add_parser("weyl", parents=[common], help="Weyl group queries")
    p.add_argument("weyl_cmd", choices=["count", "word", "bruhat"])
    p.add_argument("--type", required=True)
    p.add_argument("--word", default="")
    p.add_argument("--u", default="")
    p.add_argument("--w", default="")
    p.set_defaults(fn=cmd_weyl)

    p = sub.add_parser("twinv", parents=[common], help="twisted involutions")
    p.add_argument("twinv_cmd", choices=["list", "count"])
    p.add_argument("--type", required=True)
    p.add_argument("--theta", default="id")
    p.set_defaults(fn=cmd_twinv)

    p = sub.add_parser("classify", parents=[common],
                       help="candidate w_C table with condition flags")
    p.add_argument("--type", required=True)
    p.add_argument("--theta", required=True)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("dim", parents=[common],
                       help="profile and dimension for (type, theta, Pi)")
    p.add_argument("--type", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--pi", default="")
    p.set_defaults(fn=cmd_dim)

    p = sub.add_parser("orbit", parents=[common],
                       help="twisted orbit report over SL_m(F_p)")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--rep", default="identity",
                   help="identity | w0 | wc | random")
    p.add_argument("--torus", default="",
                   help="torus multiplier, e.g. '1:2,3:2' for h_1(2)h_3(2)")
    p.add_argument("--probe", action="store_true",
                   help="stop as soon as a non-twisted-involution cell is hit")
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("verify", parents=[common], help="run the check suite")
    p.add_argument("--scopes", default="",
                   help="comma list: A3,A5,D4,D5,D6,E6,chev3,chev5 (default all)")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError,) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BudgetExceededError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
