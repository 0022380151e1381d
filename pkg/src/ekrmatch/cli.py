"""Command-line front end: verify, grid, proofcheck, witness, enumerate.

Exit codes: 0 verified, 1 counterexample to a claim, 2 usage or parameter
error, 3 resource cap hit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .cycle import (
    DEFAULT_MAPPING_CAP,
    MappingTable,
    double_count,
    fiber_counts,
    max_intersecting_quasi,
    quasi_cap,
    quasi_intersection_pattern,
    quasi_intervals,
    random_intersecting_subfamily,
    stars,
    verify_counting_identities,
)
from .errors import CapExceeded, CountingError, InvalidParams
from .family import (
    MatchingParams,
    enumerate_family,
    family_size,
    is_intersecting,
    set_names,
    star_size_closed_form,
    valid_params,
)
from .report import GridReport, GridRow, ProofCheckReport
from .search import DEFAULT_FAMILY_CAP, max_intersecting, verify_ekr_instance

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
GRID_MAX_N = 8
DOUBLE_COUNT_SAMPLES = 20


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args) -> MatchingParams:
    return MatchingParams(args.n, args.p, args.s)


def _params_json(params: MatchingParams) -> dict:
    return {"n": params.n, "p": params.p, "s": params.s}


# -- verify -----------------------------------------------------------------

def _verify_row(params: MatchingParams, cap: int, seed_star: bool) -> GridRow:
    start = time.perf_counter()
    size = family_size(params)
    star_size = star_size_closed_form(params)
    regime = "ekr" if params.ekr_range else "degenerate"
    if size > cap:
        return GridRow(*params.as_tuple(), size, star_size, None, regime, None, 0, "family-cap")
    v = verify_ekr_instance(params, cap, seed_star)
    ms = int((time.perf_counter() - start) * 1000)
    return GridRow(*params.as_tuple(), v.family_size, v.star_size, v.max_intersecting, v.regime, v.holds, ms)


def cmd_verify(args) -> int:
    params = _params(args)
    try:
        v = verify_ekr_instance(params, args.cap, not args.no_seed_star)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    if args.format == "json":
        body = {
            "params": _params_json(params),
            "results": [{
                "family_size": v.family_size,
                "star_size": v.star_size,
                "max_intersecting": v.max_intersecting,
                "regime": v.regime,
                "holds": v.holds,
                "nodes_explored": v.nodes_explored,
            }],
            "summary": {"holds": v.holds},
        }
        _emit(json.dumps(body, indent=2) + "\n", args.output)
    elif args.format == "csv":
        row = GridRow(*params.as_tuple(), v.family_size, v.star_size, v.max_intersecting, v.regime, v.holds, 0)
        _emit(GridReport(params.n, (row,), args.cap).to_csv(), args.output)
    else:
        _emit(
            f"n={params.n} p={params.p} s={params.s} regime={v.regime} |H|={v.family_size} "
            f"star={v.star_size} max={v.max_intersecting} holds={'yes' if v.holds else 'NO'}\n",
            args.output,
        )
    return EXIT_OK if v.holds else EXIT_COUNTEREXAMPLE


# -- grid -------------------------------------------------------------------

def grid_params(max_n: int, ekr_range_only: bool = False) -> list[MatchingParams]:
    return [q for q in valid_params(max_n) if q.ekr_range or not ekr_range_only]


def run_grid(max_n: int, cap: int = DEFAULT_FAMILY_CAP, seed_star: bool = True,
             jobs: int = 1, ekr_range_only: bool = False) -> GridReport:
    todo = grid_params(max_n, ekr_range_only)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_verify_row, todo, [cap] * len(todo), [seed_star] * len(todo)))
    else:
        rows = [_verify_row(q, cap, seed_star) for q in todo]
    rows.sort(key=lambda r: (r.n, r.p, r.s))
    return GridReport(max_n, tuple(rows), cap)


def cmd_grid(args) -> int:
    if args.max_n is None:
        print("grid: --max-n is required", file=sys.stderr)
        return EXIT_USAGE
    if not 1 <= args.max_n <= args.grid_limit:
        print(f"grid: --max-n must be in 1..{args.grid_limit}", file=sys.stderr)
        return EXIT_USAGE
    report = run_grid(args.max_n, args.cap, not args.no_seed_star, args.jobs, args.ekr_range_only)
    if args.format == "json":
        _emit(report.to_json() + "\n", args.output)
    elif args.format == "csv":
        _emit(report.to_csv(), args.output)
    else:
        _emit(report.to_text(), args.output)
    if report.failures:
        return EXIT_COUNTEREXAMPLE
    if args.strict and report.skipped:
        return EXIT_CAP
    return EXIT_OK


# -- proofcheck -------------------------------------------------------------

def proofcheck(params: MatchingParams, map_cap: int = DEFAULT_MAPPING_CAP,
               cap: int = DEFAULT_FAMILY_CAP, seed: int = 0) -> ProofCheckReport:
    """Run every cycle-method check on one instance.

    Range-dependent checks are skipped below n = 2p+s, mapping checks above
    ``map_cap`` and searches above the family ``cap``; skipped checks carry
    the reason in their detail.
    """
    rep = ProofCheckReport(*params.as_tuple())
    in_range = params.ekr_range
    out_of_range = {"reason": "n < 2p+s"}
    map_skip = {"reason": f"n > map-cap {map_cap}"}

    quasi = quasi_intervals(params)
    bad = [b.index for b in quasi if len(b) != 2 * params.p + params.s]
    rep.add("quasi_sizes", not bad, bad, count=len(quasi), size=2 * params.p + params.s)

    if in_range:
        pat = quasi_intersection_pattern(params)
        rep.add("intersection_pattern", pat.verdict,
                {"mismatches": [list(m) for m in pat.mismatches],
                 "disjoint_failures": [list(m) for m in pat.disjoint_failures]},
                reach=pat.reach)
        size, witness = max_intersecting_quasi(params)
        rep.add("quasi_extremal_bound", size == quasi_cap(params),
                {"found": size, "witness": list(witness)}, max=size, cap=quasi_cap(params))
    else:
        rep.add("intersection_pattern", None, **out_of_range)
        rep.add("quasi_extremal_bound", None, **out_of_range)

    mapping_ok = params.n <= map_cap
    f_value = None
    table = None
    if mapping_ok:
        table = MappingTable(params.n, map_cap)
        try:
            counts = fiber_counts(params, table)
        except CountingError as exc:
            rep.add("pullback_membership", False, {"h": exc.pair[0], "label": exc.pair[1]})
            counts = None
        else:
            rep.add("pullback_membership", True, mappings=len(table))
        try:
            counting = verify_counting_identities(params, map_cap, seed)
        except CountingError as exc:
            rep.add("f_independence", False, {"h": exc.pair[0], "label": exc.pair[1]})
        else:
            f_value = counting.f_value
            values = set(counts.values()) if counts is not None else {f_value}
            complete = counts is None or len(counts) == len(enumerate_family(params)) * len(quasi)
            ok = values == {f_value} and complete
            rep.add("f_independence", ok, {"fiber_values": sorted(values)},
                    f=f_value, pairs_sampled=counting.pairs_checked,
                    sampled=not counting.exhaustive)
            rep.add("counting_identity", counting.identity_holds,
                    {"total": counting.total_mappings, "family_times_f": counting.family_size * f_value},
                    total=counting.total_mappings, family_size=counting.family_size)
    else:
        for name in ("pullback_membership", "f_independence", "counting_identity"):
            rep.add(name, None, **map_skip)

    family = enumerate_family(params)
    if f_value is None:
        rep.add("double_count", None, **map_skip)
        rep.add("inequality_chain", None, **map_skip)
        return rep

    rng = random.Random(seed)
    samples = stars(family) + [random_intersecting_subfamily(family, rng) for _ in range(DOUBLE_COUNT_SAMPLES)]
    failure = None
    for members in samples:
        dc = double_count(params, members, f_value, table)
        if not dc.identity_ok or dc.bound_ok is False:
            failure = {"members": [set_names(m) for m in members],
                       "s_count": dc.s_count, "expected": dc.expected}
            break
    rep.add("double_count", failure is None, failure, families=len(samples))

    if not in_range:
        rep.add("inequality_chain", None, **out_of_range)
    elif len(family) > cap:
        rep.add("inequality_chain", None, reason=f"family exceeds cap {cap}")
    else:
        best = max_intersecting(family, cap)
        members = [family[i] for i in best.witness]
        dc = double_count(params, members, f_value, table)
        ok = bool(dc.identity_ok and dc.bound_ok and dc.bound_tight)
        rep.add("inequality_chain", ok,
                {"members": [set_names(m) for m in members], "s_count": dc.s_count},
                max=best.size, bound=quasi_cap(params) * len(family) // params.quasi_count)
    return rep


def cmd_proofcheck(args) -> int:
    params = _params(args)
    rep = proofcheck(params, args.map_cap, args.cap, args.seed)
    if args.format == "json":
        _emit(rep.to_json() + "\n", args.output)
    else:
        _emit(rep.to_text(), args.output)
    failure = rep.first_failure
    if failure is not None:
        print(f"check failed: {failure.name}: {json.dumps(failure.counterexample)}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    if args.strict and any(c.status == "skipped" and "cap" in c.detail.get("reason", "") for c in rep.checks):
        return EXIT_CAP
    return EXIT_OK


# -- witness / enumerate ----------------------------------------------------

def cmd_witness(args) -> int:
    params = _params(args)
    try:
        v = verify_ekr_instance(params, args.cap, not args.no_seed_star)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    family = enumerate_family(params)
    members = [family[i] for i in v.witness]
    if not is_intersecting(members) or len(members) != v.max_intersecting:
        raise AssertionError("witness failed re-validation")
    named = [set_names(m) for m in members]
    if args.format == "json":
        body = {"params": _params_json(params), "results": named,
                "summary": {"size": len(named), "holds": v.holds}}
        _emit(json.dumps(body, indent=2) + "\n", args.output)
    else:
        _emit("".join(f"[{' '.join(names)}]\n" for names in named), args.output)
    return EXIT_OK if v.holds else EXIT_COUNTEREXAMPLE


def cmd_enumerate(args) -> int:
    params = _params(args)
    size = family_size(params)
    if size > args.cap:
        print(f"cap exceeded: family has {size} members, cap is {args.cap}", file=sys.stderr)
        return EXIT_CAP
    named = [set_names(m) for m in enumerate_family(params)]
    if args.format == "json":
        body = {"params": _params_json(params), "results": named, "summary": {"family_size": size}}
        _emit(json.dumps(body, indent=2) + "\n", args.output)
    else:
        _emit("".join(f"[{' '.join(names)}]\n" for names in named), args.output)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ekrmatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--cap", type=int, default=DEFAULT_FAMILY_CAP, help="largest family searched")
    common.add_argument("--map-cap", type=int, default=DEFAULT_MAPPING_CAP, help="largest n for mapping enumeration")
    common.add_argument("--strict", action="store_true", help="exit 3 when anything was skipped by a cap")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled canvasses")
    common.add_argument("--no-seed-star", action="store_true", help="start the search without the star bound")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument("--n", type=int, required=True)
    instance.add_argument("--p", type=int, required=True)
    instance.add_argument("--s", type=int, required=True)

    for name, func, helptext in (
        ("verify", cmd_verify, "check one instance"),
        ("proofcheck", cmd_proofcheck, "run the cycle-method checks on one instance"),
        ("witness", cmd_witness, "print a maximum intersecting family"),
        ("enumerate", cmd_enumerate, "list the family"),
    ):
        p = sub.add_parser(name, parents=[common, instance], help=helptext)
        p.set_defaults(func=func)

    g = sub.add_parser("grid", parents=[common], help="sweep every valid instance up to --max-n")
    g.add_argument("--max-n", type=int)
    g.add_argument("--grid-limit", type=int, default=GRID_MAX_N, help="largest --max-n accepted")
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--ekr-range-only", action="store_true", help="only instances with n >= 2p+s")
    g.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except InvalidParams as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
