"""Command-line entry point: ``wsat <command> ...``.

Every output embeds the experiment configuration and a hash of the package
sources so that a run can be replayed byte for byte.
"""

import argparse
import hashlib
import itertools
import json
import math
import random
import sys
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .bounds import (
    all_lower_bounds,
    delta_star_coefficient,
    eta_bounds,
    gamma_count_params,
    gamma_graph_m,
    gamma_shadow,
    gamma_subgraph,
    lb_delta_star,
    lb_gamma,
    verify_gamma_delta_inequality,
)
from .config import Caps, default_db_path
from .constructions import (
    build_construction_H,
    build_saturated_host,
    corollary_s_arbitrary_G,
    example_delta_construction,
)
from .corpus import (
    DEFAULT_CORPUS_DIR,
    load_corpus_dir,
    load_expected,
    random_instances,
)
from .count_polymatroid import (
    CountMatroidOracle,
    CountParams,
    matroid_rank_bruteforce,
    matroid_rank_formula,
    random_rank_orders,
    verify_wsat_condition,
)
from .errors import CapExceededError, PreconditionError, WsatError
from .hypergraph import (
    Hypergraph,
    MultiEdgeSet,
    canonical_key,
    clique,
    delta_m,
    delta_star,
    load_hypergraph,
    shadow_size,
    sparseness,
)
from .kruskal_katona import (
    verify_binomial_inequality,
    verify_convexity_inequality,
    verify_f_r_delta_bound,
    verify_kk_grid,
)
from .logger import PACKAGE_LOGGER, LoggerAdapter, configure_from_env, get_logger
from .reports import (
    BoundReport,
    jsonable,
    parse_rational,
    reports_to_csv,
    reports_to_json,
    rows_to_csv,
)
from .results_store import ResultsStore
from .rhosat_lp import build_lp, check_solution_axioms, rhosat_trend, solve_rhosat
from .wsat_engine import (
    Family,
    WsatOptions,
    closure,
    is_weakly_saturated,
    wsat_exact,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_ERROR = 2

SOURCE_DIR = Path(__file__).resolve().parent


@dataclass
class ExperimentConfig:
    command: str
    patterns: list[str] = field(default_factory=list)
    n: list[int] = field(default_factory=list)
    caps: dict[str, int] = field(default_factory=dict)
    format: str = "json"
    seed: int = 0
    options: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def code_hash() -> str:
    """sha256 over the package sources in file-name order."""
    digest = hashlib.sha256()
    for path in sorted(SOURCE_DIR.glob("*.py")):
        digest.update(path.name.encode())
        digest.update(path.read_bytes())
    return digest.hexdigest()


@dataclass
class CommandOutput:
    payload: Any
    rows: list[dict[str, Any]] | None = None
    reports: list[BoundReport] | None = None
    failed: bool = False


def parse_n_range(text: str) -> list[int]:
    """"5", "3..6" or "3,4,7"."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise PreconditionError(f"bad n range {text!r}") from e


def parse_caps(items: Sequence[str]) -> Caps:
    overrides: dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise PreconditionError(f"--cap expects key=value, got {item!r}")
        overrides[key.strip().replace("-", "_")] = value
    return Caps.from_env().with_overrides(**overrides)


def _open_store(args: argparse.Namespace) -> ResultsStore | None:
    """The results store named by --db or WSAT_DB_PATH; None when in-memory."""
    path = args.db or default_db_path()
    return None if path == ":memory:" else ResultsStore(path)


def _single_pattern(args: argparse.Namespace) -> Hypergraph:
    if len(args.pattern) != 1:
        raise PreconditionError("this command takes exactly one --pattern")
    return load_hypergraph(args.pattern[0])


def cmd_invariants(args: argparse.Namespace, caps: Caps) -> CommandOutput:
    graph = load_hypergraph(args.file)
    info: dict[str, Any] = {
        "label": graph.label,
        "n": graph.n,
        "r": graph.r,
        "edges": graph.num_edges,
        "s": sparseness(graph),
        "delta_star": delta_star(graph),
        "delta": {m: delta_m(graph, m) for m in range(graph.r + 1)},
        "shadow_sizes": {m: shadow_size(graph, m) for m in range(graph.r + 1)},
    }
    if graph.r >= 2 and info["s"] >= 2:
        try:
            info["gamma"] = gamma_subgraph(graph, caps=caps).value
        except CapExceededError as e:
            info["gamma"] = f"skipped: {e}"
    if graph.r == 2 and not graph.is_empty() and not graph.has_isolated_vertices():
        info["gamma_graph"] = {
            m: gamma_graph_m(graph, m).value for m in (1, 2) if m < graph.n
        }
    rows = [{"quantity": k, "value": json.dumps(jsonable(v))} for k, v in info.items()]
    return CommandOutput(info, rows=rows)


def _wsat_cache_key(family: Family, caps: Caps) -> str | None:
    if len(family.patterns) != 1:
        return None
    pattern = family.patterns[0].compact()
    try:
        return json.dumps(canonical_key(pattern, caps))
    except CapExceededError:
        return None


def cmd_exact(args: argparse.Namespace, caps: Caps) -> CommandOutput:
    family = Family(tuple(load_hypergraph(p) for p in args.pattern))
    options = WsatOptions(symmetry=args.symmetry, caps=caps)
    store = _open_store(args)
    key = _wsat_cache_key(family, caps) if store else None
    results = []
    rows = []
    for n in parse_n_range(args.n):
        cached = store.cached_wsat(key, n) if store and key else None
        if cached is not None:
            value, payload = cached
            payload = {**payload, "cached": True}
        else:
            result = wsat_exact(n, family, options)
            value, payload = result.value, result.to_dict()
            if store and key:
                store.store_wsat(key, n, value, jsonable(payload))
        results.append(payload)
        witness = json.dumps(payload["witness"]["edges"])
        rows.append({"n": n, "wsat": value, "witness": witness})
    if store:
        store.close()
    return CommandOutput(results, rows=rows)


def cmd_bounds(args: argparse.Namespace, caps: Caps) -> CommandOutput:
    graph = _single_pattern(args)
    reports: list[BoundReport] = []
    for n in parse_n_range(args.n):
        if args.all:
            reports.extend(all_lower_bounds(graph, n, caps))
            if graph.r >= 2 and sparseness(graph) >= 2:
                try:
                    reports.extend(eta_bounds(graph, n, args.eta_cap, caps))
                except CapExceededError as e:
                    logger.warning(f"eta bounds skipped: {e}")
        else:
            reports.append(lb_delta_star(graph, n))
            if graph.r >= 2 and sparseness(graph) >= 2:
                reports.append(lb_gamma(graph, n, caps))
    return CommandOutput([r.to_dict() for r in reports], reports=reports)


def cmd_gamma(args: argparse.Namespace, caps: Caps) -> CommandOutput:
    graph = _single_pattern(args)
    reports = []
    if args.method in ("subgraph", "both"):
        reports.append(gamma_subgraph(graph, args.s, caps))
    if args.method in ("shadow", "both"):
        reports.append(gamma_shadow(graph, args.s, caps))
    failed = len({r.value for r in reports}) > 1
    if failed:
        logger.error("gamma by subgraphs and by shadows disagree")
    return CommandOutput([r.to_dict() for r in reports], reports=reports, failed=failed)


def _parse_params(text: str) -> dict[str, str]:
    params = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise PreconditionError(f"--params expects key=value pairs, got {item!r}")
        params[key.strip()] = value.strip()
    return params


def _int_param(params: dict[str, str], key: str) -> int:
    if key not in params:
        raise PreconditionError(f"missing construction parameter {key!r}")
    try:
        return int(params[key])
    except ValueError as e:
        raise PreconditionError(f"parameter {key} must be an integer") from e


def cmd_construct(args: argparse.Namespace, caps: Caps) -> CommandOutput:
    params = _parse_params(args.params)
    if args.kind == "example-delta":
        construction = example_delta_construction(
            _int_param(params, "r"), _int_param(params, "delta"), caps
        )
        return CommandOutput(construction.to_dict())
    if args.kind == "example-s":
        graph, P = corollary_s_arbitrary_G(
            _int_param(params, "r"), _int_param(params, "s"), _int_param(params, "k")
        )
        payload: dict[str, Any] = {
            "G": graph.to_dict(),
            "P": list(P),
            "s": sparseness(graph),
            "delta": delta_m(graph, sparseness(graph) - 1),
        }
        return CommandOutput(payload)
    base = _single_pattern(args)
    P = [int(v) for v in params["P"].split(":")] if "P" in params else range(base.n)
    construction = build_construction_H(base, P, caps)
    host = build_saturated_host(construction, _int_param(params, "n"), caps)
    return CommandOutput(
        {"construction": construction.to_dict(), "host": host.to_dict()}
    )


def cmd_rhosat(args: argparse.Namespace, caps: Caps) -> CommandOutput:
    graph = _single_pattern(args)
    results = []
    for n in parse_n_range(args.n):
        if args.emit_lp:
            lp = build_lp(graph, n, caps, allow_hard=args.method == "float")
            Path(args.emit_lp).write_text(json.dumps(lp.to_dict()))
            logger.info(f"wrote LP with {lp.row_count} rows to {args.emit_lp}")
        results.append(solve_rhosat(graph, n, args.method, caps).to_dict())
    rows = [{k: r[k] for k in ("n", "rhosat", "status")} for r in results]
    return CommandOutput(results, rows=rows)


def cmd_kk_verify(args: argparse.Namespace, caps: Caps) -> CommandOutput:
    reports = verify_kk_grid(args.max_n, args.max_r, args.max_e, caps)
    sweeps = [
        verify_binomial_inequality(),
        verify_convexity_inequality(),
        verify_f_r_delta_bound(caps=caps),
    ]
    failed = not all(r.passed for r in reports) or not all(s.passed for s in sweeps)
    payload = {
        "kruskal_katona": [r.to_dict() for r in reports],
        "sweeps": [s.to_dict() for s in sweeps],
        "pass": not failed,
    }
    rows = [
        {
            **r.to_dict()["params"],
            "bound": r.bound,
            "min_found": r.min_found,
            "pass": r.passed,
        }
        for r in reports
    ]
    return CommandOutput(payload, rows=rows, failed=failed)


def table_rows(
    graph: Hypergraph, n_values: list[int], caps: Caps, with_rhosat: bool
) -> list[dict[str, Any]]:
    """(n, wsat, each lower bound, rho-sat) rows; cap errors leave blanks."""
    rows = []
    with LoggerAdapter(get_logger(PACKAGE_LOGGER), "WARNING"):
        for n in n_values:
            row: dict[str, Any] = {"n": n}
            try:
                row["wsat"] = wsat_exact(n, graph, WsatOptions(caps=caps)).value
            except CapExceededError as e:
                logger.warning(f"table: wsat skipped at n={n}: {e}")
                row["wsat"] = None
            for report in all_lower_bounds(graph, n, caps):
                row[report.name] = report.value
            if with_rhosat:
                try:
                    row["rhosat"] = solve_rhosat(graph, n, caps=caps).value
                except WsatError as e:
                    logger.warning(f"table: rho-sat skipped at n={n}: {e}")
                    row["rhosat"] = None
            rows.append(row)
    return rows


def cmd_table(args: argparse.Namespace, caps: Caps) -> CommandOutput:
    graph = _single_pattern(args)
    rows = table_rows(graph, parse_n_range(args.n), caps, args.rhosat)
    store = _open_store(args)
    if store:
        store.write_rows("wsat_table", rows)
        if args.export:
            store.export_table("wsat_table", args.export, "CSV")
        store.close()
    return CommandOutput(rows, rows=rows)


@dataclass
class Check:
    item: str
    passed: bool | None
    detail: Any = None

    def to_dict(self) -> dict[str, Any]:
        if self.passed is None:
            status = "skipped"
        else:
            status = "pass" if self.passed else "fail"
        return {"item": self.item, "status": status, "detail": jsonable(self.detail)}


# sizes of the library-wide verify-all items
KK_GRID = (6, 3, 6)
COUNT_RANK_GRID = tuple(itertools.product(range(-4, 2), range(3), range(2)))
CONSTRUCTION_HOST_N = 8
CLOSURE_INSTANCES = 10
CLOSURE_SHUFFLES = 5
RHOSAT_CHECK_EDGES = 10
AXIOM_CHECK_EDGES = 8

CheckFn = Callable[[], tuple[bool, Any]]


def _run_check(checks: list[Check], item: str, compute: CheckFn) -> None:
    """Append the outcome of ``compute``; a cap error becomes a skipped check."""
    try:
        passed, detail = compute()
    except CapExceededError as e:
        logger.warning(f"{item} skipped: {e}")
        checks.append(Check(item, None, str(e)))
        return
    checks.append(Check(item, passed, detail))


def _small_hosts(graph: Hypergraph, max_edges: int) -> list[int]:
    """n from |V(H)| up to 7 while C(n, r) stays within max_edges."""
    hosts = []
    for n in range(len(graph.vertices()), 8):
        if math.comb(n, graph.r) > max_edges:
            break
        hosts.append(n)
    return hosts


def pattern_checks(
    graph: Hypergraph, expected: dict[str, Any], caps: Caps, sandwich_edges: int
) -> list[Check]:
    """Expected values, identities, certificates and the bound sandwich.

    A computation over its cap becomes a skipped check, never a failure.
    """
    label = graph.label or "H"
    checks: list[Check] = []

    def run(name: str, compute: CheckFn) -> None:
        _run_check(checks, f"{label}:{name}", compute)

    def expect(name: str, want: Any, compute: Callable[[], Any]) -> None:
        def compare() -> tuple[bool, Any]:
            got = compute()
            return want == got, {"expected": want, "actual": got}

        run(name, compare)

    s = sparseness(graph)
    if "s" in expected:
        expect("s", expected["s"], lambda: s)
    if "delta_star" in expected:
        expect("delta_star", expected["delta_star"], lambda: delta_star(graph))
    if "gamma" in expected:
        expect(
            "gamma",
            parse_rational(expected["gamma"]),
            lambda: gamma_subgraph(graph, caps=caps).value,
        )
    for m in (1, 2):
        key = f"gamma_graph_m{m}"
        if key in expected:
            want = parse_rational(expected[key])
            expect(key, want, lambda: gamma_graph_m(graph, m).value)
    for n_text, value in expected.get("wsat", {}).items():
        n = int(n_text)
        options = WsatOptions(caps=caps)
        expect(f"wsat@{n}", value, lambda: wsat_exact(n, graph, options).value)
    for n_text, value in expected.get("rhosat", {}).items():
        n = int(n_text)
        expect(
            f"rhosat@{n}",
            parse_rational(value),
            lambda: solve_rhosat(graph, n, caps=caps).value,
        )
    if graph.r >= 2 and s >= 2:
        run("gamma_identity", lambda: _gamma_identity(graph, caps))
        n = len(graph.vertices())
        run(f"wsat_condition@{n}", lambda: _wsat_condition(graph, n, caps))
    if graph.r >= 2 and delta_star(graph) >= 2:
        run("gamma_vs_codegree", lambda: _codegree_check(graph, caps))
    if graph.r >= 2 and s >= 2:
        for n in _small_hosts(graph, sandwich_edges):
            run(f"sandwich@{n}", lambda: _sandwich(graph, n, caps))
    if not graph.is_empty():
        lp_edges = min(RHOSAT_CHECK_EDGES, caps.lp_edges, caps.lp_exact_edges)
        if hosts := _small_hosts(graph, lp_edges):
            run("rhosat_le_wsat", lambda: _rhosat_le_wsat(graph, hosts, caps))
        if hosts := _small_hosts(graph, min(AXIOM_CHECK_EDGES, lp_edges)):
            n = hosts[-1]
            run(f"polymatroid_axioms@{n}", lambda: _solution_axioms(graph, n, caps))
    return checks


def _gamma_identity(graph: Hypergraph, caps: Caps) -> tuple[bool, Any]:
    by_subgraphs = gamma_subgraph(graph, caps=caps).value
    by_shadows = gamma_shadow(graph, caps=caps).value
    return by_subgraphs == by_shadows, {
        "subgraph": by_subgraphs,
        "shadow": by_shadows,
    }


def _codegree_check(graph: Hypergraph, caps: Caps) -> tuple[bool, Any]:
    check = verify_gamma_delta_inequality(graph, caps)
    return check.holds, check.to_dict()


def _sandwich(graph: Hypergraph, n: int, caps: Caps) -> tuple[bool, Any]:
    """ceil(lb_delta_star) <= ceil(lb_gamma) <= wsat, the search started at 0."""
    low = lb_delta_star(graph, n).ceiling
    mid = lb_gamma(graph, n, caps).ceiling
    options = WsatOptions(start_from_bounds=False, caps=caps)
    exact = wsat_exact(n, graph, options).value
    return low <= mid <= exact, {"lb_delta_star": low, "lb_gamma": mid, "wsat": exact}


def _wsat_condition(graph: Hypergraph, n: int, caps: Caps) -> tuple[bool, Any]:
    """The gamma count polymatroid keeps its rank on every copy minus an edge."""
    report = verify_wsat_condition(graph, n, gamma_count_params(graph, caps), caps)
    return report.passed, report.to_dict()


def _rhosat_le_wsat(
    graph: Hypergraph, n_values: list[int], caps: Caps
) -> tuple[bool, Any]:
    rows = rhosat_trend(graph, n_values, caps)
    passed = all(row["wsat"] is None or row["rhosat"] <= row["wsat"] for row in rows)
    return passed, rows


def _solution_axioms(graph: Hypergraph, n: int, caps: Caps) -> tuple[bool, Any]:
    """The optimal set function, checked against the full polymatroid axioms."""
    result = solve_rhosat(graph, n, caps=caps, keep_values=True)
    check = check_solution_axioms(result)
    return check.passed, {
        "rhosat": result.value,
        "pairs": check.checked_pairs,
        "violations": check.violations,
    }


def _kk_grid(caps: Caps) -> tuple[bool, Any]:
    reports = verify_kk_grid(KK_GRID[0], KK_GRID[1], KK_GRID[2], caps)
    failures = [r.to_dict() for r in reports if not r.passed]
    return not failures, {"instances": len(reports), "failures": failures}


def _count_rank(caps: Caps, seed: int) -> tuple[bool, Any]:
    """Greedy ranks of (K_n)^(q) against the closed form, and order-free."""
    mismatches = []
    checked = 0
    for n in (3, 4):
        universe = clique(n, 2)
        full = (1 << universe.num_edges) - 1
        for q in (1, 2):
            multi = MultiEdgeSet.from_hypergraph(universe, q)
            orders = random_rank_orders(universe.num_edges, q, 4, seed)
            for a0, a1, a2 in COUNT_RANK_GRID:
                params = CountParams.of(a0, a1, a2)
                brute = matroid_rank_bruteforce(multi, params, caps)
                formula = matroid_rank_formula(n, params, q)
                oracle = CountMatroidOracle(universe, params, caps)
                shuffled = {oracle.rank(full, q, order) for order in orders}
                checked += 1
                if shuffled != {brute} or brute != formula:
                    mismatches.append(
                        {
                            "n": n,
                            "q": q,
                            "a": [a0, a1, a2],
                            "greedy": brute,
                            "formula": formula,
                            "shuffled": sorted(shuffled),
                        }
                    )
    return not mismatches, {"checked": checked, "mismatches": mismatches[:10]}


def _example_delta(delta: int, caps: Caps) -> tuple[bool, Any]:
    construction = example_delta_construction(2, delta, caps)
    target = delta_star_coefficient(2, delta)
    return construction.coefficient == target, {
        "coefficient": construction.coefficient,
        "codegree_coefficient": target,
    }


def _construction_host(delta: int, caps: Caps) -> tuple[bool, Any]:
    """The built host on CONSTRUCTION_HOST_N vertices closes to the clique."""
    construction = example_delta_construction(2, delta, caps)
    host = build_saturated_host(construction, CONSTRUCTION_HOST_N, caps)
    saturated = is_weakly_saturated(host.host, construction.family)
    return saturated, {
        "n": host.n,
        "edges": host.host.num_edges,
        "measured": host.measured_coefficient,
    }


def closure_replay_check(
    seed: int, count: int = CLOSURE_INSTANCES
) -> tuple[bool, Any]:
    """Seeded shuffles of the closure agree and every certificate replays."""
    rng = random.Random(seed)
    failures = []
    for number, (host, pattern) in enumerate(random_instances(count, seed=seed)):
        reference = closure(host, pattern).closure
        family = Family.of(pattern)
        for _ in range(CLOSURE_SHUFFLES):
            result = closure(host, pattern, seed=rng.randrange(1 << 30))
            if result.closure != reference:
                failures.append({"instance": number, "reason": "order dependent"})
                break
            try:
                replayed = result.certificate.replay(family)
            except PreconditionError as e:
                failures.append({"instance": number, "reason": str(e)})
                break
            if replayed != reference:
                failures.append({"instance": number, "reason": "replay differs"})
                break
    return not failures, {"instances": count, "seed": seed, "failures": failures}


def suite_checks(caps: Caps, seed: int) -> list[Check]:
    """Library-wide items that belong to no single corpus pattern.

    ``seed`` drives the random closure instances and the greedy rank orders.
    """
    checks: list[Check] = []
    _run_check(checks, "kk_grid", lambda: _kk_grid(caps))
    _run_check(checks, "count_rank", lambda: _count_rank(caps, seed))
    for delta in (2, 3):
        coefficient = f"example_delta@{delta}"
        _run_check(checks, coefficient, lambda: _example_delta(delta, caps))
        host = f"construction_host@{delta}"
        _run_check(checks, host, lambda: _construction_host(delta, caps))
    _run_check(checks, "closure_replay", lambda: closure_replay_check(seed))
    return checks


def cmd_verify_all(args: argparse.Namespace, caps: Caps) -> CommandOutput:
    """Corpus checks per pattern, then the library-wide suite.

    An empty corpus gives an empty summary.
    """
    corpus_dir = Path(args.corpus)
    patterns = load_corpus_dir(corpus_dir)
    expected = load_expected(corpus_dir)
    checks: list[Check] = []
    with LoggerAdapter(get_logger(PACKAGE_LOGGER), "WARNING"):
        for graph in patterns:
            checks += pattern_checks(
                graph, expected.get(graph.label or "", {}), caps, args.sandwich_edges
            )
        if patterns and args.suite:
            checks += suite_checks(caps, args.seed)
    failed = any(c.passed is False for c in checks)
    store = _open_store(args)
    if store:
        for c in checks:
            store.record_check(args.run_id, c.item, bool(c.passed), c.detail)
        store.close()
    summary = {
        "checks": [c.to_dict() for c in checks],
        "passed": sum(1 for c in checks if c.passed),
        "failed": sum(1 for c in checks if c.passed is False),
        "skipped": sum(1 for c in checks if c.passed is None),
    }
    rows = [{**c.to_dict(), "detail": json.dumps(jsonable(c.detail))} for c in checks]
    return CommandOutput(summary, rows=rows, failed=failed)


COMMANDS: dict[str, Callable[[argparse.Namespace, Caps], CommandOutput]] = {
    "invariants": cmd_invariants,
    "exact": cmd_exact,
    "bounds": cmd_bounds,
    "gamma": cmd_gamma,
    "construct": cmd_construct,
    "rhosat": cmd_rhosat,
    "kk-verify": cmd_kk_verify,
    "table": cmd_table,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write the report here, not stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument(
        "--cap",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a size cap",
    )
    common.add_argument("--db", default=None, help="DuckDB results file")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="wsat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="s, delta_m, gamma")
    p.add_argument("file")

    p = sub.add_parser("exact", parents=[common], help="exact wsat(n, H) by search")
    p.add_argument("--pattern", action="append", required=True)
    p.add_argument("--n", required=True)
    p.add_argument(
        "--symmetry", choices=("none", "generators", "full"), default="generators"
    )

    p = sub.add_parser("bounds", parents=[common], help="lower bounds on wsat(n, H)")
    p.add_argument("--pattern", action="append", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--all", action="store_true")
    p.add_argument("--eta-cap", type=int, default=8)

    p = sub.add_parser("gamma", parents=[common], help="gamma_{s,H} both ways")
    p.add_argument("--pattern", action="append", required=True)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--method", choices=("subgraph", "shadow", "both"), default="both")

    p = sub.add_parser("construct", parents=[common], help="extremal constructions")
    p.add_argument(
        "--kind", choices=("example-delta", "example-s", "host"), required=True
    )
    p.add_argument(
        "--params", default="", help="r=..,delta=.. | r=..,s=..,k=.. | n=..,P=0:1:2"
    )
    p.add_argument("--pattern", action="append", default=[])

    p = sub.add_parser("rhosat", parents=[common], help="rho-sat LP optimum")
    p.add_argument("--pattern", action="append", required=True)
    p.add_argument("--n", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="method", action="store_const", const="exact")
    mode.add_argument("--float", dest="method", action="store_const", const="float")
    p.set_defaults(method="exact")
    p.add_argument("--emit-lp", default=None)

    p = sub.add_parser("kk-verify", parents=[common], help="exhaustive shadow checks")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--max-r", type=int, default=3)
    p.add_argument("--max-e", type=int, default=8)

    p = sub.add_parser("table", parents=[common], help="wsat / bounds / rho-sat table")
    p.add_argument("--pattern", action="append", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--rhosat", action="store_true")
    p.add_argument("--export", default=None, help="CSV export via the results store")

    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance checks")
    p.add_argument("--corpus", default=str(DEFAULT_CORPUS_DIR))
    p.add_argument("--sandwich-edges", type=int, default=15)
    p.add_argument(
        "--suite",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="also run the library-wide checks (KK grid, count ranks, closures)",
    )
    p.add_argument("--run-id", default="verify-all")
    return parser


def _config(args: argparse.Namespace, caps: Caps) -> ExperimentConfig:
    skip = {"command", "format", "seed", "cap", "output", "verbose"}
    skip |= {"pattern", "n", "file"}
    options = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    patterns = list(getattr(args, "pattern", None) or [])
    if getattr(args, "file", None):
        patterns.append(args.file)
    n_text = getattr(args, "n", None)
    return ExperimentConfig(
        command=args.command,
        patterns=patterns,
        n=parse_n_range(n_text) if n_text else [],
        caps=caps.as_dict(),
        format=args.format,
        seed=args.seed,
        options=options,
    )


def render(output: CommandOutput, config: ExperimentConfig) -> str:
    digest = code_hash()
    if config.format == "csv":
        config_text = json.dumps(config.to_dict(), sort_keys=True)
        header = f"# config={config_text}\n# code_hash={digest}\n"
        if output.reports is not None:
            return header + reports_to_csv(output.reports)
        return header + rows_to_csv(output.rows or [])
    header = {"config": config.to_dict(), "code_hash": digest}
    if output.reports is not None:
        return reports_to_json(output.reports, header, key="result") + "\n"
    envelope = {**header, "result": output.payload}
    return json.dumps(jsonable(envelope), indent=2, sort_keys=True) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_from_env(args.verbose)
    try:
        caps = parse_caps(args.cap)
        if args.workers is not None:
            caps = caps.with_overrides(workers=args.workers)
        config = _config(args, caps)
        output = COMMANDS[args.command](args, caps)
        text = render(output, config)
    except WsatError as e:
        logger.error(f"{args.command} failed: {e}")
        print(json.dumps({"error": str(e), "command": args.command}), file=sys.stderr)
        return EXIT_ERROR
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_FAILED_CHECK if output.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
