"""Weak Saturation MCP Server: the wsat library exposed as MCP tools."""

import json
import os
from pathlib import Path
from typing import Any

from mcp.server.fastmcp import FastMCP

from .bounds import all_lower_bounds, gamma_shadow, gamma_subgraph
from .config import Caps
from .hypergraph import (
    Hypergraph,
    canonical_key,
    delta_m,
    delta_star,
    shadow_size,
    sparseness,
)
from .kruskal_katona import verify_kk_exhaustive
from .logger import setup_logger
from .reports import format_rational, jsonable
from .results_store import ResultsStore
from .rhosat_lp import solve_rhosat
from .wsat_engine import Family, WsatOptions, wsat_exact

log_level = os.getenv("LOG_LEVEL", "INFO")
log_file = os.getenv("LOG_FILE")
logger = setup_logger(
    __name__, level=log_level, log_file=Path(log_file) if log_file else None
)

mcp = FastMCP("Weak Saturation MCP Server")

store = ResultsStore()

RUN_ID = "mcp"


def _family(pattern: dict[str, Any] | list[dict[str, Any]]) -> Family:
    patterns = pattern if isinstance(pattern, list) else [pattern]
    return Family(tuple(Hypergraph.from_dict(p) for p in patterns))


def _failure(action: str, e: Exception, **context: Any) -> dict[str, Any]:
    logger.error(f"{action} failed: {e}")
    return {
        "success": False,
        "error": str(e),
        **context,
        "text": f"{action} failed: {e}",
    }


@mcp.tool()
def hypergraph_invariants(pattern: dict[str, Any]) -> dict[str, Any]:
    """Sparseness, minimum link sizes, shadow sizes and gamma of a hypergraph.

    Args:
        pattern: Hypergraph as {"n": int, "r": int, "edges": [[...], ...]}

    Returns:
        Dictionary with the invariants and a text summary
    """
    try:
        graph = Hypergraph.from_dict(pattern)
        s = sparseness(graph)
        result: dict[str, Any] = {
            "success": True,
            "s": s,
            "delta_star": delta_star(graph),
            "delta": [delta_m(graph, m) for m in range(graph.r + 1)],
            "shadow_sizes": [shadow_size(graph, m) for m in range(graph.r + 1)],
        }
        if graph.r >= 2 and s >= 2:
            result["gamma"] = format_rational(
                gamma_subgraph(graph, caps=Caps.from_env()).value
            )
        result["text"] = (
            f"s={s}, delta*={result['delta_star']}, "
            f"delta_m={result['delta']}, gamma={result.get('gamma', 'n/a')}"
        )
        return result

    except Exception as e:
        return _failure("Invariants", e)


@mcp.tool()
def exact_wsat(
    pattern: dict[str, Any] | list[dict[str, Any]],
    n: int,
    symmetry: str = "generators",
) -> dict[str, Any]:
    """Exact wsat(n, H) by exhaustive search, with a saturating witness.

    Args:
        pattern: One hypergraph, or a list of hypergraphs forming a family
        n: Number of host vertices
        symmetry: Search symmetry reduction (none, generators or full)

    Returns:
        Dictionary with the value, the witness host and its certificate
    """
    try:
        family = _family(pattern)
        caps = Caps.from_env()
        key = None
        if len(family.patterns) == 1:
            key = json.dumps(canonical_key(family.patterns[0].compact(), caps))
            cached = store.cached_wsat(key, n)
            if cached is not None:
                value, payload = cached
                return {
                    "success": True,
                    "wsat": value,
                    **payload,
                    "cached": True,
                    "text": f"wsat({n}, {family.label}) = {value} (cached)",
                }
        options = WsatOptions(symmetry=symmetry, caps=caps)  # type: ignore[arg-type]
        result = wsat_exact(n, family, options)
        payload = jsonable(result.to_dict())
        if key is not None:
            store.store_wsat(key, n, result.value, payload)
        return {
            "success": True,
            **payload,
            "cached": False,
            "text": (
                f"wsat({n}, {family.label}) = {result.value} "
                f"({result.leaves_checked} candidate hosts checked)"
            ),
        }

    except Exception as e:
        return _failure("Exact wsat", e, n=n)


@mcp.tool()
def lower_bounds(pattern: dict[str, Any], n: int) -> dict[str, Any]:
    """Every applicable lower bound on wsat(n, H), recorded in the results store.

    Args:
        pattern: Hypergraph as {"n": int, "r": int, "edges": [[...], ...]}
        n: Number of host vertices

    Returns:
        Dictionary with the bound reports
    """
    try:
        graph = Hypergraph.from_dict(pattern)
        reports = all_lower_bounds(graph, n, Caps.from_env())
        store.record_reports(RUN_ID, reports)
        text_lines = [f"Lower bounds for n={n}:"]
        for report in reports:
            text_lines.append(
                f"  - {report.name} = {format_rational(report.value)} "
                f"(ceil {report.ceiling})"
            )
        return {
            "success": True,
            "n": n,
            "reports": [r.to_dict() for r in reports],
            "best": max(r.ceiling for r in reports),
            "text": "\n".join(text_lines),
        }

    except Exception as e:
        return _failure("Lower bounds", e, n=n)


@mcp.tool()
def gamma_values(pattern: dict[str, Any], s: int | None = None) -> dict[str, Any]:
    """gamma_{s,H} computed over subgraphs and over shadow subsets.

    Args:
        pattern: Hypergraph as {"n": int, "r": int, "edges": [[...], ...]}
        s: Level to evaluate; defaults to the sparseness of the pattern

    Returns:
        Dictionary with both values and whether they agree
    """
    try:
        graph = Hypergraph.from_dict(pattern)
        caps = Caps.from_env()
        by_subgraphs = gamma_subgraph(graph, s, caps)
        by_shadows = gamma_shadow(graph, s, caps)
        agree = by_subgraphs.value == by_shadows.value
        return {
            "success": True,
            "subgraph": by_subgraphs.to_dict(),
            "shadow": by_shadows.to_dict(),
            "agree": agree,
            "text": (
                f"gamma = {format_rational(by_subgraphs.value)} by subgraphs, "
                f"{format_rational(by_shadows.value)} by shadows"
            ),
        }

    except Exception as e:
        return _failure("Gamma", e)


@mcp.tool()
def rhosat(pattern: dict[str, Any], n: int, method: str = "exact") -> dict[str, Any]:
    """Optimum of the rho-sat linear program over set functions on E(K_n^r).

    Args:
        pattern: Hypergraph as {"n": int, "r": int, "edges": [[...], ...]}
        n: Number of host vertices
        method: "exact" (rational simplex) or "float" (HiGHS, inexact)

    Returns:
        Dictionary with the optimum, status and dual certificate
    """
    try:
        graph = Hypergraph.from_dict(pattern)
        caps = Caps.from_env()
        result = solve_rhosat(graph, n, method, caps)  # type: ignore[arg-type]
        return {
            "success": True,
            **result.to_dict(),
            "text": (
                f"rho-sat({n}) = {format_rational(result.value)} [{result.status}]"
            ),
        }

    except Exception as e:
        return _failure("Rho-sat", e, n=n)


@mcp.tool()
def kruskal_katona_check(n: int, r: int, e: int, m: int) -> dict[str, Any]:
    """Compare the shadow lower bound with an exhaustive minimum.

    Args:
        n: Number of vertices
        r: Uniformity
        e: Number of edges
        m: Shadow level

    Returns:
        Dictionary with the bound, the minimum found and a minimiser
    """
    try:
        report = verify_kk_exhaustive(n, r, e, m, Caps.from_env())
        store.record_check(RUN_ID, f"kk n={n} r={r} e={e} m={m}", report.passed, {})
        return {
            "success": True,
            **report.to_dict(),
            "text": (
                f"bound {report.bound}, minimum {report.min_found} over "
                f"{report.checked:,} hypergraphs: "
                f"{'pass' if report.passed else 'FAIL'}"
            ),
        }

    except Exception as e:
        return _failure("Shadow check", e)


@mcp.tool()
def query_results(query: str, parameters: list[Any] | None = None) -> dict[str, Any]:
    """Run a read-only SELECT against the results store.

    Args:
        query: SQL SELECT query over reports, wsat_values or checks
        parameters: Optional list of query parameters

    Returns:
        Dictionary with columns and rows
    """
    try:
        rows, columns = store.execute_query(query, parameters)
        text_lines = [f"Query returned {len(rows)} rows."]
        if rows:
            text_lines.append(f"Columns: {', '.join(columns)}")
            for i, row in enumerate(rows[:5]):
                text_lines.append(f"  Row {i + 1}: {json.dumps(row, default=str)}")
        return {
            "success": True,
            "columns": columns,
            "rows": rows,
            "row_count": len(rows),
            "query": query,
            "text": "\n".join(text_lines),
        }

    except Exception as e:
        return _failure("Query", e, query=query)


@mcp.resource("wsat://status")
def server_status() -> str:
    """Results store location, table sizes and the active caps."""
    try:
        status_lines = [
            "Weak Saturation Server Status",
            "=" * 40,
            f"Results store: {store.db_path}",
        ]
        for table in store.list_tables():
            query = f"SELECT COUNT(*) AS c FROM {table}"  # nosec B608
            rows, _ = store.execute_query(query)
            status_lines.append(f"  - {table}: {rows[0]['c']:,} rows")
        status_lines.append("Caps:")
        for name, value in Caps.from_env().as_dict().items():
            status_lines.append(f"  - {name} = {value:,}")
        return "\n".join(status_lines)

    except Exception as e:
        return f"Failed to get server status: {e}"


def main() -> None:
    """Run the MCP server over stdio."""
    mcp.run()


if __name__ == "__main__":
    main()
