"""kRSP MCP Server - Main entry point."""

import logging

from mcp.server.fastmcp import Context, FastMCP

from krsp_solver.config import settings
from krsp_solver.context import create_app_lifespan
from krsp_solver.tools import instances as instance_tools
from krsp_solver.tools import solve as solve_tools
from krsp_solver.utils.logging import setup_logging

setup_logging()
logger = logging.getLogger(__name__)

# Create the MCP server with lifespan management
mcp = FastMCP(
    name="kRSP Solver",
    instructions="""
    Compute k edge-disjoint s-t paths whose total delay stays within a bound
    while keeping total cost low (at most twice the optimum).

    Instances use a plain text format: a header line "n m k D [s t]"
    followed by m lines "u v cost delay". Vertices are 0..n-1; s defaults
    to 0 and t to n-1.

    Use generate_instance to create test instances, check_feasibility before
    solving, and brute_force_optimum to compare against the exact optimum on
    small graphs (n <= 10, m <= 16).
    """,
    lifespan=create_app_lifespan,
)

# =============================================================================
# Solver Tools
# =============================================================================


@mcp.tool()
async def solve_krsp(
    ctx: Context,
    instance_text: str,
    delay_bound: int | None = None,
    mode: str = "exact",
    eps1: str = "1/2",
    eps2: str = "1/2",
    phase1: str = "mincost",
    cycles: str = "hybrid",
    trace: bool = False,
):
    """
    Solve a kRSP instance.

    Exact mode keeps total delay within D; scaled mode trades up to eps1*D
    extra delay for speed on larger weights.
    """
    return await solve_tools.solve_krsp(
        ctx, instance_text, delay_bound, mode, eps1, eps2, phase1, cycles, trace
    )


# =============================================================================
# Instance Tools
# =============================================================================


@mcp.tool()
async def generate_instance(
    ctx: Context,
    n: int,
    m: int,
    max_cost: int = 5,
    max_delay: int = 5,
    k: int = 2,
    seed: int = 1,
    delay_bound: int = 0,
):
    """Generate a seeded random instance in text form."""
    return await instance_tools.generate_instance(
        ctx, n, m, max_cost, max_delay, k, seed, delay_bound
    )


@mcp.tool()
async def check_feasibility(ctx: Context, instance_text: str):
    """Check whether k disjoint paths within the delay bound exist."""
    return await instance_tools.check_feasibility(ctx, instance_text)


@mcp.tool()
async def brute_force_optimum(ctx: Context, instance_text: str):
    """Exact optimum by exhaustive search, for small instances."""
    return await instance_tools.brute_force_optimum(ctx, instance_text)


@mcp.tool()
async def list_residual_cycles(ctx: Context, instance_text: str, path_edge_ids: list[list[int]]):
    """
    List the simple cycles of the residual graph of a path set.

    Cycle cost and delay show which swaps would trade cost for delay.
    """
    return await instance_tools.list_residual_cycles(ctx, instance_text, path_edge_ids)


def main():
    """Run the MCP server."""
    logger.info("Starting kRSP MCP Server")
    logger.info(f"Default mode: {settings.mode}, cycle source: {settings.cycle_source}")
    mcp.run()


if __name__ == "__main__":
    main()
