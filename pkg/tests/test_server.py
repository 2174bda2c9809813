from unittest.mock import AsyncMock, MagicMock, patch

import pytest

from krsp_solver.context import AppContext, create_app_lifespan
from krsp_solver.graph import parse_instance
from krsp_solver.server import main, mcp
from krsp_solver.tools import instances, solve


def test_mcp_instance():
    """Test that the MCP instance is correctly initialized."""
    assert mcp.name == "kRSP Solver"
    tool_names = {tool.name for tool in mcp._tool_manager.list_tools()}
    assert tool_names == {
        "solve_krsp",
        "generate_instance",
        "check_feasibility",
        "brute_force_optimum",
        "list_residual_cycles",
    }


@patch("krsp_solver.server.mcp.run")
def test_main_execution(mock_run):
    """Test the main entry point."""
    main()
    mock_run.assert_called_once()


async def test_tool_registration_wrappers():
    """Test that tool wrappers pass their arguments through."""
    from krsp_solver.server import check_feasibility, solve_krsp

    with patch("krsp_solver.tools.solve.solve_krsp", new_callable=AsyncMock) as mock_solve:
        ctx = MagicMock()
        await solve_krsp(ctx, "text", delay_bound=3, mode="scaled")
        mock_solve.assert_called_once_with(
            ctx, "text", 3, "scaled", "1/2", "1/2", "mincost", "hybrid", False
        )

    with patch(
        "krsp_solver.tools.instances.check_feasibility", new_callable=AsyncMock
    ) as mock_check:
        ctx = MagicMock()
        await check_feasibility(ctx, "text")
        mock_check.assert_called_once_with(ctx, "text")


async def test_lifespan_creates_and_clears_cache():
    """Lifespan yields a context whose cache is emptied on shutdown."""
    async with create_app_lifespan(MagicMock()) as app:
        assert isinstance(app, AppContext)
        app.cache["key"] = "value"
        cache = app.cache
    assert len(cache) == 0


class TestSolveTool:
    async def test_solve(self, mock_mcp_context, fig1_text):
        result = await solve.solve_krsp(mock_mcp_context, fig1_text)
        assert result["status"] == "solved"
        assert result["paths"] == [[0, 1, 4], [6]]
        assert result["totalCost"] == 2

    async def test_result_is_cached(self, mock_mcp_context, mock_cache, fig1_text):
        first = await solve.solve_krsp(mock_mcp_context, fig1_text)
        assert len(mock_cache) == 1
        with patch("krsp_solver.tools.solve.solve") as mock_solve:
            second = await solve.solve_krsp(mock_mcp_context, fig1_text)
            mock_solve.assert_not_called()
        assert second == first

    async def test_delay_bound_changes_cache_key(self, mock_mcp_context, mock_cache, fig1_text):
        await solve.solve_krsp(mock_mcp_context, fig1_text)
        relaxed = await solve.solve_krsp(mock_mcp_context, fig1_text, delay_bound=5)
        assert relaxed["iterations"] == 0
        assert len(mock_cache) == 2

    async def test_trace(self, mock_mcp_context, fig1_text):
        result = await solve.solve_krsp(mock_mcp_context, fig1_text, trace=True)
        assert [r["kind"] for r in result["iterations"]] == ["type1"]

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"instance_text": "garbage"},
            {"mode": "fast"},
            {"mode": "scaled", "eps1": "0"},
            {"eps1": "x/y"},
            {"cycles": "magic"},
        ],
    )
    async def test_bad_input_returns_error(self, mock_mcp_context, fig1_text, kwargs):
        result = await solve.solve_krsp(mock_mcp_context, **{"instance_text": fig1_text, **kwargs})
        assert "error" in result

    async def test_infeasible(self, mock_mcp_context):
        result = await solve.solve_krsp(mock_mcp_context, "3 2 2 10\n0 1 1 1\n1 2 1 1\n")
        assert result["status"] == "infeasible"
        assert result["paths"] == []


class TestInstanceTools:
    async def test_generate_instance(self, mock_mcp_context):
        result = await instances.generate_instance(mock_mcp_context, 5, 8, seed=4, delay_bound=6)
        assert (result["n"], result["m"], result["k"], result["D"]) == (5, 8, 2, 6)
        assert parse_instance(result["instance_text"]).D == 6

    async def test_generate_instance_error(self, mock_mcp_context):
        result = await instances.generate_instance(mock_mcp_context, 1, 3)
        assert "error" in result

    async def test_check_feasibility(self, mock_mcp_context, fig1_text):
        result = await instances.check_feasibility(mock_mcp_context, fig1_text)
        assert result == {
            "feasible": True,
            "lowerBoundCost": 0,
            "minCostDelay": 5,
            "minDelay": 0,
            "delayBound": 4,
        }

    async def test_check_feasibility_no_k_paths(self, mock_mcp_context):
        result = await instances.check_feasibility(mock_mcp_context, "3 2 2 10\n0 1 1 1\n1 2 1 1\n")
        assert result["feasible"] is False
        assert "edge-disjoint" in result["reason"]

    async def test_check_feasibility_parse_error(self, mock_mcp_context):
        assert "error" in await instances.check_feasibility(mock_mcp_context, "1 2")

    async def test_brute_force_optimum(self, mock_mcp_context, fig1_text):
        result = await instances.brute_force_optimum(mock_mcp_context, fig1_text)
        assert result["feasible"] is True
        assert result["costOpt"] == 2
        assert result["totalDelay"] <= 4

    async def test_brute_force_too_large(self, mock_mcp_context):
        text = "11 1 1 0\n0 10 1 1\n"
        assert "error" in await instances.brute_force_optimum(mock_mcp_context, text)

    async def test_list_residual_cycles(self, mock_mcp_context, fig1_text):
        result = await instances.list_residual_cycles(
            mock_mcp_context, fig1_text, [[0, 1, 2, 3], [6]]
        )
        assert result["count"] == 2
        by_key = {tuple(c["edges"]): c for c in result["cycles"]}
        assert by_key[(2, 4, 3)] == {"edges": [2, 4, 3], "reversed": [2, 3], "cost": 2, "delay": -1}
        assert by_key[(1, 5, 3, 2)]["reversed"] == [1, 2, 3]
        assert (by_key[(1, 5, 3, 2)]["cost"], by_key[(1, 5, 3, 2)]["delay"]) == (9, -5)

    async def test_list_residual_cycles_bad_paths(self, mock_mcp_context, fig1_text):
        result = await instances.list_residual_cycles(mock_mcp_context, fig1_text, [[99]])
        assert "error" in result
