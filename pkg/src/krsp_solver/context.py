"""Lifespan management for the kRSP tool server."""

import logging
from collections.abc import AsyncIterator
from contextlib import asynccontextmanager
from dataclasses import dataclass

from cachetools import TTLCache
from mcp.server.fastmcp import FastMCP

from krsp_solver.bicameral.search import clear_aux_cache
from krsp_solver.config import KrspSettings, settings

logger = logging.getLogger(__name__)


@dataclass
class AppContext:
    """Application context with shared resources.

    Created during server startup and made available to all tool handlers
    via the request context.
    """

    settings: KrspSettings
    cache: TTLCache


@asynccontextmanager
async def create_app_lifespan(
    server: FastMCP,
) -> AsyncIterator[AppContext]:
    """Create the solution cache on startup and drop solver caches on shutdown.

    Args:
        server: FastMCP server instance

    Yields:
        AppContext with initialized resources
    """
    logger.info("Initializing kRSP tool server")
    cache: TTLCache = TTLCache(maxsize=settings.result_cache_size, ttl=settings.result_cache_ttl)
    ctx = AppContext(settings=settings, cache=cache)
    try:
        yield ctx
    finally:
        logger.info("Shutting down kRSP tool server")
        cache.clear()
        clear_aux_cache()
