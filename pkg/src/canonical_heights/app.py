# src/canonical_heights/app.py
import logging
from collections.abc import AsyncIterator
from contextlib import asynccontextmanager

from dotenv import load_dotenv
from fastmcp import FastMCP

from canonical_heights.config import get_settings

# Central server instance; tool modules import it to register themselves.
load_dotenv()

logger = logging.getLogger(__name__)


@asynccontextmanager
async def app_lifespan(server: FastMCP) -> AsyncIterator[None]:
    """Loads settings up front so a bad environment fails at startup, not on the first call."""
    settings = get_settings()
    logger.info(
        "Height server starting (tol=%s, real n_max=%s, p-adic n_max=%s)",
        settings.tol,
        settings.real_max_iter,
        settings.padic_max_iter,
    )
    yield
    logger.info("Height server shutting down...")


mcp = FastMCP(
    name="Canonical Heights Server",
    instructions=(
        "Tools for canonical heights of rational points on elliptic curves "
        "y^2 + a1xy + a3y = x^3 + a2x^2 + a4x + a6. Pass rationals as strings like '3' or '-7/4'."
    ),
    lifespan=app_lifespan,
)
