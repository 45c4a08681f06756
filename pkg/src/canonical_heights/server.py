# server.py (FastMCP server entrypoint, stdio transport)
import logging

from dotenv import load_dotenv

from canonical_heights.app import mcp

# Importing the tool modules registers their tools on the shared mcp instance.
from canonical_heights.tools import heights  # noqa: F401

load_dotenv()

logger = logging.getLogger(__name__)


def main() -> None:
    mcp.run()


if __name__ == "__main__":
    main()
