"""HTTP API layer: FastAPI app factory and shared service state."""

from cgraph.service.app import API_PREFIX, create_app
from cgraph.service.state import ServiceState

__all__ = ["API_PREFIX", "ServiceState", "create_app"]
