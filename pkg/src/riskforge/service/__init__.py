"""HTTP scoring and explanation service."""

from .app import ServiceState, create_app, serve

__all__ = ["ServiceState", "create_app", "serve"]
