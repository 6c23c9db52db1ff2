"""HTTP service wrapping the sharing toolkit."""

from .app import create_app

__all__ = ["create_app"]
