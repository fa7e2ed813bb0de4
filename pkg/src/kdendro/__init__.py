"""Closed k-dendroidal trees, finite unital operads and set-level arity restriction."""

__version__ = "0.1.0"
