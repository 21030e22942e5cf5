"""Strong compactness toolkit for bilateral weighted shifts."""

__version__ = "0.1.0"
