"""Exact local and global complex-intersection forms of real curves and arrangements."""

__version__ = "0.1.0"
