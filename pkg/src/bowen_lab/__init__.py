"""Exact separation, spanning and covering numbers of finite metric dynamical systems."""

__version__ = "0.1.0"
