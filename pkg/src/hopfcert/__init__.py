"""Exact construction and certification of finite-dimensional Hopf algebras."""
__version__ = "0.1.0"
