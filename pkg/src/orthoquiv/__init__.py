"""Quiver local models and trace invariants for moduli of orthogonal and symplectic bundles."""

__version__ = "0.1.0"
