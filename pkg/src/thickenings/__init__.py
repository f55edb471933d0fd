"""Exact graded commutative algebra for cohomology of thickenings."""

__version__ = "0.1.0"
