"""Unitary representations of the covering Poincare group, their covariant fields,
finite-group Mackey induction, and a numerical spin-statistics check."""

__version__ = "0.1.0"
