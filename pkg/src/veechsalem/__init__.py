"""Salem elements of triangle groups and the dynamics of their conjugate Veech groups."""

__version__ = "0.1.0"
