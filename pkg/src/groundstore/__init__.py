"""Executable model of full ground store: worlds, heaplets, hiding, the store monad,
an interpreter for the program language and a bounded checker for the logic."""

__version__ = "0.1.0"
