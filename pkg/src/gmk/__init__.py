"""Exact tools for fuzzy bi-Gödel modal logic and its paraconsistent relatives."""
from .formula import parse, to_text, print_formula  # noqa: F401

__version__ = "0.1.0"
