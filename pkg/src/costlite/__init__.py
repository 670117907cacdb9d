"""Cost-based reasoning for weighted description-logic knowledge bases."""

__version__ = "0.1.0"
