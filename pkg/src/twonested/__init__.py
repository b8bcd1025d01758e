"""Recognition of 2-nested enriched matrices, with certificates."""

__version__ = "0.1.0"
