"""Cost recurrences for a small functional language: evaluation, extraction and a
constructor-counting model."""

__version__ = "0.1.0"
