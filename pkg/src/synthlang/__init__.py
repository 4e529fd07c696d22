"""Synthetic word-order / case-marking parallel corpora and MT evaluation."""

__version__ = "0.1.0"
