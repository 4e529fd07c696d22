"""Desk-scale seq2seq trainer for the toy parallel corpora."""

__version__ = "0.1.0"
