"""Question answering over a movie fact base from restricted-English questions."""

__version__ = "0.1.0"
