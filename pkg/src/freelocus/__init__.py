"""Exact toolkit for free singular loci of monic matrix pencils,
noncommutative rational functions and their domains."""

__version__ = "0.1.0"
