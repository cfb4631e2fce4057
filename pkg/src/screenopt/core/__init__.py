"""Numerical core: model matrices, criteria, exchange formulas, search and diagnostics."""
