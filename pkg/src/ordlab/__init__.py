"""Ordinal notation systems, proof-theoretic dilators and omega-proof search."""
