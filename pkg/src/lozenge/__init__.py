"""Lozenge tilings of triangular regions and the weak Lefschetz property of monomial algebras."""
