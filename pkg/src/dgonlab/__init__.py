"""dgonlab: d-angulated surfaces, quivers with superpotential, Ginzburg
dg algebras, and machine verification that flip and mutation commute."""

__version__ = "0.1.0"
