"""Exact torsion-class and silting-mutation computations over quiver algebras."""
