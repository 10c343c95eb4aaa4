"""Reasoning about uncertainty over Belnap–Dunn logic.

Inner layer: four-valued event logic (syntax, entailment, normal forms,
state semantics).  Measure layer: belief/plausibility on finite De Morgan
lattices, mass combination, non-standard probabilities.  Outer layer:
two-dimensional Lukasiewicz logics and two-layered modal languages, with
linear-programming satisfiability for weight/belief inequalities and
translations between the inequality and modal presentations.
"""

__version__ = "0.1.0"
