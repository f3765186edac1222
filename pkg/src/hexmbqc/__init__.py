"""Toolkit for a measurement-based quantum computer on hexagonal ion-trap arrays.

Submodules
----------
lattice            hexagonal trap array, rhombic sublattice layers, cluster edges
graphstate         stabilizer tableau, CPHASE conjugation, cluster verification
scheduler          constant-depth six-round entangling schedule
mbqc               adaptive measurement patterns on small clusters
ionization         multiphoton ionization rates, resonances, pulse irradiances
electron_dynamics  2D wavepacket propagation in the trap saddle, Mathieu stability
resources          factoring-scale operation counts and storage error budgets
cli                command-line entry points
"""

__version__ = "0.1.0"
