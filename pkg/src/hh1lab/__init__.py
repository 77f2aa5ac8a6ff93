"""hh1lab: first Hochschild cohomology of modular group algebras and
finite category algebras, with block decompositions and cross-checking
oracles, at desk scale."""

__version__ = "0.1.0"
