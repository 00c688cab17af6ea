"""galdesk: exact calculators for root-datum combinatorics, tame local Galois
cohomology with duality, Selmer-system linear algebra, dimension-formula
numerology, and precision-tracked p-adic weight-space analysis."""

__version__ = "0.1.0"
