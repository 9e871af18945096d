"""Numerical lab for quantum-to-classical randomness extractors.

Exact constructions (finite fields, MUB families, pairwise independent
permutations, Clifford 2-designs), extractor distance evaluation against
closed-form bounds, conditional entropies with a built-in min-entropy
SDP, entropic uncertainty relations with quantum side information, and
weak-string-erasure security parameter calculators.
"""

__version__ = "0.1.0"
