"""Question-answer state construction and verification.

The package builds quantum state vectors from (question, sharp answer) pairs
in two settings: spin systems, where the question is "what is the component
of angular momentum along direction a?" and the answer is an eigenvalue, and
finite symmetry models, where questions are conceptual variables defined on a
finite point set carrying a permutation symmetry.  Every structural claim the
construction relies on is checked numerically and reported through a common
report record.
"""

from .report import VerificationReport

__all__ = ["VerificationReport"]
__version__ = "0.1.0"
