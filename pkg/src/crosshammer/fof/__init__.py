"""First-order translation and prover driving."""
from .translate import FofFormula, FofProblem, TranslationError, sanitize, translate

__all__ = ["FofFormula", "FofProblem", "TranslationError", "sanitize", "translate"]
