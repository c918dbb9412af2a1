"""Explainable fraud detection for transcribed telephone conversations.

Pipeline: transcripts -> marker counts + sentiment statistics -> four
small explainable classifiers -> stratified K-fold evaluation. Every
stage is deterministic given its inputs and seed.
"""

__version__ = "0.1.0"

from fraudlex.errors import FraudlexError

__all__ = ["FraudlexError", "__version__"]
