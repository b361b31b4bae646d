"""
qwonder: exact computations in quantum coordinate rings of SL2, its
Vinberg monoid and the wonderful compactification.
"""
from .contexts import describe, evaluate
from .errors import (ExpressionSyntaxError, InvariantViolation, QwonderError, StepBudgetExceeded,
                     UserInputError, VerificationFailure)
from .presentations import get_presentation

__version__ = '1.0.0'

__all__ = [
    'describe',
    'evaluate',
    'get_presentation',
    'ExpressionSyntaxError',
    'InvariantViolation',
    'QwonderError',
    'StepBudgetExceeded',
    'UserInputError',
    'VerificationFailure',
]
