"""
Exception hierarchy for qwonder
User mistakes, internal invariant breaks and failed verification suites map
onto distinct CLI exit codes and HTTP statuses.
"""


class QwonderError(Exception):
    """Base class for every error raised by the package"""

    exit_code = 2


class UserInputError(QwonderError, ValueError):
    """Bad input: unknown symbol, mismatched operands, unsupported request"""

    exit_code = 1


class ExpressionSyntaxError(UserInputError):
    """Parse failure annotated with a 1-based line and column"""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class InvariantViolation(QwonderError):
    """Something that must hold by construction did not hold"""

    exit_code = 2


class StepBudgetExceeded(InvariantViolation):
    """Rewriting did not terminate within the configured step budget"""


class VerificationFailure(QwonderError):
    """A named verification suite reported failing checks"""

    exit_code = 3

    def __init__(self, report):
        failed = [c['name'] for c in report.get('checks', []) if not c.get('passed')]
        super().__init__(f"Suite '{report.get('suite')}' failed: {', '.join(failed) or 'unknown check'}")
        self.report = report
