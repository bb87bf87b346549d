"""Exception types shared across the package."""


class ConcatHierError(Exception):
    """Base class for all errors raised by this package."""


class RegexSyntaxError(ConcatHierError, SyntaxError):
    """Malformed regular expression; ``pos`` is the offending offset."""

    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownLetter(ConcatHierError, ValueError):
    pass


class AlphabetMismatch(ConcatHierError, ValueError):
    pass


class UnknownBasis(ConcatHierError, ValueError):
    pass


class BudgetExceeded(ConcatHierError):
    """A bounded construction grew past its element budget."""

    def __init__(self, what, size, budget):
        super().__init__(f"{what}: {size} elements exceeds budget {budget}")
        self.what = what
        self.size = size
        self.budget = budget


class NotLattice(ConcatHierError, ValueError):
    pass


class NotQuotienting(ConcatHierError, ValueError):
    pass


class NotInBasis(ConcatHierError, ValueError):
    pass


class NotInClass(ConcatHierError, ValueError):
    pass


class TagViolation(ConcatHierError, ValueError):
    pass


class PreconditionViolated(ConcatHierError, ValueError):
    pass


class NotSigmaN(ConcatHierError, ValueError):
    pass


class FormulaSyntaxError(ConcatHierError, SyntaxError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownPredicate(ConcatHierError, ValueError):
    pass


class UnboundVariable(ConcatHierError, ValueError):
    pass


class BadEncoding(ConcatHierError, ValueError):
    pass


class UnknownLanguage(UnknownPredicate):
    """A formula names a language that is not a member of the class."""


class NotInFragment(ConcatHierError, ValueError):
    """A sentence lies outside the requested quantifier-alternation fragment."""


class EpsilonNotInBasis(PreconditionViolated):
    """An operation needs {ε} among the basis members."""


class AlphabetTooSmall(PreconditionViolated):
    """An operation needs more letters than the alphabet has."""
