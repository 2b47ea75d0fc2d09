"""Exception types raised across the package.

Every error derives from ``IbrsError`` so callers (and the CLI) can map
input problems to a single exit code.
"""


class IbrsError(ValueError):
    pass


# structure model
class OriginNotPoint(IbrsError):
    pass


class DanglingReference(IbrsError):
    pass


class CyclicTargets(IbrsError):
    pass


class LevelBoundExceeded(IbrsError):
    pass


class UnknownArrow(IbrsError):
    pass


class NotASubset(IbrsError):
    pass


class NotNested(IbrsError):
    pass


class DomainMiss(IbrsError):
    pass


class NotLevelOne(IbrsError):
    pass


# constructions and tables
class EmptyFactor(IbrsError):
    pass


class PreconditionViolated(IbrsError):
    pass


class BoundsTooLarge(IbrsError):
    pass


class UnknownProperty(IbrsError):
    pass


class SearchSpaceExceeded(IbrsError):
    pass


# logic
class FormulaSyntaxError(IbrsError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class AtomOutsideLanguage(IbrsError):
    pass


class CarrierMismatch(IbrsError):
    pass


class UnknownRule(IbrsError):
    pass


class OracleInconsistent(IbrsError):
    pass


# interpretations
class MissingLabel(IbrsError):
    pass


class MissingDistance(IbrsError):
    pass


class NonConvergence(IbrsError):
    pass


# circuits
class InvalidNetlist(IbrsError):
    pass


class HorizonTooSmall(IbrsError):
    pass
