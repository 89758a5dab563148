"""Exception hierarchy for the burnside package.

Library code raises these; only the CLI turns them into exit codes.
"""


class BurnsideError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(BurnsideError):
    pass


class GroupSpecError(BurnsideError):
    """A group spec string does not parse."""


class OrderBoundError(BurnsideError):
    def __init__(self, order, bound, what="group"):
        super().__init__(f"{what} order {order} exceeds the configured bound {bound}")
        self.order = order
        self.bound = bound


class GroupAxiomError(BurnsideError):
    pass


class NotSubgroupError(BurnsideError):
    pass


class NotNormalError(BurnsideError):
    def __init__(self, witness, element):
        super().__init__(
            f"subgroup is not normal: conjugating element {element} by {witness} leaves it"
        )
        self.witness = witness
        self.element = element


class HomomorphismError(BurnsideError):
    pass


class FamilyError(BurnsideError):
    pass


class MismatchedGroupError(BurnsideError):
    """Two objects that must share a parent group do not."""


class ConsistencyError(BurnsideError):
    """An internal cross-check between two computations failed."""


class ClosureViolation(ConsistencyError):
    pass


class UnlabeledBasisError(BurnsideError):
    pass


class ModuleStructureError(BurnsideError):
    pass


class TowerDepthError(BurnsideError):
    pass


class DecompositionKindError(BurnsideError):
    pass
