"""Exception hierarchy shared by every module."""


class MultibrotError(Exception):
    """Base class; the CLI maps any subclass to exit status 1."""

    kind = "error"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class NotInvariantError(MultibrotError):
    kind = "not-invariant"


class NotRotationSetError(MultibrotError):
    kind = "not-a-rotation-set"


class UnrealizableError(MultibrotError):
    kind = "unrealizable"


class MalformedDeploymentError(MultibrotError):
    kind = "malformed-deployment"


class InstanceTooLargeError(MultibrotError):
    kind = "instance-too-large"


class TruncationError(MultibrotError):
    kind = "truncation-too-shallow"


class PointInsideError(MultibrotError):
    kind = "point-inside"


class BranchTrackingError(MultibrotError):
    kind = "branch-tracking-failure"


class NewtonDivergenceError(MultibrotError):
    kind = "newton-divergence"

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class LandingMismatchError(MultibrotError):
    kind = "estimates-disagree"


class NotConvergedError(MultibrotError):
    kind = "not-converged"


class PotentialFloorError(MultibrotError):
    kind = "potential-floor-below-critical"


class UndecidableError(MultibrotError):
    kind = "too-close-to-decide"


class NoParabolicMatchError(MultibrotError):
    kind = "no-matching-parabolic-parameter"


class DegreeCapError(MultibrotError):
    kind = "degree-cap-exceeded"


class RootFindingError(MultibrotError):
    kind = "root-finder-non-convergence"


class BudgetExceededError(MultibrotError):
    kind = "budget-exceeded"


class EliminationError(MultibrotError):
    kind = "degenerate-elimination"
