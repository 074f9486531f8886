"""Exception hierarchy.

Every error carries the process exit code the CLI maps it to:
1 for validation failures, 2 for mathematical obstructions and
3 for internal invariant breaches.
"""


class PVKError(Exception):
    exit_code = 1


class ValidationError(PVKError):
    exit_code = 1


class ParseError(ValidationError):
    pass


class SchemaError(ValidationError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class CrossRefError(SchemaError):
    pass


class JacobiViolation(ValidationError):
    """Structure constants or a bivector fail the Jacobi identity."""

    def __init__(self, triple, value):
        super().__init__(f"Jacobi identity fails on {triple}: {value}")
        self.triple = triple
        self.value = value


class ModuleViolation(ValidationError):
    def __init__(self, pair, message="action is not a representation"):
        super().__init__(f"{message} on basis pair {pair}")
        self.pair = pair


class AlgebraMismatch(ValidationError):
    pass


class NotFlat(ValidationError):
    """The Maurer-Cartan residual of a connection datum is nonzero."""


class NonLinearStructure(ValidationError):
    pass


class NotSemisimple(ValidationError):
    pass


class NotPoissonField(ValidationError):
    pass


class NonInvertibleConstantTerm(ValidationError):
    pass


class NotACocycle(ValidationError):
    """A cochain expected to be closed is not; ``witness`` is the failing pair."""

    def __init__(self, witness, value=None, degree=None):
        where = f" at degree {degree}" if degree is not None else ""
        super().__init__(f"cochain is not closed{where}; witness {witness}")
        self.witness = witness
        self.value = value
        self.degree = degree


class WitnessFails(ValidationError):
    def __init__(self, what, index, detail=None):
        super().__init__(f"{what} fails for coordinate form dx{index + 1}")
        self.what = what
        self.index = index
        self.detail = detail


class ObstructionFound(PVKError):
    """A closed cochain that is not exact: the normal form cannot be reached."""

    exit_code = 2

    def __init__(self, cocycle, degree=None):
        where = f" at degree {degree}" if degree is not None else ""
        super().__init__(f"closed cochain is not exact{where}")
        self.cocycle = cocycle
        self.degree = degree


class UnitaryObstruction(ObstructionFound):
    pass


class InternalError(PVKError):
    exit_code = 3


class IdentityFails(InternalError):
    pass
