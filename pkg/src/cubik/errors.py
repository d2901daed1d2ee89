"""Exception hierarchy.  Every domain error carries a short machine-readable ``code``."""


class CubikError(Exception):
    code = "CubikError"

    def __init__(self, message, **detail):
        super().__init__(message)
        self.detail = detail

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        if self.detail:
            out["detail"] = self.detail
        return out


class InvalidInput(CubikError):
    code = "InvalidInput"


class InvalidPocset(CubikError):
    code = "InvalidPocset"


class InstanceTooLarge(CubikError):
    code = "InstanceTooLarge"


class InconsistentExtension(CubikError):
    code = "InconsistentExtension"


class NotMedian(CubikError):
    code = "NotMedian"


class CorruptLabels(CubikError):
    code = "CorruptLabels"


class NotConvex(CubikError):
    code = "NotConvex"


class PreconditionError(CubikError):
    code = "PreconditionError"


class NotAutomorphism(CubikError):
    code = "NotAutomorphism"


class DegenerateQuotient(CubikError):
    code = "DegenerateQuotient"


class InvalidComplex(CubikError):
    code = "InvalidComplex"


class RadiusTooSmall(CubikError):
    code = "RadiusTooSmall"


class InvariantViolation(CubikError):
    """An internal consistency check failed; this always indicates a bug."""

    code = "InvariantViolation"
