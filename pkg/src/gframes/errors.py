"""Exception types shared across the package."""


class GFrameError(Exception):
    """Base class for every error raised by this library."""


class NotPositive(GFrameError):
    """An algebra element required to be positive semidefinite is not."""


class NotHermitian(GFrameError):
    """An operator required to be Hermitian is not, within tolerance."""


class NotPositiveDefinite(GFrameError):
    """An operator required to be strictly positive is not."""


class NotSurjective(GFrameError):
    """An operator required to be surjective is rank deficient."""


class NotAFrame(GFrameError):
    """A family whose lower frame bound is required to be positive has none."""


class CommutationViolated(GFrameError):
    """A control pair fails the commutation certificate a computation relies on."""


class MeasureMismatch(GFrameError):
    """Two families do not share the same weighted point structure."""


class PreconditionViolated(GFrameError):
    """A named hypothesis of a transfer routine does not hold for the inputs."""


class InvalidSpec(GFrameError):
    """A generator specification is out of range or internally inconsistent."""


class SchemaError(GFrameError):
    """A JSON document does not match the expected schema.

    ``path`` points at the first offending location, e.g. ``points[0].weight``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)
