"""Exception hierarchy. The CLI maps each family to an exit code."""


class IcselError(Exception):
    pass


class ConfigError(IcselError, ValueError):
    """Bad configuration file or CLI flag (exit code 2)."""


class DataError(IcselError):
    """Input data could not be ingested (exit code 3)."""


class PgmHeaderError(DataError):
    pass


class PgmTruncatedError(DataError):
    pass


class PgmMagicError(DataError):
    pass


class NumericError(IcselError, ArithmeticError):
    """A fit or simulation failed numerically (exit code 4)."""


class DomainError(NumericError, ValueError):
    """Sample size too small for the requested log iterate."""


class SingularSystemError(NumericError):
    pass


class UnstableModelError(NumericError):
    def __init__(self, min_modulus):
        self.min_modulus = float(min_modulus)
        super().__init__(
            f"AR polynomial has a root of modulus {self.min_modulus:.6g} <= 1"
        )


class DegenerateFitError(NumericError):
    pass
