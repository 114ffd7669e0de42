class RadoError(Exception):
    """Base class for every error raised by the radopr engines."""


class PolynomialSyntaxError(RadoError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at column {position}")
        self.position = position


class UnknownVariableError(RadoError):
    pass


class NegativeExponentError(RadoError):
    pass


class DimensionMismatchError(RadoError):
    pass


class ZeroPolynomialError(RadoError):
    pass


class PreconditionError(RadoError):
    pass


class SupportTooLargeError(RadoError):
    pass


class BudgetExceededError(RadoError):
    pass


class CertificateError(RadoError):
    pass


class CorpusSchemaError(RadoError):
    pass
