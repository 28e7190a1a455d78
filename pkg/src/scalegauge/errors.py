"""Exception hierarchy shared by every scalegauge module."""


class ScaleGaugeError(Exception):
    pass


class ZeroScale(ScaleGaugeError, ValueError):
    pass


class StructureMismatch(ScaleGaugeError, ValueError):
    pass


class DivisionByVacuum(ScaleGaugeError, ZeroDivisionError):
    pass


class NotInBaseSet(ScaleGaugeError, ValueError):
    pass


class SiteMismatch(ScaleGaugeError, ValueError):
    pass


class NonFiniteValue(ScaleGaugeError, ArithmeticError):
    pass


class DimensionMismatch(ScaleGaugeError, ValueError):
    pass


class ShapeMismatch(ScaleGaugeError, ValueError):
    pass


class PathOutOfBounds(ScaleGaugeError, IndexError):
    pass


class NotIntegrable(ScaleGaugeError, ValueError):
    pass


class ZeroCoupling(ScaleGaugeError, ValueError):
    pass


class UnknownGenerator(ScaleGaugeError, ValueError):
    pass


class ConfigError(ScaleGaugeError, ValueError):
    """Raised for invalid run configurations; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
