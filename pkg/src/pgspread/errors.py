"""Exception hierarchy shared by the geometry, search and certification code."""


class GeometryError(Exception):
    pass


class ModulusMismatchError(GeometryError, ValueError):
    """Two field elements with different moduli were combined."""


class SerialRangeError(GeometryError, IndexError):
    pass


class InvalidLineError(GeometryError, ValueError):
    """Tuple is not a canonical Plücker vector of a line."""


class NotALineError(InvalidLineError):
    """Tuple violates one of the quadratic Plücker relations."""


class DataCorruptionError(GeometryError):
    """A shipped data table failed validation at load."""


class ResultFormatError(GeometryError, ValueError):
    """A result file is malformed; the message names the offending row."""


class DataInconsistencyError(GeometryError):
    pass
