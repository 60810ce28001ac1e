"""Exception types shared across the package."""


class DimensionError(ValueError):
    """A matrix or system has dimensions that do not fit the operation."""


class WireMismatchError(TypeError):
    """Two diagram pieces were joined along wires of different types."""


class ReconstructionError(ArithmeticError):
    """Channel tomography hit a singular or inconsistent linear system."""


class DiagramSyntaxError(ValueError):
    """Source text for a diagram failed to parse."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class DiagramTypeError(TypeError):
    """A parsed diagram is wired inconsistently with its declarations."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.col = col
