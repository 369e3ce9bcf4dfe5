"""Exception hierarchy shared by every module."""

from __future__ import annotations


class KernelEquivError(ValueError):
    """Base class for all input and contract errors raised by the library."""

    code = "error"


class InputFileError(KernelEquivError):
    code = "io_error"


class ZeroInversion(KernelEquivError, ZeroDivisionError):
    code = "zero_inversion"


class ParseError(KernelEquivError):
    code = "parse_error"


class FieldMismatch(KernelEquivError):
    code = "field_mismatch"


class AsymmetryError(KernelEquivError):
    code = "asymmetry"

    def __init__(self, i: int, j: int):
        super().__init__(f"kernel is not symmetric at ({i}, {j})")
        self.i = i
        self.j = j


class ShapeMismatch(KernelEquivError):
    code = "shape_mismatch"


class LengthMismatch(KernelEquivError):
    code = "length_mismatch"


class DuplicatePoints(KernelEquivError):
    code = "duplicate_points"


class DisconnectedPair(KernelEquivError):
    code = "disconnected_pair"


class NotASign(KernelEquivError):
    code = "not_a_sign"

    def __init__(self, i: int, j: int):
        super().__init__(f"Q({i},{j}) / K({i},{j}) is not +1 or -1")
        self.i = i
        self.j = j


class UndefinedFactor(KernelEquivError):
    code = "undefined_factor"

    def __init__(self, i: int):
        super().__init__(f"path step {i} lies in the zero set")
        self.i = i


class NotEquivalentInput(KernelEquivError):
    code = "not_equivalent_input"


class SizeOutOfRange(KernelEquivError):
    code = "size_out_of_range"
