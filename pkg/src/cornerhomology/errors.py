"""Exception hierarchy shared by all modules."""


class CornerError(Exception):
    """Base class for all toolkit errors."""


class ParseError(CornerError):
    """Malformed input document."""


class DanglingFace(ParseError):
    """A face entry points at a cube id that does not exist."""


class DimensionMismatch(ParseError):
    """A face entry points at a cube of the wrong dimension."""


class InvalidInput(CornerError):
    """Input object fails its validation contract."""


class DimensionCap(CornerError):
    """Requested dimension exceeds the configured maximum."""


class ClosureBudgetExceeded(CornerError):
    """Composition closure grew past the configured morphism budget."""


class BadLevel(CornerError):
    """Boundary level k is not below the dimension of the morphism."""


class BadIndex(CornerError):
    """Operator index out of range for this degree."""


class NotComposable(CornerError):
    """Cubes do not satisfy the face-matching precondition of +_j."""


class NotFillable(CornerError):
    """Shell violates the parity/thinness condition for unique filling."""


class SourceMismatch(CornerError):
    """Filler interior does not match the non-thin shell faces."""


class NotBranching(CornerError):
    """Cube is not in the branching nerve."""


class NotNonContracting(CornerError):
    """Category has a morphism of dim >= 1 whose 1-boundaries collapse."""


class NotLengthAtMostOne(CornerError):
    """Category has a non-degenerate *_0 composite of positive-dim morphisms."""


class UnknownState(CornerError):
    """Bilocalization endpoint is not a 0-morphism of the category."""


class NotDecomposable(CornerError):
    """Cell set admits no pasting decomposition into atoms."""


class IncompatibleAssignment(CornerError):
    """Atom assignment produced an undefined composition during evaluation."""


class IllFormedComplex(CornerError):
    """Chain complex violates d∘d = 0 or the relator compatibility condition."""


class WitnessUnavailable(CornerError):
    """No constructive thin witness is implemented for this move."""
