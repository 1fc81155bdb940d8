"""Exception types shared across the library."""


class ConvBialgError(Exception):
    """Base class for all library errors."""


class ChartMismatch(ConvBialgError):
    """Two values live on different charts."""


class ParentMismatch(ConvBialgError):
    """Two sections or algebra elements have different parent structures."""


class DomainError(ConvBialgError):
    """A point lies outside the relevant domain."""


class UnsupportedProduct(ConvBialgError):
    """The requested product leaves the representable coefficient class."""


class UnsupportedComposition(ConvBialgError):
    """The requested composition leaves the representable coefficient class."""


class NotComposable(ConvBialgError):
    """Two arrows or germs do not compose."""


class NotEtaleElement(ConvBialgError):
    """The antipode was applied to an element with a degree >= 1 term."""


class VerificationFailed(ConvBialgError):
    """A registration-time cross-check failed; carries a witness."""


class UnsupportedRegistry(ConvBialgError):
    """The bisection registry uses maps outside the supported class."""


class ParseError(ConvBialgError):
    """Malformed textual input; carries a position when available."""

    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos
