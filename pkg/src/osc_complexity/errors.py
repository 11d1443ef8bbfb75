"""Exception types raised by the library."""


class OscillatorGroupError(Exception):
    """Base class for all library errors."""


class NotInExponentialImage(OscillatorGroupError, ValueError):
    """The element lies on a punctured hyperplane alpha = 2 pi k (k != 0) with q^2 + p^2 > 0."""


class DegenerateAutomorphism(OscillatorGroupError, ValueError):
    pass


class InvalidMetric(OscillatorGroupError, ValueError):
    pass


class PoleAtRoot(OscillatorGroupError, ValueError):
    """Evaluation requested at a pole nu = 2 pi k, k != 0."""


class SingularRoot(OscillatorGroupError, ValueError):
    """A boundary-problem root coincides with (or converges onto) a pole."""


class NoConvergence(OscillatorGroupError, RuntimeError):
    pass


class EmptyWindow(OscillatorGroupError, ValueError):
    pass


class WindowCapExceeded(OscillatorGroupError, RuntimeError):
    """The branch scan hit its cap before the truncation bound certified the minimum."""


class NegativeAmplitudeSquared(OscillatorGroupError, ValueError):
    pass


class InvalidRepresentation(OscillatorGroupError, ValueError):
    pass
