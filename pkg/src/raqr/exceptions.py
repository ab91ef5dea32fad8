"""Exception hierarchy shared across the package."""


class RAQRError(Exception):
    """Base class for all package errors."""


class MissingDataError(RAQRError, KeyError):
    """Species data has no quantum-defect series for the requested (l, j)."""


class NumericalFailureError(RAQRError, ArithmeticError):
    """A numerical routine failed to converge or produced non-finite output."""


class LinearStarkError(RAQRError, ValueError):
    """Quadratic Stark analysis requested for a degenerate (linear-Stark) state."""


class IllPosedError(RAQRError, ValueError):
    """Steady state is not unique (the generator kernel is degenerate)."""


class BelowATSThresholdError(RAQRError, ValueError):
    """Fewer than two transmission peaks: the trace is in the standard EIT regime."""


class ZeroGainBiasError(RAQRError, ValueError):
    """Superheterodyne bias point has a vanishing small-signal slope."""


class ImageOverlapError(RAQRError, ValueError):
    """Intermediate frequency too low for the lowpass bandwidth."""


class AliasingConfigError(RAQRError, ValueError):
    """Sampling rate below the Nyquist rate."""


class UnidentifiableError(RAQRError, ValueError):
    """Parameter cannot be identified from the given array geometry."""


class EstimationFailureError(RAQRError, RuntimeError):
    """Estimator input is degenerate."""


class ConfigError(RAQRError, ValueError):
    """Invalid configuration file or override."""
