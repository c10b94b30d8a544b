"""Exception types raised across the package."""


class InsufficientPeriodicityError(Exception):
    """Signal has no usable periodic structure for the requested analysis."""


class InsufficientDataError(Exception):
    """Too few samples or pulses to compute the requested quantity."""


class UnsupportedFormatError(Exception):
    """Audio file exists but is not a format this package reads."""


class CannotNormalizeError(Exception):
    """Signal level cannot be adjusted to the requested target (e.g. silence)."""


class StartupError(Exception):
    """Real-time session could not be brought up (device, port, or config)."""


class ModelMismatchError(Exception):
    """Pulse models are structurally incompatible for the requested operation."""
