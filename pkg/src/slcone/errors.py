"""Exception hierarchy for slcone."""


class SLConeError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class SpectrumTruncatedError(SLConeError):
    """A computation needs eigenvalues beyond a spectrum's completeness bound."""

    exit_code = 3

    def __init__(self, needed, complete_up_to):
        self.needed = needed
        self.complete_up_to = complete_up_to
        super().__init__(
            f"spectrum truncated: need eigenvalues up to {needed}, "
            f"spectrum is complete only up to {complete_up_to}"
        )


class ResourceLimitError(SLConeError):
    """Lattice enumeration would visit more points than the configured cap."""

    exit_code = 4


class ConfigError(SLConeError, ValueError):
    """Malformed spectrum file, configuration file or descriptor."""

    exit_code = 5


class InconsistencyError(SLConeError):
    """Two routes to the same quantity disagree. Always a bug."""

    exit_code = 6
