"""Exception hierarchy.

Every error carries a short machine-readable ``code`` used by the CLI when it
reports failures as JSON.
"""


class PulseModesError(Exception):
    code = "error"


class GridMismatch(PulseModesError):
    code = "grid_mismatch"


class DegenerateBasis(PulseModesError):
    code = "degenerate_basis"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class TruncationError(PulseModesError):
    code = "truncation"

    def __init__(self, message, norm_defect=None):
        super().__init__(message)
        self.norm_defect = norm_defect


class UncertaintyViolation(PulseModesError):
    code = "uncertainty_violation"


class DimensionMismatch(PulseModesError):
    code = "dimension_mismatch"


class NoCoherentAmplitude(PulseModesError):
    code = "no_coherent_amplitude"


class FactorizationError(PulseModesError):
    code = "factorization"


class ApproximationDomainError(PulseModesError):
    code = "approximation_domain"

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class InsufficientData(PulseModesError):
    code = "insufficient_data"


class DegenerateLO(PulseModesError):
    code = "degenerate_lo"


class SingularSchedule(PulseModesError):
    code = "singular_schedule"


class UndefinedQ(PulseModesError):
    code = "undefined_q"


class InvalidFilter(PulseModesError):
    code = "invalid_filter"


class MeasurementInvalid(PulseModesError):
    code = "measurement_invalid"


class ExhaustedBasis(PulseModesError):
    code = "exhausted_basis"

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BasisMismatch(PulseModesError):
    code = "basis_mismatch"


class FormatError(PulseModesError):
    code = "format"
