"""Exception types shared across the toolkit."""


class ValidationError(ValueError):
    """A parameter, configuration value, or input violates its contract."""


class FeasibilityError(ValueError):
    """A pulse design violates the reversal bound gamma * h * t_f >= pi.

    Carries the offending amplitude and duration plus the minimum feasible
    duration for that amplitude, so callers can report actionable messages.
    """

    def __init__(self, message, *, h=None, t_f=None, min_tf=None):
        super().__init__(message)
        self.h = h
        self.t_f = t_f
        self.min_tf = min_tf


class IntegrationError(RuntimeError):
    """The integrator produced a non-finite state.

    ``step_index`` is the zero-based step at which the state stopped being
    finite; ``pulse_number`` is the one-based pulse within the sequence.
    """

    def __init__(self, message, *, step_index=None, pulse_number=None):
        super().__init__(message)
        self.step_index = step_index
        self.pulse_number = pulse_number
