"""Exception types shared across the simulator."""


class InvalidParameterError(ValueError):
    """A model parameter or input is outside its legal range."""


class GenerationError(RuntimeError):
    """Network generation could not reach its structural target."""

    def __init__(self, message, achieved_cc=None):
        super().__init__(message)
        self.achieved_cc = achieved_cc


class RunTimeoutError(RuntimeError):
    """A run exceeded the hard step cap without converging."""

    def __init__(self, message, partial_state=None):
        super().__init__(message)
        self.partial_state = partial_state
