"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class StarkSingularity(DomainError):
    """The ac Stark expression hits one of its resonance poles."""


class IntegrationError(RuntimeError):
    """The adaptive integrator could not reach the end of the pulse window."""

    def __init__(self, message, t_last=None):
        super().__init__(message)
        self.t_last = t_last


class UnsupportedRepresentation(TypeError):
    """Raised when an operation needs pure states but got something else."""


class ConfigError(ValueError):
    def __init__(self, message, field=None, line=None):
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
        self.message = message
        self.field = field
        self.line = line
