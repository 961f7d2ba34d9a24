"""Domain exceptions shared by every sub-package.

All of them derive from ValueError so the CLI and the HTTP routers can catch a
single type and still report the specific reason.
"""


class MimoSimError(ValueError):
    """Base class for rejected inputs."""


class UnsupportedModulationError(MimoSimError):
    pass


class DimensionError(MimoSimError):
    pass


class OracleCapExceededError(MimoSimError):
    pass


class SingularFrameError(MimoSimError):
    pass


class NotBracketedError(MimoSimError):
    pass


class ConfigError(MimoSimError):
    """Invalid configuration key or value; message starts with the field name."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")
