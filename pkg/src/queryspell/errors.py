"""Exception types shared across the speller."""


class SpellerError(Exception):
    """Base class for all speller failures."""


class LoadError(SpellerError):
    """A data file could not be read or parsed."""

    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:" if line is None else f"{path}:{line}:"
        super().__init__(f"{prefix} {message}".strip())


class ConfigError(SpellerError):
    """Invalid or inconsistent configuration / arguments."""


class ModelError(SpellerError):
    """A model artifact is malformed or incompatible."""


class TrainingError(SpellerError):
    """Training cannot proceed or diverged."""
