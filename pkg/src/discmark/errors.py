"""Exception types shared across the package."""


class DiscmarkError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(DiscmarkError):
    """Invalid configuration value or unusable config file."""


class FileFormatError(DiscmarkError):
    """A data file does not follow its declared schema."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


class UnknownLabelError(DiscmarkError):
    """A label/marker name falls outside the known vocabulary."""
