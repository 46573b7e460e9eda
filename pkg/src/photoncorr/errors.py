"""Exception types shared across the package."""


class UnsupportedOrderError(ValueError):
    """A moment or correlation order outside the supported range was requested."""


class EstimationError(ValueError):
    """A statistic cannot be formed from the given sample (e.g. zero arm mean)."""


class ConfigError(ValueError):
    """A sweep configuration file failed to parse or validate."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        parts = [message]
        if line is not None:
            parts.append(f"line {line}")
        if field is not None:
            parts.append(f"field {field!r}")
        super().__init__(": ".join(parts))


class ShotFileError(ValueError):
    """A shot-record file is corrupt or truncated."""

    def __init__(self, path, offset, message):
        self.path = str(path)
        self.offset = offset
        super().__init__(f"{path}: byte {offset}: {message}")
