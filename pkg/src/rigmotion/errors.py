"""Exception types shared across the pipeline stages."""


class PipelineError(Exception):
    """Base class for data and I/O failures raised by pipeline stages."""


class ImageLoadError(PipelineError):
    """The input image is unreadable or not a supported format."""


class KeypointError(PipelineError):
    """Keypoint input is missing, malformed, or out of the image bounds."""


class NoForegroundError(PipelineError):
    """Bounds detection found no foreground pixels at all."""


class CommandFileError(PipelineError):
    """A command.txt line could not be parsed."""


class ConfigError(PipelineError):
    """Pipeline configuration is invalid before any stage runs."""
