class ScaleModelError(Exception):
    """Base class for model and domain errors (CLI exit code 2)."""


class ConfigError(ScaleModelError):
    pass


class ArchitectureError(ScaleModelError):
    pass


class PartitionError(ScaleModelError):
    pass


class EmpiricalDataError(ScaleModelError):
    pass


class DegenerateModelError(ScaleModelError):
    pass
