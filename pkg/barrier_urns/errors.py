from typing import Iterable, Tuple


class BarrierUrnsError(Exception):
    """Base class of every error raised by barrier_urns"""


class InvalidBarriersError(BarrierUrnsError):
    """Raised if a barrier pair does not satisfy 0 <= lower < upper <= 1"""
    def __init__(self, lower, upper, reason):
        msg = f"Invalid barriers ({lower}, {upper})! {reason}"
        super().__init__(msg)


class InvalidUrnParameterError(BarrierUrnsError):
    """Raised if an initial urn composition is invalid"""
    def __init__(self, name, value, reason):
        msg = f"Invalid urn parameter {name}={value}! {reason}"
        super().__init__(msg)


class InvalidDrawError(BarrierUrnsError):
    """Raised if a step draw is outside its domain"""


class InvalidSpecError(BarrierUrnsError):
    """Raised if a reinforcement or barrier specification is invalid"""
    def __init__(self, family, reason):
        msg = f"Invalid {family} specification! {reason}"
        super().__init__(msg)


class ConfigValidationError(BarrierUrnsError):
    """Raised if an experiment config fails validation, with one entry per offending field"""
    def __init__(self, errors: Iterable[Tuple[str, str]]):
        self.errors = list(errors)
        details = '; '.join(f'{path or "<root>"}: {message}' for path, message in self.errors)
        super().__init__(f"Invalid config! {details}")


class ConfigFileError(BarrierUrnsError):
    """Raised if a config file cannot be read or is not valid JSON"""
    def __init__(self, path, reason):
        msg = f"Cannot load config file {path}! {reason}"
        super().__init__(msg)


class HypothesisViolationError(BarrierUrnsError):
    """Raised if a suite is run on a model that violates its convergence hypotheses"""


class PathIntegrityError(BarrierUrnsError):
    """Raised if a path record cannot be reproduced from its own draws"""


class CapacityExceededError(BarrierUrnsError):
    """Raised if an exact enumeration would exceed its state-space guard"""
    def __init__(self, what, value, limit):
        msg = f"Enumeration needs {value} {what}, more than the limit of {limit}!"
        super().__init__(msg)


class NotEnumerableError(BarrierUrnsError):
    """Raised if a specification has no finite support to enumerate"""


class EmptySampleError(BarrierUrnsError):
    """Raised if a statistic is requested on an empty sample"""


class DegeneratePrefixError(BarrierUrnsError):
    """Raised if a frozen prefix has a zero limiting variance"""


class MisconfigurationError(BarrierUrnsError):
    """Raised if a suite is given parameters it cannot work with"""


class NegativeVarianceError(BarrierUrnsError):
    """Raised if a variance estimate is negative beyond tolerance"""
    def __init__(self, variance, tolerance):
        msg = f"Negative variance estimate {variance} (tolerance {tolerance})!"
        super().__init__(msg)
