"""Global numeric tolerance policy."""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    membership: float = 1e-9
    identity: float = 1e-10
    roundtrip: float = 1e-12
    symmetry: float = 1e-9


DEFAULT = Tolerances()
_current = DEFAULT


def tolerances() -> Tolerances:
    return _current


def set_tolerances(**overrides) -> Tolerances:
    """Replace the process-wide defaults; returns the previous policy."""
    global _current
    previous = _current
    _current = replace(_current, **overrides)
    return previous
