"""Library-wide numerical tolerances.

Defaults can be overridden through the ``PULSEMODES_TOLERANCE`` environment
variable, either as a bare float (orthonormality tolerance) or as a
comma-separated list such as ``orthonormality=1e-7,normalization=1e-9``.
"""

import os
from dataclasses import dataclass, replace

ENV_VAR = "PULSEMODES_TOLERANCE"


@dataclass(frozen=True)
class Tolerances:
    orthonormality: float = 1e-8
    normalization: float = 1e-10
    symmetry: float = 1e-12
    uncertainty: float = 1e-9
    phase: float = 1e-12  # realness / imaginariness detection
    sign: float = 1e-12


def _parse(text):
    text = text.strip()
    if not text:
        return {}
    try:
        return {"orthonormality": float(text)}
    except ValueError:
        pass
    fields = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in Tolerances.__dataclass_fields__:
            raise ValueError(f"unknown tolerance {key!r} in {ENV_VAR}")
        fields[key] = float(value)
    return fields


def load_tolerances(environ=None):
    environ = os.environ if environ is None else environ
    return replace(Tolerances(), **_parse(environ.get(ENV_VAR, "")))


TOL = load_tolerances()
