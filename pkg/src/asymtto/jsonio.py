"""Complex <-> JSON helpers.  Complex numbers are always ``[re, im]`` pairs."""
import numpy as np

from .errors import InputError


def enc(z):
    """Encode a complex scalar or array (any shape) as nested ``[re, im]`` lists."""
    a = np.asarray(z, dtype=complex)
    if a.ndim == 0:
        c = complex(a)
        return [float(c.real), float(c.imag)]
    return [enc(x) for x in a]


def dec(obj):
    """Inverse of ``enc``; returns a complex scalar or ``numpy`` array."""
    if _is_pair(obj):
        return complex(float(obj[0]), float(obj[1]))
    if isinstance(obj, list):
        return np.array([dec(x) for x in obj], dtype=complex)
    raise InputError(f"cannot decode complex value from {obj!r}")


def dec_matrix(obj):
    """Decode a row-major matrix; ``null`` entries become NaN."""
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise InputError("matrix must be a non-empty list of rows")
    width = len(obj[0])
    if any(len(r) != width for r in obj):
        raise InputError("matrix rows have unequal lengths")
    out = np.empty((len(obj), width), dtype=complex)
    for i, row in enumerate(obj):
        for j, v in enumerate(row):
            out[i, j] = complex(np.nan, np.nan) if v is None else dec(v)
    return out


def _is_pair(obj):
    return (
        isinstance(obj, (list, tuple))
        and len(obj) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
    )
