"""Small numeric helpers shared by the drivers."""

import math


def lg(n: float) -> float:
    """Binary logarithm, floored at 1 so tiny graphs keep positive parameters."""
    return math.log2(max(n, 2))


def log_base(x: float, base: float) -> float:
    return math.log(max(x, 1.0)) / math.log(base)


def fmt(x) -> str:
    """Floats with 17 significant digits; everything else via str."""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)
