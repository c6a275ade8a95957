"""Closed-form time constant of the directed model with two-point weights."""

import math

from .errors import DomainError


def exact_lambda_directed_twopoint(lambda0: float, kappa: float, p: float, v: float) -> float:
    """Directed time constant when horizontal weights are ``lambda0`` w.p. ``p``
    and ``kappa`` otherwise (vertical weights 1, up/right paths).

    Above the critical slope ``q/p`` the cheap edges alone suffice and the
    value is ``lambda0 + v``; below it the excess is
    ``(kappa - lambda0) (sqrt(q) - sqrt(p v))^2``.
    """
    if not kappa > lambda0 >= 0:
        raise DomainError(f"need kappa > lambda0 >= 0, got lambda0={lambda0}, kappa={kappa}")
    if not 0 < p < 1:
        raise DomainError(f"need p in (0, 1), got {p}")
    if v < 0:
        raise DomainError(f"need v >= 0, got {v}")
    q = 1.0 - p
    if v > q / p:
        return lambda0 + v
    return lambda0 + v + (kappa - lambda0) * (math.sqrt(q) - math.sqrt(p * v)) ** 2
