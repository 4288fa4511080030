"""Resource bounds shared by the verifiers; exceeding one raises ResourceLimitError."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ResourceLimitError


@dataclass
class Limits:
    max_nu: int = 64
    max_block_candidates: int = 2_000_000
    max_basis: int = 50_000
    max_extra_weight: int = 2


LIMITS = Limits()


def check(name: str, value: int, bound: int):
    if value > bound:
        raise ResourceLimitError(f"{name} = {value} exceeds the configured limit {bound}",
                                 bound=name, value=value, limit=bound)
