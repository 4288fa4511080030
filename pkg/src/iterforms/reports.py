"""Result records shared by `integral` and `diffops`."""

from __future__ import annotations

from dataclasses import dataclass, field

from .forms import IteratedForm, format_element


@dataclass
class BerezinSection:
    """coefficient * zeta_k, an element of the berezinian B(Lambda_k) = Lambda_k zeta_k."""

    coefficient: IteratedForm

    def __eq__(self, other):
        if not isinstance(other, BerezinSection):
            return NotImplemented
        return self.coefficient == other.coefficient

    def __str__(self):
        return f"({format_element(self.coefficient)})*zeta"

    def to_json(self) -> dict:
        return {"coefficient": format_element(self.coefficient)}


@dataclass
class HomologyReport:
    params: dict
    dims: list
    witnesses: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"params": dict(self.params), "dims": list(self.dims), "witnesses": list(self.witnesses)}
        out.update(self.extra)
        return out
