"""Coordinate atoms of the phase-bundle algebra.

Five coordinate kinds: base points x^mu, jet slots phi_mu, momentum slots
p^{mu|lambda} (optionally decorated with base derivatives, the jets of
momenta), Lagrange multipliers and named parameters.  The fixed total order
Base < Jet < Momentum < Multiplier < Parameter makes canonical forms
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .multiindex import MultiIndex

_RANK_BASE = 0
_RANK_JET = 1
_RANK_MOMENTUM = 2
_RANK_MULTIPLIER = 3
_RANK_PARAMETER = 4


@dataclass(frozen=True)
class Base:
    """Base coordinate x^mu, 1-based direction."""

    mu: int

    def sort_key(self):
        return (_RANK_BASE, "", (self.mu,), (), 0, ())

    def __repr__(self):
        return f"x{self.mu}"


@dataclass(frozen=True)
class Jet:
    """Jet coordinate phi_mi of a named field; mi = () order means the field."""

    fld: str
    mi: MultiIndex

    def sort_key(self):
        return (_RANK_JET, self.fld, (self.mi.order,) + tuple(self.mi), (), 0, ())

    def __repr__(self):
        return f"{self.fld}[{','.join(map(str, self.mi))}]" if self.mi.order else self.fld


@dataclass(frozen=True)
class Momentum:
    """Momentum slot p^{mi|last} of a field, optionally a symmetrized slot.

    ``last is None`` denotes the totally symmetric representative p^mi (used
    for the top momenta paired with the order-k jets).  ``derivs`` decorates
    the slot with base derivatives: the coordinates p^{mi|last}_{,nu} of the
    jet of a momentum section.  A symmetric slot of total order 1 is
    identified with the plain slot p^{()|mu}.
    """

    fld: str
    mi: MultiIndex
    last: int | None = None
    derivs: MultiIndex = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.derivs is None:
            object.__setattr__(self, "derivs", MultiIndex.zero(self.mi.n))
        if self.last is None and self.mi.order == 1:
            # p^(mu) at order one is the slot p^{()|mu} itself
            object.__setattr__(self, "last", self.mi.directions()[0])
            object.__setattr__(self, "mi", MultiIndex.zero(self.mi.n))

    def sort_key(self):
        return (
            _RANK_MOMENTUM,
            self.fld,
            (self.mi.order,) + tuple(self.mi),
            (self.last if self.last is not None else -1,) + tuple(self.derivs),
            0,
            (),
        )

    def __repr__(self):
        parts = [self.fld, ",".join(map(str, self.mi))]
        if self.last is not None:
            parts.append(str(self.last))
        if self.derivs.order:
            if self.last is None:
                parts.append("")
            parts.append(",".join(map(str, self.derivs)))
        return "p[" + ";".join(parts) + "]"


@dataclass(frozen=True)
class Multiplier:
    """Lagrange multiplier lam[a] attached to the a-th constraint, 1-based."""

    a: int

    def sort_key(self):
        return (_RANK_MULTIPLIER, "", (self.a,), (), 0, ())

    def __repr__(self):
        return f"lam[{self.a}]"


@dataclass(frozen=True)
class Parameter:
    """A named symbolic constant."""

    name: str

    def sort_key(self):
        return (_RANK_PARAMETER, self.name, (), (), 0, ())

    def __repr__(self):
        return self.name


Coordinate = Base | Jet | Momentum | Multiplier | Parameter

def is_fibre(c) -> bool:
    """Jet and momentum coordinates are fibre coordinates; the rest are not."""
    return isinstance(c, (Jet, Momentum))
