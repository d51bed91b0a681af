"""Valuation-level model of the local cohomology over ``R = k[[t]]``.

Classes of ``K* / R*`` are their valuations; units are not modelled.  The
inclusion ``Z/q -> Q/Z`` is ``a -> a/q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fgab import ExtChase, QModZ
from .linalg import IntegerMatrix


class ModulusMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Residue:
    """An element of ``Z/modulus`` stored as its representative in ``[0, modulus)``."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __add__(self, other: "Residue") -> "Residue":
        _same(self, other)
        return Residue(self.value + other.value, self.modulus)

    def __str__(self) -> str:
        return f"{self.value} mod {self.modulus}"


def _same(a: Residue, b: Residue) -> None:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"moduli {a.modulus} and {b.modulus} differ")


@dataclass(frozen=True)
class ValuationClass:
    """Class of ``x in K*`` modulo units, i.e. ``v(x)``."""

    valuation: int


@dataclass(frozen=True)
class SplitTorusClass:
    """Point of a split torus modulo its integral points: one valuation per coordinate."""

    valuations: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "valuations", tuple(int(v) for v in self.valuations))

    @property
    def rank(self) -> int:
        return len(self.valuations)


def eval_characters(t: SplitTorusClass, phi: Sequence[int]) -> int:
    """``v(phi(t)) = sum_i phi_i v(t_i)``."""
    if len(phi) != t.rank:
        raise ValueError(f"character of length {len(phi)} on a torus of rank {t.rank}")
    return sum(a * b for a, b in zip(phi, t.valuations))


def kummer_class(x: ValuationClass, n: int) -> Residue:
    """Image of ``x`` in ``Z/n``: its valuation mod ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Residue(x.valuation, n)


def cup_h1_h0(zeta: Residue, i: Residue) -> Residue:
    """``(zeta, i) -> zeta^i``, which on valuations is ``zeta * i mod n``."""
    _same(zeta, i)
    return Residue(zeta.value * i.value, zeta.modulus)


def bester_eval(zeta: Residue, i: Residue) -> QModZ:
    """``<zeta, i> = v(x^i) mod q`` embedded in ``Q/Z``."""
    _same(zeta, i)
    q = zeta.modulus
    return QModZ((zeta.value * i.value) % q, q)


def upper_pairing(x: ValuationClass, n: int) -> int:
    """``(x, n) -> v(x^n)`` on ``K*/R* x Z``."""
    return n * x.valuation


def character_from_valuation(x: ValuationClass) -> tuple[int, ...]:
    """``nu*(x)`` in ``hom(Z, Z) = Z`` for a rank one torus: ``n -> v(x^n)``."""
    return (upper_pairing(x, 1),)


def connecting_character(q: int, f: Sequence[int], i: int) -> QModZ:
    """``delta(f)(i)`` for ``delta: hom(Z, Z) -> Ext^1(Z/q, Z) = (Z/q)*``."""
    chase = ExtChase.from_presentation(IntegerMatrix.from_rows([[q]]))
    return chase.character_on(f, (i,))


@dataclass(frozen=True)
class DiagramReport:
    q: int
    cases: int
    failures: tuple[tuple[int, int], ...]

    @property
    def commutes(self) -> bool:
        return not self.failures


def eval_diagram_report(q: int) -> DiagramReport:
    """Compare both paths around the square for ``x in [-q, q]``, ``i in Z/q``."""
    if q < 2:
        raise ValueError("q must be >= 2")
    chase = ExtChase.from_presentation(IntegerMatrix.from_rows([[q]]))
    failures, cases = [], 0
    for v in range(-q, q + 1):
        x = ValuationClass(v)
        c = chase.character(character_from_valuation(x))
        for i in range(q):
            cases += 1
            left = QModZ.of(c[0] * i)
            right = bester_eval(kummer_class(x, q), Residue(i, q))
            if left != right:
                failures.append((v, i))
    return DiagramReport(q, cases, tuple(failures))


def check_eval_diagram(q: int) -> bool:
    return eval_diagram_report(q).commutes
