"""Exact audit of the proposed map from Hecke spectra ``Z x Z`` to finite-order
characters ``mu x mu`` of ``pi_1(E_tau) = Z A + Z B``.

A nonzero ``(k, l)`` is written ``k' (alpha, beta)`` with ``k' > 0`` and
``(alpha, beta)`` primitive, then completed to ``[[alpha, beta], [c, d]]`` in
SL_2(Z).  The completion is only defined up to ``(c, d) -> (c + x alpha, d + x
beta)``, and the first candidate character depends on ``x``.  Characters are
kept as exact elements of Q/Z.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotCoprime, ZeroInput


def _mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


@dataclass(frozen=True)
class SL2ZMatrix:
    a11: int
    a12: int
    a21: int
    a22: int

    def __post_init__(self):
        if self.det != 1:
            raise ValueError(f"determinant {self.det} != 1")

    @property
    def det(self) -> int:
        return self.a11 * self.a22 - self.a12 * self.a21

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a11, self.a12), (self.a21, self.a22)

    def shear(self, x: int) -> SL2ZMatrix:
        """Left multiplication by ``[[1, 0], [x, 1]]``."""
        return SL2ZMatrix(self.a11, self.a12, self.a21 + x * self.a11, self.a22 + x * self.a12)


@dataclass(frozen=True)
class CharacterOnPi1:
    """``A -> exp(2 pi i value_a)``, ``B -> exp(2 pi i value_b)``."""

    value_a: Fraction
    value_b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value_a", _mod1(Fraction(self.value_a)))
        object.__setattr__(self, "value_b", _mod1(Fraction(self.value_b)))

    @classmethod
    def trivial(cls) -> CharacterOnPi1:
        return cls(Fraction(0), Fraction(0))

    def is_trivial(self) -> bool:
        return self.value_a == 0 and self.value_b == 0

    def order(self) -> int:
        return math.lcm(self.value_a.denominator, self.value_b.denominator)

    def to_json(self) -> dict:
        return {"A": f"{self.value_a.numerator}/{self.value_a.denominator}", "B": f"{self.value_b.numerator}/{self.value_b.denominator}"}


def signed_gcd(k: int, l: int) -> int:
    """``l`` if ``k = 0``, ``k`` if ``l = 0``, else ``gcd(|k|,|l|)`` times both signs."""
    if k == 0 and l == 0:
        raise ZeroInput("gcd of (0, 0) is undefined here")
    if k == 0:
        return l
    if l == 0:
        return k
    sign = (1 if k > 0 else -1) * (1 if l > 0 else -1)
    return sign * math.gcd(k, l)


def gcd_normal_form(k: int, l: int) -> tuple[int, int, int]:
    """``(k', alpha, beta)`` with ``(k, l) = k' (alpha, beta)``, ``k' = |gcd(k, l)| > 0``."""
    k_prime = abs(signed_gcd(k, l))
    return k_prime, k // k_prime, l // k_prime


def complete_to_sl2(alpha: int, beta: int) -> SL2ZMatrix:
    """Second row ``(c, d)`` with ``alpha d - beta c = 1`` and ``d`` minimal non-negative.

    Every other completion is ``shear(x)`` of this one, ``x`` in Z.
    """
    if math.gcd(alpha, beta) != 1:
        raise NotCoprime(f"gcd({alpha}, {beta}) != 1")
    if beta == 0:
        # alpha = +-1; d = alpha is forced and c is free, take c = 0
        return SL2ZMatrix(alpha, 0, 0, alpha)
    d = pow(alpha, -1, abs(beta)) if abs(beta) > 1 else 0
    c = (alpha * d - 1) // beta
    return SL2ZMatrix(alpha, beta, c, d)


def completion_family(alpha: int, beta: int) -> str:
    m = complete_to_sl2(alpha, beta)
    return f"(({alpha}, {beta}), ({m.a21} + {alpha} x, {m.a22} + {beta} x)), x in Z"


def langlands_character(k: int, l: int, x: int = 0) -> CharacterOnPi1:
    """``A -> exp(2 pi i d/k')``, ``B -> exp(-2 pi i c/k')`` for the completion ``shear(x)``."""
    if k == 0 and l == 0:
        raise ZeroInput("(0, 0) is mapped separately to the trivial character")
    k_prime, alpha, beta = gcd_normal_form(k, l)
    m = complete_to_sl2(alpha, beta).shear(x)
    return CharacterOnPi1(Fraction(m.a22, k_prime), Fraction(-m.a21, k_prime))


def well_definedness_audit(k: int, l: int, x_range) -> set[CharacterOnPi1]:
    return {langlands_character(k, l, x) for x in x_range}


def fixed_variant_character(k: int, l: int, completion: SL2ZMatrix | None = None) -> CharacterOnPi1:
    """``A -> exp(2 pi i alpha/k')``, ``B -> exp(2 pi i beta/k')``; ``(0, 0)`` goes to the trivial character.

    ``completion`` is accepted only to show it plays no role: the value reads the
    first row, which every completion shares.
    """
    if k == 0 and l == 0:
        return CharacterOnPi1.trivial()
    k_prime, alpha, beta = gcd_normal_form(k, l)
    m = completion or complete_to_sl2(alpha, beta)
    if (m.a11, m.a12) != (alpha, beta):
        raise ValueError("completion does not have (alpha, beta) as first row")
    return CharacterOnPi1(Fraction(m.a11, k_prime), Fraction(m.a12, k_prime))


def reachable_characters(bound: int) -> dict[CharacterOnPi1, list[tuple[int, int]]]:
    """Image of the fixed variant on ``|k|, |l| <= bound`` with all preimages found."""
    out: dict[CharacterOnPi1, list[tuple[int, int]]] = {}
    for k, l in itertools.product(range(-bound, bound + 1), repeat=2):
        out.setdefault(fixed_variant_character(k, l), []).append((k, l))
    return out


def characters_with_denominator(max_den: int) -> set[CharacterOnPi1]:
    """All of ``(Q/Z)^2`` whose two coordinates have denominators at most ``max_den``."""
    values = {Fraction(n, d) for d in range(1, max_den + 1) for n in range(d)}
    return {CharacterOnPi1(a, b) for a in values for b in values}


def reachability_search(bound: int, max_den: int) -> dict:
    """Which small-denominator characters the fixed variant misses on the box, and a collision."""
    image = reachable_characters(bound)
    targets = characters_with_denominator(max_den)
    missed = sorted(targets - image.keys(), key=lambda c: (c.order(), c.value_a, c.value_b))
    collisions = image[CharacterOnPi1.trivial()]
    return {
        "bound": bound,
        "max_denominator": max_den,
        "targets": len(targets),
        "unreached": [c.to_json() for c in missed],
        "trivial_preimages": len(collisions),
        "injective_on_box": all(len(v) == 1 for v in image.values()),
    }


def audit_report(k: int, l: int, x_range) -> dict:
    chars = sorted(well_definedness_audit(k, l, x_range), key=lambda c: (c.value_a, c.value_b))
    k_prime = gcd_normal_form(k, l)[0]
    return {
        "k": k,
        "l": l,
        "k_prime": k_prime,
        "characters": [c.to_json() for c in chars],
        "well_defined": len(chars) == 1,
    }
