"""Hecke eigenfunctions for a split torus ``T`` of rank ``r``.

Bases of the character lattice ``chi_1..chi_r`` and cocharacter lattice
``mu_1..mu_r`` are fixed; ``pairing[i][j] = <chi_i, mu_j>``.  With these bases
``Bun^0_T`` is ``(Pic^0)^r``, component ``j`` along ``mu_j``.  A class
``gamma`` in ``H^1(X, Lambda^*)`` has one integral class per character.  The
harmonic is

    exp(2 pi i sum_{i,j} pairing[i][j] phi_{gamma_i}(v_j)).
"""
from __future__ import annotations

import json
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .abelian_hecke import TWO_PI_I, Harmonic, harmonic_eval
from .connections import connection_from_class, monodromy_generators
from .errors import ShapeMismatch
from .torus_geometry import CohomologyClass, JacobianPoint, RiemannMatrix, aj_line_integral, reduce_coords, reduce_point, solve_harmonic


def integer_determinant(matrix) -> int:
    """Exact determinant by fraction-free elimination."""
    a = [[Fraction(int(x)) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c] != 0), None)
        if pivot is None:
            return 0
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


@dataclass(frozen=True)
class TorusData:
    rank: int
    pairing: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        p = tuple(tuple(int(x) for x in row) for row in self.pairing)
        if len(p) != self.rank or any(len(row) != self.rank for row in p):
            raise ShapeMismatch(f"pairing must be {self.rank}x{self.rank}")
        if abs(integer_determinant(p)) != 1:
            raise ValueError("pairing between characters and cocharacters must be unimodular")
        object.__setattr__(self, "pairing", p)

    @classmethod
    def split(cls, rank: int) -> TorusData:
        """``G_m^r`` with dual standard bases."""
        return cls(rank, tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank)))

    def matrix(self) -> np.ndarray:
        return np.asarray(self.pairing, dtype=float)

    def to_json(self) -> dict:
        return {"rank": self.rank, "pairing": [list(row) for row in self.pairing]}


def load_torus_data(source) -> TorusData:
    if isinstance(source, (str, Path)) and Path(source).exists():
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = source
    return TorusData(int(data["rank"]), tuple(tuple(row) for row in data["pairing"]))


@dataclass(frozen=True)
class TCohomologyClass:
    components: tuple[CohomologyClass, ...]

    @property
    def rank(self) -> int:
        return len(self.components)

    def __add__(self, other: TCohomologyClass) -> TCohomologyClass:
        if self.rank != other.rank:
            raise ShapeMismatch("classes of different rank")
        return TCohomologyClass(tuple(a + b for a, b in zip(self.components, other.components)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


@dataclass(frozen=True, eq=False)
class BunTPoint:
    components: tuple[JacobianPoint, ...]

    @classmethod
    def from_coords(cls, coords: Sequence, lattice: RiemannMatrix) -> BunTPoint:
        return cls(tuple(reduce_point(v, lattice) for v in coords))

    @property
    def rank(self) -> int:
        return len(self.components)

    def coords(self) -> np.ndarray:
        """Array of shape ``(r, g)``."""
        return np.stack([c.coords for c in self.components])


def _check(gamma: TCohomologyClass, torus: TorusData, rank: int | None = None):
    if gamma.rank != torus.rank:
        raise ShapeMismatch(f"class has {gamma.rank} components, torus has rank {torus.rank}")
    if rank is not None and rank != torus.rank:
        raise ShapeMismatch(f"point has {rank} components, torus has rank {torus.rank}")


def t_phase(gamma: TCohomologyClass, coords, torus: TorusData, lattice: RiemannMatrix) -> np.ndarray:
    """``sum_{i,j} pairing[i][j] phi_{gamma_i}(v_j)`` for coordinates of shape ``(..., r, g)``."""
    coords = np.asarray(coords, dtype=complex)
    _check(gamma, torus, coords.shape[-2])
    phase = np.zeros(coords.shape[:-2])
    for i, cls in enumerate(gamma.components):
        if cls.is_zero():
            continue
        form = solve_harmonic(cls, lattice)
        for j in range(torus.rank):
            if torus.pairing[i][j]:
                phase = phase + torus.pairing[i][j] * aj_line_integral(form, coords[..., j, :])
    return phase


def t_harmonic_eval(gamma: TCohomologyClass, point, torus: TorusData, lattice: RiemannMatrix):
    """Value of the harmonic on ``Bun^0_T`` at a :class:`BunTPoint` or at coordinates ``(..., r, g)``."""
    coords = point.coords() if isinstance(point, BunTPoint) else point
    if torus.pairing == TorusData.split(torus.rank).pairing and isinstance(point, BunTPoint):
        _check(gamma, torus, point.rank)
        out = 1.0 + 0j
        for cls, v in zip(gamma.components, point.components):
            out *= harmonic_eval(Harmonic.from_class(cls, lattice), v)
        return complex(out)
    val = np.exp(TWO_PI_I * t_phase(gamma, coords, torus, lattice))
    return complex(val) if np.ndim(val) == 0 else val


def t_shift(point: BunTPoint, p: JacobianPoint, mu_check: Sequence[int], lattice: RiemannMatrix) -> BunTPoint:
    """``P -> P(mu_check . p)``, normalised by ``p0``: component ``j`` moves by ``mu_check_j AJ(p)``."""
    if len(mu_check) != point.rank:
        raise ShapeMismatch("mu_check must have one entry per component")
    return BunTPoint(
        tuple(reduce_point(v.coords + int(k) * p.coords, lattice) for v, k in zip(point.components, mu_check))
    )


def t_hecke_apply(
    f: Callable[[np.ndarray], np.ndarray], p: JacobianPoint, mu_check: Sequence[int], lattice: RiemannMatrix
) -> Callable[[np.ndarray], np.ndarray]:
    """Pull back ``f`` (a function of coordinates ``(..., r, g)``) along the Hecke shift."""
    shift = np.asarray([int(k) for k in mu_check], dtype=float)[:, None] * np.asarray(p.coords)[None, :]

    def shifted(coords):
        coords = np.asarray(coords, dtype=complex)
        if coords.shape[-2] != shift.shape[0]:
            raise ShapeMismatch("point rank does not match mu_check")
        return f(reduce_coords(coords + shift, lattice))

    return shifted


def t_hecke_eigenvalue(
    gamma: TCohomologyClass, mu_check: Sequence[int], p: JacobianPoint, lattice: RiemannMatrix, torus: TorusData
) -> complex:
    """Value of the character ``mu_check`` of the dual torus on ``exp(2 pi i int_{p0}^p (omega_gamma + conj))``."""
    _check(gamma, torus, len(mu_check))
    phase = 0.0
    for i, cls in enumerate(gamma.components):
        weight = sum(torus.pairing[i][j] * int(mu_check[j]) for j in range(torus.rank))
        if weight and not cls.is_zero():
            phase += weight * aj_line_integral(solve_harmonic(cls, lattice), p)
    return complex(np.exp(TWO_PI_I * phase))


def t_grid(lattice: RiemannMatrix, rank: int, resolution: int) -> np.ndarray:
    """Product grid on ``(Pic^0)^r`` as coordinates of shape ``(N^{2g r}, r, g)``."""
    from .abelian_hecke import grid_nodes

    nodes = grid_nodes(lattice, resolution)
    idx = np.stack(np.meshgrid(*([np.arange(len(nodes))] * rank), indexing="ij"), axis=-1).reshape(-1, rank)
    return nodes[idx]


def verify_t_eigenfunction(
    gamma: TCohomologyClass,
    mu_check: Sequence[int],
    p: JacobianPoint,
    lattice: RiemannMatrix,
    torus: TorusData,
    resolution: int,
) -> float:
    grid = t_grid(lattice, torus.rank, resolution)

    def f(c):
        return t_harmonic_eval(gamma, c, torus, lattice)

    lam = t_hecke_eigenvalue(gamma, mu_check, p, lattice, torus)
    return float(np.max(np.abs(t_hecke_apply(f, p, mu_check, lattice)(grid) - lam * f(grid))))


def effective_classes(gamma: TCohomologyClass, torus: TorusData) -> list[CohomologyClass]:
    """Component ``j`` of the harmonic is the GL_1 harmonic of ``sum_i pairing[i][j] gamma_i``."""
    g = gamma.components[0].genus
    out = []
    for j in range(torus.rank):
        acc = CohomologyClass.zero(g)
        for i, cls in enumerate(gamma.components):
            acc = acc + cls.scale(torus.pairing[i][j])
        out.append(acc)
    return out


def t_gram_matrix(classes: Sequence[TCohomologyClass], torus: TorusData, lattice: RiemannMatrix, resolution: int) -> np.ndarray:
    """Product quadrature on ``(Pic^0)^r``: the grid sum factorises over components."""
    from .abelian_hecke import gram_matrix

    gram = np.ones((len(classes), len(classes)), dtype=complex)
    for j in range(torus.rank):
        comp = [effective_classes(c, torus)[j] for c in classes]
        distinct = sorted(set(comp), key=lambda c: c.flat())
        index = {c: k for k, c in enumerate(distinct)}
        sub = gram_matrix(distinct, lattice, resolution)
        pos = np.array([index[c] for c in comp])
        gram *= sub[np.ix_(pos, pos)]
    return gram


def t_monodromy_generators(gamma: TCohomologyClass, lattice: RiemannMatrix) -> list[list[complex]]:
    """Generator holonomies of each component of ``nabla_gamma`` on the trivial dual-torus bundle."""
    return [monodromy_generators(connection_from_class(cls, lattice), lattice) for cls in gamma.components]
