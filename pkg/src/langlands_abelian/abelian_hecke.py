"""Hecke operators on Pic^0 as translations, and their Fourier eigenbasis.

The normalised Hecke operator attached to a curve point ``p`` acts on functions
on the Jacobian by ``f(q) -> f(q + AJ(p))``.  The harmonics
``exp(2 pi i (u.v + conj(u).conj(v)))`` built from integral classes are joint
eigenfunctions, with eigenvalue the same exponential evaluated at ``AJ(p)``.
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import ResolutionMismatch, ResolutionTooLow, ZeroMultiplier
from .torus_geometry import (
    CohomologyClass,
    HarmonicForm,
    JacobianPoint,
    RiemannMatrix,
    aj_line_integral,
    reduce_coords,
    reduce_point,
    solve_harmonic,
)

TWO_PI_I = 2j * np.pi


@dataclass(frozen=True, eq=False)
class Harmonic:
    gamma: CohomologyClass
    form: HarmonicForm

    @classmethod
    def from_class(cls, gamma: CohomologyClass, lattice: RiemannMatrix) -> Harmonic:
        return cls(gamma, solve_harmonic(gamma, lattice))

    @property
    def lattice(self) -> RiemannMatrix:
        return self.form.lattice


def harmonic_eval(h: Harmonic, point) -> complex | np.ndarray:
    """Value of the harmonic at a point (or at an array of coordinates ``(..., g)``).

    The harmonic is lattice-periodic, so non-canonical coordinates are accepted.
    """
    if h.gamma.is_zero():
        if isinstance(point, JacobianPoint):
            return 1.0 + 0j
        return np.ones(np.asarray(point).shape[:-1], dtype=complex)
    val = np.exp(TWO_PI_I * aj_line_integral(h.form, point))
    return complex(val) if np.ndim(val) == 0 else val


# -- closed forms for genus one, used as independent cross-checks -------------


def elliptic_harmonic_closed_form(m: int, n: int, tau: complex, z) -> complex | np.ndarray:
    r"""``f^tau_{m,n}(z) = exp(2 pi i m (z conj(tau) - conj(z) tau)/(conj(tau) - tau))
    * exp(2 pi i n (z - conj(z))/(tau - conj(tau)))``."""
    z = np.asarray(z, dtype=complex)
    tb = np.conj(tau)
    zb = np.conj(z)
    return np.exp(TWO_PI_I * m * (z * tb - zb * tau) / (tb - tau)) * np.exp(
        TWO_PI_I * n * (z - zb) / (tau - tb)
    )


def elliptic_eigenvalue_closed_form(m: int, n: int, tau: complex, p) -> complex | np.ndarray:
    """Eigenvalue of the Hecke operator at ``p`` on ``f^tau_{m,n}``; same formula with ``z = p``."""
    return elliptic_harmonic_closed_form(m, n, tau, p)


# -- grid functions ------------------------------------------------------------


def grid_st(genus: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform nodes of ``[0,1)^{2g}``, flattened to ``(N^{2g}, g)`` arrays ``s`` and ``t``."""
    axis = np.arange(resolution) / resolution
    mesh = np.meshgrid(*([axis] * (2 * genus)), indexing="ij")
    flat = np.stack([m.ravel() for m in mesh], axis=-1)
    return flat[:, :genus], flat[:, genus:]


def grid_nodes(lattice: RiemannMatrix, resolution: int) -> np.ndarray:
    s, t = grid_st(lattice.genus, resolution)
    return lattice.from_st(s, t)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A function on the Jacobian sampled on the uniform ``(s, t)`` grid.

    ``values`` has shape ``(N,) * 2g`` with axes ordered ``s_1..s_g, t_1..t_g``.
    When ``harmonic`` is set the function is ``harmonic(v + shift)`` and is
    re-evaluated exactly under translations.
    """

    lattice: RiemannMatrix
    resolution: int
    values: np.ndarray
    harmonic: Harmonic | None = None
    shift: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        shape = (self.resolution,) * (2 * self.lattice.genus)
        if self.values.shape != shape:
            raise ResolutionMismatch(f"values have shape {self.values.shape}, expected {shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid values must be finite")

    @classmethod
    def from_harmonic(cls, h: Harmonic, resolution: int) -> GridFunction:
        shift = np.zeros(h.lattice.genus, dtype=complex)
        return cls._analytic(h, resolution, shift)

    @classmethod
    def _analytic(cls, h: Harmonic, resolution: int, shift: np.ndarray) -> GridFunction:
        nodes = grid_nodes(h.lattice, resolution)
        vals = np.asarray(harmonic_eval(h, nodes + shift))
        shape = (resolution,) * (2 * h.lattice.genus)
        return cls(h.lattice, resolution, vals.reshape(shape), h, shift)

    @classmethod
    def tabulate(cls, func: Callable[[np.ndarray], np.ndarray], lattice: RiemannMatrix, resolution: int) -> GridFunction:
        vals = np.asarray(func(grid_nodes(lattice, resolution)), dtype=complex)
        return cls(lattice, resolution, vals.reshape((resolution,) * (2 * lattice.genus)))

    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def _check_compatible(self, other: GridFunction):
        if self.resolution != other.resolution:
            raise ResolutionMismatch(f"grid resolutions differ: {self.resolution} vs {other.resolution}")
        if self.lattice != other.lattice:
            raise ResolutionMismatch("grids live on different lattices")

    def __sub__(self, other: GridFunction) -> GridFunction:
        self._check_compatible(other)
        return GridFunction(self.lattice, self.resolution, self.values - other.values)

    def __mul__(self, c: complex) -> GridFunction:
        return GridFunction(self.lattice, self.resolution, self.values * c)

    __rmul__ = __mul__

    def max_abs_diff(self, other: GridFunction) -> float:
        self._check_compatible(other)
        return float(np.max(np.abs(self.values - other.values)))


def _interpolate(values: np.ndarray, st: np.ndarray) -> np.ndarray:
    """Multilinear interpolation on the periodic unit grid; ``st`` has shape ``(M, 2g)``."""
    n = values.shape[0]
    dim = values.ndim
    x = st * n
    base = np.floor(x).astype(int)
    frac = x - base
    out = np.zeros(st.shape[0], dtype=complex)
    for corner in itertools.product((0, 1), repeat=dim):
        c = np.asarray(corner)
        w = np.prod(np.where(c == 1, frac, 1.0 - frac), axis=1)
        idx = tuple(((base[:, k] + c[k]) % n) for k in range(dim))
        out += w * values[idx]
    return out


def hecke_apply(f: GridFunction, p: JacobianPoint) -> GridFunction:
    """Translate ``f`` by ``p``: the output at node ``q`` is ``f(q + p)``."""
    lattice = f.lattice
    pc = np.asarray(p.coords, dtype=complex)
    if f.harmonic is not None:
        return GridFunction._analytic(f.harmonic, f.resolution, f.shift + pc)
    nodes = grid_nodes(lattice, f.resolution)
    s, t = lattice.to_st(reduce_coords(nodes + pc, lattice))
    vals = _interpolate(f.values, np.concatenate([s, t], axis=1))
    return GridFunction(lattice, f.resolution, vals.reshape(f.values.shape))


@dataclass(frozen=True, eq=False)
class EigenvalueRecord:
    gamma: CohomologyClass
    point: JacobianPoint
    value: complex


def hecke_eigenvalue(gamma: CohomologyClass, p: JacobianPoint, lattice: RiemannMatrix) -> EigenvalueRecord:
    form = solve_harmonic(gamma, lattice)
    value = complex(np.exp(TWO_PI_I * aj_line_integral(form, p)))
    return EigenvalueRecord(gamma, p, value)


def verify_eigenfunction(gamma: CohomologyClass, p: JacobianPoint, lattice: RiemannMatrix, resolution: int) -> float:
    """``max_q |(H_p f)(q) - lambda_p f(q)|`` over the grid, with exact harmonic evaluation."""
    if resolution < 2:
        raise ResolutionTooLow("grid resolution must be at least 2")
    h = Harmonic.from_class(gamma, lattice)
    f = GridFunction.from_harmonic(h, resolution)
    lam = hecke_eigenvalue(gamma, p, lattice).value
    return hecke_apply(f, p).max_abs_diff(lam * f)


def extend_to_pic(f0_value_at: Callable[[JacobianPoint], complex], mu_p0: complex, d: int, L0: JacobianPoint) -> complex:
    """Value at the degree-``d`` bundle ``L0(d p0)`` of the extension with ``H_{p0}``-eigenvalue ``mu_p0``."""
    if mu_p0 == 0:
        raise ZeroMultiplier("the eigenvalue of H_{p0} must be non-zero")
    mu = complex(mu_p0)
    factor = mu**d if d >= 0 else (1 / mu) ** (-d)
    return factor * complex(f0_value_at(L0))


def symmetric_power_eval(gamma: CohomologyClass, points: Sequence[JacobianPoint], lattice: RiemannMatrix) -> tuple[complex, complex]:
    """Harmonic at ``sum AJ(x_i)`` and the product of single-point eigenvalues.

    The divisor ``x_1 + ... + x_d`` is sent to ``Pic^0`` by subtracting ``d p0``,
    which fixes the constant in the factorisation to 1.
    """
    if len(points) < 1:
        raise ValueError("need at least one point")
    h = Harmonic.from_class(gamma, lattice)
    total = reduce_point(np.sum([x.coords for x in points], axis=0), lattice)
    at_sum = complex(harmonic_eval(h, total))
    product = complex(np.prod([hecke_eigenvalue(gamma, x, lattice).value for x in points]))
    return at_sum, product


def quadrature(values: np.ndarray) -> complex:
    """Mass-one uniform quadrature on the ``(s, t)`` box."""
    return complex(np.mean(values))


def orthogonality_check(gamma1: CohomologyClass, gamma2: CohomologyClass, lattice: RiemannMatrix, resolution: int) -> complex:
    top = max(abs(x) for x in gamma1.flat() + gamma2.flat())
    if resolution <= 2 * top:
        raise ResolutionTooLow(f"N={resolution} does not exceed twice the largest mode {top}")
    nodes = grid_nodes(lattice, resolution)
    f1 = harmonic_eval(Harmonic.from_class(gamma1, lattice), nodes)
    f2 = harmonic_eval(Harmonic.from_class(gamma2, lattice), nodes)
    return quadrature(f1 * np.conj(f2))


def gram_matrix(
    classes: Sequence[CohomologyClass], lattice: RiemannMatrix, resolution: int, method: str = "direct"
) -> np.ndarray:
    """All pairwise inner products at once (rows and columns follow ``classes``).

    ``method="direct"`` samples every harmonic on all ``N^{2g}`` nodes.
    ``method="separable"`` uses that a harmonic is a character of the torus:
    its value at ``s + Omega t`` is the product of its values at ``s_k e_k`` and
    ``t_k Omega e_k``, so the grid sum is a product of ``2g`` one-dimensional
    sums.  Both compute the same quadrature; the second scales to ``g = 2``,
    ``N = 64``.
    """
    top = max(abs(x) for c in classes for x in c.flat())
    if resolution <= 2 * top:
        raise ResolutionTooLow(f"N={resolution} does not exceed twice the largest mode {top}")
    harmonics = [Harmonic.from_class(c, lattice) for c in classes]
    if method == "direct":
        nodes = grid_nodes(lattice, resolution)
        table = np.stack([np.asarray(harmonic_eval(h, nodes)) for h in harmonics])
        return table @ table.conj().T / nodes.shape[0]
    if method != "separable":
        raise ValueError(f"unknown quadrature method {method!r}")
    g = lattice.genus
    x = np.arange(resolution) / resolution
    gram = np.ones((len(classes), len(classes)), dtype=complex)
    generators = [np.eye(g)[k].astype(complex) for k in range(g)]
    generators += [lattice.omega[:, k].astype(complex) for k in range(g)]
    for direction in generators:
        line = x[:, None] * direction[None, :]
        table = np.stack([np.asarray(harmonic_eval(h, line)) for h in harmonics])
        gram *= table @ table.conj().T / resolution
    return gram


def class_box(genus: int, bound: int) -> list[CohomologyClass]:
    """Every class with entries in ``[-bound, bound]``."""
    rng = range(-bound, bound + 1)
    return [CohomologyClass.from_flat(v) for v in itertools.product(rng, repeat=2 * genus)]


EIGEN_CSV_COLUMNS = ("g", "omega", "gamma_a", "gamma_b", "p_re", "p_im", "lambda_re", "lambda_im", "residual")


def eigenvalue_row(record: EigenvalueRecord, lattice: RiemannMatrix, residual: float) -> dict:
    c = record.point.coords
    return {
        "g": lattice.genus,
        "omega": lattice.label(),
        "gamma_a": " ".join(map(str, record.gamma.a_part)),
        "gamma_b": " ".join(map(str, record.gamma.b_part)),
        "p_re": " ".join(repr(float(x)) for x in c.real),
        "p_im": " ".join(repr(float(x)) for x in c.imag),
        "lambda_re": repr(record.value.real),
        "lambda_im": repr(record.value.imag),
        "residual": repr(float(residual)),
    }
