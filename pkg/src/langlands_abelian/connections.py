"""Flat connections attached to Hecke eigenfunctions, and GL_1 opers.

``nabla_gamma = d - 2 pi i (omega_gamma + conj omega_gamma)`` on the trivial
line bundle has horizontal section ``exp(2 pi i (u.z + conj(u).conj(z)))``; its
holonomy from ``p0`` to ``p`` is the Hecke eigenvalue and its monodromy is
trivial.  A GL_1-oper ``d - lambda dz`` has horizontal section ``exp(lambda z)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .torus_geometry import CohomologyClass, HarmonicForm, RiemannMatrix, solve_harmonic, validate_period_matrix

TWO_PI_I = 2j * np.pi
REAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class UnitaryFlatConnection:
    form: HarmonicForm

    @property
    def lattice(self) -> RiemannMatrix:
        return self.form.lattice

    def coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        """``dz`` and ``dzbar`` coefficients of the connection one-form ``2 pi i (u dz + conj(u) dzbar)``."""
        return TWO_PI_I * self.form.u, TWO_PI_I * np.conj(self.form.u)


@dataclass(frozen=True, eq=False)
class TorusPath:
    """Straight segment in the universal cover ``C^g``."""

    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        start = np.atleast_1d(np.asarray(self.start, dtype=complex))
        end = np.atleast_1d(np.asarray(self.end, dtype=complex))
        if start.shape != end.shape:
            raise ValueError("path endpoints must have the same shape")
        if not (np.all(np.isfinite(start)) and np.all(np.isfinite(end))):
            raise ValueError("path endpoints must be finite")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)

    @classmethod
    def from_origin(cls, v) -> TorusPath:
        v = np.atleast_1d(np.asarray(v, dtype=complex))
        return cls(np.zeros_like(v), v)

    @property
    def displacement(self) -> np.ndarray:
        return self.end - self.start

    def then(self, other: TorusPath) -> TorusPath:
        """Concatenate two segments into the segment between the outer endpoints (homotopic by flatness)."""
        return TorusPath(self.start, self.end + other.displacement)


def connection_from_class(gamma: CohomologyClass, lattice: RiemannMatrix) -> UnitaryFlatConnection:
    return UnitaryFlatConnection(solve_harmonic(gamma, lattice))


def holonomy(conn: UnitaryFlatConnection, path: TorusPath) -> complex:
    u = conn.form.u
    phase = 2 * np.real(path.displacement @ u)
    return complex(np.exp(2j * np.pi * phase))


def holonomy_piecewise(conn: UnitaryFlatConnection, vertices) -> complex:
    """Holonomy along the polygon through ``vertices``; equals :func:`holonomy` of the chord by flatness."""
    vertices = [np.atleast_1d(np.asarray(v, dtype=complex)) for v in vertices]
    out = 1.0 + 0j
    for a, b in zip(vertices, vertices[1:]):
        out *= holonomy(conn, TorusPath(a, b))
    return out


def generator_loops(lattice: RiemannMatrix) -> list[TorusPath]:
    """The ``2g`` loops based at the origin along ``e_k`` and ``Omega e_k``."""
    g = lattice.genus
    loops = [TorusPath.from_origin(np.eye(g)[k]) for k in range(g)]
    loops += [TorusPath.from_origin(lattice.omega[:, k]) for k in range(g)]
    return loops


def monodromy_generators(conn: UnitaryFlatConnection, lattice: RiemannMatrix | None = None) -> list[complex]:
    lattice = lattice or conn.lattice
    return [holonomy(conn, loop) for loop in generator_loops(lattice)]


# -- GL_1 opers ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GL1Oper:
    """Holomorphic connection ``d - lambda dz`` on the trivial bundle over ``E_tau``."""

    lam: complex
    lattice: RiemannMatrix

    def __post_init__(self):
        if not np.isfinite(self.lam):
            raise ValueError("lambda must be finite")
        if self.lattice.genus != 1:
            raise ValueError("GL_1 opers are implemented on elliptic curves only")


@dataclass(frozen=True, eq=False)
class AntiGL1Oper:
    """Anti-holomorphic connection ``d - mu dzbar``."""

    mu: complex
    lattice: RiemannMatrix

    def __post_init__(self):
        if not np.isfinite(self.mu):
            raise ValueError("mu must be finite")
        if self.lattice.genus != 1:
            raise ValueError("GL_1 opers are implemented on elliptic curves only")


def oper_monodromy(oper: GL1Oper | AntiGL1Oper) -> tuple[complex, complex]:
    """Multipliers of the horizontal section along the lattice generators ``1`` and ``tau``."""
    tau = oper.lattice.tau
    if isinstance(oper, AntiGL1Oper):
        return complex(np.exp(oper.mu)), complex(np.exp(oper.mu * np.conj(tau)))
    return complex(np.exp(oper.lam)), complex(np.exp(oper.lam * tau))


def is_split_real(w: complex, tol: float = REAL_TOL) -> bool:
    return w != 0 and abs(w.imag) <= tol * max(1.0, abs(w))


def split_real_predicate(oper: GL1Oper | AntiGL1Oper, tol: float = REAL_TOL) -> bool:
    """True iff every monodromy multiplier lies in ``R^x``."""
    return all(is_split_real(w, tol) for w in oper_monodromy(oper))


def in_pi_gaussian_lattice(lam: complex, tol: float = REAL_TOL) -> bool:
    """Membership ``lam / pi in Z + iZ``; the reference answer for ``tau = i``."""
    z = lam / np.pi
    return abs(z.real - round(z.real)) <= tol and abs(z.imag - round(z.imag)) <= tol


def diffop_eigenvalues(m: int, n: int, tau: complex) -> tuple[complex, complex]:
    """Eigenvalues of ``d/dz`` and ``d/dzbar`` on ``f^tau_{m,n}``.

    Writing ``f^tau_{m,n} = exp(a z + b zbar)`` gives the pair ``(a, b)``.
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValueError("tau must lie in the upper half plane")
    tb = tau.conjugate()
    a = TWO_PI_I * (m * tb / (tb - tau) + n / (tau - tb))
    b = TWO_PI_I * (-m * tau / (tb - tau) - n / (tau - tb))
    return complex(a), complex(b)


def finite_difference_check(m: int, n: int, tau: complex, h: float, samples: int = 20, seed: int = 0) -> float:
    """Max relative error of central differences for ``d/dz``, ``d/dzbar`` against :func:`diffop_eigenvalues`.

    Uses ``d/dz = (d/dx - i d/dy)/2``; the error per point is
    ``|D f / f - eigenvalue| / max(1, |eigenvalue|)``.
    """
    if not 0 < h < 0.1:
        raise ValueError("step must satisfy 0 < h < 0.1")
    from .abelian_hecke import elliptic_harmonic_closed_form

    a, b = diffop_eigenvalues(m, n, tau)
    rng = np.random.default_rng(seed)
    z = rng.random(samples) + complex(tau) * rng.random(samples)

    def f(w):
        return elliptic_harmonic_closed_form(m, n, tau, w)

    dx = (f(z + h) - f(z - h)) / (2 * h)
    dy = (f(z + 1j * h) - f(z - 1j * h)) / (2 * h)
    fz = f(z)
    dz = 0.5 * (dx - 1j * dy) / fz
    dzb = 0.5 * (dx + 1j * dy) / fz
    err_z = np.abs(dz - a) / max(1.0, abs(a))
    err_zb = np.abs(dzb - b) / max(1.0, abs(b))
    return float(max(err_z.max(), err_zb.max()))


def torus_oper_from_class(gamma: CohomologyClass, lattice: RiemannMatrix) -> np.ndarray:
    """Coefficient ``2 pi i u`` of ``nabla^hol_gamma = d - 2 pi i omega_gamma``."""
    return TWO_PI_I * solve_harmonic(gamma, lattice).u


def oper_of_class(gamma: CohomologyClass, lattice: RiemannMatrix) -> GL1Oper:
    return GL1Oper(complex(torus_oper_from_class(gamma, lattice)[0]), lattice)


SPECTRUM_CSV_COLUMNS = ("lambda_re", "lambda_im", "mono1_re", "mono1_im", "mono2_re", "mono2_im", "split_real")


def spectrum_scan(tau: complex, lo: float, hi: float, points: int) -> list[dict]:
    """Square scan of ``lambda`` over ``[lo, hi]^2``; one CSV row per ``lambda``."""
    lattice = validate_period_matrix(tau)
    axis = np.linspace(lo, hi, points)
    rows = []
    for re in axis:
        for im in axis:
            lam = complex(re, im)
            m1, m2 = oper_monodromy(GL1Oper(lam, lattice))
            rows.append(
                {
                    "lambda_re": repr(float(re)),
                    "lambda_im": repr(float(im)),
                    "mono1_re": repr(m1.real),
                    "mono1_im": repr(m1.imag),
                    "mono2_re": repr(m2.real),
                    "mono2_im": repr(m2.imag),
                    "split_real": int(is_split_real(m1) and is_split_real(m2)),
                }
            )
    return rows
