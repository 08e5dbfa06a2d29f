r"""Complex tori, Jacobians and harmonic one-forms.

A Jacobian of genus ``g`` is presented as :math:`\mathbb{C}^g/(\mathbb{Z}^g +
\Omega\mathbb{Z}^g)` for a Riemann matrix :math:`\Omega`.  Every point ``v`` is
written as ``v = s + Omega t`` with real ``s, t``; the box ``(s, t) in
[0, 1)^{2g}`` is the canonical fundamental domain.

An integral cohomology class ``gamma = (gamma_a, gamma_b)`` is stored in the
basis dual to the symplectic cycles ``(a_i, b_i)``.  Its harmonic
representative is ``omega + conj(omega)`` with ``omega = sum_j u_j dz_j``
holomorphic; the coefficient vector ``u`` is determined by

    u + conj(u)                 = gamma_a
    Omega u + conj(Omega u)     = gamma_b
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ImaginaryPartNotPositiveDefinite, NotSymmetric, SingularSystem

SYMMETRY_TOL = 1e-12
INVARIANT_TOL = 1e-10
SNAP_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class RiemannMatrix:
    """Validated period matrix.  Build it with :func:`validate_period_matrix`."""

    omega: np.ndarray
    _im_inv: np.ndarray = field(repr=False)

    @property
    def genus(self) -> int:
        return self.omega.shape[0]

    @property
    def tau(self) -> complex:
        if self.genus != 1:
            raise ValueError("tau is only defined for genus 1")
        return complex(self.omega[0, 0])

    def to_st(self, v) -> tuple[np.ndarray, np.ndarray]:
        """Lattice coordinates ``(s, t)`` of ``v = s + Omega t`` (vectorised over leading axes)."""
        v = np.asarray(v, dtype=complex)
        t = np.einsum("ij,...j->...i", self._im_inv, v.imag)
        s = v.real - np.einsum("ij,...j->...i", self.omega.real, t)
        return s, t

    def from_st(self, s, t) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        return s + np.einsum("ij,...j->...i", self.omega, t)

    def lattice_vector(self, n, m) -> np.ndarray:
        return self.from_st(np.asarray(n, dtype=float), np.asarray(m, dtype=float))

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "omega": [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in self.omega],
        }

    def label(self) -> str:
        return ";".join(" ".join(_fmt_complex(z) for z in row) for row in self.omega)

    def __eq__(self, other):
        if not isinstance(other, RiemannMatrix):
            return NotImplemented
        return self.omega.shape == other.omega.shape and np.array_equal(self.omega, other.omega)

    def __hash__(self):
        return hash(self.omega.tobytes())


def _fmt_complex(z: complex) -> str:
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


def validate_period_matrix(omega, symmetry_tol: float = SYMMETRY_TOL) -> RiemannMatrix:
    """Check symmetry and positivity of ``Im(omega)`` and wrap it.

    A scalar is accepted as the genus-1 matrix ``(tau)``.
    """
    om = np.array(omega, dtype=complex)
    if om.ndim == 0:
        om = om.reshape(1, 1)
    if om.ndim != 2 or om.shape[0] != om.shape[1] or om.shape[0] < 1:
        raise ValueError(f"period matrix must be square with g >= 1, got shape {om.shape}")
    if not np.all(np.isfinite(om)):
        raise ValueError("period matrix has non-finite entries")
    asym = np.max(np.abs(om - om.T))
    if asym > symmetry_tol:
        raise NotSymmetric(f"max |Omega_ij - Omega_ji| = {asym:.3e} exceeds {symmetry_tol:.1e}")
    im = om.imag
    lam_min = np.linalg.eigvalsh((im + im.T) / 2).min()
    if not lam_min > 0:
        raise ImaginaryPartNotPositiveDefinite(f"smallest eigenvalue of Im(Omega) is {lam_min:.3e}")
    om.setflags(write=False)
    im_inv = np.linalg.inv(im)
    im_inv.setflags(write=False)
    return RiemannMatrix(om, im_inv)


def load_period_matrix(source) -> RiemannMatrix:
    """Read ``{"genus": g, "omega": [[{"re":..,"im":..}, ..], ..]}`` from a path, str or dict."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = source
    rows = [[complex(e["re"], e["im"]) for e in row] for row in data["omega"]]
    lattice = validate_period_matrix(rows)
    if "genus" in data and int(data["genus"]) != lattice.genus:
        raise ValueError(f"genus {data['genus']} does not match a {lattice.genus}x{lattice.genus} omega")
    return lattice


def random_period_matrix(genus: int, rng: np.random.Generator) -> RiemannMatrix:
    """A random Riemann matrix with well-conditioned imaginary part."""
    a = rng.normal(size=(genus, genus))
    re = (a + a.T) / 4
    b = rng.normal(size=(genus, genus))
    im = b @ b.T / genus + 0.5 * np.eye(genus)
    return validate_period_matrix(re + 1j * im)


@dataclass(frozen=True, eq=False)
class JacobianPoint:
    """Canonical representative of a point of ``C^g / lattice``."""

    coords: np.ndarray

    @property
    def genus(self) -> int:
        return self.coords.shape[0]

    def __eq__(self, other):
        if not isinstance(other, JacobianPoint):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())


def _frac(x: np.ndarray) -> np.ndarray:
    r = x - np.floor(x)
    r[np.abs(r) < SNAP_TOL] = 0.0
    r[np.abs(r - 1.0) < SNAP_TOL] = 0.0
    return r


def reduce_coords(v, lattice: RiemannMatrix) -> np.ndarray:
    """Vectorised reduction into the canonical box; ``v`` has shape ``(..., g)``."""
    s, t = lattice.to_st(v)
    return lattice.from_st(_frac(np.atleast_1d(s)), _frac(np.atleast_1d(t)))


def reduce_point(v, lattice: RiemannMatrix) -> JacobianPoint:
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    if v.shape != (lattice.genus,):
        raise ValueError(f"expected a {lattice.genus}-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("point has non-finite coordinates")
    c = reduce_coords(v, lattice)
    c.setflags(write=False)
    return JacobianPoint(c)


def torus_add(p: JacobianPoint, q: JacobianPoint, lattice: RiemannMatrix) -> JacobianPoint:
    return reduce_point(p.coords + q.coords, lattice)


def torus_neg(p: JacobianPoint, lattice: RiemannMatrix) -> JacobianPoint:
    return reduce_point(-p.coords, lattice)


def torus_distance(v, w, lattice: RiemannMatrix) -> float:
    """Sup-distance between ``v`` and ``w`` in lattice coordinates, modulo the lattice."""
    s, t = lattice.to_st(np.atleast_1d(np.asarray(v, dtype=complex) - np.asarray(w, dtype=complex)))
    d = np.concatenate([s, t])
    d = np.abs(d - np.round(d))
    return float(d.max())


@dataclass(frozen=True)
class CohomologyClass:
    a_part: tuple[int, ...]
    b_part: tuple[int, ...]

    def __post_init__(self):
        a = tuple(_as_int(x) for x in self.a_part)
        b = tuple(_as_int(x) for x in self.b_part)
        if len(a) != len(b):
            raise ValueError("a_part and b_part must have the same length")
        object.__setattr__(self, "a_part", a)
        object.__setattr__(self, "b_part", b)

    @classmethod
    def from_flat(cls, values) -> CohomologyClass:
        values = list(values)
        if len(values) % 2:
            raise ValueError("a flat class needs an even number of entries")
        g = len(values) // 2
        return cls(tuple(values[:g]), tuple(values[g:]))

    @classmethod
    def zero(cls, genus: int) -> CohomologyClass:
        return cls((0,) * genus, (0,) * genus)

    @property
    def genus(self) -> int:
        return len(self.a_part)

    def flat(self) -> tuple[int, ...]:
        return self.a_part + self.b_part

    def is_zero(self) -> bool:
        return not any(self.flat())

    def __add__(self, other: CohomologyClass) -> CohomologyClass:
        return CohomologyClass(
            tuple(x + y for x, y in zip(self.a_part, other.a_part)),
            tuple(x + y for x, y in zip(self.b_part, other.b_part)),
        )

    def __neg__(self) -> CohomologyClass:
        return CohomologyClass(tuple(-x for x in self.a_part), tuple(-x for x in self.b_part))

    def __sub__(self, other: CohomologyClass) -> CohomologyClass:
        return self + (-other)

    def scale(self, k: int) -> CohomologyClass:
        return CohomologyClass(tuple(k * x for x in self.a_part), tuple(k * x for x in self.b_part))

    def label(self) -> str:
        return " ".join(map(str, self.a_part)) + " | " + " ".join(map(str, self.b_part))


def _as_int(x) -> int:
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("cohomology entries must be integers")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, float) and x.is_integer():
        return int(x)
    raise TypeError(f"cohomology entries must be integers, got {x!r}")


@dataclass(frozen=True, eq=False)
class HarmonicForm:
    """Holomorphic part ``omega_gamma = sum u_j dz_j`` of the harmonic representative of ``gamma``."""

    gamma: CohomologyClass
    u: np.ndarray
    lattice: RiemannMatrix

    def residuals(self) -> tuple[float, float]:
        a = np.asarray(self.gamma.a_part, dtype=float)
        b = np.asarray(self.gamma.b_part, dtype=float)
        ra = np.max(np.abs(2 * self.u.real - a))
        ou = self.lattice.omega @ self.u
        rb = np.max(np.abs(2 * ou.real - b))
        return float(ra), float(rb)


def harmonic_system(lattice: RiemannMatrix) -> np.ndarray:
    """Real ``2g x 2g`` matrix sending ``(Re u, Im u)`` to ``(gamma_a, gamma_b)``."""
    g = lattice.genus
    m = np.zeros((2 * g, 2 * g))
    m[:g, :g] = 2 * np.eye(g)
    m[g:, :g] = 2 * lattice.omega.real
    m[g:, g:] = -2 * lattice.omega.imag
    return m


def solve_harmonic(gamma: CohomologyClass, lattice: RiemannMatrix) -> HarmonicForm:
    g = lattice.genus
    if gamma.genus != g:
        raise ValueError(f"class of genus {gamma.genus} on a genus {g} lattice")
    rhs = np.asarray(gamma.flat(), dtype=float)
    try:
        x = np.linalg.solve(harmonic_system(lattice), rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite solution of the harmonic system")
    u = x[:g] + 1j * x[g:]
    u.setflags(write=False)
    return HarmonicForm(gamma, u, lattice)


def period_pairing(form: HarmonicForm, cycle) -> float:
    """``int_cycle (omega + conj omega)`` for the cycle ``sum n_a a_i + n_b b_i``."""
    g = form.lattice.genus
    cycle = np.asarray(cycle, dtype=float)
    if cycle.shape != (2 * g,):
        raise ValueError(f"cycle must have {2 * g} integer entries")
    n_a, n_b = cycle[:g], cycle[g:]
    a_periods = 2 * form.u.real
    b_periods = 2 * (form.lattice.omega @ form.u).real
    return float(n_a @ a_periods + n_b @ b_periods)


def aj_elliptic(p: complex, tau: RiemannMatrix) -> JacobianPoint:
    """Abel-Jacobi image of ``p in C/(Z + tau Z)`` with reference point ``p0 = 0``."""
    if tau.genus != 1:
        raise ValueError("aj_elliptic needs a genus-1 lattice")
    return reduce_point([p], tau)


def aj_line_integral(form: HarmonicForm, target) -> float:
    """``int_{p0}^{p} (omega + conj omega)`` along the straight lift ending at ``target``.

    ``target`` may be a :class:`JacobianPoint` or an array of coordinates with
    shape ``(..., g)``.
    """
    v = target.coords if isinstance(target, JacobianPoint) else np.asarray(target, dtype=complex)
    return 2 * np.real(v @ form.u)
