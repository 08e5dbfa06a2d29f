"""Verification suites run by the CLI.  Each returns a :class:`SuiteReport`."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import abelian_hecke as ah
from . import connections as cn
from . import finite_models as fm
from . import fundamental_group as fg
from . import torus_groups as tg
from .errors import BadFlag, UnknownSuite
from .torus_geometry import (
    INVARIANT_TOL,
    CohomologyClass,
    RiemannMatrix,
    period_pairing,
    random_period_matrix,
    reduce_point,
    solve_harmonic,
    validate_period_matrix,
)

EIGEN_TOL = 1e-10
CLOSED_FORM_TOL = 1e-12
GRAM_TOL = 1e-12
HOLONOMY_TOL = 1e-12
MONODROMY_TOL = 1e-10
FD_TOL = 1e-6

SUITES = ("elliptic", "jacobian", "connections", "torus", "finite-hecke", "fiber", "biject", "all")
DEFAULT_TAUS = (1j, 0.3 + 1.2j)
DEFAULT_PRIMES = (2, 3, 5, 7, 11)


@dataclass
class Check:
    name: str
    expected: str
    observed: object
    residual: float | None
    passed: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "observed": self.observed,
            "residual": self.residual,
            "pass": self.passed,
        }


@dataclass
class SuiteReport:
    suite_name: str
    parameters: dict
    checks: list[Check] = field(default_factory=list)
    table: list[dict] = field(default_factory=list)
    table_columns: tuple[str, ...] = ()

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, expected: str, observed, residual: float | None, passed: bool):
        self.checks.append(Check(name, expected, observed, residual, bool(passed)))

    def within(self, name: str, residual: float, tol: float):
        residual = float(residual)
        self.add(name, f"<= {tol:g}", residual, residual, residual <= tol)

    def to_json(self) -> dict:
        return {
            "suite_name": self.suite_name,
            "parameters": self.parameters,
            "checks": [c.to_json() for c in sorted(self.checks, key=lambda c: c.name)],
            "overall_pass": self.overall_pass,
        }


@dataclass
class Params:
    tau: complex | None = None
    omega: RiemannMatrix | None = None
    gamma: tuple[int, ...] | None = None
    q: int | None = None
    grid: int = 64
    max_mode: int = 3
    seed: int = 0
    samples: int = 20
    torus: tg.TorusData | None = None

    def describe(self) -> dict:
        return {
            "tau": None if self.tau is None else [self.tau.real, self.tau.imag],
            "omega": None if self.omega is None else self.omega.to_json(),
            "gamma": None if self.gamma is None else list(self.gamma),
            "q": self.q,
            "grid": self.grid,
            "max_mode": self.max_mode,
            "seed": self.seed,
            "samples": self.samples,
            "torus": None if self.torus is None else self.torus.to_json(),
        }


def _classes(params: Params, genus: int, bound: int) -> list[CohomologyClass]:
    if params.gamma is not None:
        if len(params.gamma) != 2 * genus:
            raise BadFlag(f"--gamma needs {2 * genus} entries for genus {genus}")
        return [CohomologyClass.from_flat(params.gamma)]
    return ah.class_box(genus, bound)


def _random_points(lattice: RiemannMatrix, rng: np.random.Generator, count: int):
    g = lattice.genus
    return [reduce_point(lattice.from_st(rng.random(g), rng.random(g)), lattice) for _ in range(count)]


def _default_genus2(seed: int) -> RiemannMatrix:
    return random_period_matrix(2, np.random.default_rng(seed))


def _lattices(params: Params, default_all: bool) -> list[tuple[str, RiemannMatrix]]:
    if params.omega is not None:
        return [(f"g{params.omega.genus}", params.omega)]
    if params.tau is not None:
        return [(f"tau={params.tau}", validate_period_matrix(params.tau))]
    out = [(f"tau={t}", validate_period_matrix(t)) for t in DEFAULT_TAUS]
    if default_all:
        out.append(("g2", _default_genus2(params.seed)))
    return out


# -- elliptic ------------------------------------------------------------------


def run_elliptic(params: Params) -> SuiteReport:
    report = SuiteReport("elliptic", params.describe(), table_columns=ah.EIGEN_CSV_COLUMNS)
    rng = np.random.default_rng(params.seed)
    lattices = _lattices(params, default_all=False)
    for label, lattice in lattices:
        if lattice.genus != 1:
            raise BadFlag("the elliptic suite needs a genus-1 lattice")
        tau = lattice.tau
        classes = _classes(params, 1, params.max_mode)
        points = _random_points(lattice, rng, params.samples)
        nodes = ah.grid_nodes(lattice, params.grid)
        worst_eig = worst_closed = worst_fn = worst_unit = 0.0
        for gamma in classes:
            m, n = gamma.a_part[0], gamma.b_part[0]
            h = ah.Harmonic.from_class(gamma, lattice)
            f = ah.GridFunction.from_harmonic(h, params.grid)
            closed_fn = ah.elliptic_harmonic_closed_form(m, n, tau, nodes[:, 0])
            worst_fn = max(worst_fn, float(np.max(np.abs(f.flat() - closed_fn))))
            for p in points:
                rec = ah.hecke_eigenvalue(gamma, p, lattice)
                res = ah.hecke_apply(f, p).max_abs_diff(rec.value * f)
                closed = ah.elliptic_eigenvalue_closed_form(m, n, tau, p.coords[0])
                worst_eig = max(worst_eig, res)
                worst_closed = max(worst_closed, abs(rec.value - closed))
                worst_unit = max(worst_unit, abs(abs(rec.value) - 1))
                report.table.append(ah.eigenvalue_row(rec, lattice, res))
        report.within(f"{label}: max |H_p f - lambda f| on grid", worst_eig, EIGEN_TOL)
        report.within(f"{label}: eigenvalue vs closed form", worst_closed, CLOSED_FORM_TOL)
        report.within(f"{label}: harmonic vs closed-form f^tau_mn", worst_fn, CLOSED_FORM_TOL)
        report.within(f"{label}: unitarity of eigenvalues", worst_unit, CLOSED_FORM_TOL)
        if params.gamma is None:
            gram = ah.gram_matrix(classes, lattice, params.grid)
            report.within(f"{label}: Gram matrix - identity", np.max(np.abs(gram - np.eye(len(classes)))), GRAM_TOL)
    return report


# -- jacobian ------------------------------------------------------------------


def run_jacobian(params: Params) -> SuiteReport:
    lattice = params.omega or _default_genus2(params.seed)
    report = SuiteReport("jacobian", params.describe() | {"omega_used": lattice.to_json()}, table_columns=ah.EIGEN_CSV_COLUMNS)
    g = lattice.genus
    rng = np.random.default_rng(params.seed + 1)
    classes = _classes(params, g, params.max_mode)
    worst_inv = worst_period = 0.0
    basis = np.eye(2 * g, dtype=int)
    for gamma in classes:
        form = solve_harmonic(gamma, lattice)
        worst_inv = max(worst_inv, *form.residuals())
        for k in range(2 * g):
            worst_period = max(worst_period, abs(period_pairing(form, basis[k]) - gamma.flat()[k]))
    report.within("harmonic-solve invariants", worst_inv, INVARIANT_TOL)
    report.within("period integrality", worst_period, INVARIANT_TOL)

    worst_lin = 0.0
    for _ in range(params.samples):
        c1 = classes[rng.integers(len(classes))]
        c2 = classes[rng.integers(len(classes))]
        u12 = solve_harmonic(c1 + c2, lattice).u
        worst_lin = max(worst_lin, float(np.max(np.abs(u12 - solve_harmonic(c1, lattice).u - solve_harmonic(c2, lattice).u))))
    report.within("linearity of the harmonic solve", worst_lin, INVARIANT_TOL)

    worst_fact = worst_eig = 0.0
    for _ in range(params.samples):
        gamma = classes[rng.integers(len(classes))]
        triple = _random_points(lattice, rng, 3)
        at_sum, prod = ah.symmetric_power_eval(gamma, triple, lattice)
        worst_fact = max(worst_fact, abs(at_sum - prod))
        p = triple[0]
        rec = ah.hecke_eigenvalue(gamma, p, lattice)
        res = ah.verify_eigenfunction(gamma, p, lattice, min(params.grid, 8))
        worst_eig = max(worst_eig, res)
        report.table.append(ah.eigenvalue_row(rec, lattice, res))
    report.within("factorization on X^(3)", worst_fact, INVARIANT_TOL)
    report.within("eigenfunction residual (grid 8)", worst_eig, EIGEN_TOL)
    if params.gamma is None:
        gram = ah.gram_matrix(classes, lattice, params.grid, method="separable")
        report.within("Gram matrix - identity", np.max(np.abs(gram - np.eye(len(classes)))), GRAM_TOL)
    return report


# -- connections and opers -----------------------------------------------------


def run_connections(params: Params) -> SuiteReport:
    report = SuiteReport("connections", params.describe(), table_columns=cn.SPECTRUM_CSV_COLUMNS)
    rng = np.random.default_rng(params.seed + 2)
    for label, lattice in _lattices(params, default_all=True):
        g = lattice.genus
        mono_bound = 5
        worst_mono = 0.0
        for gamma in _classes(params, g, mono_bound):
            conn = cn.connection_from_class(gamma, lattice)
            worst_mono = max(worst_mono, max(abs(w - 1) for w in cn.monodromy_generators(conn, lattice)))
        report.within(f"{label}: generator holonomies - 1 (entries <= {mono_bound})", worst_mono, MONODROMY_TOL)

        worst_hol = worst_homotopy = worst_shift = 0.0
        for gamma in _classes(params, g, min(params.max_mode, 3 if g == 1 else 1)):
            conn = cn.connection_from_class(gamma, lattice)
            for p in _random_points(lattice, rng, params.samples):
                v = p.coords
                hol = cn.holonomy(conn, cn.TorusPath.from_origin(v))
                worst_hol = max(worst_hol, abs(hol - ah.hecke_eigenvalue(gamma, p, lattice).value))
                corner = lattice.from_st(rng.random(g), rng.random(g))
                worst_homotopy = max(worst_homotopy, abs(cn.holonomy_piecewise(conn, [np.zeros(g), corner, v]) - hol))
                n, m = rng.integers(-3, 4, size=g), rng.integers(-3, 4, size=g)
                shifted = cn.holonomy(conn, cn.TorusPath.from_origin(v + lattice.lattice_vector(n, m)))
                worst_shift = max(worst_shift, abs(shifted - hol))
        report.within(f"{label}: holonomy 0->AJ(p) vs eigenvalue", worst_hol, HOLONOMY_TOL)
        report.within(f"{label}: path independence (homotopic lifts)", worst_homotopy, HOLONOMY_TOL)
        report.within(f"{label}: lifts differing by a lattice loop", worst_shift, MONODROMY_TOL)

    lattice_i = validate_period_matrix(1j)
    lambdas = {}
    for m, n in itertools.product(range(-5, 6), repeat=2):
        lam = complex(cn.torus_oper_from_class(CohomologyClass((m,), (n,)), lattice_i)[0])
        lambdas[(m, n)] = lam
    mismatch = 0.0
    spectrum = set()
    for (m, n), lam in lambdas.items():
        z = lam / np.pi
        key = (round(z.real), round(z.imag))
        mismatch = max(mismatch, abs(z.real - key[0]), abs(z.imag - key[1]))
        spectrum.add(key)
    expected = {(n, m) for m, n in itertools.product(range(-5, 6), repeat=2)}
    report.add(
        "tau=i: {2 pi i u(gamma)} = {pi(n+im)} (|m|,|n|<=5)",
        "equal sets, rounding error <= 1e-10",
        f"{len(spectrum & expected)}/{len(expected)} matched",
        mismatch,
        spectrum == expected and mismatch <= INVARIANT_TOL,
    )
    opers_real = all(cn.split_real_predicate(cn.GL1Oper(lam, lattice_i)) for lam in lambdas.values())
    report.add("tau=i: torus opers have split-real monodromy", "true", str(opers_real).lower(), None, opers_real)

    rows = cn.spectrum_scan(1j, -2 * np.pi, 2 * np.pi, 41)
    disagreements = sum(
        int(r["split_real"]) != int(cn.in_pi_gaussian_lattice(complex(float(r["lambda_re"]), float(r["lambda_im"]))))
        for r in rows
    )
    report.table.extend(rows)
    report.add(
        "tau=i: split-real predicate vs lambda/pi in Z+iZ (41x41 scan)",
        "0 disagreements",
        disagreements,
        None,
        disagreements == 0,
    )

    worst_fd = 0.0
    for tau in DEFAULT_TAUS:
        for m, n in itertools.product(range(-3, 4), repeat=2):
            worst_fd = max(worst_fd, cn.finite_difference_check(m, n, tau, 1e-4, params.samples, params.seed))
    report.within("finite differences of d/dz, d/dzbar (h=1e-4, |m|,|n|<=3)", worst_fd, FD_TOL)

    worst_formula = 0.0
    for m, n in itertools.product(range(-5, 6), repeat=2):
        a, b = cn.diffop_eigenvalues(m, n, 1j)
        worst_formula = max(worst_formula, abs(a - np.pi * (n + 1j * m)), abs(b + np.pi * (n - 1j * m)))
    report.within("tau=i: d/dz, d/dzbar eigenvalues = pi(n+im), -pi(n-im)", worst_formula, INVARIANT_TOL)
    return report


# -- general torus -------------------------------------------------------------


def _t_classes(rank: int, genus: int, bound: int) -> list[tg.TCohomologyClass]:
    box = ah.class_box(genus, bound)
    return [tg.TCohomologyClass(c) for c in itertools.product(box, repeat=rank)]


def run_torus(params: Params) -> SuiteReport:
    torus = params.torus or tg.TorusData.split(2)
    lattice = params.omega or validate_period_matrix(params.tau if params.tau is not None else 1j)
    report = SuiteReport("torus", params.describe() | {"torus_used": torus.to_json()})
    rng = np.random.default_rng(params.seed + 3)
    r, g = torus.rank, lattice.genus
    box = ah.class_box(g, 2)

    def rand_class():
        return tg.TCohomologyClass(tuple(box[i] for i in rng.integers(len(box), size=r)))

    def rand_mu():
        return tuple(int(x) for x in rng.integers(-3, 4, size=r))

    worst_mu = worst_gamma = worst_p = worst_eig = worst_unit = 0.0
    for _ in range(params.samples):
        gamma, gamma2 = rand_class(), rand_class()
        mu, mu2 = rand_mu(), rand_mu()
        p, p2 = _random_points(lattice, rng, 2)
        lam = tg.t_hecke_eigenvalue(gamma, mu, p, lattice, torus)
        worst_unit = max(worst_unit, abs(abs(lam) - 1))
        mu_sum = tuple(a + b for a, b in zip(mu, mu2))
        worst_mu = max(worst_mu, abs(tg.t_hecke_eigenvalue(gamma, mu_sum, p, lattice, torus) - lam * tg.t_hecke_eigenvalue(gamma, mu2, p, lattice, torus)))
        worst_gamma = max(worst_gamma, abs(tg.t_hecke_eigenvalue(gamma + gamma2, mu, p, lattice, torus) - lam * tg.t_hecke_eigenvalue(gamma2, mu, p, lattice, torus)))
        p_sum = reduce_point(p.coords + p2.coords, lattice)
        worst_p = max(worst_p, abs(tg.t_hecke_eigenvalue(gamma, mu, p_sum, lattice, torus) - lam * tg.t_hecke_eigenvalue(gamma, mu, p2, lattice, torus)))
        worst_eig = max(worst_eig, tg.verify_t_eigenfunction(gamma, mu, p, lattice, torus, 4))
    report.within("multiplicativity in mu_check", worst_mu, INVARIANT_TOL)
    report.within("multiplicativity in gamma", worst_gamma, INVARIANT_TOL)
    report.within("multiplicativity in p", worst_p, INVARIANT_TOL)
    report.within("unitarity", worst_unit, CLOSED_FORM_TOL)
    report.within("t_hecke_apply eigen residual (grid 4)", worst_eig, INVARIANT_TOL)

    if g == 1 and r <= 2:
        classes = _t_classes(r, g, 2)
        gram = tg.t_gram_matrix(classes, torus, lattice, 16)
        report.within("orthogonality, product quadrature N=16", np.max(np.abs(gram - np.eye(len(classes)))), GRAM_TOL)

    worst_mono = 0.0
    for gamma in _t_classes(r, g, 1) if g == 1 and r <= 2 else [rand_class() for _ in range(params.samples)]:
        for comp in tg.t_monodromy_generators(gamma, lattice):
            worst_mono = max(worst_mono, max(abs(w - 1) for w in comp))
    report.within("trivial monodromy of nabla_gamma", worst_mono, MONODROMY_TOL)

    gl1 = tg.TorusData.split(1)
    worst_red = 0.0
    for gamma in ah.class_box(g, 2):
        p = _random_points(lattice, rng, 1)[0]
        tgamma = tg.TCohomologyClass((gamma,))
        worst_red = max(worst_red, abs(tg.t_hecke_eigenvalue(tgamma, (1,), p, lattice, gl1) - ah.hecke_eigenvalue(gamma, p, lattice).value))
    report.within("rank-1 reduction to GL_1", worst_red, CLOSED_FORM_TOL)
    return report


# -- finite models -------------------------------------------------------------


def run_finite_hecke(params: Params) -> SuiteReport:
    primes = (params.q,) if params.q is not None else DEFAULT_PRIMES
    report = SuiteReport("finite-hecke", params.describe())
    for q in primes:
        for c in fm.verify_hecke_relations(q):
            report.add(f"q={q}: {c.name}", c.expected, c.observed, None, c.passed)
    return report


def run_fiber(params: Params) -> SuiteReport:
    primes = (params.q,) if params.q is not None else DEFAULT_PRIMES
    report = SuiteReport("fiber", params.describe())
    for label, M in fm.CATALOG_CASES.items():
        strata = fm.fiber_catalog(M)
        total = fm.total_count(strata)
        report.add(f"{label}: sum of stratum counts", "q+1 = [1, 1]", list(total), None, total == (1, 1))
        nonneg = all(s.count(q) >= 0 for s in strata for q in primes if q >= s.min_q)
        report.add(f"{label}: counts nonnegative", "true", str(nonneg).lower(), None, nonneg)
        for q in primes:
            if any(q < s.min_q for s in strata):
                continue
            value = fm.fq_hecke_apply(lambda t: 1, M, q)
            report.add(f"{label}: q={q} H(1) = q+1", str(q + 1), value, None, value == q + 1)

    ex1, ex3 = fm.CATALOG_CASES["example1: L1+L2, d1>d2+1"], fm.CATALOG_CASES["example3: O+O(x)"]
    for q in primes:
        coeffs = _coefficients(ex1, q)
        report.add(f"example1: q={q} coefficients of f(M'1), f(M'2)", f"[{q}, 1]", coeffs, None, coeffs == [q, 1])
        coeffs = _coefficients(ex3, q)
        report.add(f"example3: q={q} coefficients of f(M'1), f(M'2), f(F2)", f"[1, 1, {q - 1}]", coeffs, None, coeffs == [1, 1, q - 1])

    lattice = validate_period_matrix(params.tau if params.tau is not None else 1j)
    rng = np.random.default_rng(params.seed + 4)
    odd = 0
    for p in _random_points(lattice, rng, 100):
        minus = reduce_point(-p.coords, lattice)
        if fm.example2_cover(p, lattice) != fm.example2_cover(minus, lattice):
            odd += 1
    report.add("example2_cover(a) = example2_cover(-a) on 100 points", "0 failures", odd, None, odd == 0)
    half = [reduce_point(lattice.from_st([s], [t]), lattice) for s, t in [(0, 0), (0.5, 0), (0, 0.5), (0.5, 0.5)]]
    labels = sorted({fm.example2_cover(a, lattice).name for a in half})
    ok = labels == sorted(["O(x)F2", "L2(x)F2", "L3(x)F2", "L4(x)F2"])
    report.add("example2_cover: four ramification points", "4 distinct L_i(x)F2", labels, None, ok)
    return report


def _coefficients(M, q: int) -> list[int]:
    """Recover the weight of each stratum by applying the operator to indicator functions."""
    out = []
    for s in fm.fiber_catalog(M):
        out.append(fm.fq_hecke_apply(lambda t, target=s.target: int(t == target), M, q))
    return out


# -- spectrum-to-character audit ----------------------------------------------


def run_biject(params: Params) -> SuiteReport:
    report = SuiteReport("biject", params.describe())
    witness = fg.well_definedness_audit(2, 4, [0, 1])
    report.add("(2,4), x in {0,1}: distinct characters", "2", len(witness), None, len(witness) == 2)

    failures = 0
    for k, l in itertools.product(range(-12, 13), repeat=2):
        if k == 0 and l == 0:
            continue
        k_prime = fg.gcd_normal_form(k, l)[0]
        chars = fg.well_definedness_audit(k, l, range(k_prime + 1))
        if (len(chars) == 1) != (k_prime == 1):
            failures += 1
    report.add("dichotomy: one character iff k'=1 (|k|,|l|<=12)", "0 failures", failures, None, failures == 0)

    bad_det = bad_recon = dependent = 0
    for k, l in itertools.product(range(-50, 51), repeat=2):
        if k == 0 and l == 0:
            continue
        k_prime, alpha, beta = fg.gcd_normal_form(k, l)
        if (k_prime * alpha, k_prime * beta) != (k, l) or k_prime <= 0:
            bad_recon += 1
        m = fg.complete_to_sl2(alpha, beta)
        if abs(k) <= 12 and abs(l) <= 12:
            base = fg.fixed_variant_character(k, l)
            for x in range(-3, 4):
                mx = m.shear(x)
                if mx.det != 1:
                    bad_det += 1
                if fg.fixed_variant_character(k, l, mx) != base:
                    dependent += 1
    report.add("reconstruction (k,l) = k'(alpha,beta) (|k|,|l|<=50)", "0 failures", bad_recon, None, bad_recon == 0)
    report.add("det = 1 for every completion", "0 failures", bad_det, None, bad_det == 0)
    report.add("fixed variant independent of completion", "0 failures", dependent, None, dependent == 0)

    search = fg.reachability_search(40, 6)
    unreached = search["unreached"]
    report.add(
        "fixed variant on |k|,|l|<=40 misses some (Q/Z)^2 element of denominator <= 6",
        ">= 1 unreached",
        f"{len(unreached)} unreached, first {unreached[0] if unreached else None}",
        None,
        len(unreached) >= 1,
    )
    report.add(
        "fixed variant is not injective",
        "> 1 preimage of the trivial character",
        search["trivial_preimages"],
        None,
        search["trivial_preimages"] > 1,
    )
    return report


RUNNERS = {
    "elliptic": run_elliptic,
    "jacobian": run_jacobian,
    "connections": run_connections,
    "torus": run_torus,
    "finite-hecke": run_finite_hecke,
    "fiber": run_fiber,
    "biject": run_biject,
}


def run_suite(name: str, params: Params | None = None) -> SuiteReport:
    params = params or Params()
    if name == "all":
        report = SuiteReport("all", params.describe())
        for sub in RUNNERS:
            sub_report = RUNNERS[sub](params)
            for c in sub_report.checks:
                report.checks.append(Check(f"{sub}: {c.name}", c.expected, c.observed, c.residual, c.passed))
        return report
    if name not in RUNNERS:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return RUNNERS[name](params)


__all__ = ["Check", "Params", "SuiteReport", "SUITES", "run_suite"]
