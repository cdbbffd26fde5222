"""Named verification suites and deterministic report emission.

Each experiment enumerates cases over a configured grid, evaluates the
relevant module operation, and records measured/expected values with a
pass flag. Reports are written in a canonical form (numbers with 17
significant digits, fixed case order), so a fixed seed yields
byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import catmap, halfplane, obstruction, weyl

__all__ = [
    "ExperimentConfig",
    "CaseRecord",
    "ExperimentReport",
    "EXPERIMENT_NAMES",
    "describe",
    "default_config",
    "build_cases",
    "render_csv",
    "parse_csv",
    "render_json",
    "emit_curve",
]

CSV_HEADER = "experiment,case_id,t,s,j,measured,expected,abs_error,rel_error,pass"


@dataclass
class ExperimentConfig:
    """Grid bounds, seed, tolerances and output settings for one suite."""

    experiment: str
    seed: int = 20250809
    t_min: float = 0.0
    t_max: float = 0.0
    s_min: float = 0.0
    s_max: float = 0.0
    samples: int = 1
    tolerances: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    output_path: str | None = None
    fmt: str = "csv"

    def validate(self):
        if self.experiment not in EXPERIMENT_NAMES:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.t_min > self.t_max:
            raise ValueError("t_min must not exceed t_max")
        if self.s_min > self.s_max:
            raise ValueError("s_min must not exceed s_max")
        for name, value in self.tolerances.items():
            # Zero is allowed deliberately: a strict-equality run is the
            # documented way to exercise the failure path.
            if not (value >= 0.0 and math.isfinite(value)):
                raise ValueError(f"tolerance {name!r} must be a non-negative real")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.fmt!r}")

    def tol(self, name: str) -> float:
        return float(self.tolerances[name])


@dataclass
class CaseRecord:
    experiment: str
    case_id: str
    t: float | None
    s: float | None
    j: int | None
    measured: float
    expected: float
    tolerance: float
    passed: bool


@dataclass
class ExperimentReport:
    experiment: str
    verifies: str
    cases: list
    aggregate_pass: bool
    duration: float


# -- experiment registry ----------------------------------------------

_DESCRIPTIONS = {
    "cat-classical": "conjugation and differential hyperbolicity checks for the toral automorphism",
    "cat-divergence": "exponential orbit-separation rate along the expanding direction",
    "cat-ergodic": "decay of Birkhoff averages of lattice harmonics on generic orbits",
    "geodesic": "matrix conjugation identity for geodesic and horocycle flows on the half-plane",
    "cat-quantum": "conjugation identity for the automorphisms of the quantized cat map",
    "quantum-divergence": "exponential divergence law for evolved state differences",
    "nogo-sylvester": "spectral obstruction: the generator equation has only the zero solution",
    "nogo-search": "direct search finds no small-defect hyperbolic generator for a discrete spectrum",
    "nogo-affine": "dilation/translation control pair: the defect vanishes under grid refinement",
}

EXPERIMENT_NAMES = tuple(_DESCRIPTIONS)

_DEFAULTS = {
    "cat-classical": dict(
        t_min=-10, t_max=10, s_min=-1.0, s_max=1.0, samples=20,
        tolerances={"conjugation": 1e-9, "differential": 1e-7, "witness_floor": 0.1},
    ),
    "cat-divergence": dict(
        t_min=0, t_max=15, samples=5,
        tolerances={"slope": 1e-3},
        options={"eps": 1e-8},
    ),
    "cat-ergodic": dict(
        samples=10,
        tolerances={"bound_factor": 5.0},
        options={"n_steps": 100_000},
    ),
    "geodesic": dict(
        t_min=-5.0, t_max=5.0, s_min=-2.0, s_max=2.0, samples=11,
        tolerances={"defect_base": 1e-12, "invariance": 1e-10, "differential": 1e-8},
        options={"invariance_trials": 200},
    ),
    "cat-quantum": dict(
        t_min=-6, t_max=6, s_min=-1.0, s_max=1.0, samples=25,
        tolerances={"defect_base": 1e-8},
        options={"max_index": 20},
    ),
    "quantum-divergence": dict(
        t_min=0, t_max=6, samples=10,
        tolerances={"relative": 1e-8},
    ),
    "nogo-sylvester": dict(
        samples=100,
        tolerances={"margin": 1e-9},
        options={"lambdas": (0.25, 0.5, 1.0, 2.0), "commutant_cases": 20},
    ),
    "nogo-search": dict(
        samples=200,
        tolerances={"floor": 0.05, "stability": 0.9},
    ),
    "nogo-affine": dict(
        tolerances={"trivial": 1e-10, "sanity": 1.0},
        options={"resolutions": (256, 512, 1024, 2048)},
    ),
}


def describe(name: str) -> str:
    return _DESCRIPTIONS[name]


def default_config(name: str) -> ExperimentConfig:
    if name not in _DESCRIPTIONS:
        raise ValueError(f"unknown experiment {name!r}")
    base = _DEFAULTS[name]
    return ExperimentConfig(
        experiment=name,
        t_min=float(base.get("t_min", 0.0)),
        t_max=float(base.get("t_max", 0.0)),
        s_min=float(base.get("s_min", 0.0)),
        s_max=float(base.get("s_max", 0.0)),
        samples=int(base.get("samples", 1)),
        tolerances=dict(base.get("tolerances", {})),
        options=dict(base.get("options", {})),
    )


# -- case builders -----------------------------------------------------


def _int_range(cfg: ExperimentConfig):
    return range(int(cfg.t_min), int(cfg.t_max) + 1)


def _s_grid(cfg: ExperimentConfig, n: int = 5):
    return np.linspace(cfg.s_min, cfg.s_max, n)


def _case(cfg, case_id, measured, expected, tolerance, passed, t=None, s=None, j=None):
    return CaseRecord(
        experiment=cfg.experiment, case_id=case_id, t=t, s=s, j=j,
        measured=float(measured), expected=float(expected),
        tolerance=float(tolerance), passed=bool(passed),
    )


def _build_cat_classical(cfg: ExperimentConfig):
    rng = np.random.default_rng(cfg.seed)
    phi = catmap.CAT_MAP
    tol = cfg.tol("conjugation")
    cases = []
    for t in _int_range(cfg):
        for s in _s_grid(cfg):
            m = catmap.TorusPoint(rng.random(), rng.random())
            j = 1 if (t + round(s * 1000)) % 2 == 0 else 2
            d = catmap.conjugation_defect(phi, j, t, float(s), m)
            cases.append(_case(cfg, f"conjugation:t={t}:s={s:.2f}", d, 0.0, tol,
                               d <= tol, t=t, s=float(s), j=j))
    dtol = cfg.tol("differential")
    for j in (1, 2):
        for t in range(-5, 6):
            d = catmap.differential_defect(phi, j, t)
            cases.append(_case(cfg, f"differential:j={j}:t={t}", d, 0.0, dtol,
                               d <= dtol, t=t, j=j))
    floor = cfg.tol("witness_floor")
    d1 = catmap.differential_defect(phi, 1, 1, direction=(1.0, 0.0))
    cases.append(_case(cfg, "witness:differential-noneigen", d1, floor, floor,
                       d1 >= floor, t=1, j=1))
    d2 = catmap.conjugation_defect(phi, 1, 1, 0.1, catmap.TorusPoint(0.3, 0.4),
                                   direction=(1.0, 0.0))
    cases.append(_case(cfg, "witness:conjugation-noneigen", d2, floor, floor,
                       d2 >= floor, t=1, s=0.1, j=1))
    return cases


def _build_cat_divergence(cfg: ExperimentConfig):
    rng = np.random.default_rng(cfg.seed)
    phi = catmap.CAT_MAP
    system = catmap.eigen_system(phi)
    eps = float(cfg.options.get("eps", 1e-8))
    horizon = int(cfg.t_max)
    tol = cfg.tol("slope")
    cases = []
    for i in range(cfg.samples):
        m = catmap.TorusPoint(rng.random(), rng.random())
        pairs = catmap.separation_growth(phi, m, (1.0, 0.0), eps, horizon)
        slope = catmap.fit_growth_rate(pairs)
        err = abs(slope - system.lambda1)
        cases.append(_case(cfg, f"expanding-slope:{i}", slope, system.lambda1,
                           tol, err <= tol, t=horizon))
        pairs_c = catmap.separation_growth(phi, m, (0.0, 1.0), 1e-3, 10)
        slope_c = catmap.fit_growth_rate(pairs_c)
        err_c = abs(slope_c - system.lambda2)
        cases.append(_case(cfg, f"contracting-slope:{i}", slope_c, system.lambda2,
                           tol, err_c <= tol, t=10))
    return cases


def _build_cat_ergodic(cfg: ExperimentConfig):
    rng = np.random.default_rng(cfg.seed)
    n_steps = int(cfg.options.get("n_steps", 100_000))
    bound = cfg.tol("bound_factor") / math.sqrt(n_steps)
    cases = []
    for i in range(cfg.samples):
        m = catmap.TorusPoint(rng.random(), rng.random())
        avg = abs(catmap.birkhoff_average((1, 0), m, n_steps))
        cases.append(_case(cfg, f"birkhoff:nu=1_0:point={i}", avg, 0.0, bound,
                           avg <= bound, t=n_steps))
    return cases


def _build_geodesic(cfg: ExperimentConfig):
    rng = np.random.default_rng(cfg.seed)
    base = cfg.tol("defect_base")
    cases = []
    for t in np.linspace(cfg.t_min, cfg.t_max, cfg.samples):
        for s in _s_grid(cfg):
            for j in (1, 2):
                d = halfplane.conjugation_defect(j, float(t), float(s))
                tol = base * (1.0 + math.exp(abs(float(t))))
                cases.append(_case(cfg, f"conjugation:j={j}:t={t:.2f}:s={s:.2f}",
                                   d, 0.0, tol, d <= tol,
                                   t=float(t), s=float(s), j=j))
    dtol = cfg.tol("differential")
    for j in (1, 2):
        for t in (-2.0, -1.0, 0.0, 1.0, 2.0):
            d = halfplane.horocycle_differential_defect(
                j, t, halfplane.MoebiusMatrix.identity(), 1e-5)
            cases.append(_case(cfg, f"differential:j={j}:t={t:g}", d, 0.0,
                               dtol, d <= dtol, t=t, j=j))
    itol = cfg.tol("invariance")
    trials = int(cfg.options.get("invariance_trials", 200))
    for i in range(trials):
        g = halfplane.random_element(rng)
        z1 = halfplane.HalfPlanePoint(2.0 * rng.random() - 1.0, 0.2 + 2.0 * rng.random())
        z2 = halfplane.HalfPlanePoint(2.0 * rng.random() - 1.0, 0.2 + 2.0 * rng.random())
        before = halfplane.hyperbolic_distance(z1, z2)
        after = halfplane.hyperbolic_distance(
            halfplane.moebius_apply(g, z1), halfplane.moebius_apply(g, z2))
        err = abs(after - before)
        cases.append(_case(cfg, f"distance-invariance:{i}", after, before, itol,
                           err <= itol))
    return cases


def _build_cat_quantum(cfg: ExperimentConfig):
    rng = np.random.default_rng(cfg.seed)
    base = cfg.tol("defect_base")
    max_index = int(cfg.options.get("max_index", 20))
    system = weyl.CAT_SYSTEM
    cases = []
    for i in range(cfg.samples):
        nu = tuple(int(v) for v in rng.integers(-max_index, max_index + 1, size=2))
        if nu == (0, 0):
            nu = (1, 0)
        a = weyl.WeylPolynomial.generator(nu)
        for t in _int_range(cfg):
            for s in _s_grid(cfg):
                j = 1 if (i + t) % 2 == 0 else 2
                d = weyl.hyperbolicity_defect(a, j, t, float(s))
                tol = base * catmap.stretch_factor(system, 1, abs(t))
                cases.append(_case(
                    cfg, f"defect:nu={nu[0]}_{nu[1]}:j={j}:t={t}:s={s:.2f}", d, 0.0, tol,
                    d <= tol, t=t, s=float(s), j=j))
    return cases


def _random_state(rng) -> weyl.StateFunctional:
    size = int(rng.integers(2, 5))
    nu = rng.integers(-4, 5, size=(size, 2))
    radius = 0.25 + 0.75 * np.sqrt(rng.random(size))
    coeff = radius * np.exp(2j * np.pi * rng.random(size))
    b = weyl.WeylPolynomial.identity() + weyl.WeylPolynomial(nu, coeff)
    return weyl.vector_state(b)


def _build_quantum_divergence(cfg: ExperimentConfig):
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tol("relative")
    system = weyl.CAT_SYSTEM
    cases = []
    for i in range(cfg.samples):
        f1 = _random_state(rng)
        f2 = _random_state(rng)
        for j in (1, 2):
            for t in _int_range(cfg):
                ratio = weyl.divergence_ratio(f1, f2, j, t)
                expected = catmap.stretch_factor(system, j, t)
                rel = abs(ratio - expected) / expected
                cases.append(_case(cfg, f"divergence:pair={i}:j={j}:t={t}",
                                   ratio, expected, tol, rel <= tol, t=t, j=j))
    return cases


def _build_nogo_sylvester(cfg: ExperimentConfig):
    rng = np.random.default_rng(cfg.seed)
    margin = cfg.tol("margin")
    lambdas = tuple(cfg.options.get("lambdas", (0.25, 0.5, 1.0, 2.0)))
    cases = []
    for i in range(cfg.samples):
        n = 2 + i % 11
        h = obstruction.random_hermitian(n, rng)
        lam = lambdas[i % len(lambdas)]
        nullity, sigma_min = obstruction.sylvester_obstruction(h, lam)
        ok = nullity == 0 and sigma_min >= abs(lam) - margin
        cases.append(_case(cfg, f"obstruction:{i}:n={n}:lam={lam:g}:nullity={nullity}",
                           sigma_min, abs(lam), margin, ok))
    for i in range(int(cfg.options.get("commutant_cases", 20))):
        n = 2 + i % 11
        h, dim = _degenerate_hermitian(n, rng)
        nullity, _ = obstruction.sylvester_obstruction(h, 0.0)
        cases.append(_case(cfg, f"commutant:{i}:n={n}", nullity, dim, 0.0,
                           nullity == dim))
    survey_out = cfg.options.get("survey_out")
    if survey_out:
        records = obstruction.obstruction_survey(
            range(2, 13), lambdas, seed=cfg.seed)
        with open(survey_out, "w", encoding="ascii") as fh:
            fh.write(obstruction.survey_to_json(records))
    return cases


def _degenerate_hermitian(n, rng):
    """Hermitian matrix with known eigenvalue multiplicities, plus sum(m_i^2)."""
    mults = []
    remaining = n
    while remaining:
        m = int(rng.integers(1, remaining + 1))
        mults.append(m)
        remaining -= m
    values = rng.permutation(np.arange(-6, 7, dtype=float))[: len(mults)]
    diag = np.repeat(values, mults)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(a)
    h = q @ np.diag(diag) @ q.conj().T
    h = (h + h.conj().T) / 2.0
    return h, sum(m * m for m in mults)


def _build_nogo_search(cfg: ExperimentConfig):
    floor = cfg.tol("floor")
    stability = cfg.tol("stability")
    h = np.diag([0.0, 1.0])
    trials = cfg.samples
    best = obstruction.conjugation_defect_search(h, 1.0, trials=trials, seed=cfg.seed)
    cases = [
        _case(cfg, "search:two-level:lam=1", best, floor, floor, best >= floor)
    ]
    dense = obstruction.conjugation_defect_search(
        h, 1.0, trials=trials, seed=cfg.seed,
        s_values=np.linspace(-1.0, 1.0, 9), t_values=np.linspace(-2.0, 2.0, 9))
    ratio = dense / best
    cases.append(_case(cfg, "search:grid-stability", ratio, 1.0, stability,
                       ratio >= stability))
    return cases


def _build_nogo_affine(cfg: ExperimentConfig):
    resolutions = tuple(int(r) for r in cfg.options.get("resolutions", (256, 512, 1024, 2048)))
    trivial = cfg.tol("trivial")
    sanity = cfg.tol("sanity")
    cases = []
    previous = None
    for res in resolutions:
        d = obstruction.affine_pair_defect(res)
        if previous is None:
            ok = d < sanity
            expected = sanity
        else:
            ok = d < previous
            expected = previous
        cases.append(_case(cfg, f"affine:resolution={res}", d, expected,
                           sanity, ok, t=0.5, s=0.3))
        previous = d
        d_s0 = obstruction.affine_pair_defect(res, s=0.0)
        cases.append(_case(cfg, f"affine-trivial:s=0:resolution={res}", d_s0, 0.0,
                           trivial, d_s0 <= trivial, t=0.5, s=0.0))
        d_t0 = obstruction.affine_pair_defect(res, t=0.0)
        cases.append(_case(cfg, f"affine-trivial:t=0:resolution={res}", d_t0, 0.0,
                           trivial, d_t0 <= trivial, t=0.0, s=0.3))
    return cases


_BUILDERS = {
    "cat-classical": _build_cat_classical,
    "cat-divergence": _build_cat_divergence,
    "cat-ergodic": _build_cat_ergodic,
    "geodesic": _build_geodesic,
    "cat-quantum": _build_cat_quantum,
    "quantum-divergence": _build_quantum_divergence,
    "nogo-sylvester": _build_nogo_sylvester,
    "nogo-search": _build_nogo_search,
    "nogo-affine": _build_nogo_affine,
}


def build_cases(cfg: ExperimentConfig):
    cfg.validate()
    return _BUILDERS[cfg.experiment](cfg)


# -- canonical emission -------------------------------------------------


def _num(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.17g}"


def _rel_error(measured: float, expected: float) -> float:
    # Convention: against a zero reference the relative error is the
    # absolute one, keeping every emitted number finite.
    err = abs(measured - expected)
    return err / abs(expected) if expected != 0.0 else err


def _row(r: CaseRecord) -> str:
    abs_err = abs(r.measured - r.expected)
    rel_err = _rel_error(r.measured, r.expected)
    fields = [
        r.experiment,
        r.case_id,
        _num(r.t),
        _num(r.s),
        "" if r.j is None else str(int(r.j)),
        _num(r.measured),
        _num(r.expected),
        _num(abs_err),
        _num(rel_err),
        "true" if r.passed else "false",
    ]
    for f in fields[:2]:
        if "," in f or "\n" in f:
            raise ValueError(f"field not CSV-safe: {f!r}")
    return ",".join(fields)


def render_csv(records) -> str:
    if not records:
        raise ValueError("no records to emit")
    return "\n".join([CSV_HEADER] + [_row(r) for r in records]) + "\n"


def parse_csv(text: str):
    """Parse a report CSV back into records (tolerance is not stored)."""
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("not a report CSV")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 10:
            raise ValueError(f"malformed row: {line!r}")
        records.append(CaseRecord(
            experiment=parts[0],
            case_id=parts[1],
            t=float(parts[2]) if parts[2] else None,
            s=float(parts[3]) if parts[3] else None,
            j=int(parts[4]) if parts[4] else None,
            measured=float(parts[5]),
            expected=float(parts[6]),
            tolerance=0.0,
            passed=parts[9] == "true",
        ))
    return records


def _json_case(r: CaseRecord) -> str:
    abs_err = abs(r.measured - r.expected)
    rel_err = _rel_error(r.measured, r.expected)

    def num(x):
        return "null" if x is None else _num(x)

    jval = "null" if r.j is None else str(int(r.j))
    return (
        '{"experiment": "%s", "case_id": "%s", "t": %s, "s": %s, "j": %s, '
        '"measured": %s, "expected": %s, "abs_error": %s, "rel_error": %s, '
        '"pass": %s}'
        % (r.experiment, r.case_id, num(r.t), num(r.s), jval,
           _num(r.measured), _num(r.expected), _num(abs_err), _num(rel_err),
           "true" if r.passed else "false")
    )


def render_json(records, experiment: str | None = None, verifies: str | None = None,
                aggregate: bool | None = None) -> str:
    if not records:
        raise ValueError("no records to emit")
    case_lines = ",\n    ".join(_json_case(r) for r in records)
    if experiment is None:
        return '[\n    %s\n]\n' % case_lines
    return (
        '{\n  "experiment": "%s",\n  "verifies": "%s",\n  "aggregate_pass": %s,\n'
        '  "cases": [\n    %s\n  ]\n}\n'
        % (experiment, verifies, "true" if aggregate else "false", case_lines)
    )


def emit_curve(records, path, fmt: str):
    """Write records to `path` as canonical CSV or JSON."""
    if fmt == "csv":
        text = render_csv(records)
    elif fmt == "json":
        text = render_json(records)
    else:
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(text)
