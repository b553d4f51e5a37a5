"""Command-line interface: deterministic checks with JSON/CSV reports.

Every subcommand echoes its configuration and seed into the report, so a
rerun with identical flags produces a byte-identical file.  Exit status is 0
when every asserted check passes, 1 on a failed check, and 2 on an invalid
configuration.  The environment variable BRIESKORN_LAB_THREADS caps the
parallelism of the composite `all` run (default 1).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, acceptance
from .exterior import (
    DiagonalOneForm,
    level_contact_form,
    weighted_contact_form,
)
from .geometry import LevelSpec, sample_level_set
from .monodromy import (
    JoinComplex,
    char_poly,
    char_poly_match,
    char_poly_relation,
    matrix_order_check,
    milnor_number,
    monodromy_hypotheses,
    monodromy_matrix,
    reduced_homology,
    rotation_induced_map,
)
from .openbook import (
    CoveringSpec,
    OpenBookSpec,
    base_projection,
    binding_components,
    binding_orientation_integrals,
    cover_page_phase,
    fibers_over,
    page_phase,
    page_rotation_residual,
    page_symplectic_check,
    radial_profile,
    reeb_field,
)
from .exterior import eval_one_form, eval_two_form, tangent_frame
from .geometry import brieskorn_poly
from .report import TOOL_NAME, write_report
from .verify import (
    negative_weight_sign_check,
    negative_weight_sign_search,
    perturbation_scale_search,
    pullback_check,
    s_derivative_check,
    sample_branch_locus,
    verify_contact,
    verify_family,
    wedge_identity_terms,
)

SUBCOMMANDS = (
    "verify-contact",
    "verify-family",
    "wedge-identity",
    "epsilon-search",
    "pullback",
    "s-derivative",
    "negative-weight",
    "openbook-checks",
    "monodromy",
    "join-homology",
    "rotation-map",
    "all",
)


def thread_cap() -> int:
    raw = os.environ.get("BRIESKORN_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parse_exponents(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad exponent list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty exponent list")
    return values


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty float list")
    return values


def _parse_exponent_grid(text: str) -> tuple[tuple[int, ...], ...]:
    return tuple(_parse_exponents(chunk) for chunk in text.split(";") if chunk.strip())


_CONFIG_CONVERTERS = {
    "exponents": _parse_exponents,
    "s": float,
    "s_grid": _parse_floats,
    "t_grid": _parse_floats,
    "samples": int,
    "seed": int,
    "threshold": float,
    "eps_max": float,
    "h": float,
    "big_c": float,
    "c_grid": _parse_floats,
    "explore": _parse_exponent_grid,
    "family": str,
    "out": str,
    "format": str,
    "ratio_tol": float,
}


def read_config_file(path: str) -> dict:
    """Key-value config file mirroring the flags (key = value, '#' comments)."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, value = line.split("=", 1)
            else:
                parts = line.split(None, 1)
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: cannot parse {raw!r}")
                key, value = parts
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_CONVERTERS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            out[key] = _CONFIG_CONVERTERS[key](value.strip())
    return out


@dataclass
class RunConfig:
    """Echoed verbatim into every report."""

    subcommand: str
    exponents: tuple[int, ...] | None = None
    s: float = 1.0
    s_grid: tuple[float, ...] = ()
    t_grid: tuple[float, ...] = ()
    samples: int = 0
    seed: int = 42
    threshold: float = 1e-6
    eps_max: float = 1.0
    h: float = 1e-4
    big_c: float = 100.0
    c_grid: tuple[float, ...] = ()
    explore: tuple[tuple[int, ...], ...] = ()
    family: str = "interpolation"
    ratio_tol: float = 1e-6
    out: str | None = None
    format: str = "json"

    def echo(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "exponents": list(self.exponents) if self.exponents else None,
            "s": self.s,
            "s_grid": list(self.s_grid),
            "t_grid": list(self.t_grid),
            "samples": self.samples,
            "seed": self.seed,
            "threshold": self.threshold,
            "eps_max": self.eps_max,
            "h": self.h,
            "big_c": self.big_c,
            "c_grid": list(self.c_grid),
            "explore": [list(e) for e in self.explore],
            "family": self.family,
            "ratio_tol": self.ratio_tol,
            "format": self.format,
        }


def _row(name, value, threshold, passed, witness=None) -> dict:
    return {"name": name, "value": value, "threshold": threshold, "pass": bool(passed), "witness": witness}


def _report_rows(rep) -> list[dict]:
    return [
        _row("min_value", rep.min_value, rep.tolerances.get("threshold"), rep.passed, rep.witnesses[:1]),
        _row("max_residual", rep.max_residual, rep.tolerances.get("residual"), rep.passed),
        _row("sign_consistent", rep.sign_consistent, None, True),
    ]


def _need_exponents(config: RunConfig, min_len: int = 2) -> tuple[int, ...]:
    if config.exponents is None or len(config.exponents) < min_len:
        raise ValueError(f"--exponents with at least {min_len} entries is required")
    return config.exponents


def _run_verify_contact(config: RunConfig):
    e = _need_exponents(config)
    spec = LevelSpec.level(e, config.s)
    samples = sample_level_set(spec, config.samples or 500, config.seed)
    rep = verify_contact(
        level_contact_form(e, config.s), spec, samples, threshold=config.threshold, seed=config.seed
    )
    return _report_rows(rep), rep.passed


def _run_verify_family(config: RunConfig):
    e = _need_exponents(config)
    t_grid = config.t_grid or tuple(k / 10.0 for k in range(11))
    count = config.samples or 200
    if config.family == "interpolation":
        weights = np.asarray(e, dtype=float)

        def family(t: float) -> DiagonalOneForm:
            return weighted_contact_form(tuple((1.0 - t) * weights + t * np.ones(len(e))))

        rep = verify_family(
            family, t_grid, LevelSpec.sphere(e), count=count, seed=config.seed,
            threshold=config.threshold,
        )
    elif config.family == "level":
        rep = verify_family(
            lambda t: level_contact_form(e, t),
            t_grid,
            lambda t: LevelSpec.level(e, t),
            count=count,
            seed=config.seed,
            threshold=config.threshold,
        )
    else:
        raise ValueError(f"unknown family {config.family!r}")
    rows = _report_rows(rep)
    rows.append(_row("per_t", rep.extras["per_t"], None, rep.passed))
    return rows, rep.passed


def _run_wedge_identity(config: RunConfig):
    e = _need_exponents(config)
    s_grid = config.s_grid or (0.25, 0.5, 1.0)
    count = config.samples or 100
    rows = []
    passed = True
    for s in s_grid:
        pts = sample_level_set(LevelSpec.level(e, s), count, (config.seed, int(round(1000 * s))))
        dev = max(abs(wedge_identity_terms(e, s, z).ratio - 1.0) for z in pts)
        ok = dev <= config.ratio_tol
        passed = passed and ok
        rows.append(_row(f"on_level_ratio_dev[s={s:g}]", dev, config.ratio_tol, ok))
    rng = np.random.default_rng((config.seed, 101))
    ambient_dev = 0.0
    for s in s_grid:
        for _ in range(count // 2 or 1):
            z = rng.standard_normal(len(e)) + 1j * rng.standard_normal(len(e))
            terms = wedge_identity_terms(e, s, z)
            if terms.ratio is not None:
                ambient_dev = max(ambient_dev, abs(terms.ratio - 1.0))
    rows.append(_row("ambient_ratio_dev", ambient_dev, config.ratio_tol, ambient_dev <= config.ratio_tol))
    passed = passed and ambient_dev <= config.ratio_tol
    branch = sample_branch_locus(e, 20, (config.seed, 102))
    if branch:
        lhs_max = max(abs(wedge_identity_terms(e, 0.0, z).lhs) for z in branch)
        bracket_max = max(abs(wedge_identity_terms(e, 0.0, z).bracket) for z in branch)
        ok = lhs_max < 1e-8 and bracket_max == 0.0
        passed = passed and ok
        rows.append(_row("degenerate_locus", {"lhs": lhs_max, "bracket": bracket_max}, 1e-8, ok))
    return rows, passed


def _run_epsilon_search(config: RunConfig):
    e = _need_exponents(config)
    samples = sample_level_set(LevelSpec.cylinder(e), config.samples or 500, config.seed)
    branch = sample_branch_locus(e, 20, (config.seed, 9))
    eps_star, rep = perturbation_scale_search(
        e, samples, eps_max=config.eps_max, threshold=config.threshold,
        branch_samples=branch, seed=config.seed,
    )
    rows = [
        _row("eps_star", eps_star, None, rep.passed),
        _row("min_value_at_eps_star", rep.min_value, config.threshold, rep.passed),
        _row("monotone", rep.extras["monotone"], None, rep.extras["monotone"]),
        _row("kernel_two_form_min", rep.extras["kernel_two_form_min"], 0.0,
             rep.extras["kernel_two_form_min"] is None or rep.extras["kernel_two_form_min"] > 0),
    ]
    return rows, rep.passed


def _run_pullback(config: RunConfig):
    e = _need_exponents(config)
    samples = sample_level_set(LevelSpec.cylinder(e), config.samples or 200, config.seed)
    rep = pullback_check(e, samples, seed=config.seed)
    rows = [
        _row("max_deviation", rep.extras["max_deviation"], rep.tolerances["deviation"], rep.passed),
        _row("max_residual", rep.max_residual, rep.tolerances["residual"], rep.passed),
    ]
    return rows, rep.passed


def _run_s_derivative(config: RunConfig):
    e = _need_exponents(config)
    samples = sample_level_set(LevelSpec.cylinder(e), config.samples or 50, config.seed)
    rep = s_derivative_check(e, samples, h=config.h, seed=config.seed)
    rows = [
        _row(
            "max_deviation_from_first_variation",
            rep.extras["max_deviation_from_first_variation"],
            rep.tolerances["deviation"],
            rep.passed,
        ),
        _row(
            "max_deviation_from_angular_form",
            rep.extras["max_deviation_from_angular_form"],
            None,
            True,
        ),
    ]
    return rows, rep.passed


def _run_negative_weight(config: RunConfig):
    e = _need_exponents(config)
    samples = sample_level_set(LevelSpec.level(e, 1.0), config.samples or 500, config.seed)
    rep = negative_weight_sign_check(e, config.big_c, samples, seed=config.seed)
    rows = [
        _row("uniform_sign", rep.sign_consistent, None, rep.passed),
        _row("min_abs_value", rep.min_value, None, rep.passed, rep.witnesses[:1]),
    ]
    passed = rep.passed
    if config.explore:
        witnesses = negative_weight_sign_search(
            config.explore, config.c_grid or (10.0, 100.0),
            samples_per_case=max(1, (config.samples or 500) // 2), seed=config.seed,
        )
        rows.append(_row("exploratory_witnesses", witnesses, None, True))
    return rows, passed


def _run_openbook_checks(config: RunConfig):
    e = _need_exponents(config)
    tail = e[1:]
    seed = config.seed
    count = config.samples or 300
    book = OpenBookSpec(tail)
    cover = CoveringSpec(e)
    beta = weighted_contact_form(tail)
    sphere = LevelSpec.sphere(tail)
    cs = sphere.constraint_set()
    samples = sample_level_set(sphere, count, (seed, 1))
    pairing_dev = 0.0
    two_form_dev = 0.0
    rotation_dev = 0.0
    for z in samples:
        reeb = reeb_field(book, z)
        pairing_dev = max(pairing_dev, abs(eval_one_form(beta, z, reeb) - 1.0))
        frame = tangent_frame(cs, z, sphere.frame_dim)
        for v in frame.basis:
            two_form_dev = max(two_form_dev, abs(eval_two_form(beta, z, reeb, v)))
        if abs(brieskorn_poly(tail, z)) > 1e-9:
            for t in (0.35, 1.2, 2.8):
                rotation_dev = max(rotation_dev, page_rotation_residual(book, z, t))
    rows = [
        _row("reeb_pairing_dev", pairing_dev, 1e-12, pairing_dev <= 1e-12),
        _row("reeb_two_form_dev", two_form_dev, 1e-10, two_form_dev <= 1e-10),
        _row("page_rotation_dev", rotation_dev, 1e-12, rotation_dev <= 1e-12),
    ]
    page_rep = page_symplectic_check(book, samples, threshold=config.threshold, seed=seed)
    rows.append(_row("page_pfaffian_min", page_rep.min_value, config.threshold, page_rep.passed))
    rows.append(
        _row(
            "page_reeb_transversality_min",
            page_rep.extras["min_reeb_transversality"],
            0.0,
            page_rep.passed,
        )
    )
    cyl_samples = [
        z
        for z in sample_level_set(LevelSpec.cylinder(e), count + 60, (seed, 2))
        if abs(brieskorn_poly(tail, base_projection(z))) >= 1e-3
    ][:count]
    power_dev = max(
        abs(cover_page_phase(cover, z) ** cover.degree - page_phase(book, base_projection(z)))
        for z in cyl_samples
    )
    rows.append(_row("cover_phase_power_dev", power_dev, 1e-12, power_dev <= 1e-12))
    generic = [w for w in sample_level_set(LevelSpec.sphere(tail), 60, (seed, 3))
               if abs(brieskorn_poly(tail, w)) > 1e-3][:50]
    fiber_ok = all(len(fibers_over(cover, w)) == cover.degree for w in generic)
    rows.append(_row("generic_fiber_count", cover.degree, None, fiber_ok))
    branch = sample_branch_locus(e, 10, (seed, 4))
    if branch:
        branch_ok = all(
            len(fibers_over(cover, base_projection(z))) == 1 for z in branch
        )
        rows.append(_row("branch_fiber_count", 1, None, branch_ok))
    if len(tail) == 2:
        loops = binding_components(*tail)
        integrals = binding_orientation_integrals(*tail)
        spread = (max(integrals) - min(integrals)) / max(abs(v) for v in integrals)
        ok = len(loops) == math.gcd(*tail) and all(v > 0 for v in integrals) and spread <= 1e-8
        rows.append(
            _row(
                "binding",
                {"components": len(loops), "integrals": integrals, "relative_spread": spread},
                1e-8,
                ok,
            )
        )
    grid = np.linspace(0.0, 1.5, 10_001)
    prof = radial_profile(cover.degree, 0.5, grid)
    monotone = bool(np.all(np.diff(prof) > 0.0))
    rows.append(_row("radial_profile_monotone", monotone, None, monotone))
    return rows, all(r["pass"] for r in rows)


def _run_monodromy(config: RunConfig):
    tail = _need_exponents(config, min_len=1)
    psi = monodromy_matrix(tail)
    mu = milnor_number(tail)
    hypotheses = monodromy_hypotheses(tail)
    order_bound = 2 * math.lcm(*tail)
    order = matrix_order_check(psi, order_bound)
    det = psi.determinant()
    poly = char_poly(psi)
    rows = [
        _row("milnor_number", mu, None, True),
        _row("dimension_matches", {"mu": mu, "dim": psi.rows}, None, psi.rows == mu),
        _row("matrix", psi, None, True),
        _row("char_poly", poly, None, True),
        _row("det", str(det), None, det == 1),
        _row("order", {"order": order, "bound": order_bound}, None, order is not None),
        _row("hypotheses", hypotheses, None, True),
    ]
    return rows, all(r["pass"] for r in rows)


def _run_join_homology(config: RunConfig):
    tail = _need_exponents(config, min_len=1)
    summary = reduced_homology(JoinComplex(tail))
    mu = milnor_number(tail)
    top = len(tail) - 1
    expected = tuple(mu if k == top else 0 for k in range(len(tail)))
    ok = summary.ranks == expected and summary.torsion_free
    rows = [
        _row("ranks", list(summary.ranks), list(expected), summary.ranks == expected),
        _row("torsion_free", summary.torsion_free, None, summary.torsion_free),
        _row("torsion", [list(t) for t in summary.torsion], None, True),
    ]
    return rows, ok


def _run_rotation_map(config: RunConfig):
    tail = _need_exponents(config, min_len=1)
    complex_ = JoinComplex(tail)
    rotation = rotation_induced_map(complex_)
    rot_char = char_poly(rotation)
    rows = [_row("matrix", rotation, None, True), _row("char_poly", rot_char, None, True)]
    hypotheses = monodromy_hypotheses(tail)
    if all(a >= 2 for a in tail):
        model_char = char_poly(monodromy_matrix(tail))
        match = char_poly_match(rot_char, model_char)
        relation = char_poly_relation(rot_char, model_char)
        asserted = bool(hypotheses["gcd_is_one"])
        ok = (match is not None) if asserted else True
        rows.append(
            _row(
                "model_comparison",
                {"model_char_poly": repr(model_char), "relation": relation, "asserted": asserted},
                None,
                ok,
            )
        )
    rows.append(_row("hypotheses", hypotheses, None, True))
    return rows, all(r["pass"] for r in rows)


def _run_all(config: RunConfig):
    results = acceptance.run_all(config.seed, max_workers=thread_cap())
    rows = []
    passed = True
    for res in results:
        rows.append(_row(f"criterion_{res.number:02d}[{res.name}]", None, None, res.passed))
        for sub in res.rows:
            rows.append(
                _row(
                    f"criterion_{res.number:02d}.{sub['name']}",
                    sub["value"],
                    sub["threshold"],
                    sub["pass"],
                    sub["witness"],
                )
            )
        passed = passed and res.passed
    return rows, passed


_HANDLERS = {
    "verify-contact": _run_verify_contact,
    "verify-family": _run_verify_family,
    "wedge-identity": _run_wedge_identity,
    "epsilon-search": _run_epsilon_search,
    "pullback": _run_pullback,
    "s-derivative": _run_s_derivative,
    "negative-weight": _run_negative_weight,
    "openbook-checks": _run_openbook_checks,
    "monodromy": _run_monodromy,
    "join-homology": _run_join_homology,
    "rotation-map": _run_rotation_map,
    "all": _run_all,
}


def run(config: RunConfig) -> int:
    """Execute the configured check, write its report, return the exit status."""
    handler = _HANDLERS.get(config.subcommand)
    if handler is None:
        raise ValueError(f"unknown subcommand {config.subcommand!r}")
    rows, passed = handler(config)
    payload = {
        "tool": TOOL_NAME,
        "version": __version__,
        "check": config.subcommand,
        "config": config.echo(),
        "seed": config.seed,
        "results": rows,
        "pass": bool(passed),
    }
    text = write_report(config.out, payload, config.format)
    if config.out is None:
        sys.stdout.write(text)
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Deterministic verification checks for Brieskorn contact geometry.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="key-value config file")
        p.add_argument("--exponents", type=_parse_exponents, default=None)
        p.add_argument("--s", type=float, default=1.0)
        p.add_argument("--s-grid", dest="s_grid", type=_parse_floats, default=())
        p.add_argument("--t-grid", dest="t_grid", type=_parse_floats, default=())
        p.add_argument("--samples", type=int, default=0)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--threshold", type=float, default=1e-6)
        p.add_argument("--eps-max", dest="eps_max", type=float, default=1.0)
        p.add_argument("--h", type=float, default=1e-4)
        p.add_argument("--big-c", dest="big_c", type=float, default=100.0)
        p.add_argument("--c-grid", dest="c_grid", type=_parse_floats, default=())
        p.add_argument("--explore", type=_parse_exponent_grid, default=())
        p.add_argument("--family", type=str, default="interpolation",
                       choices=("interpolation", "level"))
        p.add_argument("--ratio-tol", dest="ratio_tol", type=float, default=1e-6)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", type=str, default="json", choices=("json", "csv"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    values = vars(args).copy()
    config_path = values.pop("config", None)
    if config_path:
        try:
            overrides = read_config_file(config_path)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        # config file supplies defaults; explicit flags win
        defaults = {
            key: parser.parse_args([values["subcommand"]]).__dict__[key]
            for key in overrides
        }
        for key, value in overrides.items():
            if values.get(key) == defaults.get(key):
                values[key] = value
    if values.get("seed", 0) < 0:
        print("error: seed must be non-negative", file=sys.stderr)
        return 2
    config = RunConfig(**values)
    try:
        return run(config)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
