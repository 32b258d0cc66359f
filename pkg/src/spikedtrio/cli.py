"""Command-line front end.

Subcommands
-----------
identities   render the exact closed forms as text or JSON
landscape    minima report (absolute minimum, critical radius, samples)
spectrum     closed-form harmonic spectrum table
validate     harmonic spectrum against the 2-D numeric ground truth
osculate1d   1-D radial Taylor data, matched wells and ladder spectra

Named models expand to explicit (exponent, coupling) lists:

* ``calogero``: omega**2*x**2 + nu*(nu+1)/x**2 per pair.
* ``sc``: cubic well with an inverse-square spike.  ``--alpha``/``--beta``
  are the polar coefficients: the total potential is
  alpha^2*rho^3*sin(3*phi) + beta^2/(rho^2*sin(3*phi)^2), i.e. alpha^2 is
  the full coefficient of rho^3*sin(3*phi) and the per-pair coupling is
  alpha^2*sqrt(2)/3.  ``--R`` places the potential minimum at the given
  radius by setting beta^2 = (3/2)*alpha^2*R^5.
* ``sqao``: quadratic plus quartic well with an inverse-square spike.

A TOML config file (``--config``) may carry ``[model]``, ``[potential]``
and ``[output]`` tables; explicit command-line flags win.  The
``SPIKEDTRIO_THREADS`` environment variable caps the solver thread pools.

Exit codes: 0 success, 2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigError, SolverError

_MODELS = ("calogero", "sc", "sqao")


# -- deterministic serialization ------------------------------------------

def _fmt_json_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _json_dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, int, float)):
        return _fmt_json_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f"{inner}{json.dumps(str(k))}: {_json_dumps(v, indent + 1)}"
                for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{inner}{_json_dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _csv_cell(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _csv_text(rows) -> str:
    return "\n".join(",".join(_csv_cell(c) for c in row) for row in rows) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- config handling -------------------------------------------------------

def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return tomllib.loads(raw.decode("utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path}: {exc}") from exc


def _config_get(config: dict, table: str, key: str):
    value = config.get(table, {})
    if not isinstance(value, dict):
        raise ConfigError(f"config table [{table}] must be a table")
    return value.get(key)


def _pick(cli_value, config, table, key, default=None):
    if cli_value is not None:
        return cli_value
    value = _config_get(config, table, key)
    return default if value is None else value


def _parse_terms(pairs) -> list[tuple[int, float]]:
    terms = []
    for pair in pairs:
        try:
            m_str, coupling_str = pair.split("=", 1)
            terms.append((int(m_str), float(coupling_str)))
        except ValueError as exc:
            raise ConfigError(f"bad --term {pair!r} (expected m=coupling): {exc}") from exc
    return terms


def _parse_range(text: str, what: str) -> tuple[float, float]:
    try:
        lo_str, hi_str = text.split(":", 1)
        lo, hi = float(lo_str), float(hi_str)
    except ValueError as exc:
        raise ConfigError(f"bad {what} {text!r} (expected LO:HI): {exc}") from exc
    if not lo < hi:
        raise ConfigError(f"{what} must satisfy LO < HI, got {text!r}")
    return lo, hi


def _parse_int_range(text: str, what: str) -> tuple[int, int]:
    try:
        lo_str, hi_str = text.split(":", 1)
        lo, hi = int(lo_str), int(hi_str)
    except ValueError as exc:
        raise ConfigError(f"bad {what} {text!r} (expected LO:HI): {exc}") from exc
    if lo > hi:
        raise ConfigError(f"{what} must satisfy LO <= HI, got {text!r}")
    return lo, hi


def _parse_grid(text: str, what: str) -> tuple[int, int]:
    try:
        a_str, b_str = text.lower().split("x", 1)
        return int(a_str), int(b_str)
    except ValueError as exc:
        raise ConfigError(f"bad {what} {text!r} (expected AxB): {exc}") from exc


def _resolve_spec(args, config):
    from .trigform import PotentialSpec

    model = _pick(getattr(args, "model", None), config, "model", "name")
    terms = _parse_terms(getattr(args, "term", None) or [])
    if not terms:
        for key, value in config.get("potential", {}).items():
            try:
                terms.append((int(key), float(value)))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"config field potential.{key}: {exc}") from exc
    if model and terms:
        raise ConfigError("give either a named model or explicit terms, not both")
    if model:
        def getp(key, default=None):
            attr = "lam" if key == "lambda" else key
            return _pick(getattr(args, attr, None), config, "model", key, default)

        if model == "calogero":
            nu = getp("nu")
            if nu is None:
                raise ConfigError("model calogero needs --nu")
            return PotentialSpec.calogero(omega=float(getp("omega", 1.0)), nu=float(nu))
        if model == "sc":
            alpha = float(getp("alpha", 1.0))
            beta = getp("beta")
            radius = getp("R")
            if (beta is None) == (radius is None):
                raise ConfigError("model sc needs exactly one of --beta or --R")
            beta2 = float(beta) ** 2 if beta is not None else 1.5 * alpha ** 2 * float(radius) ** 5
            return PotentialSpec.spiked_cubic(alpha2=alpha * alpha, beta2=beta2)
        if model == "sqao":
            nu = getp("nu")
            if nu is None:
                raise ConfigError("model sqao needs --nu")
            return PotentialSpec.spiked_quartic(omega=float(getp("omega", 1.0)),
                                                lam=float(getp("lambda", 0.0)), nu=float(nu))
        raise ConfigError(f"unknown model {model!r} (choose from {', '.join(_MODELS)})")
    if not terms:
        raise ConfigError("no potential given: use --model or --term (or a config file)")
    try:
        return PotentialSpec(terms)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _output_settings(args, config, default_format: str, choices: tuple[str, ...]):
    fmt = _pick(getattr(args, "format", None), config, "output", "format", default_format)
    if fmt not in choices:
        raise ConfigError(f"format {fmt!r} not in {choices}")
    out = _pick(getattr(args, "out", None), config, "output", "path")
    return fmt, out


# -- subcommand handlers ----------------------------------------------------

def _cmd_identities(args, config) -> int:
    from .trigform import closed_form_omega, form_to_json_dict, form_to_text

    lo, hi = _parse_int_range(args.m_range, "--m-range")
    ms = [m for m in range(lo, hi + 1) if m != 0]
    if not ms:
        raise ConfigError(f"--m-range {args.m_range!r} contains no usable exponent")
    fmt, out = _output_settings(args, config, "text", ("text", "json"))
    forms = [closed_form_omega(m) for m in ms]
    if fmt == "json":
        _emit(_json_dumps([form_to_json_dict(f) for f in forms]) + "\n", out)
    else:
        _emit("\n".join(form_to_text(f) for f in forms) + "\n", out)
    return 0


def _cmd_landscape(args, config) -> int:
    import numpy as np

    from .landscape import landscape_report

    spec = _resolve_spec(args, config)
    rho_samples = None
    if args.rho_range:
        lo, hi = _parse_range(args.rho_range, "--rho-range")
        rho_samples = [float(x) for x in np.geomspace(lo, hi, args.samples)]
    report = landscape_report(spec, rho_samples)
    fmt, out = _output_settings(args, config, "json", ("json", "csv"))
    if fmt == "csv":
        from .trigform import evaluate_potential

        rows = [("rho", "phi_min", "value")]
        for rho, phis in report.angular_minima_sample:
            for phi in phis:
                rows.append((rho, phi, float(evaluate_potential(spec, rho, phi))))
        _emit(_csv_text(rows), out)
    else:
        payload = report.to_json_dict()
        payload["potential"] = spec.describe()
        _emit(_json_dumps(payload) + "\n", out)
    return 0


def _cmd_spectrum(args, config) -> int:
    from .osculation import approximate_spectrum, harmonic_approximation

    spec = _resolve_spec(args, config)
    m_levels, n_levels = _parse_grid(args.levels, "--levels")
    approx = harmonic_approximation(spec)
    table = approximate_spectrum(approx, m_levels, n_levels)
    fmt, out = _output_settings(args, config, "csv", ("csv", "json"))
    if fmt == "json":
        payload = table.to_json_dict()
        payload["potential"] = spec.describe()
        payload["minimum"] = {"R": approx.R, "phi0": approx.phi0,
                              "value": approx.omega_min,
                              "k_rho": approx.k_rho, "k_eta": approx.k_eta}
        _emit(_json_dumps(payload) + "\n", out)
    else:
        _emit(_csv_text(table.to_csv_rows()), out)
    return 0


def _cmd_validate(args, config) -> int:
    from .eigensolver import WedgeGrid, solve_wedge, wedge_grid_for
    from .osculation import approximate_spectrum, harmonic_approximation

    spec = _resolve_spec(args, config)
    levels = args.levels
    if levels < 1 or levels > 8:
        raise ConfigError("--levels must be between 1 and 8")
    approx = harmonic_approximation(spec)
    if args.grid:
        n_rho, n_phi = _parse_grid(args.grid, "--grid")
        base = wedge_grid_for(spec, n_rho=n_rho, n_phi=n_phi, n_sigma=args.n_sigma)
    else:
        base = wedge_grid_for(spec, n_sigma=args.n_sigma)
    numeric = solve_wedge(spec, base, levels, check_tol=args.check_tol)
    harmonic = approximate_spectrum(approx, levels, levels).energies()[:levels]
    rel = [(h - e) / e for h, e in zip(harmonic, numeric.values)]
    fmt, out = _output_settings(args, config, "json", ("json", "csv"))
    if fmt == "csv":
        rows = [("level", "harmonic", "numeric", "relative_error")]
        rows += [(i, h, e, r) for i, (h, e, r) in
                 enumerate(zip(harmonic, numeric.values, rel))]
        _emit(_csv_text(rows), out)
    else:
        payload = {
            "potential": spec.describe(),
            "minimum": {"R": approx.R, "value": approx.omega_min,
                        "k_rho": approx.k_rho, "k_eta": approx.k_eta},
            "harmonic": harmonic,
            "numeric": list(numeric.values),
            "relative_error": rel,
            "grid": numeric.grid,
            "residual_norms": list(numeric.residual_norms),
        }
        _emit(_json_dumps(payload) + "\n", out)
    return 0


def _cmd_osculate1d(args, config) -> int:
    from .osculation import (RadialPotential, radial_taylor, rho_approx_spectrum,
                             sho_exact_spectrum, sho_osculate)

    well = args.well
    matched = None
    exact = None
    if well == "sho":
        if args.nu is None:
            raise ConfigError("well sho needs --nu")
        omega = args.omega if args.omega is not None else 1.0
        potential = RadialPotential.spiked_harmonic(omega, args.nu)
        exact = [sho_exact_spectrum(omega, args.nu, n) for n in range(args.levels)]
    elif well == "ue":
        F = args.F if args.F is not None else 1.0
        G = args.G if args.G is not None else 1.0
        potential = RadialPotential.cubic_spiked(F, G)
        f0, g0 = sho_osculate(F, G)
        matched = {"F0": f0, "G0": g0}
    else:
        terms = _parse_terms(args.rterm or [])
        if not terms:
            raise ConfigError("well custom needs at least one --rterm p=coeff")
        potential = RadialPotential(terms)
    radius, coeffs = radial_taylor(potential, order=args.order)
    ladder = rho_approx_spectrum(potential, args.levels)
    harmonic = [e for _, _, e in ladder.entries]
    fmt, out = _output_settings(args, config, "json", ("json", "csv"))
    if fmt == "csv":
        rows = [("m", "harmonic", "exact", "relative_error")]
        for m, h in enumerate(harmonic):
            if exact is not None:
                rows.append((m, h, exact[m], (h - exact[m]) / exact[m]))
            else:
                rows.append((m, h, "", ""))
        _emit(_csv_text(rows), out)
    else:
        payload = {
            "well": potential.describe(),
            "minimum": {"R": radius, "taylor": list(coeffs)},
            "harmonic": harmonic,
        }
        if matched is not None:
            payload["matched_quadratic_spike"] = matched
        if exact is not None:
            payload["exact"] = exact
            payload["relative_error"] = [(h - e) / e for h, e in zip(harmonic, exact)]
        _emit(_json_dumps(payload) + "\n", out)
    return 0


# -- parser -----------------------------------------------------------------

def _add_potential_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=_MODELS, help="named two-body model")
    p.add_argument("--omega", type=float, help="quadratic well frequency")
    p.add_argument("--nu", type=float, help="spike strength parameter nu")
    p.add_argument("--alpha", type=float,
                   help="sc: polar cubic coefficient alpha (enters as alpha^2)")
    p.add_argument("--beta", type=float,
                   help="sc: polar spike coefficient beta (enters as beta^2)")
    p.add_argument("--R", type=float, dest="R",
                   help="sc: place the minimum at this radius instead of --beta")
    p.add_argument("--lambda", type=float, dest="lam", help="sqao: quartic coupling")
    p.add_argument("--term", action="append", metavar="M=COUPLING",
                   help="explicit potential term (repeatable)")


def _add_output_flags(p: argparse.ArgumentParser, choices) -> None:
    p.add_argument("--format", choices=choices, help="output format")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--config", help="TOML config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikedtrio",
        description="Exact closed forms and strong-repulsion spectra for "
                    "three-body power-law oscillators on a line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identities", help="render exact closed forms")
    p.add_argument("--m-range", default="-6:13", metavar="LO:HI",
                   help="inclusive exponent range (default -6:13)")
    _add_output_flags(p, ("text", "json"))
    p.set_defaults(handler=_cmd_identities)

    p = sub.add_parser("landscape", help="minima and critical-radius report")
    _add_potential_flags(p)
    p.add_argument("--rho-range", metavar="LO:HI", help="sample radii range")
    p.add_argument("--samples", type=int, default=9, help="number of sample radii")
    _add_output_flags(p, ("json", "csv"))
    p.set_defaults(handler=_cmd_landscape)

    p = sub.add_parser("spectrum", help="closed-form harmonic spectrum")
    _add_potential_flags(p)
    p.add_argument("--levels", default="3x3", metavar="MxN",
                   help="radial x angular level counts (default 3x3)")
    _add_output_flags(p, ("csv", "json"))
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("validate", help="harmonic spectrum vs 2-D numerics")
    _add_potential_flags(p)
    p.add_argument("--levels", type=int, default=2, help="number of levels (<= 8)")
    p.add_argument("--grid", metavar="NRHOxNPHI", help="wedge grid size (default 400x200)")
    p.add_argument("--n-sigma", type=float, default=10.0,
                   help="radial half-width in ground-state widths")
    p.add_argument("--check-tol", type=float,
                   help="fail when the Richardson estimate exceeds this relative tolerance")
    _add_output_flags(p, ("json", "csv"))
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("osculate1d", help="1-D Taylor data and ladder spectra")
    p.add_argument("--well", choices=("sho", "ue", "custom"), default="sho",
                   help="spiked harmonic, cubic-spiked, or custom power well")
    p.add_argument("--omega", type=float, help="sho: frequency")
    p.add_argument("--nu", type=float, help="sho: spike parameter")
    p.add_argument("--F", type=float, dest="F", help="ue: cubic coupling")
    p.add_argument("--G", type=float, dest="G", help="ue: spike coupling")
    p.add_argument("--rterm", action="append", metavar="P=COEFF",
                   help="custom: radial power term (repeatable)")
    p.add_argument("--order", type=int, default=4, help="Taylor order (<= 4)")
    p.add_argument("--levels", type=int, default=3, help="ladder levels")
    _add_output_flags(p, ("json", "csv"))
    p.set_defaults(handler=_cmd_osculate1d)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        config = _load_config(getattr(args, "config", None))
        limit = os.environ.get("SPIKEDTRIO_THREADS")
        if limit:
            try:
                n_threads = int(limit)
            except ValueError:
                raise ConfigError(f"SPIKEDTRIO_THREADS={limit!r} is not an integer")
            from threadpoolctl import threadpool_limits

            with threadpool_limits(limits=n_threads):
                return args.handler(args, config)
        return args.handler(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
