"""``scalent`` command line.

Exit codes: 0 success, 1 a verification suite found a violation, 2 bad
configuration or input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import lab
from .formats import FormatError, parse_int_list, parse_space
from .lab import ConfigError, ExperimentConfig, TrendReport
from .ordered_pairs.windows import (ResidueCapExceeded, window_distribution_exact,
                                    window_distribution_sampled)
from .semimetric import ExactCapExceeded, eps_entropy, eps_entropy_exact

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 1, 2

# flags shared by the table commands; None means "not given"
_COMMON = ("sigma", "eps", "n", "level", "samples", "seed", "mode", "out")


def _add_common(p: argparse.ArgumentParser, *names: str) -> None:
    helps = {
        "sigma": "bit string or zeros/ones/alternating",
        "eps": "comma-separated rationals, e.g. 1/4,1/8",
        "n": "comma-separated sizes; a..b ranges allowed",
        "level": "truncation level N",
        "samples": "sample count for sampled mode",
        "seed": "random seed (required for sampled mode)",
        "mode": "auto, exact or sampled",
        "out": "output path (CSV tables also get a .json twin)",
        "phi": "ratio phi > 1",
        "radius": "coset range [-M, M]",
        "shape": "box, staircase or gapped",
        "instances": "number of random instances (suite default if omitted)",
    }
    for name in names:
        p.add_argument(f"--{name}", default=None, help=helps[name])
    p.add_argument("--config", default=None, help="key = value file; flags override it")


def _config(args: argparse.Namespace, keys) -> ExperimentConfig:
    given: Dict[str, Any] = {k: getattr(args, k, None) for k in keys}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config: {e}") from None
        return ExperimentConfig.from_text(text, given)
    return ExperimentConfig.from_mapping(given)


def _write_table(report: TrendReport, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(report.to_csv())
        return
    path = Path(out)
    csv_path = path if path.suffix == ".csv" else path.with_suffix(".csv")
    csv_path.write_text(report.to_csv())
    csv_path.with_suffix(".json").write_text(report.to_json())
    print(f"wrote {csv_path} and {csv_path.with_suffix('.json')}")


def _write_json(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        print(f"wrote {out}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_entropy(args) -> int:
    cfg = _config(args, ("eps", "mode", "out"))
    if cfg.mode == "sampled":
        raise ConfigError("entropy of a space file has no sampled mode")
    try:
        text = Path(args.space).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read space file: {e}") from None
    space = parse_space(text, source=args.space)
    results = []
    for e in cfg.eps:
        if cfg.mode == "exact":
            try:
                res = eps_entropy_exact(space, e)
            except ExactCapExceeded as err:
                raise ConfigError(f"exact mode infeasible: {err}") from None
        else:
            res = eps_entropy(space, e)
        results.append(res.to_json())
    body = results[0] if len(results) == 1 else {"results": results}
    _write_json(json.dumps(body, indent=1, sort_keys=True) + "\n", cfg.out)
    return EXIT_OK


def cmd_scaling_table(args) -> int:
    cfg = _config(args, _COMMON)
    _write_table(lab.scaling_table(cfg), cfg.out)
    return EXIT_OK


def cmd_coinduce_table(args) -> int:
    cfg = _config(args, _COMMON + ("phi", "radius", "shape"))
    _write_table(lab.coinduce_table(cfg), cfg.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args, ("seed", "out", "instances"))
    seed = 0 if cfg.seed is None else cfg.seed
    res = lab.run_suite(args.suite, seed, cfg.instances)
    status = "PASS" if res.passed else "FAIL"
    print(f"{status} {res.suite}: {res.checked} checks, {len(res.failures)} violations, "
          f"{res.undecided} undecided, seed {seed}, {res.seconds:.1f}s")
    if cfg.out:
        Path(cfg.out).write_text(res.to_json())
    if not res.passed:
        sys.stderr.write(json.dumps(res.failures[0], indent=1, sort_keys=True) + "\n")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_adic_orbit(args) -> int:
    cfg = _config(args, ("sigma", "level", "seed", "out"))
    level = 4 if cfg.level is None else cfg.level
    seed = 0 if cfg.seed is None else cfg.seed
    rep = lab.adic_orbit(cfg.sigma, level, seed, int(args.start), int(args.steps))
    _write_table(rep, cfg.out)
    return EXIT_OK


def cmd_window_dist(args) -> int:
    cfg = _config(args, ("sigma", "level", "samples", "seed", "mode", "out"))
    try:
        S = parse_int_list(args.window)
    except ValueError as e:
        raise ConfigError(f"bad window: {e}") from None
    level = (max(S).bit_length() + 2) if cfg.level is None else cfg.level
    sigma = lab.resolve_sigma(cfg.sigma, level)
    if cfg.mode == "sampled":
        dist = window_distribution_sampled(sigma, S, level, cfg.samples, cfg.seed)
    else:
        try:
            dist = window_distribution_exact(sigma, S, level)
        except ResidueCapExceeded as e:
            raise ConfigError(str(e)) from None
    _write_json(dist.to_json() + "\n", cfg.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scalent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="ε-entropy of a space file")
    p.add_argument("space", help="space file (atoms/mass/dist lines)")
    _add_common(p, "eps", "mode", "out")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("scaling-table", help="Φ(n, ε) against the predicted h_n")
    _add_common(p, *_COMMON)
    p.set_defaults(func=cmd_scaling_table)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(lab.SUITES))
    _add_common(p, "seed", "out", "instances")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("coinduce-table", help="estimate bounds for coinduced windows")
    _add_common(p, *_COMMON, "phi", "radius", "shape")
    p.set_defaults(func=cmd_coinduce_table)

    p = sub.add_parser("adic-orbit", help="follow a path under the adic map")
    _add_common(p, "sigma", "level", "seed", "out")
    p.add_argument("--start", default="0", help="starting position 𝔬")
    p.add_argument("--steps", default="16", help="number of steps")
    p.set_defaults(func=cmd_adic_orbit)

    p = sub.add_parser("window-dist", help="law of a window of the terminal word")
    p.add_argument("--window", required=True, help="positions, e.g. 0,1,5 or 0..7")
    _add_common(p, "sigma", "level", "samples", "seed", "mode", "out")
    p.set_defaults(func=cmd_window_dist)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FormatError) as e:
        print(f"scalent: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as e:
        print(f"scalent: error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
