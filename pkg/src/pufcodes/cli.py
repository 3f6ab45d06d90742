"""Command-line entry point ``pufcodes``.

Exit codes: 0 success, 1 negative verdict or failed reproduction,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import io
import sys
from pathlib import Path

import numpy as np

from . import analysis, ctaudit
from .concat import ConcatSpec, radius_rule
from .config import parse_code, parse_run_settings
from .exceptions import PufCodesError, RadiusTooLarge
from .gsdecoder import max_list_radius, select_params_nk, unique_radius
from .hexio import bits_to_hex, hex_to_bits
from .keyflow import HelperBundle, enroll, reproduce
from .rmcode import RmSpec
from .rscode import RsSpec

HELPER_FILE = "helper.txt"
RESPONSE_FILE = "response.txt"
KEY_FILE = "key.txt"


class CliError(Exception):
    def __init__(self, message, code=2):
        super().__init__(message)
        self.code = code


def _load_config(arg):
    if arg is None:
        raise CliError("--code is required for this command")
    path = Path(arg)
    if path.is_file():
        text = path.read_text()
    elif "=" in arg:
        text = arg
    else:
        raise CliError(f"no such config file: {arg}")
    return parse_code(text), parse_run_settings(text)


def _concat(spec) -> ConcatSpec:
    if not isinstance(spec, ConcatSpec):
        raise CliError("this command needs a type=concat code")
    return spec


def _tau(value):
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        radius_rule(value)  # validates the policy name
        return value


def _pick(cli_value, cfg_value, default):
    if cli_value is not None:
        return cli_value
    return cfg_value if cfg_value is not None else default


def _outer(spec) -> RsSpec:
    if isinstance(spec, ConcatSpec):
        return spec.outer
    if isinstance(spec, RsSpec):
        return spec
    raise CliError("this command needs an rs or concat code")


# -- commands ----------------------------------------------------------------


def cmd_params(args, out):
    spec, _ = _load_config(args.code)
    rs = _outer(spec)
    n, k = rs.n, rs.k
    print(f"n={n} k={k} d={rs.d} unique_radius={unique_radius(n, k)} list_radius={max_list_radius(n, k)}",
          file=out)
    if args.tau is not None:
        tau = radius_rule(_tau(args.tau))(n, k)
        params = select_params_nk(n, k, tau)
        print(f"tau={params.tau} s={params.s} l={params.l} unknowns={params.unknowns} "
              f"constraints={params.constraints} list_width={params.list_width}", file=out)
    return 0


def cmd_enroll(args, out):
    spec, cfg = _load_config(args.code)
    spec = _concat(spec)
    if args.out is None:
        raise CliError("enroll needs --out DIR")
    rng = np.random.default_rng(args.seed)
    response = rng.integers(0, 2, spec.n).astype(np.uint8)
    mask = _pick(args.mask, cfg.mask, "none")
    bundle = enroll(spec, response, rng, mask)
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    (d / HELPER_FILE).write_text(bundle.to_text())
    (d / RESPONSE_FILE).write_text(bits_to_hex(response) + "\n")
    print(f"wrote {d / HELPER_FILE} and {d / RESPONSE_FILE} n={spec.n} mask={bundle.mask_kind}", file=out)
    return 0


def _read(path: Path) -> str:
    if not path.is_file():
        raise CliError(f"missing file: {path}")
    return path.read_text()


def cmd_reproduce(args, out):
    spec, cfg = _load_config(args.code)
    spec = _concat(spec)
    d = Path(args.out if args.out is not None else ".")
    helper_path = Path(args.helper) if args.helper else d / HELPER_FILE
    response_path = Path(args.response) if args.response else d / RESPONSE_FILE
    bundle = HelperBundle.from_text(_read(helper_path), spec)
    response = hex_to_bits(_read(response_path).strip(), spec.n)
    p = float(_pick(args.p, cfg.p, 0.0))
    tau = _tau(_pick(args.tau, cfg.tau, None))
    mask = _pick(args.mask, cfg.mask, None)
    runs = int(_pick(args.runs, cfg.runs, 1))
    model = analysis.BscModel(p)
    rng = np.random.default_rng(args.seed)
    failures = 0
    last = None
    for i in range(runs):
        noisy = response ^ analysis.bsc_sample(model, spec.n, rng)
        last = reproduce(spec, bundle, noisy, tau=tau, seed=rng, mask=mask)
        failures += not last.ok
        if runs > 1 and args.verbose:
            print(f"run={i} ok={int(last.ok)} {last.op_report.line()}", file=out)
    key_text = last.key.hex() if last.ok else "FAILURE"
    (d / KEY_FILE).parent.mkdir(parents=True, exist_ok=True)
    (d / KEY_FILE).write_text(key_text + "\n")
    if runs == 1:
        print(f"key={key_text}", file=out)
        if not last.ok:
            print(f"failure={last.failure}", file=out)
        print(last.op_report.line(), file=out)
        return 0 if last.ok else 1
    print(f"runs={runs} failures={failures} rate={failures / runs:.6g}", file=out)
    return 0


def cmd_analyze(args, out):
    if args.table1:
        table = analysis.rate_table(model=args.p if args.p is not None else 0.14)
        print(analysis.format_rate_table(table), file=out)
        for row in table:
            tag = row.label.replace(" ", "_").replace("/", "_")
            print(f"row={tag} n={row.n} k={row.k} p_err={row.p_err:.2e} R={row.rate:.4f} "
                  f"R*={row.max_rate:.4f} ratio={row.ratio:.4f}", file=out)
        if args.code is None:
            return 0
    spec, cfg = _load_config(args.code)
    spec = _concat(spec)
    p = float(_pick(args.p, cfg.p, 0.14))
    model = analysis.BscModel(p)
    if (args.pe is None) != (args.pz is None):
        raise CliError("--pe and --pz go together")
    if args.pe is not None:
        channel = analysis.InnerChannel(args.pe, args.pz)
    else:
        trials = int(_pick(args.trials, cfg.trials, 10 ** 6))
        channel = analysis.inner_channel_mc(spec.inner, model, trials, args.seed, jobs=args.jobs)
    n, k = spec.outer.n, spec.outer.k
    tau = _tau(_pick(args.tau, cfg.tau, None))
    p_list = analysis.block_error_probability(n, k, channel, tau)
    p_unique = analysis.block_error_probability_unique(n, k, channel)
    C = analysis.capacity(model)
    V = analysis.dispersion(model)
    rate = spec.k / spec.n
    items = [("code", spec.config_text()), ("p", f"{p:g}"), ("pe", f"{channel.p_error:.6f}"),
             ("pz", f"{channel.p_erasure:.6f}"), ("P_err_list", f"{p_list:.4e}"),
             ("P_err_unique", f"{p_unique:.4e}"), ("C", f"{C:.5f}"), ("V", f"{V:.5f}"),
             ("R", f"{rate:.4f}")]
    if 0 < p_list < 1:
        r_star = analysis.max_rate(spec.n, model, p_list)
        items += [("R*", f"{r_star:.4f}"), ("R/R*", f"{rate / r_star:.4f}")]
    width = max(len(key) for key, _ in items)
    for key, value in items:
        print(f"{key:<{width}}  {value}", file=out)
    for key, value in items:
        if key != "code":
            print(f"{key}={value}", file=out)
    return 0


def _audit_target(args, spec):
    tau = _tau(args.tau)
    if args.decoder == "rm":
        inner = spec.inner if isinstance(spec, ConcatSpec) else spec
        if not isinstance(inner, RmSpec):
            raise CliError("the rm audit needs an rm or concat code")
        return ctaudit.rm_target(inner)
    if args.decoder == "concat":
        return ctaudit.concat_target(_concat(spec), tau, strict=True)
    rs = _outer(spec)
    radius = radius_rule(tau)(rs.n - (0 if args.strict else args.erasures), rs.k)
    if args.decoder == "leaky":
        return ctaudit.leaky_target(rs, radius)
    return ctaudit.gs_target(rs, radius, args.erasures, args.strict)


def cmd_ct_audit(args, out):
    spec, _ = _load_config(args.code)
    if args.fixture:
        args.decoder = "leaky"
    target = _audit_target(args, spec)
    verdict = ctaudit.audit(target, args.runs, args.seed)
    print(f"target={target.label}", file=out)
    for line in verdict.lines():
        print(line, file=out)
    return 0 if verdict.passed else 1


# -- parser ------------------------------------------------------------------


def _global_flags(parser, suppress: bool):
    # subcommands repeat the flags without defaults so values given before
    # the subcommand name survive
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(0), help="64-bit RNG seed (default 0)")
    parser.add_argument("--code", default=default(None), help="code config file, or inline config text")
    parser.add_argument("--jobs", type=int, default=default(1), help="worker processes for Monte Carlo")
    parser.add_argument("--out", default=default(None),
                        help="output directory (enroll/reproduce) or report file")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    parser = argparse.ArgumentParser(prog="pufcodes", description="List decoding for PUF key reproduction.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", parents=[common], help="radii and (s, l) for an RS code")
    p.add_argument("--tau", help="radius (int) or policy: list, unique, desk")
    p.set_defaults(func=cmd_params, report=True)

    p = sub.add_parser("enroll", parents=[common], help="synthetic response and helper data")
    p.add_argument("--mask", choices=("none", "codeword", "permutation"))
    p.set_defaults(func=cmd_enroll, report=False)

    p = sub.add_parser("reproduce", parents=[common], help="noisy re-measurement and key recovery")
    p.add_argument("--p", type=float, help="BSC crossover probability")
    p.add_argument("--tau", help="radius (int) or policy: list, unique, desk")
    p.add_argument("--mask", choices=("none", "codeword", "permutation"))
    p.add_argument("--runs", type=int, help="repeat with fresh noise and report the failure count")
    p.add_argument("--helper", help="helper bundle file (default OUT/helper.txt)")
    p.add_argument("--response", help="reference response file (default OUT/response.txt)")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_reproduce, report=False)

    p = sub.add_parser("analyze", parents=[common], help="channel, failure rate and rate bounds")
    p.add_argument("--p", type=float, help="BSC crossover probability (default 0.14)")
    p.add_argument("--pe", type=float, help="inner symbol error probability (skips Monte Carlo)")
    p.add_argument("--pz", type=float, help="inner erasure probability (skips Monte Carlo)")
    p.add_argument("--trials", type=int, help="inner Monte Carlo trials (default 10^6)")
    p.add_argument("--tau", help="radius policy for P_err (default list)")
    p.add_argument("--table1", action="store_true", help="print the rate table for the reference codes")
    p.set_defaults(func=cmd_analyze, report=True)

    p = sub.add_parser("ct-audit", parents=[common], help="constant operation-count audit")
    p.add_argument("--decoder", choices=("gs", "rm", "concat", "leaky"), default="gs")
    p.add_argument("--tau", help="radius (int) or policy (default list)")
    p.add_argument("--erasures", type=int, default=0)
    p.add_argument("--strict", action="store_true", help="full-length interpolation with zero rows")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--fixture", action="store_true", help="audit the leaky negative control")
    p.set_defaults(func=cmd_ct_audit, report=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except CliError as exc:
        sys.stdout.write(buf.getvalue())
        print(f"pufcodes: error: {exc}", file=sys.stderr)
        return exc.code
    except RadiusTooLarge as exc:
        sys.stdout.write(buf.getvalue())
        print(f"pufcodes: {exc}", file=sys.stderr)
        return 1
    except (PufCodesError, ValueError, OSError) as exc:
        sys.stdout.write(buf.getvalue())
        print(f"pufcodes: error: {exc}", file=sys.stderr)
        return 2
    text = buf.getvalue()
    sys.stdout.write(text)
    if args.report and args.out:
        Path(args.out).write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
