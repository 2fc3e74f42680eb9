"""
Command-line harness.

    imbessel eval    --nu 10 --function K L --method airy --x-grid 0.1:2:20
    imbessel zeros   --nu 10 --family K --m-range 1:20
    imbessel figures --nu 10 --dataset airy-error
    imbessel verify  [--quick] [--kappa-table kappa.txt]

eval, zeros and figures write CSV (stdout or --out); verify prints a
PASS/FAIL report of the acceptance criteria. Exit codes: 0 ok, 2 domain
error, 3 configuration or kappa-table error, 4 failed acceptance.
"""

import argparse
import csv
import logging
import sys
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from time import process_time
from typing import Callable, Iterable

import mpmath
from colorama import Fore, Style, just_fix_windows_console
from sortedcontainers import SortedDict

from imbessel import config, oracle
from imbessel.airy_core import airy_eval, airy_rotated
from imbessel.airy_expansions import (
    BesselKind,
    EnvelopeSource,
    ab_eval,
    bessel_airy,
    envelope_N,
    omega3,
)
from imbessel.branch_maps import rho, rho_inverse
from imbessel.coeff_engine import (
    ABBranch,
    KappaTable,
    ab_coefficient,
    coefficient_table,
    gen_E,
    kappa_hat,
    kappa_hat_over_z,
    q_over_x,
    select_branch,
    upsilon1,
)
from imbessel.errors import (
    ConfigError,
    DomainError,
    ImBesselError,
    KappaTableParseError,
    PoleError,
    PrecisionBudgetError,
    RegionError,
    TableRangeError,
    TurningPointError,
)
from imbessel.lg_expansions import OrderSign, lg_I, lg_K
from imbessel.oscillatory_j import (
    MODULUS_TERMS,
    PHASE_TERMS,
    ZeroFamily,
    ZeroQuery,
    j_modulus,
    j_phase,
    j_zero,
    omega1,
    omega2,
)
from imbessel.precision import ScaledValue, working_digits
from imbessel.zeros import KZeroQuery, figure_data, k_zero

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_CONFIG = 3
EXIT_ACCEPTANCE = 4

_DOMAIN_ERRORS = (DomainError, RegionError, TurningPointError, PoleError, PrecisionBudgetError)
_CONFIG_ERRORS = (ConfigError, KappaTableParseError, TableRangeError)


class Command(Enum):
    EVAL = "eval"
    ZEROS = "zeros"
    VERIFY = "verify"
    FIGURES = "figures"


class Function(Enum):
    K = "K"
    L = "L"
    I_PLUS = "I+"
    I_MINUS = "I-"
    J_MODULUS = "Jmod"
    J_PHASE = "Jphase"


class Method(Enum):
    LG = "lg"
    AIRY = "airy"
    ORACLE = "oracle"


class Dataset(Enum):
    MODULUS_ERROR = "modulus-error"
    PHASE_ERROR = "phase-error"
    J_ZERO_ERROR = "j-zero-error"
    Q_OVER_X = "q-over-x"
    KAPPA_OVER_Z = "kappa-over-z"
    AIRY_ERROR = "airy-error"
    K_ZERO_ERROR = "k-zero-error"


_UNSUPPORTED = {
    (Function.L, Method.LG),
    (Function.J_MODULUS, Method.AIRY),
    (Function.J_PHASE, Method.AIRY),
}

_AIRY_KIND = {
    Function.K: BesselKind.K,
    Function.L: BesselKind.L,
    Function.I_PLUS: BesselKind.I_PLUS,
    Function.I_MINUS: BesselKind.I_MINUS,
}

DEFAULT_GRIDS = {
    Dataset.MODULUS_ERROR: "0.05:6:120",
    Dataset.PHASE_ERROR: "0.05:6:120",
    Dataset.Q_OVER_X: "0.05:6:120",
    Dataset.KAPPA_OVER_Z: "0.01:1:100",
    Dataset.AIRY_ERROR: "0.05:4:80",
}
DEFAULT_M_RANGES = {
    Dataset.J_ZERO_ERROR: "-100:100",
    Dataset.K_ZERO_ERROR: "1:100",
}
DEFAULT_ZERO_RANGE = "1:10"


# ===== Run configuration =====


def _number(text: str, flag: str) -> mpmath.mpf:
    with working_digits(config.ZERO_DIGITS):
        try:
            return mpmath.mpf(text)
        except (ValueError, TypeError):
            raise ConfigError(f"{flag} expects a number, got {text!r}")


def parse_grid(text: str) -> tuple[mpmath.mpf, ...]:
    """'a:b:n' -> n equally spaced points from a to b inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--x-grid expects a:b:n, got {text!r}")
    a, b = _number(parts[0], "--x-grid"), _number(parts[1], "--x-grid")
    try:
        n = int(parts[2])
    except ValueError:
        raise ConfigError(f"--x-grid point count must be an integer, got {parts[2]!r}")
    if n < 0:
        raise ConfigError(f"--x-grid point count must be >= 0, got {n}")
    if n <= 1:
        return (a,) * n
    with working_digits(config.ZERO_DIGITS):
        return tuple(mpmath.linspace(a, b, n))


def parse_m_range(text: str) -> range:
    """'a:b' -> a..b inclusive; empty when b < a."""
    parts = text.split(":")
    try:
        a, b = (int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"--m-range expects integers a:b, got {text!r}")
    return range(a, b + 1)


def load_table(path: Path | None) -> KappaTable:
    if path is None:
        return KappaTable.builtin()
    try:
        return KappaTable.load(path)
    except OSError as exc:
        raise ConfigError(f"cannot read kappa table {path}: {exc.strerror}")


@dataclass(frozen=True)
class RunConfig:
    command: Command
    nu: mpmath.mpf = field(default_factory=lambda: mpmath.mpf(10))
    x_grid: tuple[mpmath.mpf, ...] = ()
    m_range: range = range(1, 11)
    r: mpmath.mpf = field(default_factory=lambda: mpmath.mpf(0))
    functions: tuple[Function, ...] = (Function.K,)
    method: Method = Method.AIRY
    # LG terms, A/B or kappa^ truncation, or J-expansion terms; None for defaults
    order: int | None = None
    digits: int = config.ORACLE_DIGITS
    csv_digits: int = config.CSV_DIGITS
    family: ZeroFamily = ZeroFamily.K
    dataset: Dataset | None = None
    kappa_table: Path | None = None
    out: Path | None = None
    with_error: bool = True
    quick: bool = False
    log_level: str = config.LOG_LEVEL
    table: KappaTable = field(default=None, compare=False)
    ctx: oracle.PrecisionContext = field(default=None, compare=False)

    def __post_init__(self):
        if self.command is Command.FIGURES and self.dataset is None:
            raise ConfigError("figures needs --dataset")
        for fn in self.functions:
            if (fn, self.method) in _UNSUPPORTED:
                raise ConfigError(f"{fn.value} has no {self.method.value} evaluation")
        if self.family is not ZeroFamily.J and self.r != 0:
            raise ConfigError(f"--r only applies to J zeros, not family {self.family.value}")
        if self.csv_digits < 1:
            raise ConfigError(f"--csv-digits must be >= 1, got {self.csv_digits}")
        if self.order is not None and self.order < 0:
            raise ConfigError(f"--order must be >= 0, got {self.order}")
        if self.table is None:
            object.__setattr__(self, "table", load_table(self.kappa_table))
        if self.ctx is None:
            object.__setattr__(self, "ctx", oracle.PrecisionContext(self.digits))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--nu", default="10", help="order parameter nu > 0")
    common.add_argument("--order", type=int, help="truncation order (module default if omitted)")
    common.add_argument("--digits", type=int, default=config.ORACLE_DIGITS, help="oracle digits")
    common.add_argument("--csv-digits", type=int, default=config.CSV_DIGITS)
    common.add_argument("--kappa-table", type=Path, help="plain-text kappa^_s import file")
    common.add_argument("--out", type=Path, help="CSV output path (stdout if omitted)")
    common.add_argument(
        "--log-level",
        default=config.LOG_LEVEL,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )

    parser = _Parser(
        prog="imbessel",
        description="Bessel functions of imaginary order: expansions, zeros and checks.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    ev = commands.add_parser("eval", parents=[common], help="evaluate functions on a grid")
    grid = ev.add_mutually_exclusive_group()
    grid.add_argument("--x", nargs="+", default=[], help="evaluation points")
    grid.add_argument("--x-grid", help="a:b:n equally spaced points")
    ev.add_argument("--function", nargs="+", default=["K"], choices=[f.value for f in Function])
    ev.add_argument("--method", default="airy", choices=[m.value for m in Method])

    zs = commands.add_parser("zeros", parents=[common], help="zero tables")
    zs.add_argument("--family", default="K", choices=[f.value for f in ZeroFamily])
    zs.add_argument("--m-range", default=DEFAULT_ZERO_RANGE, help="a:b inclusive")
    zs.add_argument("--r", default="0", help="phase shift in [0, 1/2] (J zeros)")
    zs.add_argument("--no-oracle", action="store_true", help="skip the error estimates")

    fg = commands.add_parser("figures", parents=[common], help="accuracy datasets")
    fg.add_argument("--dataset", required=True, choices=[d.value for d in Dataset])
    fg.add_argument("--x-grid", help="a:b:n (dataset default if omitted)")
    fg.add_argument("--m-range", help="a:b (dataset default if omitted)")

    vf = commands.add_parser("verify", parents=[common], help="run the acceptance criteria")
    vf.add_argument("--quick", action="store_true", help="sub-sample the long sweeps")
    return parser


def parse_args(argv: list[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    command = Command(args.command)
    kwargs = dict(
        command=command,
        nu=_number(args.nu, "--nu"),
        order=args.order,
        digits=args.digits,
        csv_digits=args.csv_digits,
        kappa_table=args.kappa_table,
        out=args.out,
        log_level=args.log_level,
    )
    match command:
        case Command.EVAL:
            if args.x_grid is not None:
                kwargs["x_grid"] = parse_grid(args.x_grid)
            else:
                kwargs["x_grid"] = tuple(_number(x, "--x") for x in args.x)
            kwargs["functions"] = tuple(Function(f) for f in args.function)
            kwargs["method"] = Method(args.method)
        case Command.ZEROS:
            kwargs["family"] = ZeroFamily(args.family)
            kwargs["m_range"] = parse_m_range(args.m_range)
            kwargs["r"] = _number(args.r, "--r")
            kwargs["with_error"] = not args.no_oracle
        case Command.FIGURES:
            dataset = Dataset(args.dataset)
            kwargs["dataset"] = dataset
            if dataset in DEFAULT_M_RANGES:
                kwargs["m_range"] = parse_m_range(args.m_range or DEFAULT_M_RANGES[dataset])
            else:
                kwargs["x_grid"] = parse_grid(args.x_grid or DEFAULT_GRIDS[dataset])
        case Command.VERIFY:
            kwargs["quick"] = args.quick
    return RunConfig(**kwargs)


# ===== CSV =====


def format_field(value, digits: int) -> str:
    if isinstance(value, (str, int)):
        return str(value)
    return mpmath.nstr(
        mpmath.mpf(value),
        digits,
        min_fixed=1,
        max_fixed=0,
        strip_zeros=False,
        show_zero_exponent=True,
    )


def write_csv(header: Iterable[str], rows: Iterable[tuple], out: Path | None, digits: int) -> None:
    def emit(stream):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_field(v, digits) for v in row])

    if out is None:
        emit(sys.stdout)
        return
    with open(out, "w", newline="", encoding="utf-8") as f:
        emit(f)
    logger.info(f"Wrote {out}")


# ===== eval =====

EVAL_HEADER = ("x", "function", "method", "branch", "mantissa_re", "mantissa_im", "log_scale")


def _principal(phase) -> mpmath.mpf:
    return mpmath.arg(mpmath.expj(phase))


def evaluate(fn: Function, method: Method, cfg: RunConfig, x) -> tuple[ScaledValue, str]:
    nu, order = cfg.nu, cfg.order
    match method:
        case Method.LG:
            match fn:
                case Function.K:
                    return lg_K(nu, x, n=order), "lg"
                case Function.I_PLUS | Function.I_MINUS:
                    sign = OrderSign.PLUS if fn is Function.I_PLUS else OrderSign.MINUS
                    return lg_I(nu, x, order, sign), "lg"
                case Function.J_MODULUS:
                    return j_modulus(nu, x, MODULUS_TERMS if order is None else order), "lg"
                case Function.J_PHASE:
                    phase = j_phase(nu, x, PHASE_TERMS if order is None else order)
                    return ScaledValue.from_value(_principal(phase)), "lg"
        case Method.AIRY:
            s_max = config.MAX_AB_ORDER if order is None else order
            value = bessel_airy(_AIRY_KIND[fn], nu, x, s_max=s_max)
            return value, select_branch(x).value
        case Method.ORACLE:
            t = nu * x
            match fn:
                case Function.K:
                    value = oracle.k_iv(nu, t, cfg.ctx)
                case Function.L:
                    value = oracle.l_iv(nu, t, cfg.ctx)
                case Function.I_PLUS:
                    value = oracle.i_iv(nu, t, 1, cfg.ctx)
                case Function.I_MINUS:
                    value = oracle.i_iv(nu, t, -1, cfg.ctx)
                case Function.J_MODULUS:
                    value = abs(oracle.j_iv(nu, t, cfg.ctx))
                case Function.J_PHASE:
                    value = mpmath.arg(oracle.j_iv(nu, t, cfg.ctx))
            return ScaledValue.from_value(value), "series"
    raise ConfigError(f"{fn.value} has no {method.value} evaluation")


def cmd_eval(cfg: RunConfig) -> tuple[tuple[str, ...], list[tuple]]:
    rows = SortedDict()
    with working_digits(cfg.digits):
        for i, x in enumerate(cfg.x_grid):
            for j, fn in enumerate(cfg.functions):
                try:
                    value, branch = evaluate(fn, cfg.method, cfg, x)
                except _DOMAIN_ERRORS as exc:
                    exc.add_note(f"while evaluating {fn.value} at x={x}")
                    raise
                rows[(i, j)] = (
                    x,
                    fn.value,
                    cfg.method.value,
                    branch,
                    value.mantissa.real,
                    value.mantissa.imag,
                    value.log_scale,
                )
    return EVAL_HEADER, list(rows.values())


# ===== zeros =====

ZEROS_HEADER = ("family", "nu", "m", "r", "x", "t", "est_rel_err", "s_max")


def cmd_zeros(cfg: RunConfig) -> tuple[tuple[str, ...], list[tuple]]:
    rows = SortedDict()
    for m in cfg.m_range:
        if cfg.family is ZeroFamily.J:
            truncation = config.MAX_Q_ORDER if cfg.order is None else cfg.order
            query = ZeroQuery(cfg.nu, m, cfg.r, truncation)
            result = j_zero(query, cfg.with_error, cfg.ctx)
        else:
            query = KZeroQuery(cfg.nu, m, cfg.family, cfg.order, cfg.table)
            result = k_zero(query, cfg.with_error, cfg.ctx)
        rows[m] = (
            cfg.family.value,
            cfg.nu,
            m,
            cfg.r,
            result.x,
            result.t,
            result.estimated_relative_error,
            result.terms_used - 1,
        )
        if m % 10 == 0:
            logger.info(f"{cfg.family.value} zeros: m={m}")
    logger.info(f"kappa^_s table: {cfg.table.source.value}, s_max up to {cfg.table.max_order}")
    return ZEROS_HEADER, list(rows.values())


# ===== figures =====


def _coefficient_curves(cfg: RunConfig, highest: int, curve: Callable) -> list[tuple]:
    orders = range(1, highest + 1) if cfg.order is None else [cfg.order]
    return [(s, x, curve(s, x)) for s in orders for x in cfg.x_grid]


def cmd_figures(cfg: RunConfig) -> tuple[tuple[str, ...], list[tuple]]:
    nu, ctx, order = cfg.nu, cfg.ctx, cfg.order
    match cfg.dataset:
        case Dataset.MODULUS_ERROR:
            n = MODULUS_TERMS if order is None else order
            return ("x", "log10_error"), [(x, omega1(nu, x, n, ctx)) for x in cfg.x_grid]
        case Dataset.PHASE_ERROR:
            n = PHASE_TERMS if order is None else order
            return ("x", "log10_error"), [(x, omega2(nu, x, n, ctx)) for x in cfg.x_grid]
        case Dataset.AIRY_ERROR:
            s_max = config.MAX_AB_ORDER if order is None else order
            source = EnvelopeSource.ORACLE.value
            rows = [(x, omega3(nu, x, s_max, ctx), source) for x in cfg.x_grid]
            return ("x", "log10_error", "envelope"), rows
        case Dataset.J_ZERO_ERROR:
            truncation = config.MAX_Q_ORDER if order is None else order
            rows = []
            for m in cfg.m_range:
                result = j_zero(ZeroQuery(nu, m, truncation=truncation), ctx=ctx)
                rows.append((m, mpmath.log10(result.estimated_relative_error)))
            return ("m", "log10_abs_delta"), rows
        case Dataset.K_ZERO_ERROR:
            data = figure_data(nu, cfg.m_range, ZeroFamily.K, order, cfg.table, ctx)
            return ("m", "log10_abs_delta"), list(data.items())
        case Dataset.Q_OVER_X:
            rows = _coefficient_curves(cfg, config.MAX_Q_ORDER, q_over_x)
            return ("s", "x", "value"), rows
        case Dataset.KAPPA_OVER_Z:

            def curve(s, z):
                return kappa_hat_over_z(s, z, cfg.table)

            rows = _coefficient_curves(cfg, cfg.table.max_order, curve)
            return ("s", "z", "value"), rows


# ===== verify =====


@dataclass
class Outcome:
    name: str
    measured: str
    required: str
    # None when the criterion could not be run (missing kappa^ import)
    passed: bool | None
    seconds: float = 0.0


Check = Callable[[RunConfig], tuple[str, str, bool | None]]
CRITERIA: list[tuple[str, Check]] = []


def criterion(name: str):
    def register(check: Check) -> Check:
        CRITERIA.append((name, check))
        return check

    return register


def _e(value) -> str:
    return mpmath.nstr(value, 6)


def _worst(values: Iterable) -> mpmath.mpf:
    return max(values, default=mpmath.ninf)


@criterion("printed J-zero estimate, nu=10 m=-20")
def _j_zero_small(cfg):
    result = j_zero(ZeroQuery(10, -20), ctx=cfg.ctx)
    with mpmath.workdps(cfg.ctx.digits):
        err = abs(result.signed_delta - mpmath.mpf("8.120851953268e-14"))
        return _e(result.signed_delta), "8.120851953268e-14 (+-1e-26)", err < mpmath.mpf("1e-26")


@criterion("printed J-zero estimate, nu=10 m=20")
def _j_zero_large(cfg):
    result = j_zero(ZeroQuery(10, 20), ctx=cfg.ctx)
    with mpmath.workdps(cfg.ctx.digits):
        err = abs(result.signed_delta - mpmath.mpf("1.33246199579953564e-17"))
        return (
            mpmath.nstr(result.signed_delta, 18),
            "1.33246199579953564e-17 (+-1e-34)",
            err < mpmath.mpf("1e-34"),
        )


@criterion("J-zero sweep nu=10, m in [-100, 100]")
def _j_zero_sweep(cfg):
    ms = range(-100, 101, 20 if cfg.quick else 1)
    worst = _worst(
        mpmath.log10(j_zero(ZeroQuery(10, m), ctx=cfg.ctx).estimated_relative_error)
        for m in ms
    )
    return f"max log10|delta| = {_e(worst)}", "<= -10", worst <= -10


@criterion("J modulus accuracy nu=10, x in [0.05, 6]")
def _modulus_grid(cfg):
    grid = parse_grid("0.05:6:12" if cfg.quick else "0.05:6:120")
    worst = _worst(omega1(10, x, ctx=cfg.ctx) for x in grid)
    return f"max log10 error = {_e(worst)}", "<= -10", worst <= -10


@criterion("printed K-zero estimate, nu=10 m=20")
def _k_zero_printed(cfg):
    if cfg.table.max_order < 4:
        return "kappa^_3, kappa^_4 not imported", "x and delta to printed digits", None
    result = k_zero(KZeroQuery(10, 20, truncation=4, table=cfg.table), ctx=cfg.ctx)
    with mpmath.workdps(cfg.ctx.digits):
        x_err = abs(result.x - mpmath.mpf("0.0014850135"))
        d_err = abs(result.signed_delta - mpmath.mpf("8.18131294761e-14"))
        passed = x_err < mpmath.mpf("1e-10") and d_err < mpmath.mpf("1e-24")
        measured = f"x={mpmath.nstr(result.x, 11)} delta={mpmath.nstr(result.signed_delta, 12)}"
        return measured, "x=0.0014850135, delta=8.18131294761e-14", passed


def _brackets(nu, result, ctx) -> bool:
    with mpmath.workdps(ctx.digits):
        width = 10 * result.estimated_relative_error
        left = oracle.k_iv(nu, result.t * (1 - width), ctx)
        right = oracle.k_iv(nu, result.t * (1 + width), ctx)
        return left * right < 0


@criterion("K-zero bracketing, nu in {5, 10, 100}")
def _k_zero_bracketing(cfg):
    ms = (1, 5, 20, 100) if cfg.quick else range(1, 101)
    table = KappaTable.builtin()
    failures = [
        (nu, m)
        for nu in (5, 10, 100)
        for m in ms
        if not _brackets(nu, k_zero(KZeroQuery(nu, m, table=table), ctx=cfg.ctx), cfg.ctx)
    ]
    return f"{len(failures)} unbracketed {failures[:5]}", "0 unbracketed", not failures


@criterion("K-zero truncation improvement, nu=10")
def _k_zero_truncation(cfg):
    table = KappaTable.builtin()
    worst = mpmath.mpf(0)
    for m in (1, 5, 20, 100):
        errors = [
            k_zero(KZeroQuery(10, m, truncation=s, table=table), ctx=cfg.ctx).estimated_relative_error
            for s in range(3)
        ]
        worst = max(worst, errors[1] / errors[0], errors[2] / errors[1])
    return f"worst ratio {_e(worst)}", "<= 1/3 per step", worst <= mpmath.mpf(1) / 3


@criterion("turning-point constants")
def _turning_constants(cfg):
    c = mpmath.cbrt(2)
    pairs = [
        (ab_coefficient("A", 1, 1), mpmath.mpf(1) / 225),
        (ab_coefficient("A", 2, 1), mpmath.mpf(151439) / 218295000),
        (ab_coefficient("B", 0, 1), c / 70),
        (kappa_hat(1, 1), -mpmath.mpf(1) / 70),
        (kappa_hat(2, 1), -mpmath.mpf(3781) / 3185000),
        (upsilon1(1), c / 70),
    ]
    worst = _worst(abs(value - exact) for value, exact in pairs)
    return f"max deviation {_e(worst)}", "<= 1e-12", worst <= mpmath.mpf("1e-12")


@criterion("E_s parity and Airy coefficient a_3")
def _exact_tables(cfg):
    gen_E(config.MAX_E_ORDER)
    a3 = coefficient_table().airy(3)
    passed = a3 == Fraction(1105, 10368)
    return f"E_1..E_{config.MAX_E_ORDER} built, a_3={a3}", "a_3=1105/10368", passed


@criterion("rho round trip")
def _rho_round_trip(cfg):
    with mpmath.workdps(config.WORKING_DIGITS):
        xs = [mpmath.mpf(10) ** k for k in range(-6, 4)]
        worst = _worst(abs(rho_inverse(rho(x)) / x - 1) for x in xs)
    return f"max relative error {_e(worst)}", "<= 1e-13", worst <= mpmath.mpf("1e-13")


@criterion("Airy Wronskian and connection residuals")
def _airy_identities(cfg):
    points = [mpmath.mpc(t) for t in ("-6", "-0.5", "0.3", "2", "7")] + [
        mpmath.mpc(1, 2),
        mpmath.mpc(-3, 1),
    ]
    with mpmath.workdps(config.WORKING_DIGITS):
        wronskian = _worst(abs(mpmath.pi * airy_eval(t).wronskian - 1) for t in points)
        connection = mpmath.mpf(0)
        for t in points:
            ai = airy_eval(t).ai
            combined = mpmath.expjpi(mpmath.mpf(1) / 3) * airy_rotated(1, t) + mpmath.expjpi(
                -mpmath.mpf(1) / 3
            ) * airy_rotated(-1, t)
            scale = max(abs(ai), abs(airy_rotated(1, t)))
            connection = max(connection, abs(combined - ai) / scale)
    passed = wronskian <= mpmath.mpf("1e-12") and connection <= mpmath.mpf("1e-13")
    return (
        f"Wronskian {_e(wronskian)}, connection {_e(connection)}",
        "<= 1e-12, <= 1e-13",
        passed,
    )


@criterion("A/B branch seam continuity")
def _seam(cfg):
    worst = mpmath.mpf(0)
    with mpmath.workdps(config.WORKING_DIGITS):
        for angle in (0.3, 1.2, 2.0, 2.7):
            z = 1 + mpmath.mpf(config.TAYLOR_RADIUS) * mpmath.expj(angle)
            taylor = ab_eval(10, z, branch=ABBranch.TAYLOR)
            direct = ab_eval(10, z, branch=ABBranch.DIRECT)
            worst = max(
                worst,
                abs(taylor.A - direct.A) / abs(direct.A),
                abs(taylor.B - direct.B) / abs(direct.B),
            )
    return f"max relative jump {_e(worst)}", "<= 1e-10", worst <= mpmath.mpf("1e-10")


@criterion("conjugate reflection")
def _reflection(cfg):
    z = mpmath.mpc(1.3, 0.6)
    lg = lg_K(10, mpmath.conj(z)) == lg_K(10, z).conjugate()
    airy = bessel_airy(BesselKind.K, 10, mpmath.conj(z)) == bessel_airy(
        BesselKind.K, 10, z
    ).conjugate()
    return f"LG {lg}, Airy {airy}", "exact", lg and airy


# (x, LG terms) with n near the optimal truncation of the LG series at nu=10;
# |K_lg - K_airy| / N is relative to K itself past the first L zero
_LG_AIRY_POINTS = (("0.3", 12), ("0.5", 7), ("2", 13), ("3", 8))
_LG_AIRY_TOL = mpmath.mpf("1e-6")


@criterion("LG against Airy assembly, nu=10")
def _lg_vs_airy(cfg):
    failures = []
    measured = []
    with mpmath.workdps(config.WORKING_DIGITS):
        for x, n in _LG_AIRY_POINTS:
            x = mpmath.mpf(x)
            airy = bessel_airy(BesselKind.K, 10, x).value.real
            lg = lg_K(10, x, n=n).value.real
            diff = abs(airy - lg) / envelope_N(10, x, ctx=cfg.ctx)
            measured.append(_e(diff))
            if diff > _LG_AIRY_TOL:
                failures.append(float(x))
    return " ".join(measured), "<= 1e-6 each", not failures


@criterion("Airy assembly accuracy nu=10, x in [0.05, 4]")
def _airy_grid(cfg):
    grid = parse_grid("0.05:4:8" if cfg.quick else "0.05:4:80")
    worst = _worst(omega3(10, x, ctx=cfg.ctx) for x in grid)
    return f"max log10 chi = {_e(worst)}", "<= -6.5", worst <= mpmath.mpf("-6.5")


@criterion("K-zero datasets finite, nu in {5, 10, 100}")
def _k_zero_datasets(cfg):
    ms = range(1, 6) if cfg.quick else range(1, 101)
    sizes = []
    finite = True
    for nu in (5, 10, 100):
        data = figure_data(nu, ms, table=cfg.table, ctx=cfg.ctx)
        sizes.append(len(data))
        finite = finite and all(mpmath.isfinite(v) for v in data.values())
    return f"{sizes} points, finite={finite}", f"{len(ms)} finite points each", finite


def run_criterion(name: str, check: Check, cfg: RunConfig) -> Outcome:
    start = process_time()
    try:
        measured, required, passed = check(cfg)
    except (ImBesselError, ArithmeticError, ValueError) as exc:
        measured, required, passed = f"error: {exc}", "no error", False
    return Outcome(name, measured, required, passed, process_time() - start)


def print_outcome(outcome: Outcome) -> None:
    if outcome.passed is None:
        tag = Fore.YELLOW + "SKIP"
    elif outcome.passed:
        tag = Fore.GREEN + "PASS"
    else:
        tag = Fore.RED + "FAIL"
    print(
        f"{tag}{Style.RESET_ALL} {outcome.name}: measured {outcome.measured}, "
        f"required {outcome.required} ({outcome.seconds:.1f}s)"
    )


def cmd_verify(cfg: RunConfig) -> int:
    just_fix_windows_console()
    outcomes = []
    for name, check in CRITERIA:
        logger.info(f"Running {name}")
        outcome = run_criterion(name, check, cfg)
        print_outcome(outcome)
        outcomes.append(outcome)
    failed = [o for o in outcomes if o.passed is False]
    skipped = [o for o in outcomes if o.passed is None]
    passed = len(outcomes) - len(failed) - len(skipped)
    print(f"{passed} passed, {len(failed)} failed, {len(skipped)} skipped")
    return EXIT_ACCEPTANCE if failed else EXIT_OK


# ===== entry point =====


def run(cfg: RunConfig) -> int:
    match cfg.command:
        case Command.VERIFY:
            return cmd_verify(cfg)
        case Command.EVAL:
            header, rows = cmd_eval(cfg)
        case Command.ZEROS:
            header, rows = cmd_zeros(cfg)
        case Command.FIGURES:
            header, rows = cmd_figures(cfg)
    write_csv(header, rows, cfg.out, cfg.csv_digits)
    return EXIT_OK


def _report(exc: BaseException) -> None:
    print(f"imbessel: {exc}", file=sys.stderr)
    for note in getattr(exc, "__notes__", ()):
        print(f"  {note}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
    except _CONFIG_ERRORS as exc:
        _report(exc)
        return EXIT_CONFIG
    logging.basicConfig(level=cfg.log_level, format=config.LOG_FORMAT)
    try:
        return run(cfg)
    except _DOMAIN_ERRORS as exc:
        _report(exc)
        return EXIT_DOMAIN
    except _CONFIG_ERRORS as exc:
        _report(exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
