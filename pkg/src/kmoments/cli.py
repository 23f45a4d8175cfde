"""Command-line driver: verify | moments | equidist | lvalues | scan."""

from __future__ import annotations

import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import functools
import math
import os
from pathlib import Path
import sys
import time

import numpy as np

from . import equidist, expsums, moments, report, special
from .arith import build_context, is_prime, primes_in_range
from .lvalues import (frak_s, l_at_half, l_at_one, second_moment_lhalf, weighted_moment_l1,
                      weighted_moment_lhalf)
from .spectral import MODES, VERIFY_BOTH_MAX_N, dft_fast, dft_naive, tolerance_scale, use_mode
from .special import EULER_GAMMA

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
THREADS_ENV = "KM_THREADS"
FORMATS = ("csv", "json", "svg", "png")
VERIFY_MAX_P = 10_000
LHALF_MAX_P = 100_000


class InputError(ValueError):
    """Invalid command-line input; maps to exit code 2."""


@dataclass
class RunConfig:
    subcommand: str
    primes: list[int]
    kappas: list[float] = field(default_factory=lambda: [1.0])
    kl: list[tuple[int, int]] = field(default_factory=list)
    star: list[int] = field(default_factory=list)
    ns: list[int] = field(default_factory=lambda: [1])
    laws: list[str] = field(default_factory=list)
    sample: str | None = None
    grid: tuple[int, int] = (8, 8)
    out: Path | None = None
    formats: tuple[str, ...] = ("csv",)
    threads: int = 1
    fft: str = "fast"
    s_values: tuple[float, ...] = (1.0, 0.5)
    kmax: int = 4
    tol: float | None = None
    identity_form: str = "stated"
    bins: int = 40

    def validate(self):
        if not self.primes:
            raise InputError("no primes selected")
        for p in self.primes:
            if p < 3 or not is_prime(p):
                raise InputError(f"{p} is not an odd prime")
        if any(not k > 0 for k in self.kappas):
            raise InputError("kappa values must be positive")
        if self.fft not in MODES:
            raise InputError(f"unknown fft mode {self.fft!r}")
        if self.fft == "verify-both" and max(self.primes) > VERIFY_BOTH_MAX_N + 1:
            raise InputError(f"--fft verify-both needs p <= {VERIFY_BOTH_MAX_N + 1}")
        if self.grid[0] < 2 or self.grid[1] < 2:
            raise InputError("grid sizes must be >= 2")
        for f in self.formats:
            if f not in FORMATS:
                raise InputError(f"unknown format {f!r}")
        for law in self.laws:
            if law not in equidist.LAW_SAMPLE:
                raise InputError(f"unknown law {law!r}")
        if self.sample is not None and self.sample not in equidist.SAMPLE_KINDS:
            raise InputError(f"unknown sample kind {self.sample!r}")
        if self.subcommand == "verify" and max(self.primes) > VERIFY_MAX_P:
            raise InputError(f"verify supports p <= {VERIFY_MAX_P}")
        if self.subcommand == "lvalues" and 0.5 in self.s_values and max(self.primes) > LHALF_MAX_P:
            raise InputError(f"s = 1/2 supports p <= {LHALF_MAX_P}")
        if self.tol is not None and not self.tol > 0:
            raise InputError("--tol must be positive")
        return self


# -- argument parsing ---------------------------------------------------------

def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _kl_list(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        k, l = item.split(":")
        out.append((int(k), int(l)))
    return out


def _grid(text: str) -> tuple[int, int]:
    a, r = text.lower().split("x")
    return int(a), int(r)


def _prime_range(text: str) -> list[int]:
    lo, hi = (int(x) for x in text.split(":"))
    return primes_in_range(lo, hi)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmoments",
        description="Multiplicative analogues of Kloosterman sums mod p: identities, moments, "
                    "L-value weights and equidistribution.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--primes", type=_int_list, default=None, help="comma-separated primes")
    common.add_argument("--prime-range", type=_prime_range, default=None, metavar="LO:HI",
                        help="all odd primes in [LO, HI]")
    common.add_argument("--kappa", type=_float_list, default=[1.0], help="moment exponents")
    common.add_argument("--kl", type=_kl_list, default=[], help="mixed moments, e.g. 1:0,2:1")
    common.add_argument("--star", type=_int_list, default=[], help="orders k of M*_k")
    common.add_argument("--n", type=_int_list, default=[1], help="twists n (negative means -n mod p)")
    common.add_argument("--law", default=None,
                        help="comma-separated laws: " + ", ".join(equidist.LAW_SAMPLE))
    common.add_argument("--sample", default=None, choices=equidist.SAMPLE_KINDS,
                        help="override the sample kind tested against --law")
    common.add_argument("--grid", type=_grid, default=(8, 8), metavar="AxR")
    common.add_argument("--bins", type=int, default=40)
    common.add_argument("--out", type=Path, default=None, help="output directory")
    common.add_argument("--format", default="csv", help="comma-separated: csv,json,svg,png")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--fft", default="fast", choices=MODES)
    common.add_argument("--s", type=_float_list, default=[1.0, 0.5], help="L-value points (1, 0.5)")
    common.add_argument("--kmax", type=int, default=4)
    common.add_argument("--tol", type=float, default=None, help="override check tolerances")
    common.add_argument("--identity-form", default="stated", choices=expsums.IDENTITY_FORMS)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, text in [
        ("verify", "exact identity and special-function checks"),
        ("moments", "M_kappa, mixed and M* moments against their main terms"),
        ("equidist", "KS and sector-discrepancy statistics with histograms"),
        ("lvalues", "L(1)- and L(1/2)-weighted moments"),
        ("scan", "one summary row per prime over a ladder or range"),
    ]:
        sub.add_parser(name, parents=[common], help=text)
    return parser


def thread_count(requested: int | None) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    if requested:
        return max(1, requested)
    return os.cpu_count() or 1


def config_from_args(args) -> RunConfig:
    primes: list[int] = []
    if args.primes:
        primes.extend(args.primes)
    if args.prime_range:
        primes.extend(args.prime_range)
    primes = sorted(set(primes))
    laws = [x for x in (args.law or "").split(",") if x]
    s_values = tuple(sorted(set(args.s), reverse=True))
    for s in s_values:
        if s not in (1.0, 0.5):
            raise InputError("--s accepts 1 and 0.5")
    return RunConfig(
        subcommand=args.subcommand, primes=primes, kappas=args.kappa, kl=args.kl, star=args.star,
        ns=args.n, laws=laws, sample=args.sample, grid=args.grid, out=args.out,
        formats=tuple(f for f in args.format.split(",") if f), threads=thread_count(args.threads),
        fft=args.fft, s_values=s_values, kmax=args.kmax, tol=args.tol,
        identity_form=args.identity_form, bins=args.bins,
    ).validate()


# -- per-prime workers ---------------------------------------------------------

def _tables(p: int):
    ctx = build_context(p)
    gauss = expsums.gauss_table(ctx)
    family = expsums.k_family(ctx, gauss.values)
    return ctx, gauss, family


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1000


def _moment_row(p, kind, report_fn, **params):
    row = {"p": p, "kind": kind, **params}
    try:
        rep, ms = _timed(report_fn)
    except ValueError as exc:
        row["error"] = str(exc)
        return row
    z = complex(rep.computed)
    row.update(re=z.real, im=z.imag, predicted=_real_or_complex(rep.predicted_main),
               abs_err=rep.abs_err, rel_err=rep.rel_err, bound_ratio=rep.bound_ratio,
               wall_ms=round(ms, 3))
    if rep.s is not None:
        row["s"] = rep.s
    return row


def _real_or_complex(z):
    z = complex(z)
    return z.real if z.imag == 0 else f"{z.real!r}{z.imag:+.17g}j"


def moments_worker(p: int, cfg: RunConfig) -> list[dict]:
    with use_mode(cfg.fft):
        ctx, gauss, fam = _tables(p)
        rows = []
        ns = sorted({n % p for n in cfg.ns})
        for kappa in sorted(cfg.kappas):
            for n in ns:
                rows.append(_moment_row(p, "abs", functools.partial(moments.moment_abs, fam, ctx, kappa, n),
                                        kappa=kappa, n=n))
        for k, l in sorted(cfg.kl):
            for n in ns:
                rows.append(_moment_row(p, "mixed", functools.partial(moments.moment_mixed, fam, ctx, k, l, n),
                                        k=k, l=l, n=n))
        for k in sorted(cfg.star):
            rows.append(_moment_row(p, "star", functools.partial(moments.moment_star, fam, gauss, ctx, k), k=k))
        return rows


def lvalues_worker(p: int, cfg: RunConfig, frak: float) -> list[dict]:
    with use_mode(cfg.fft):
        ctx, gauss, fam = _tables(p)
        rows = []
        consts = {"frak_s": frak, "euler_gamma": EULER_GAMMA}
        if 1.0 in cfg.s_values:
            l1 = l_at_one(ctx)
            for kappa in sorted(cfg.kappas):
                rows.append(_moment_row(p, "l1", functools.partial(weighted_moment_l1, fam, l1, kappa, frak),
                                        kappa=kappa, s=1.0, **consts))
        if 0.5 in cfg.s_values:
            lh = l_at_half(ctx)
            for kappa in sorted(cfg.kappas):
                rows.append(_moment_row(p, "lhalf", functools.partial(weighted_moment_lhalf, fam, lh, kappa),
                                        kappa=kappa, s=0.5, **consts))
            rows.append(_moment_row(p, "lhalf2", functools.partial(second_moment_lhalf, lh), s=0.5, **consts))
        order = {"l1": 0, "lhalf": 1, "lhalf2": 2}
        rows.sort(key=lambda r: (order[r["kind"]], r.get("kappa") or 0.0))
        return rows


def _laws(cfg: RunConfig) -> list[str]:
    return cfg.laws or list(equidist.LAW_SAMPLE)


def equidist_worker(p: int, cfg: RunConfig) -> dict:
    with use_mode(cfg.fft):
        ctx, gauss, fam = _tables(p)
        rows, hists, planar = [], {}, None
        for law in _laws(cfg):
            kind = cfg.sample if (cfg.sample and law != "disk-mu") else equidist.LAW_SAMPLE[law]
            if law == "disk-mu":
                sample = equidist.make_sample(ctx, fam, "planar")
                value = equidist.planar_discrepancy(sample, cfg.grid)
                rows.append({"p": p, "sample": "planar", "law": law, "statistic": "sector-discrepancy",
                             "grid": f"{cfg.grid[0]}x{cfg.grid[1]}", "value": value, "count": sample.count})
                planar = sample.data
                continue
            sample = equidist.make_sample(ctx, fam, kind, gauss.values)
            rows.append({"p": p, "sample": kind, "law": law, "statistic": "ks", "grid": "",
                         "value": equidist.ks_statistic(sample, law), "count": sample.count})
            hists[(law, kind)] = equidist.histogram(sample, law, cfg.bins)
        return {"rows": rows, "hists": hists, "planar": planar}


def scan_worker(p: int, cfg: RunConfig) -> dict:
    def run():
        with use_mode(cfg.fft):
            ctx, gauss, fam = _tables(p)
            z = equidist.family_values(fam)
            normed = expsums.normalized_real(ctx, fam, gauss.values)
            rep = moments.moment_abs(fam, ctx, cfg.kappas[0], 1)
            ks = equidist.ks_statistic(equidist.make_sample(ctx, fam, "abs"), "arcsine-abs")
            disc = equidist.planar_discrepancy(equidist.make_sample(ctx, fam, "planar"), cfg.grid)
            return {"p": p, "count": len(z), "max_abs_K": float(np.max(np.abs(z), initial=0.0)),
                    "max_abs_normalized": float(np.max(np.abs(normed), initial=0.0)),
                    "kappa": cfg.kappas[0], "moment_rel_err": rep.rel_err,
                    "moment_bound_ratio": rep.bound_ratio, "ks_abs": ks, "planar_discrepancy": disc}
    row, ms = _timed(run)
    row["wall_ms"] = round(ms, 3)
    return row


def verify_worker(p: int, cfg: RunConfig) -> list[dict]:
    tol = cfg.tol if cfg.tol is not None else 1e-7
    with use_mode(cfg.fft):
        ctx = build_context(p)
        records = expsums.basic_checks(ctx, tol)
        records += expsums.identity_suite(ctx, cfg.kmax, tol=tol, form=cfg.identity_form)
        for k in range(2, cfg.kmax + 2):
            kl = expsums.hyper_kloosterman(ctx, k).units
            records.append(expsums.CheckRecord("deligne_bound", p, {"k": k},
                                               float(max(np.max(np.abs(kl)) - k, 0.0)), 0.0, 1.0, 1e-9))
        if p <= VERIFY_BOTH_MAX_N + 1:
            rng = np.random.default_rng(p)
            f = rng.standard_normal(p - 1) + 1j * rng.standard_normal(p - 1)
            dev = float(np.max(np.abs(dft_fast(f) - dft_naive(f))))
            records.append(expsums.CheckRecord("dft_fast_vs_naive", p, {}, dev, 0.0,
                                               tolerance_scale(f), cfg.tol or 1e-8))
    return [r.to_dict() for r in records]


def global_checks(cfg: RunConfig) -> list[dict]:
    """Checks that do not depend on p: Gamma identity, trig integral, J0."""
    out = []
    for kappa in (0, 0.3, 0.5, 1, 1.7, 2, 2.5, 3, 4.25, 5):
        tol = cfg.tol if cfg.tol is not None else 1e-12
        c = special.prop_a1_check(kappa, tol)
        out.append(expsums.CheckRecord("gamma_series_identity", 0, {"kappa": kappa}, c.lhs, c.rhs,
                                       max(1.0, abs(c.rhs)), tol).to_dict())
    for mu in (0, 0.5, 1, 2.5):
        tol = cfg.tol if cfg.tol is not None else 1e-8
        c = special.trig_integral_check(mu, tol)
        out.append(expsums.CheckRecord("trig_integral", 0, {"mu": mu}, c.lhs, c.rhs,
                                       max(1.0, abs(c.rhs)), tol).to_dict())
    for z in (0.5, 2, 5, 10):
        tol = cfg.tol if cfg.tol is not None else 1e-10
        out.append(expsums.CheckRecord("bessel_j0_series_vs_integral", 0, {"z": z}, special.bessel_j0(z),
                                       special.bessel_j0_integral(z), 1.0, tol).to_dict())
    return out


# -- orchestration ---------------------------------------------------------------

def run_per_prime(worker, cfg: RunConfig, *extra):
    """Map a worker over primes; results come back in prime order for any thread count."""
    fn = functools.partial(worker, cfg=cfg, **({"frak": extra[0]} if extra else {}))
    if cfg.threads <= 1 or len(cfg.primes) == 1:
        return [fn(p) for p in cfg.primes]
    with ProcessPoolExecutor(max_workers=min(cfg.threads, len(cfg.primes))) as pool:
        return list(pool.map(fn, cfg.primes))


def _emit(cfg: RunConfig, name: str, rows: list[dict], columns: list[str], stdout=True):
    text = report.to_csv(rows, columns)
    if stdout:
        sys.stdout.write(text)
    if cfg.out is not None:
        if "csv" in cfg.formats:
            report.write_text(cfg.out / f"{name}.csv", text)
        if "json" in cfg.formats:
            report.write_text(cfg.out / f"{name}.json", report.to_json(rows, columns))


def cmd_moments(cfg: RunConfig) -> int:
    rows = [r for chunk in run_per_prime(moments_worker, cfg) for r in chunk]
    _emit(cfg, "moments", rows, report.MOMENT_COLUMNS)
    if cfg.out is not None and "png" in cfg.formats:
        from . import plotting
        plotting.plot_moment_ladder(rows, cfg.out / "moments.png", "moments against main terms")
    return EXIT_OK


def cmd_lvalues(cfg: RunConfig) -> int:
    frak = frak_s(1e-8)
    rows = [r for chunk in run_per_prime(lvalues_worker, cfg, frak) for r in chunk]
    _emit(cfg, "lvalues", rows, report.LVALUE_COLUMNS)
    if cfg.out is not None and "png" in cfg.formats:
        from . import plotting
        plotting.plot_moment_ladder(rows, cfg.out / "lvalues.png", "L-weighted moments")
    return EXIT_OK


def cmd_equidist(cfg: RunConfig) -> int:
    results = run_per_prime(equidist_worker, cfg)
    rows = [r for res in results for r in res["rows"]]
    _emit(cfg, "equidist", rows, report.EQUIDIST_COLUMNS)
    if cfg.out is None:
        return EXIT_OK
    for p, res in zip(cfg.primes, results):
        for (law, kind), hist in res["hists"].items():
            stem = f"hist_p{p}_{law}_{kind}"
            hist_rows = [dict(zip(report.HISTOGRAM_COLUMNS, map(float, row))) for row in hist]
            if "csv" in cfg.formats:
                report.write_text(cfg.out / f"{stem}.csv", report.to_csv(hist_rows, report.HISTOGRAM_COLUMNS))
            if "json" in cfg.formats:
                report.write_text(cfg.out / f"{stem}.json", report.to_json(hist_rows, report.HISTOGRAM_COLUMNS))
            if "svg" in cfg.formats:
                L = equidist.get_law(law)
                span = L.hi - L.lo
                x = np.linspace(L.lo + 1e-3 * span, L.hi - 1e-3 * span, 400)
                svg = report.histogram_svg(hist, x, np.asarray(equidist.target_density(L, x)),
                                           f"p={p} {kind} vs {law}")
                report.write_text(cfg.out / f"{stem}.svg", svg)
            if "png" in cfg.formats:
                from . import plotting
                plotting.plot_histogram(hist, law, cfg.out / f"{stem}.png", f"p={p}: {kind} vs {law}")
        if res["planar"] is not None and "png" in cfg.formats:
            from . import plotting
            plotting.plot_planar(res["planar"], cfg.out / f"planar_p{p}.png", cfg.grid, f"K(chi), p={p}")
            plotting.plot_sector_masses(res["planar"], cfg.out / f"sectors_p{p}.png", cfg.grid,
                                        f"sector mass error, p={p}")
    return EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    rows = run_per_prime(scan_worker, cfg)
    _emit(cfg, "scan", rows, report.SCAN_COLUMNS)
    if cfg.out is not None and "png" in cfg.formats:
        from . import plotting
        ladder = [{"p": r["p"], "kind": "abs", "kappa": r["kappa"], "rel_err": r["moment_rel_err"]} for r in rows]
        plotting.plot_moment_ladder(ladder, cfg.out / "scan.png", "prime scan")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    records = [r for chunk in run_per_prime(verify_worker, cfg) for r in chunk]
    records += global_checks(cfg)
    text = report.to_json(records)
    if cfg.out is not None:
        report.write_text(cfg.out / "verify.json", text)
    else:
        sys.stdout.write(text)
    failed = [r for r in records if not r["passed"]]
    print(f"{len(records) - len(failed)}/{len(records)} checks passed", file=sys.stderr)
    if failed:
        first = failed[0]
        print(f"first failure: {first['name']} p={first['p']} params={first['params']} "
              f"deviation={first['deviation']:.3e} tol={first['tol']:.1e} scale={first['scale']:.3e}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "moments": cmd_moments,
    "equidist": cmd_equidist,
    "lvalues": cmd_lvalues,
    "scan": cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return COMMANDS[cfg.subcommand](cfg)


if __name__ == "__main__":
    sys.exit(main())
