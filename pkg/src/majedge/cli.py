"""Command-line front end.

Subcommands: color, verify, brute, gen, mt, bench. Rationals are written
``p/q`` (integers accepted). Exit codes:

    0  success (verified colouring, feasible instance, file written)
    1  negative answer (verification failed, instance infeasible)
    2  precondition or usage error
    3  file I/O or parse error
    4  post-verification failure inside a driver
    5  resampling round limit exceeded
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import formats, generators, oracle, pipeline, stochastic
from .colouring import (
    ListAssignment,
    ToleranceFn,
    VertexToleranceFn,
    discrepancy_of,
    verify_majority,
    verify_vertex_tolerance,
)
from .errors import FormatError, PostVerificationFailed, PreconditionError, RoundLimitExceeded
from .graph import Graph

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PRECONDITION = 2
EXIT_IO = 3
EXIT_POSTVERIFY = 4
EXIT_ROUNDS = 5

SEED_ENV = "MAJEDGE_SEED"
BENCH_COLUMNS = ["instance", "n", "m", "delta", "mode", "params", "verified", "rounds", "millis"]


def rational(text: str) -> Fraction:
    try:
        return formats.parse_rational(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def int_list(text: str) -> list[int]:
    """``"4..8"``, ``"4,6,8"`` or ``""`` (empty)."""
    out: list[int] = []
    try:
        for part in filter(None, (p.strip() for p in text.split(","))):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    return out


def rational_list(text: str) -> list[Fraction]:
    return [rational(p.strip()) for p in text.split(",") if p.strip()]


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV} must be an integer, got {raw!r}") from None


@dataclass
class RunConfig:
    command: str
    graph: Path | None = None
    lists: Path | None = None
    tol: Path | None = None
    vtol: Path | None = None
    colouring: Path | None = None
    out: Path | None = None
    mode: str | None = None
    k: int | None = None
    ell: int | None = None
    alpha: Fraction | None = None
    eps: Fraction | None = None
    a: Fraction | None = None
    beta: Fraction | None = None
    r: int | None = None
    n: int | None = None
    seed: int = 0
    max_rounds: int | None = None
    enforce: bool = True
    budget: int = oracle.DEFAULT_BUDGET
    workers: int = 1
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__ if f not in ("extra", "enforce")}
        values = {k: v for k, v in vars(ns).items() if k in known and v is not None}
        extra = {k: v for k, v in vars(ns).items() if k not in known and k not in ("func", "relax")}
        cfg = cls(enforce=not getattr(ns, "relax", False), extra=extra, **values)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for name in ("k", "ell", "n", "r"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise PreconditionError(f"--{name} must be positive")
        if self.workers < 1:
            raise PreconditionError("--workers must be at least 1")
        if self.budget < 1:
            raise PreconditionError("--budget must be positive")
        if self.max_rounds is not None and self.max_rounds < 0:
            raise PreconditionError("--max-rounds must be non-negative")
        for name in ("alpha", "a", "beta"):
            v = getattr(self, name)
            if v is not None and not 0 < v < 1:
                raise PreconditionError(f"--{name} must lie in (0, 1)")
        if self.eps is not None and self.eps <= 0:
            raise PreconditionError("--eps must be positive")

    def need(self, *names: str):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise PreconditionError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing))
        vals = tuple(getattr(self, n) for n in names)
        return vals[0] if len(vals) == 1 else vals


def _load_graph(cfg: RunConfig) -> Graph:
    return formats.parse_graph(formats.read_text(cfg.need("graph")))


def _load_lists(cfg: RunConfig, g: Graph) -> ListAssignment:
    return formats.parse_lists(formats.read_text(cfg.need("lists")), g)


def _load_tolerance(cfg: RunConfig) -> ToleranceFn:
    if cfg.tol is not None:
        return formats.parse_tolerance(formats.read_text(cfg.tol))
    if cfg.alpha is not None:
        return ToleranceFn.uniform(cfg.alpha)
    raise PreconditionError("need --tol or --alpha")


def _load_any_tolerance(cfg: RunConfig) -> ToleranceFn | VertexToleranceFn:
    if cfg.vtol is not None:
        return formats.parse_vertex_tolerance(formats.read_text(cfg.vtol))
    return _load_tolerance(cfg)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        formats.write_text(cfg.out, text)


def _verify(g, w, tol):
    if isinstance(tol, VertexToleranceFn):
        return verify_vertex_tolerance(g, w, tol)
    return verify_majority(g, w, tol)


def cmd_color(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    pcfg = pipeline.PipelineConfig(enforce_preconditions=cfg.enforce, seed=cfg.seed)
    mode = cfg.need("mode")
    if mode == "1k":
        k = cfg.need("k")
        w = pipeline.color_majority_1k(g, _load_lists(cfg, g), k, pcfg)
        tol = ToleranceFn.uniform(Fraction(1, k))
    elif mode == "alpha":
        alpha, ell = cfg.need("alpha", "ell")
        w = pipeline.color_majority_alpha(g, _load_lists(cfg, g), alpha, ell, pcfg)
        tol = ToleranceFn.uniform(alpha)
    elif mode == "discretize":
        eps, ell = cfg.need("eps", "ell")
        lists = _load_lists(cfg, g)
        tol = _load_tolerance(cfg)
        w = pipeline.color_via_discretization(g, lists, tol, eps, ell, pcfg)
    elif mode == "disc":
        k = cfg.need("k")
        w = pipeline.color_discrepancy(g, k)
        _emit(cfg, formats.format_colouring(w, g))
        print(f"discrepancy {discrepancy_of(g, w, k, pipeline.discrepancy_palette(k))}")
        print("ok")
        return EXIT_OK
    elif mode == "frugal":
        k = cfg.need("k")
        w = pipeline.color_frugal_regular(g, k)
        tol = ToleranceFn.uniform(Fraction(1, k))
    else:
        raise PreconditionError(f"unknown mode {mode!r}")
    report = verify_majority(g, w, tol)
    if not report.ok:  # drivers already verify; kept so exit 0 always means verified
        raise PostVerificationFailed(report)
    _emit(cfg, formats.format_colouring(w, g))
    print("\n".join(report.lines()))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    w = formats.parse_colouring(formats.read_text(cfg.need("colouring")), g)
    report = _verify(g, w, _load_any_tolerance(cfg))
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_brute(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    inst = oracle.Instance(g, _load_lists(cfg, g), _load_any_tolerance(cfg), cfg.eps)
    prune = not cfg.extra.get("no_prune", False)
    if cfg.extra.get("count"):
        total = oracle.count_feasible(inst, cfg.budget, prune=prune, workers=cfg.workers)
        print(f"feasible {total} of {inst.search_space()}")
        return EXIT_OK if total else EXIT_NEGATIVE
    w = oracle.brute_force(inst, cfg.budget, prune=prune, workers=cfg.workers)
    if w is None:
        print("infeasible")
        return EXIT_NEGATIVE
    _emit(cfg, formats.format_colouring(w, g))
    print("feasible")
    return EXIT_OK


def _write_files(prefix: Path | None, files: dict[str, str]) -> None:
    if prefix is None:
        if len(files) != 1:
            raise PreconditionError("--out prefix is required when several files are written")
        sys.stdout.write(next(iter(files.values())))
        return
    for ext, text in files.items():
        formats.write_text(f"{prefix}.{ext}", text)
        print(f"wrote {prefix}.{ext}")


def cmd_gen(cfg: RunConfig) -> int:
    kind = cfg.extra["kind"]
    rng = random.Random(cfg.seed)
    d = cfg.extra.get("d")
    if kind == "regular":
        n = cfg.need("n")
        if d is None:
            raise PreconditionError("missing --d")
        g = generators.random_regular_graph(n, d, rng)
        _write_files(cfg.out, {"graph": formats.format_graph(g)})
    elif kind == "er":
        n = cfg.need("n")
        if d is None:
            raise PreconditionError("missing --d")
        g = generators.random_min_degree_graph(n, d, rng, cfg.extra.get("p") or 0.0)
        _write_files(cfg.out, {"graph": formats.format_graph(g)})
    elif kind == "counterexample":
        n, r, beta = cfg.need("n", "r", "beta")
        inst = oracle.build_counterexample(n, r, beta)
        _write_files(
            cfg.out,
            {
                "graph": formats.format_graph(inst.graph),
                "lists": formats.format_lists(inst.lists, inst.graph),
                "vtol": formats.format_vertex_tolerance(inst.tolerance),
            },
        )
    elif kind == "lists":
        g = _load_graph(cfg)
        vector = cfg.extra.get("vector")
        if vector:
            lists, tol = generators.random_lambda_lists(g, vector, cfg.extra.get("pool") or 3, rng)
            files = {"lists": formats.format_lists(lists, g), "tol": formats.format_tolerance(tol)}
        elif cfg.a is not None:
            eps = cfg.need("eps")
            lists, tol = generators.random_excessive_instance(g, cfg.a, eps, rng, cfg.extra.get("pool") or 12)
            files = {"lists": formats.format_lists(lists, g), "tol": formats.format_tolerance(tol)}
        else:
            size = cfg.extra.get("size")
            if size is None:
                raise PreconditionError("need --size, --vector or --a")
            pool = cfg.extra.get("pool") or 3 * size
            lists = generators.random_lists(g, size, pool, rng, clustered=cfg.extra.get("clustered", False))
            files = {"lists": formats.format_lists(lists, g)}
        _write_files(cfg.out, files)
    else:
        raise PreconditionError(f"unknown generator {kind!r}")
    return EXIT_OK


def cmd_mt(cfg: RunConfig) -> int:
    action = cfg.extra["action"]
    if action == "params":
        printed = False
        vector = cfg.extra.get("vector")
        if cfg.a is not None:
            eps = cfg.need("eps")
            print(f"threshold_general {stochastic.min_degree_threshold_general(cfg.a, eps)}")
            print(f"threshold_general_float {stochastic.min_degree_threshold_general_float(cfg.a, eps)}")
            printed = True
        if cfg.ell is not None:
            eps = cfg.need("eps")
            print(f"threshold_uniform {stochastic.min_degree_threshold_uniform(cfg.ell, eps)}")
            print(f"threshold_uniform_float {stochastic.min_degree_threshold_uniform_float(cfg.ell, eps)}")
            printed = True
        if vector:
            u = stochastic.uniform_vector_params(vector, cfg.need("eps"))
            print(f"lambda {u.lam!r}")
            print(f"mu {u.mu!r}")
            print(f"ell_prime {u.ell_prime}")
            print("beta " + " ".join(repr(b) for b in u.beta))
            print(f"B {u.B!r}")
            print("p " + " ".join(repr(p) for p in u.probability_by_input_index()))
            printed = True
        if not printed:
            raise PreconditionError("need --a, --ell or --vector (with --eps)")
        return EXIT_OK
    g = _load_graph(cfg)
    lists = _load_lists(cfg, g)
    tol = _load_tolerance(cfg)
    if cfg.extra.get("uniform"):
        dist = stochastic.sample_probabilities_uniform(lists, tol, cfg.need("eps"))
    else:
        if cfg.a is not None:
            lists = stochastic.prune_lists(lists, tol, cfg.need("eps"), cfg.a)
        dist = stochastic.sample_probabilities_general(lists, tol)
    try:
        w, log = stochastic.moser_tardos_color(g, lists, dist, tol, cfg.max_rounds, cfg.seed)
    except RoundLimitExceeded as exc:
        _write_log(cfg, exc.log)
        raise
    _write_log(cfg, log)
    _emit(cfg, formats.format_colouring(w, g))
    print(f"rounds {log.rounds}")
    print("\n".join(verify_majority(g, w, tol).lines()))
    return EXIT_OK


def _write_log(cfg: RunConfig, log: stochastic.ResampleLog) -> None:
    text = "".join(line + "\n" for line in log.lines())
    path = cfg.extra.get("log")
    if path:
        formats.write_text(path, text)
    else:
        sys.stdout.write(text)


@dataclass(frozen=True)
class BenchJob:
    instance: int
    mode: str
    params: tuple[tuple[str, str], ...]
    n: int
    delta: int
    seed: int
    enforce: bool
    timing: bool

    def param_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.params)


def run_bench_job(job: BenchJob) -> dict:
    """One sweep instance; every failure counts as not verified."""
    p = dict(job.params)
    rng = random.Random(f"{job.seed}:{job.mode}:{job.param_text()}:{job.delta}:{job.instance}")
    n = max(job.n, job.delta + 1)
    pcfg = pipeline.PipelineConfig(enforce_preconditions=job.enforce)
    verified, rounds, m = 0, 0, 0
    start = time.perf_counter()
    try:
        if job.mode == "frugal":
            if (n * job.delta) % 2:
                n += 1
            g = generators.random_regular_graph(n, job.delta, rng)
        else:
            g = generators.random_min_degree_graph(n, job.delta, rng)
        m = g.m
        if job.mode == "1k":
            k = int(p["k"])
            lists = generators.random_lists(g, k + 1, 3 * k, rng, clustered=True)
            w = pipeline.color_majority_1k(g, lists, k, pcfg)
            verified = int(verify_majority(g, w, ToleranceFn.uniform(Fraction(1, k))).ok)
        elif job.mode == "alpha":
            alpha, ell = Fraction(p["alpha"]), int(p["ell"])
            lists = generators.random_lists(g, ell, 3 * ell, rng, clustered=True)
            w = pipeline.color_majority_alpha(g, lists, alpha, ell, pcfg)
            verified = int(verify_majority(g, w, ToleranceFn.uniform(alpha)).ok)
        elif job.mode == "disc":
            k = int(p["k"])
            w = pipeline.color_discrepancy(g, k)
            verified = int(discrepancy_of(g, w, k, pipeline.discrepancy_palette(k)) <= 2)
        elif job.mode == "frugal":
            k = int(p["k"])
            w = pipeline.color_frugal_regular(g, k)
            verified = int(verify_majority(g, w, ToleranceFn.uniform(Fraction(1, k))).ok)
        elif job.mode == "mt":
            a, eps = Fraction(p["a"]), Fraction(p["eps"])
            lists, tol = generators.random_excessive_instance(g, a, eps, rng)
            lists = stochastic.prune_lists(lists, tol, eps, a)
            dist = stochastic.sample_probabilities_general(lists, tol)
            w, log = stochastic.moser_tardos_color(g, lists, dist, tol, seed=rng.randrange(2**32))
            rounds = log.rounds
            verified = int(verify_majority(g, w, tol).ok)
        else:
            raise PreconditionError(f"unknown bench mode {job.mode!r}")
    except RoundLimitExceeded as exc:
        rounds = exc.log.rounds
    except (PreconditionError, PostVerificationFailed):
        pass
    millis = int((time.perf_counter() - start) * 1000) if job.timing else 0
    return {
        "instance": job.instance,
        "n": n,
        "m": m,
        "delta": job.delta,
        "mode": job.mode,
        "params": job.param_text(),
        "verified": verified,
        "rounds": rounds,
        "millis": millis,
    }


def bench_jobs(cfg: RunConfig) -> list[BenchJob]:
    mode = cfg.need("mode")
    deltas = cfg.extra.get("deltas") or []
    count = cfg.extra.get("count", 10)
    if mode in ("1k", "disc", "frugal"):
        grid = [(("k", str(k)),) for k in (cfg.extra.get("ks") or [])]
    elif mode == "alpha":
        alpha, ell = cfg.need("alpha", "ell")
        grid = [(("alpha", str(alpha)), ("ell", str(ell)))]
    elif mode == "mt":
        a, eps = cfg.need("a", "eps")
        grid = [(("a", str(a)), ("eps", str(eps)))]
    else:
        raise PreconditionError(f"unknown bench mode {mode!r}")
    jobs = []
    for params in grid:
        for delta in deltas:
            for _ in range(count):
                jobs.append(
                    BenchJob(len(jobs), mode, params, cfg.n or 30, delta, cfg.seed, cfg.enforce, not cfg.extra.get("no_timing"))
                )
    return jobs


def bench_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def cmd_bench(cfg: RunConfig) -> int:
    jobs = bench_jobs(cfg)
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(run_bench_job, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        rows = [run_bench_job(j) for j in jobs]
    rows.sort(key=lambda r: r["instance"])
    text = bench_csv(rows)
    _emit(cfg, text)
    if cfg.out is not None and not cfg.extra.get("no_figure"):
        from .report import plot_success

        fig = plot_success(csv.DictReader(io.StringIO(text)), Path(cfg.out).with_suffix(".png"))
        print(f"wrote {cfg.out} and {fig}")
    return EXIT_OK


def _common(p: argparse.ArgumentParser, *flags: str) -> None:
    options = {
        "graph": dict(type=Path, help="graph file"),
        "lists": dict(type=Path, help="list file"),
        "tol": dict(type=Path, help="tolerance file"),
        "vtol": dict(type=Path, help="vertex-tolerance file"),
        "alpha": dict(type=rational, help="uniform tolerance p/q"),
        "eps": dict(type=rational, help="excess ε as p/q"),
        "a": dict(type=rational, help="minimal tolerance p/q"),
        "k": dict(type=int, help="colours per vertex share 1/k"),
        "ell": dict(type=int, help="list length"),
        "n": dict(type=int, help="number of vertices (per side for counterexample)"),
        "out": dict(type=Path, help="output file or prefix (default: stdout)"),
        "workers": dict(type=int, default=1, help="worker processes"),
        "max-rounds": dict(type=int, dest="max_rounds", help="resampling round limit"),
        "budget": dict(type=int, default=oracle.DEFAULT_BUDGET, help="largest search space to enumerate"),
    }
    for f in flags:
        p.add_argument(f"--{f}", **options[f])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="majedge", description="Majority edge colouring from lists.")
    parser.add_argument("--seed", type=int, default=None, help=f"random seed (default: ${SEED_ENV} or 0)")
    sub = parser.add_subparsers(dest="command", required=True)
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    p = sub.add_parser("color", parents=[seeded], help="colour a graph with one of the constructive drivers")
    p.add_argument("--mode", required=True, choices=["1k", "alpha", "discretize", "disc", "frugal"])
    _common(p, "graph", "lists", "tol", "alpha", "eps", "k", "ell", "out")
    p.add_argument("--relax", action="store_true", help="skip minimum-degree preconditions")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", parents=[seeded], help="check a colouring against tolerances")
    _common(p, "graph", "tol", "vtol", "alpha")
    p.add_argument("--colouring", "--coloring", type=Path, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("brute", parents=[seeded], help="exhaustive search for a feasible list colouring")
    _common(p, "graph", "lists", "tol", "vtol", "alpha", "eps", "budget", "workers", "out")
    p.add_argument("--count", action="store_true", help="count feasible colourings")
    p.add_argument("--no-prune", action="store_true", help="plain enumeration checked by the verifier")
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("gen", parents=[seeded], help="generate instances")
    p.add_argument("kind", choices=["regular", "er", "counterexample", "lists"])
    _common(p, "graph", "n", "a", "eps", "out")
    p.add_argument("--d", type=int, help="degree (regular) or minimum degree (er)")
    p.add_argument("--p", type=float, help="edge probability before degree repair (er)")
    p.add_argument("--r", type=int, help="colours per side (counterexample)")
    p.add_argument("--beta", type=rational, help="low tolerance p/q (counterexample)")
    p.add_argument("--size", type=int, help="list size")
    p.add_argument("--pool", type=int, help="number of colours to draw from")
    p.add_argument("--clustered", action="store_true", help="correlate lists around each vertex")
    p.add_argument("--vector", type=rational_list, help="tolerance vector a1,a2,... for Λ-lists")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("mt", parents=[seeded], help="degree thresholds and resampling colourer")
    p.add_argument("action", choices=["params", "run"])
    _common(p, "graph", "lists", "tol", "alpha", "eps", "a", "ell", "max-rounds", "out")
    p.add_argument("--vector", type=rational_list, help="tolerance vector a1,a2,...")
    p.add_argument("--uniform", action="store_true", help="use the tolerance-vector sampler")
    p.add_argument("--log", type=Path, help="write the resampling log here instead of stdout")
    p.set_defaults(func=cmd_mt)

    p = sub.add_parser("bench", parents=[seeded], help="success-rate sweeps over random instances")
    p.add_argument("--mode", required=True, choices=["1k", "alpha", "disc", "frugal", "mt"])
    p.add_argument("--k", dest="ks", type=int_list, help="k values, e.g. 2,3 or 2..4")
    p.add_argument("--deltas", type=int_list, default=[], help="minimum degrees, e.g. 4..8")
    p.add_argument("--count", type=int, default=10, help="instances per grid point")
    _common(p, "alpha", "ell", "a", "eps", "n", "workers", "out")
    p.add_argument("--relax", action="store_true", help="skip minimum-degree preconditions")
    p.add_argument("--no-timing", action="store_true", help="write 0 for millis so output is byte-stable")
    p.add_argument("--no-figure", action="store_true", help="skip the PNG next to the CSV")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.seed is None:
        ns.seed = default_seed()
    try:
        cfg = RunConfig.from_namespace(ns)
        return ns.func(cfg)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PostVerificationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        for line in exc.report.lines():
            print(line, file=sys.stderr)
        return EXIT_POSTVERIFY
    except RoundLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ROUNDS
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
