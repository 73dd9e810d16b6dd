"""Command-line entry point.

Exit codes: 0 solved or infeasible, 1 no separating change of variables
found, 2 problem not D0, 3 bad input, 4 certification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .enumerate import (
    PrecisionPair,
    enumerate_least_norm,
    enumerate_solutions,
    enumerate_sparse,
)
from .errors import CertificationError, NotD0Error, ParseError, PCPError, ShapeSearchExhausted
from .pipeline import (
    HStrategy,
    PCPProblem,
    classify_d0,
    copositive_solve,
    generate_benchmark,
    least_norm_representation,
    perturb,
    sparse_representation,
    univariate_representation,
)
from .poly import rational_str, to_rational
from .problem_io import read_matrix, read_problem, serialize_rep
from .univar import count_real_roots

TASKS = ("solve", "least-norm", "sparse", "check-d0", "copositive", "bench")
EXIT_OK, EXIT_SHAPE, EXIT_NOT_D0, EXIT_INPUT, EXIT_CERT = 0, 1, 2, 3, 4

log = logging.getLogger("pcpsolve")


@dataclass
class RunConfig:
    task: str
    input: str | None = None
    output: str | None = None
    gamma1: str | None = None
    gamma2: str | None = None
    strategy: str = "random"
    seed: int = 0
    s_start: int = 0
    h_matrix: str | None = None
    invert_h: bool = True
    method: str = "quotient"
    eps: str = "1e-6"
    perturbation: str | None = None
    family: str | None = None
    n: int | None = None
    d: int = 2
    force: bool = False
    ceiling: int = 1024
    verbose: bool = False


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pcpsolve",
        description="Solve polynomial complementarity problems exactly via univariate representations.",
    )
    p.add_argument("--task", choices=TASKS, required=True)
    p.add_argument("--input", help="problem file (JSON with 'variables' and 'f')")
    p.add_argument("--output", help="write the result document here instead of stdout")
    p.add_argument("--gamma1", help="root isolation precision (default 1e-10)")
    p.add_argument("--gamma2", help="merge radius (default 1e-6; 1e-4 for bench)")
    p.add_argument("--strategy", choices=("random", "deterministic", "explicit"), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s-start", type=int, default=0, help="first s tried by the deterministic strategy")
    p.add_argument("--h-matrix", help="JSON square matrix for the explicit strategy")
    p.add_argument("--invert-h", type=_bool, default=True, metavar="{true|false}")
    p.add_argument("--method", choices=("quotient", "lex"), default="quotient")
    p.add_argument("--eps", default="1e-6", help="perturbation radius for copositive")
    p.add_argument("--perturbation", help="comma separated fixed perturbation for copositive")
    p.add_argument("--family", choices=("p", "q"))
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--force", action="store_true", help="run bench beyond the size ceiling")
    p.add_argument("--ceiling", type=int, default=1024, help="bench limit on 2^n (d+1)^n")
    p.add_argument("--verbose", action="store_true")
    return p


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    strategy = ns.strategy or ("explicit" if ns.h_matrix else "random")
    return RunConfig(
        task=ns.task, input=ns.input, output=ns.output, gamma1=ns.gamma1, gamma2=ns.gamma2,
        strategy=strategy, seed=ns.seed, s_start=ns.s_start, h_matrix=ns.h_matrix,
        invert_h=ns.invert_h, method=ns.method, eps=ns.eps, perturbation=ns.perturbation,
        family=ns.family, n=ns.n, d=ns.d, force=ns.force, ceiling=ns.ceiling, verbose=ns.verbose,
    )


def _gamma(cfg: RunConfig) -> PrecisionPair:
    g2_default = "1e-4" if cfg.task == "bench" else "1e-6"
    return PrecisionPair(cfg.gamma1 or "1e-10", cfg.gamma2 or g2_default)


def _strategy(cfg: RunConfig) -> HStrategy:
    matrix = None
    if cfg.strategy == "explicit":
        if not cfg.h_matrix:
            raise ParseError("--strategy explicit needs --h-matrix", 0)
        matrix = read_matrix(Path(cfg.h_matrix).read_text())
    return HStrategy(
        mode=cfg.strategy, seed=cfg.seed if cfg.strategy == "random" else None,
        explicit_matrix=matrix, invert_convention=cfg.invert_h, s_start=cfg.s_start,
    )


def _load(cfg: RunConfig) -> PCPProblem:
    if not cfg.input:
        raise ParseError("--input is required for this task", 0)
    return read_problem(cfg.input).to_problem()


def _timed(timings: dict, key: str, fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    timings[key] = timings.get(key, 0.0) + time.perf_counter() - t0
    return out


def _solve_task(cfg: RunConfig) -> str:
    prob = _load(cfg)
    gamma = _gamma(cfg)
    timings: dict = {}
    rep = _timed(timings, "representation", univariate_representation, prob, _strategy(cfg), cfg.method)
    if cfg.task == "solve":
        sols = _timed(timings, "enumeration", enumerate_solutions, rep, prob, gamma)
        return serialize_rep(rep, sols, gamma=gamma, task=cfg.task, timings=timings)
    if cfg.task == "least-norm":
        rep = _timed(timings, "least_norm", least_norm_representation, rep)
        sols = _timed(timings, "enumeration", enumerate_least_norm, rep, prob, gamma)
        return serialize_rep(rep, sols, gamma=gamma, task=cfg.task, timings=timings)
    if count_real_roots(rep.w) == 0:
        return serialize_rep(rep, [], gamma=gamma, task=cfg.task, timings=timings)
    srep = _timed(timings, "sparse", sparse_representation, rep)
    _, sols = _timed(timings, "enumeration", enumerate_sparse, srep, prob, gamma)
    return serialize_rep(srep, sols, gamma=gamma, task=cfg.task, timings=timings)


def _check_d0_task(cfg: RunConfig) -> str:
    prob = _load(cfg)
    ok, witness = classify_d0(prob)
    doc = {"status": "D0" if ok else "not D0", "d0": ok}
    if witness is not None:
        doc["witness"] = prob.ring.names[witness]
    print("D0" if ok else f"not D0 (witness: {prob.ring.names[witness]})", file=sys.stderr)
    return json.dumps(doc, indent=2) + "\n"


def _copositive_task(cfg: RunConfig) -> str:
    prob = _load(cfg)
    gamma = _gamma(cfg)
    timings: dict = {}
    fixed = None
    if cfg.perturbation:
        try:
            fixed = [to_rational(x.strip()) for x in cfg.perturbation.split(",")]
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad perturbation: {exc}", 0) from None
    a, rep = _timed(
        timings, "representation", copositive_solve, prob,
        None if fixed else cfg.eps, cfg.seed, _strategy(cfg), perturbation=fixed, method=cfg.method,
    )
    sols = _timed(timings, "enumeration", enumerate_solutions, rep, perturb(prob, a), gamma)
    return serialize_rep(
        rep, sols, gamma=gamma, task=cfg.task, timings=timings,
        extra={"perturbation": [rational_str(x) for x in a]},
    )


def _bench_task(cfg: RunConfig) -> str:
    if not cfg.family or cfg.n is None:
        raise ParseError("bench needs --family and --n", 0)
    prob = generate_benchmark(cfg.family, cfg.n, cfg.d)
    cap = prob.bezout_cap()
    if cap > cfg.ceiling and not cfg.force:
        raise ParseError(f"2^n (d+1)^n = {cap} exceeds the ceiling {cfg.ceiling}; pass --force", 0)
    gamma = _gamma(cfg)
    timings: dict = {}
    rep = _timed(timings, "representation", univariate_representation, prob, _strategy(cfg), cfg.method)
    sols = _timed(timings, "enumeration", enumerate_solutions, rep, prob, gamma)
    rep = _timed(timings, "least_norm", least_norm_representation, rep)
    ln = _timed(timings, "least_norm", enumerate_least_norm, rep, prob, gamma)
    srep = _timed(timings, "sparse", sparse_representation, rep)
    k, sp = _timed(timings, "sparse", enumerate_sparse, srep, prob, gamma)
    row = {
        "family": cfg.family, "n": cfg.n, "d": cfg.d, "deg_w": rep.w.degree(),
        "n_sol": len(sols), "n_sol_ln": len(ln), "n_sol_sp": len(sp), "k": k,
    }
    print(
        f"{cfg.family} n={cfg.n} d={cfg.d}: deg w={row['deg_w']} #Sol={row['n_sol']} "
        f"#Sol_ln={row['n_sol_ln']} #Sol_sp={row['n_sol_sp']}",
        file=sys.stderr,
    )
    return serialize_rep(srep, sols, gamma=gamma, task=cfg.task, timings=timings, extra={"row": row})


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one task; returns ``(exit code, output document or message)``."""
    try:
        if cfg.task == "check-d0":
            return EXIT_OK, _check_d0_task(cfg)
        if cfg.task == "copositive":
            return EXIT_OK, _copositive_task(cfg)
        if cfg.task == "bench":
            return EXIT_OK, _bench_task(cfg)
        return EXIT_OK, _solve_task(cfg)
    except NotD0Error as exc:
        return EXIT_NOT_D0, _error_doc(str(exc), witness=exc.witness)
    except CertificationError as exc:
        return EXIT_CERT, _error_doc(str(exc))
    except ShapeSearchExhausted as exc:
        return EXIT_SHAPE, _error_doc(str(exc))
    except (PCPError, OSError, ValueError) as exc:
        return EXIT_INPUT, _error_doc(str(exc))


def _error_doc(message: str, **extra) -> str:
    doc = {"status": "error", "message": message}
    doc.update({k: v for k, v in extra.items() if v is not None})
    return json.dumps(doc, indent=2) + "\n"


def main(argv=None) -> int:
    cfg = config_from_args(argv)
    logging.basicConfig(level=logging.DEBUG if cfg.verbose else logging.WARNING, format="%(message)s")
    code, text = run(cfg)
    if code != EXIT_OK:
        print(text.strip(), file=sys.stderr)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
