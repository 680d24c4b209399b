"""Command-line interface: ``bdcbounds {bounds,fibdc,simulate,matrix,verify}``.

Options may also come from a ``key=value`` file given with ``--config``;
command-line flags override the file. Exit codes: 0 success, 1 failed check,
2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from bdcbounds import baa, bounds, curves, markov
from bdcbounds.bitseq import SEED_MAX, deletion_count_prob
from bdcbounds.exceptions import DomainError, EstimationError
from bdcbounds.fibdc import MAX_FI_L, MAX_FIFO_L, build_fi_matrix, build_fifo_matrix
from bdcbounds.verify import Verifier, format_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
DEFAULT_BOUNDS = "c1,c2,c3,c4"
Z_LIMIT = 4.0


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    d_min: float = 0.0
    d_max: float = 1.0
    d_step: float = 0.01
    L_max: int = 6
    tol: float = baa.DEFAULT_TOL
    seed: int = 0
    output_path: str | None = None
    selected_bounds: tuple[str, ...] = tuple(DEFAULT_BOUNDS.split(","))
    gamma: float | None = None
    lemma2_steps: int = 1
    jobs: int = 1

    def __post_init__(self):
        if not 0.0 <= self.d_min < self.d_max <= 1.0:
            raise UsageError(f"need 0 <= d-min < d-max <= 1, got {self.d_min}, {self.d_max}")
        if not self.d_step > 0:
            raise UsageError("d-step must be positive")
        if not 1 <= self.L_max <= MAX_FIFO_L:
            raise UsageError(f"L-max must lie in [1, {MAX_FIFO_L}]")
        if not self.tol > 0:
            raise UsageError("tol must be positive")
        if not 0 <= self.seed <= SEED_MAX:
            raise UsageError("seed must be a 64-bit unsigned integer")
        unknown = [b for b in self.selected_bounds if b not in curves.CURVES]
        if unknown:
            raise UsageError(f"unknown bound identifier(s): {', '.join(unknown)}; "
                             f"choose from {', '.join(curves.CURVES)}")
        if "theorem2" in self.selected_bounds and self.gamma is None:
            raise UsageError("bound 'theorem2' needs --gamma")
        if self.gamma is not None and not 0.0 < self.gamma <= 1.0:
            raise UsageError("gamma must lie in (0, 1]")
        if self.jobs < 1 or self.lemma2_steps < 0:
            raise UsageError("jobs must be >= 1 and lemma2-steps >= 0")


def read_config_file(path: str) -> dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _prob(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file with defaults for these options")
    common.add_argument("--out", dest="output_path", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="bdcbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="export bound curves as CSV")
    p.add_argument("--bounds", dest="selected_bounds", default=DEFAULT_BOUNDS,
                   help=f"comma-separated subset of: {', '.join(curves.CURVES)}")
    p.add_argument("--d-min", type=float, default=0.0)
    p.add_argument("--d-max", type=float, default=1.0)
    p.add_argument("--d-step", type=float, default=0.01)
    p.add_argument("--gamma", type=float, help="repeat probability for the theorem2 curve")
    p.add_argument("--L-max", dest="L_max", type=int, default=6)
    p.add_argument("--lemma2-steps", type=int, default=1)
    p.add_argument("--tol", type=float, default=baa.DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("fibdc", parents=[common], help="f-values, C_L and T_L for one block length")
    p.add_argument("--L", dest="L", type=int, required=True)
    p.add_argument("--d", type=_prob, required=True)
    p.add_argument("--tol", type=float, default=baa.DEFAULT_TOL)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo check of the output process")
    p.add_argument("--gamma", type=_prob, required=True)
    p.add_argument("--d", type=_prob, required=True)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("matrix", parents=[common], help="export a transition matrix as CSV")
    p.add_argument("--L", dest="L", type=int, required=True)
    p.add_argument("--R", dest="R", type=int, help="fixed output length (omit for all lengths)")
    p.add_argument("--d", type=_prob, help="deletion probability (all-lengths matrix only)")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--L-max", dest="L_max", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    return parser


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        values = read_config_file(known.config)
        command = next((a for a in argv if not a.startswith("-")), None)
        subparsers = parser._subparsers._group_actions[0].choices
        if command in subparsers:
            sp = subparsers[command]
            # keys are option names without the leading dashes, e.g. d-step or L-max
            dests = {opt.lstrip("-").replace("-", "_"): a.dest
                     for a in sp._actions for opt in a.option_strings if opt.startswith("--")}
            dests.pop("config", None)
            dests.pop("help", None)
            bad = sorted(set(values) - set(dests))
            if bad:
                raise UsageError(f"{known.config}: unknown key(s) {', '.join(bad)}")
            given = {dests[k]: v for k, v in values.items()}
            sp.set_defaults(**given)
            for action in sp._actions:
                if action.dest in given:
                    action.required = False
    return parser.parse_args(argv)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def cmd_bounds(args) -> int:
    cfg = RunConfig(
        d_min=args.d_min, d_max=args.d_max, d_step=args.d_step, L_max=args.L_max,
        tol=args.tol, seed=args.seed, output_path=args.output_path,
        selected_bounds=tuple(b.strip() for b in args.selected_bounds.split(",") if b.strip()),
        gamma=args.gamma, lemma2_steps=args.lemma2_steps, jobs=args.jobs,
    )
    grid = curves.d_grid(cfg.d_min, cfg.d_max, cfg.d_step)
    result = curves.compute_curves(cfg.selected_bounds, grid, gamma=cfg.gamma, L_max=cfg.L_max,
                                   tol=cfg.tol, lemma2_steps=cfg.lemma2_steps, jobs=cfg.jobs)
    provenance = {"d_min": cfg.d_min, "d_max": cfg.d_max, "d_step": cfg.d_step}
    if {"tl", "lemma2"} & set(cfg.selected_bounds):
        provenance.update(L_max=cfg.L_max, tol=cfg.tol)
    if "lemma2" in cfg.selected_bounds:
        provenance["lemma2_steps"] = cfg.lemma2_steps
    if cfg.gamma is not None:
        provenance["gamma"] = cfg.gamma
    _emit(curves.curves_to_csv(result, provenance), cfg.output_path)
    return EXIT_OK


def fibdc_report(L: int, d: float, tol: float) -> tuple[str, float]:
    """Text report for one block length; also returns the lemma-1 gap."""
    lines = [f"L: {L}", f"d: {d:.12g}", f"tol: {tol:.3g}"]
    fvals = {}
    for R in range(L + 1):
        res = baa.f_result(L, R, tol)
        fvals[(L, R)] = res.capacity
        lines.append(f"f({L},{R}): {res.capacity:.12g}  iterations={res.iterations} "
                     f"gap_bound={res.gap_bound:.3g} converged={res.converged}")
    cl = baa.blahut_arimoto(build_fi_matrix(L, d), tol=tol)
    rhs = sum(deletion_count_prob(L, i, d) * fvals[(L, L - i)] for i in range(L + 1))
    gap = rhs - cl.capacity
    lines += [
        f"C_L: {cl.capacity:.12g}  iterations={cl.iterations} gap_bound={cl.gap_bound:.3g} "
        f"converged={cl.converged}",
        f"C_L/L: {cl.capacity / L:.12g}",
        f"T_L: {bounds.t_L(L, d, fvals):.12g}",
        f"lemma1_rhs: {rhs:.12g}",
        f"lemma1_gap: {gap:.12g}",
    ]
    return "\n".join(lines) + "\n", gap


def cmd_fibdc(args) -> int:
    if not 1 <= args.L <= MAX_FI_L:
        raise UsageError(f"--L must lie in [1, {MAX_FI_L}]")
    if not args.tol > 0:
        raise UsageError("tol must be positive")
    text, gap = fibdc_report(args.L, args.d, args.tol)
    _emit(text, args.output_path)
    return EXIT_OK if gap >= -1e-9 else EXIT_FAIL


def cmd_simulate(args) -> int:
    if not 0 <= args.seed <= SEED_MAX:
        raise UsageError("seed must be a 64-bit unsigned integer")
    try:
        est = markov.estimate_q(args.gamma, args.d, args.n, args.trials, args.seed)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    except EstimationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    q = markov.output_q(args.gamma, args.d)
    z = est.z_score(q)
    text = "\n".join([
        f"gamma: {args.gamma:.12g}",
        f"d: {args.d:.12g}",
        f"n: {args.n}",
        f"trials: {args.trials}",
        f"q_analytic: {q:.12g}",
        f"q_estimate: {est.estimate:.12g}",
        f"std_err: {est.std_err:.6g}",
        f"z_score: {z:.4f}",
    ]) + "\n"
    _emit(text, args.output_path)
    return EXIT_OK if abs(z) <= Z_LIMIT else EXIT_FAIL


def cmd_matrix(args) -> int:
    if args.R is not None:
        if not 1 <= args.L <= MAX_FIFO_L or not 0 <= args.R <= args.L:
            raise UsageError(f"need 1 <= L <= {MAX_FIFO_L} and 0 <= R <= L")
        ch = build_fifo_matrix(args.L, args.R)
    else:
        if args.d is None:
            raise UsageError("--d is required unless --R is given")
        if not 1 <= args.L <= MAX_FI_L:
            raise UsageError(f"--L must lie in [1, {MAX_FI_L}]")
        ch = build_fi_matrix(args.L, args.d)
    _emit(ch.to_csv(), args.output_path)
    return EXIT_OK


def cmd_verify(args) -> int:
    if not 2 <= args.L_max <= MAX_FI_L:
        raise UsageError(f"--L-max must lie in [2, {MAX_FI_L}]")
    results = Verifier(L_max=args.L_max, tol=args.tol, seed=args.seed).run()
    _emit(format_report(results) + "\n", args.output_path)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


COMMANDS = {
    "bounds": cmd_bounds,
    "fibdc": cmd_fibdc,
    "simulate": cmd_simulate,
    "matrix": cmd_matrix,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, DomainError) as exc:
        print(f"bdcbounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"bdcbounds: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
