import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional, Tuple

from pytorch_lightning import seed_everything

from uniflab.util import UniflabError, resolve_seed, exists
from uniflab.modules.term.term import print_term
from uniflab.modules.term.parser import parse_term
from uniflab.modules.term.problem import THEORIES, CUSTOM, theory_signature
from uniflab.modules.rewrite.theories import make_theory
from uniflab.modules.rewrite.engine import normalize
from uniflab.modules.oracles.brute import sat_assignment, nae_assignment, coloring
from uniflab.models.dispatch import BACKENDS, solve_problem
from uniflab.models.reductions import sat3_to_r1_disunif, coloring_to_acun_asym, nae3sat_to_r4_asym
from uniflab.loader import (
    instance_paths, read_problem, format_problem, write_problem, read_dimacs, read_edge_list,
)
from uniflab.crosscheck import SUITES, DEFAULT_SIZE, run_crosscheck
from uniflab.callbacks import SuiteMetricsLogger, ReplayWriter

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2
KINDS = ("3sat", "3col", "nae3sat")


@dataclass
class RunConfig:
    command: str
    inputs: Tuple[str, ...] = ()
    theory: Optional[str] = None
    backend: str = "auto"
    depth: int = 1
    max_guesses: int = 1 << 16
    seed: int = 42
    json: bool = False
    trace: bool = False
    kind: Optional[str] = None
    output: Optional[str] = None
    term: Optional[str] = None
    consts: Tuple[str, ...] = ()
    rules: Tuple[str, ...] = ()
    suites: Tuple[str, ...] = ()
    size: int = DEFAULT_SIZE
    inject_bug: bool = False
    replay_dir: Optional[str] = None
    log_dir: str = "results/"
    wandb: bool = False
    every_n_instances: int = 10
    progress: bool = True

    @classmethod
    def from_args(cls, args):
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in vars(args).items() if k in known and v is not None}
        for key in ("inputs", "consts", "rules", "suites"):
            if key in values:
                values[key] = tuple(values[key])
        values["seed"] = resolve_seed(getattr(args, "seed", None))
        cfg = cls(**values)
        if cfg.depth < 0 or cfg.max_guesses <= 0 or cfg.size < 0:
            raise UniflabError("depth, size and guess caps must be non-negative and caps positive")
        return cfg


def build_parser():
    parser = argparse.ArgumentParser(description='Equational unification workbench')
    sub = parser.add_subparsers(dest='command', required=True)

    common = argparse.ArgumentParser(add_help=False)
    #misc
    common.add_argument('--seed', type=int, default=None,
                    help='random seed (falls back to $UNIFLAB_SEED, then 42)')
    common.add_argument('--log_level', '--log-level', type=str, default='WARNING',
                    help='python logging level')
    common.add_argument('--json', action='store_true', default=False,
                    help='emit one JSON object per result')

    solve = sub.add_parser('solve', parents=[common], help='decide a problem file')
    #path configuration
    solve.add_argument('inputs', nargs='+',
                    help='problem file(s) or directories of problem files')
    #solver configuration
    solve.add_argument('--theory', type=str, choices=THEORIES,
                    help='override the theory line of the problem file')
    solve.add_argument('--backend', type=str, default='auto', choices=BACKENDS,
                    help='decision procedure to run')
    solve.add_argument('--depth', type=int, default=1,
                    help='term depth of the bounded searches')
    solve.add_argument('--max_guesses', '--max-guesses', dest='max_guesses', type=int, default=1 << 16,
                    help='cap on zero/non-zero guesses for multi-constant ACUNh problems')
    solve.add_argument('--trace', action='store_true', default=False,
                    help='include the inference trace in the report')

    reduce = sub.add_parser('reduce', parents=[common], help='build a unification problem from an NP instance')
    #path configuration
    reduce.add_argument('inputs', nargs=1,
                    help='DIMACS CNF file or edge-list graph file')
    reduce.add_argument('--output', '-o', type=str,
                    help='path to write the problem file (default: stdout)')
    reduce.add_argument('--kind', type=str, required=True, choices=KINDS)

    oracle = sub.add_parser('oracle', parents=[common], help='brute-force verdict on an NP instance')
    oracle.add_argument('inputs', nargs=1,
                    help='DIMACS CNF file or edge-list graph file')
    oracle.add_argument('--kind', type=str, required=True, choices=KINDS)

    norm = sub.add_parser('normalize', parents=[common], help='print the normal form of a term')
    norm.add_argument('term', type=str)
    norm.add_argument('--theory', type=str, required=True, choices=THEORIES)
    norm.add_argument('--consts', nargs='*', default=None,
                    help='constants of a custom theory')
    norm.add_argument('--rule', dest='rules', action='append', default=[],
                    help='custom rewrite rule "lhs -> rhs" (repeatable)')

    check = sub.add_parser('crosscheck', parents=[common], help='run the solver/oracle agreement suites')
    #crosscheck configuration
    check.add_argument('--suites', nargs='*', default=None, choices=list(SUITES),
                    help='subset of suites to run (default: all)')
    check.add_argument('--size', type=int, default=DEFAULT_SIZE,
                    help='instances per randomized suite; 0 passes vacuously')
    check.add_argument('--inject_bug', '--inject-bug', dest='inject_bug', action='store_true', default=False,
                    help='skip one Gaussian elimination step to test the harness')
    check.add_argument('--replay_dir', '--replay-dir', dest='replay_dir', type=str,
                    help='directory receiving mismatching instances as problem files')
    check.add_argument('--log_dir', '--log-dir', dest='log_dir', type=str, default='results/',
                    help='path to save metric logs')
    check.add_argument('--wandb', action='store_true', default=False, help='use wandb for logging')
    check.add_argument('--every_n_instances', type=int, default=10,
                    help='log running metrics every n instances')
    check.add_argument('--no_progress', dest='progress', action='store_false', default=True,
                    help='hide the progress bars')
    return parser


# commands

def _report(cfg, decision, elapsed_ms, source=None):
    if cfg.json:
        out = decision.to_json(include_trace=cfg.trace)
        out["elapsed_ms"] = round(elapsed_ms, 3)
        if exists(source):
            out["file"] = str(source)
        print(json.dumps(out, sort_keys=True))
        return
    head = "{}: ".format(source) if exists(source) else ""
    if decision.solvable:
        print("{}solvable ({}{})".format(head, decision.backend, ", bounded" if decision.bounded else ""))
        for v in sorted(decision.substitution):
            print("  {} -> {}".format(v, print_term(decision.substitution[v])))
    else:
        rule = " [{}]".format(decision.fail_rule) if decision.fail_rule else ""
        print("{}unsolvable{} ({}): {}".format(head, rule, decision.backend, decision.reason))
    if cfg.trace:
        for step in decision.trace:
            print("  | {}".format(step))


def cmd_solve(cfg: RunConfig) -> int:
    status = EXIT_OK
    paths = [p for source in cfg.inputs for p in instance_paths(source)]
    for path in paths:
        problem = read_problem(path)
        if cfg.theory:
            problem = replace(problem, theory=cfg.theory)
        decision, elapsed_ms = solve_problem(problem, cfg.backend, depth=cfg.depth,
                                             max_guesses=cfg.max_guesses, trace=cfg.trace)
        _report(cfg, decision, elapsed_ms, path if len(paths) > 1 else None)
        if not decision.solvable:
            status = EXIT_NEGATIVE
    return status


def _read_instance(cfg):
    source = Path(cfg.inputs[0])
    if cfg.kind == "3col":
        return read_edge_list(source)
    return read_dimacs(source)


def cmd_reduce(cfg: RunConfig) -> int:
    instance = _read_instance(cfg)
    build = {"3sat": sat3_to_r1_disunif, "3col": coloring_to_acun_asym, "nae3sat": nae3sat_to_r4_asym}
    problem = build[cfg.kind](instance)
    if cfg.output:
        write_problem(problem, cfg.output)
        print("Wrote {} items over {} variables to {}".format(
            len(problem.items), len(problem.variables), cfg.output))
    else:
        sys.stdout.write(format_problem(problem))
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    instance = _read_instance(cfg)
    witness = {"3sat": sat_assignment, "3col": coloring, "nae3sat": nae_assignment}[cfg.kind](instance)
    if cfg.json:
        print(json.dumps({"kind": cfg.kind, "satisfiable": witness is not None,
                          "witness": {str(k): v for k, v in (witness or {}).items()}}, sort_keys=True))
    elif witness is None:
        print("{}: no witness".format(cfg.kind))
    else:
        print("{}: {}".format(cfg.kind, " ".join("{}={}".format(k, v) for k, v in sorted(witness.items()))))
    return EXIT_OK if witness is not None else EXIT_NEGATIVE


def cmd_normalize(cfg: RunConfig) -> int:
    sig = theory_signature(cfg.theory, cfg.consts or None)
    rules = []
    if cfg.theory == CUSTOM:
        for text in cfg.rules:
            lhs, sep, rhs = text.partition("->")
            if not sep:
                raise UniflabError("rule '{}' needs '->'".format(text))
            rules.append((parse_term(lhs.strip(), sig), parse_term(rhs.strip(), sig)))
    theory = make_theory(cfg.theory, rules)
    t = normalize(parse_term(cfg.term, sig), theory)
    if cfg.json:
        print(json.dumps({"theory": cfg.theory, "normal_form": print_term(t)}))
    else:
        print(print_term(t))
    return EXIT_OK


def _metric_logger(cfg):
    if cfg.wandb:
        from pytorch_lightning.loggers import WandbLogger
        return WandbLogger(project='uniflab', save_dir=cfg.log_dir)
    from pytorch_lightning.loggers import CSVLogger
    return CSVLogger(save_dir=cfg.log_dir, name='crosscheck')


def cmd_crosscheck(cfg: RunConfig) -> int:
    callbacks = [SuiteMetricsLogger(_metric_logger(cfg), cfg.every_n_instances, cfg.wandb),
                 ReplayWriter(cfg.replay_dir)]
    print("Running crosscheck with seed {} and size {}".format(cfg.seed, cfg.size))
    rows = run_crosscheck(cfg.suites or None, cfg.size, cfg.seed, callbacks, cfg.inject_bug, cfg.progress)
    failed = sum(r["mismatches"] for r in rows)
    if cfg.json:
        for r in rows:
            print(json.dumps({k: r[k] for k in ("suite", "checked", "mismatches")}, sort_keys=True))
    else:
        print("{:<22} {:>8} {:>10} {:>12}".format("suite", "checked", "mismatches", "elapsed_ms"))
        for r in rows:
            print("{:<22} {:>8} {:>10} {:>12.1f}".format(r["suite"], r["checked"], r["mismatches"], r["elapsed_ms"]))
            for d in r["details"]:
                print("    {}".format(d))
    return EXIT_NEGATIVE if failed else EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "reduce": cmd_reduce,
    "oracle": cmd_oracle,
    "normalize": cmd_normalize,
    "crosscheck": cmd_crosscheck,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.from_args(args)
        #random seed fix
        seed_everything(cfg.seed)
        logger.info("seed %d", cfg.seed)
        return COMMANDS[cfg.command](cfg)
    except UniflabError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_ERROR
