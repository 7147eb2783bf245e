"""Command-line front end.

Every command writes a one-line ``#`` schema header and then plain-text rows;
``--json`` wraps the same content in one JSON document.  Bit strings are
printed with qubit (or edge) 0 first.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import bits
from .backends import BACKENDS, NoisePlan, OracleError, build_statevector_oracle, wrap_noisy_oracle
from .budget import allocate_error_budget, circuit_xi
from .circuit import CircuitError, load_circuit
from .groundstate.hamiltonian import HamiltonianError, exact_ground_state, load_hamiltonian, sensitivity
from .groundstate.magic import MagicRatioError, MagicRatioOracle, load_magic
from .groundstate.mcmc import ChainConfig, ChainError, ExactGroundStateOracle, diag_min_start, gap_bound_check, run_chain, run_chains
from .samplers import SamplerError, gate_by_gate_sample, qubit_by_qubit_sample, reference_distribution
from .surface.graph import GraphError, load_graph
from .surface.mbqc import MBQCError, SurfaceCodeInstance, load_schedule, mbqc_sample, uniform_schedule

SCHEMA = "ampsample/1"
GUARDS = {"statevector": 20, "pathsum": 24, "stabdecomp": 24}
GROUND_DENSE_QUBITS = 12
GAP_CHECK_QUBITS = 10
CHAIN_BLOCK = 1024

ERRORS = (CircuitError, OracleError, SamplerError, HamiltonianError, MagicRatioError, ChainError,
          GraphError, MBQCError, ValueError, OSError)


class CLIError(RuntimeError):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("AMPSAMPLE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CLIError(f"AMPSAMPLE_SEED must be an integer, got {env!r}") from None


def _warn(msg: str) -> None:
    print(f"ampsample: warning: {msg}", file=sys.stderr)


class Report:
    """Collects header fields, rows and diagnostics, then renders them."""

    def __init__(self, command: str, **header):
        self.command = command
        self.header = header
        self.columns: list[str] = []
        self.rows: list[list] = []
        self.notes: dict = {}

    def render(self, as_json: bool) -> str:
        if as_json:
            doc = {"schema": SCHEMA, "command": self.command, "header": self.header,
                   "columns": self.columns, "rows": self.rows, "diagnostics": self.notes}
            return json.dumps(doc, indent=1, default=_jsonable) + "\n"
        head = " ".join(f"{k}={v}" for k, v in self.header.items())
        lines = [f"# {SCHEMA} {self.command} {head}".rstrip()]
        if self.columns:
            lines.append("# " + " ".join(self.columns))
        lines += [" ".join(str(v) for v in row) for row in self.rows]
        for k, v in self.notes.items():
            if isinstance(v, list):
                lines += [f"# {k} {item}" for item in v]
            else:
                lines.append(f"# {k} {v}")
        return "\n".join(lines) + "\n"


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _emit(rep: Report, args) -> None:
    text = rep.render(args.json)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _guard(n: int, limit: int, what: str, force: bool) -> None:
    if n > limit:
        if not force:
            raise CLIError(f"{what} has {n} qubits, above the guard of {limit}; pass --force to override")
        _warn(f"{what} has {n} qubits, above the guard of {limit}; continuing because of --force")


def _parallel(fn, items, threads: int):
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# commands


def cmd_sample_circuit(args) -> int:
    c = load_circuit(args.circuit)
    _guard(c.n, GUARDS[args.backend], f"circuit {args.circuit}", args.force)
    if args.backend == "statevector":
        oracle = build_statevector_oracle(c, max_qubits=64 if args.force else GUARDS["statevector"])
    else:
        oracle = BACKENDS[args.backend](c)
    plan = None
    if args.noise is not None:
        plan = NoisePlan.load(args.noise, c.m)
    elif args.eps is not None:
        plan = NoisePlan.uniform(c.m, args.eps, seed=_seed(args))
    if plan is not None:
        oracle = wrap_noisy_oracle(oracle, plan)
    if args.algorithm == "qubit" and not oracle.supports_marginals:
        raise CLIError(f"marginals unsupported by the {args.backend} backend; use --algorithm gate")
    seed = _seed(args)
    children = np.random.SeedSequence(seed).spawn(args.shots)
    oracles = [oracle] + [oracle.clone() for _ in range(max(args.threads, 1) - 1)]

    def shot(i):
        o = oracles[i % len(oracles)]
        rng = np.random.default_rng(children[i])
        if args.algorithm == "qubit":
            return qubit_by_qubit_sample(c, o, rng), None
        tr = gate_by_gate_sample(c, o, rng)
        return tr.output, tr

    results = _parallel(shot, range(args.shots), args.threads)
    rep = Report("sample-circuit", n=c.n, m=c.m, backend=args.backend, algorithm=args.algorithm,
                 shots=args.shots, seed=seed, noise="none" if plan is None else f"16sum={plan.l1_error_bound():.6g}")
    rep.columns = ["bits"]
    rep.rows = [[bits.to_str(x, c.n)] for x, _ in results]
    if args.algorithm == "gate":
        traces = [tr for _, tr in results]
        evals = [tr.evaluations for tr in traces]
        actions = {}
        for tr in traces:
            for a in tr.actions:
                actions[a] = actions.get(a, 0) + 1
        rep.notes["evaluations_total"] = int(sum(evals))
        rep.notes["evaluations_max_per_shot"] = int(max(evals, default=0))
        rep.notes["evaluation_bound_per_shot"] = c.m * (1 << c.max_width)
        rep.notes["actions"] = " ".join(f"{k}={v}" for k, v in sorted(actions.items()))
        if args.trace and traces:
            rep.notes["trace"] = traces[0].report(c.n).splitlines()
    else:
        rep.notes["marginal_evaluations_per_shot"] = 2 * c.n
    _emit(rep, args)
    return 0


def cmd_sample_ground(args) -> int:
    seed = _seed(args)
    if args.magic:
        hm = load_magic(args.hamiltonian)
        h = hm.to_sparse()
        oracle = MagicRatioOracle(hm)
        source = "magic-ratio"
    else:
        h = load_hamiltonian(args.hamiltonian)
        oracle = ExactGroundStateOracle.from_hamiltonian(h)
        source = "eigensolver"
    _guard(h.n, GROUND_DENSE_QUBITS, f"Hamiltonian {args.hamiltonian}", args.force)
    k = h.k if args.k is None else args.k
    x_in = diag_min_start(h, oracle) if args.start is None else bits.from_str(args.start)
    cfg = ChainConfig(h.n, k, x_in=x_in, steps=args.steps, seed=seed, eps=args.tv)
    children = np.random.SeedSequence(seed).spawn((args.chains + CHAIN_BLOCK - 1) // CHAIN_BLOCK)
    sizes = [min(CHAIN_BLOCK, args.chains - i * CHAIN_BLOCK) for i in range(len(children))]
    pi = oracle.pi() if args.magic else oracle.pi

    def block(i):
        rng = np.random.default_rng(children[i])
        if h.n <= GROUND_DENSE_QUBITS:
            return run_chains(pi, cfg, sizes[i], rng)
        return np.array([run_chain(oracle, cfg, rng).final for _ in range(sizes[i])])

    finals = np.concatenate(_parallel(block, range(len(sizes)), args.threads)) if sizes else np.array([], dtype=int)
    rep = Report("sample-ground", n=h.n, k=k, chains=args.chains, steps=args.steps, seed=seed,
                 oracle=source, start=bits.to_str(x_in, h.n))
    rep.columns = ["bits"]
    rep.rows = [[bits.to_str(int(x), h.n)] for x in finals]
    gs = exact_ground_state(h)
    rep.notes["gap"] = f"{gs.gap:.12g}"
    rep.notes["s"] = f"{sensitivity(h, gs.psi):.12g}"
    rep.notes["N"] = cfg.N
    if h.n <= GAP_CHECK_QUBITS and cfg.k >= h.k:
        g = gap_bound_check(h, cfg)
        rep.notes["lambda1"] = f"{g.lambda1:.12g}"
        rep.notes["one_minus_lambda1"] = f"{g.lhs:.12g}"
        rep.notes["gap_over_2Ns"] = f"{g.rhs:.12g}"
        rep.notes["gap_bound_holds"] = g.holds
        rep.notes["mixing_steps_for_tv"] = f"{g.mixing_time:.6g}"
        rep.notes["runtime_estimate"] = f"{g.runtime_estimate:.6g}"
    if args.chains:
        emp = np.bincount(finals, minlength=1 << h.n) / len(finals)
        rep.notes["empirical_tv"] = f"{0.5 * np.abs(emp - gs.pi).sum():.6g}"
    _emit(rep, args)
    return 0


def cmd_sample_mbqc(args) -> int:
    g = load_graph(args.graph)
    sched = load_schedule(args.schedule, g.n) if args.schedule else uniform_schedule(g.n)
    inst = SurfaceCodeInstance(g, sched)
    seed = _seed(args)
    children = np.random.SeedSequence(seed).spawn(args.shots)
    records = _parallel(lambda i: mbqc_sample(inst, np.random.default_rng(children[i])), range(args.shots), args.threads)
    rep = Report("sample-mbqc", edges=g.n, cycle_dim=g.cycle_dim, shots=args.shots, seed=seed)
    rep.columns = ["record"]
    rep.rows = [[bits.to_str(x, g.n)] for x in records]
    _emit(rep, args)
    return 0


def cmd_budget(args) -> int:
    if args.xi:
        xi = [float(v) for v in args.xi.split(",")]
        what = "xi-list"
    elif args.circuit:
        xi = circuit_xi(load_circuit(args.circuit))
        what = args.circuit
    else:
        raise CLIError("budget needs a circuit file or --xi")
    b = allocate_error_budget(xi, args.delta)
    rep = Report("budget", gates=len(xi), delta=args.delta, source=what)
    rep.columns = ["t", "xi", "eta", "eps", "terms"]
    for t in range(1, len(xi) + 1):
        if t < len(xi):
            rep.rows.append([t, f"{b.xi[t - 1]:.12g}", f"{b.eta[t - 1]:.12g}", f"{b.eps[t - 1]:.12g}",
                             f"{b.rank(t):.6g}"])
        else:
            rep.rows.append([t, f"{b.xi[t - 1]:.12g}", f"{b.eta[t - 1]:.12g}", "-", "-"])
    rep.notes["eps_sum"] = f"{b.eps.sum():.15g}"
    rep.notes["cost"] = f"{b.cost:.12g}"
    rep.notes["cost_closed_form"] = f"{b.cost_closed_form:.12g}"
    rep.notes["cost_last_term_estimate"] = f"{b.cost_last_term:.12g}"
    _emit(rep, args)
    return 0


def cmd_distribution(args) -> int:
    c = load_circuit(args.circuit)
    d = reference_distribution(c)
    rep = Report("distribution", n=c.n, m=c.m, tol=args.tol)
    rep.columns = ["bits", "probability"]
    rep.rows = [[b, f"{p:.15g}"] for b, p in d.as_dict(args.tol).items()]
    _emit(rep, args)
    return 0


def cmd_verify(args) -> int:
    from . import verify
    from .surface import gadgets

    names = args.suite or list(verify.SUITES)
    unknown = [s for s in names if s not in verify.SUITES]
    if unknown:
        raise CLIError(f"unknown suite(s) {unknown}; choose from {sorted(verify.SUITES)}")
    rep = Report("verify", suites=",".join(names), quick=args.quick)
    rep.columns = ["suite", "result", "seconds", "summary"]
    quick = {"sampler": {"count": 30}, "backends": {"count": 30}, "robustness": {"pairs": 10},
             "calls": {"count": 20}, "mcmc": {"count": 20}, "sensitivity": {"count": 5},
             "tfim": {"chains": 2000, "steps": 2000}, "surface": {"draws": 20_000, "schedules": 2}}
    results = []
    for name in names:
        kw = dict(quick.get(name, {})) if args.quick else {}
        if name == "robustness" and args.eps is not None:
            kw["eps"] = args.eps
        if name == "gadgets" and args.perturb_gadget is not None:
            kw["theta_a"] = gadgets.THETA_A * args.perturb_gadget
        r = verify.run_suite(name, **kw)
        results.append(r)
        rep.rows.append([r.name, "PASS" if r.passed else "FAIL", f"{r.seconds:.2f}", r.summary])
        if name == "robustness":
            rep.notes["robustness_l1_vs_bound"] = [f"{l1:.6g} {b:.6g}" for l1, b in r.metrics["l1_and_bound"]]
    rep.notes["all_passed"] = all(r.passed for r in results)
    _emit(rep, args)
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (falls back to $AMPSAMPLE_SEED, then 0)")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--threads", type=int, default=1, help="worker threads over shots/chains")
    common.add_argument("--force", action="store_true", help="override size guards")

    p = argparse.ArgumentParser(prog="ampsample", description="Sampling from amplitude oracles.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample-circuit", parents=[common], help="sample measurement outcomes of a circuit")
    s.add_argument("circuit")
    s.add_argument("--backend", choices=sorted(BACKENDS), default="statevector")
    s.add_argument("--algorithm", choices=["gate", "qubit"], default="gate")
    s.add_argument("--shots", type=int, default=1)
    noise = s.add_mutually_exclusive_group()
    noise.add_argument("--noise", help="perturbation plan file (lines 't eps', optional 'seed S')")
    noise.add_argument("--eps", type=float, help="uniform perturbation magnitude per prefix")
    s.add_argument("--trace", action="store_true", help="include the per-gate trace of the first shot")
    s.set_defaults(func=cmd_sample_circuit)

    s = sub.add_parser("sample-ground", parents=[common], help="Metropolis sampling of a ground state")
    s.add_argument("hamiltonian")
    s.add_argument("--magic", action="store_true", help="input is a projector-family file")
    s.add_argument("--chains", type=int, default=1000)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--k", type=int, default=None, help="proposal radius (default: the coupling range)")
    s.add_argument("--start", help="start string, qubit 0 first (default: lowest diagonal entry)")
    s.add_argument("--tv", type=float, default=0.01, help="target TV for the mixing-time estimate")
    s.set_defaults(func=cmd_sample_ground)

    s = sub.add_parser("sample-mbqc", parents=[common], help="measurement records on a surface-code state")
    s.add_argument("graph")
    s.add_argument("--schedule", help="per-edge unitaries (circuit grammar); default identity")
    s.add_argument("--shots", type=int, default=1)
    s.set_defaults(func=cmd_sample_mbqc)

    s = sub.add_parser("budget", parents=[common], help="per-prefix error allocation and cost")
    s.add_argument("circuit", nargs="?")
    s.add_argument("--xi", help="comma-separated per-gate values instead of a circuit")
    s.add_argument("--delta", type=float, default=0.1)
    s.set_defaults(func=cmd_budget)

    s = sub.add_parser("distribution", parents=[common], help="exact output distribution of a circuit")
    s.add_argument("circuit")
    s.add_argument("--tol", type=float, default=1e-12, help="omit probabilities at or below this")
    s.set_defaults(func=cmd_distribution)

    s = sub.add_parser("verify", parents=[common], help="run self-check suites")
    s.add_argument("--suite", action="append", help="suite name (repeatable); default all")
    s.add_argument("--eps", type=float, help="uniform magnitude for the robustness suite")
    s.add_argument("--quick", action="store_true", help="smaller instance counts")
    s.add_argument("--perturb-gadget", type=float, help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("shots", "chains", "steps"):
        if getattr(args, name, 0) < 0:
            print(f"ampsample: error: --{name} must be nonnegative", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (CLIError, *ERRORS) as exc:
        print(f"ampsample: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
