"""``latticefold`` command line: enumerate, build, run, split, cost."""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .compiler import HardwareGraph, cost_report
from .encoding import build_encoding
from .hamiltonian import build_cost
from .lattice import InteractionModel, LatticeKind, ProteinInstance, enumerate_folds
from .mixers import ALL_MIXERS, MixerKind, build_mixer
from .pauli import PauliSum
from .optimizer import (
    CONSTANT,
    REDUCED,
    ExperimentConfig,
    divide_and_conquer,
    dumps_json,
    run_experiment,
    runs_to_csv,
)
from .plotting import box_plot_svg
from .simulator import FEASIBLE, UNIFORM_ALL, EvolutionConfig

MIXER_NAMES = [m.value for m in ALL_MIXERS]


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _load_model(source: str) -> InteractionModel:
    if source.lower() == "hp":
        return InteractionModel.hp()
    path = Path(source)
    if not path.is_file():
        raise CliError(f"model file not found: {source}")
    try:
        return InteractionModel.from_json(path)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"bad model file {source}: {exc}") from None


def _instance(args) -> ProteinInstance:
    return ProteinInstance(args.seq, _load_model(args.model), LatticeKind.parse(args.lattice))


def _depths(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad depth list {text!r}") from None
    if not out or any(p < 0 for p in out):
        raise argparse.ArgumentTypeError("depths must be non-negative integers")
    return out


def _evolution(text: str) -> EvolutionConfig:
    try:
        return EvolutionConfig.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_instance_flags(p: argparse.ArgumentParser):
    p.add_argument("--seq", required=True, help="residue sequence, e.g. HPPH")
    p.add_argument("--lattice", choices=["planar", "cubic"], default="planar")
    p.add_argument("--model", default="hp", help="'hp' or a JSON contact-energy file")
    p.add_argument("--out", default="out", help="output directory")


def _add_experiment_flags(p: argparse.ArgumentParser, tol_default: float):
    p.add_argument("--init", choices=[UNIFORM_ALL, FEASIBLE], default=FEASIBLE)
    p.add_argument("--cost", choices=[CONSTANT, REDUCED], default=CONSTANT)
    p.add_argument("--runs", type=_positive_int, default=100)
    p.add_argument("--shots", type=_positive_int, default=None,
                   help="readout samples per run (counts are reported)")
    p.add_argument("--objective-shots", type=_positive_int, default=None,
                   help="estimate the objective from this many samples instead of exactly")
    p.add_argument("--tol", type=float, default=tol_default)
    p.add_argument("--max-evals", type=_positive_int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--evolution", type=_evolution, default=EvolutionConfig())
    p.add_argument("--lambda-olap", type=float, default=None)


# ---------------------------------------------------------------------------
# subcommands


def cmd_enumerate(args) -> int:
    inst = _instance(args)
    try:
        folds = enumerate_folds(inst, cap=args.cap)
    except RuntimeError as exc:
        raise CliError(str(exc)) from None
    out = _out_dir(args)
    with open(out / "folds.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["turns", "energy"])
        for conf, energy in folds.folds:
            w.writerow([str(conf), repr(energy)])
    ground = {
        "sequence": inst.sequence,
        "lattice": inst.lattice.value,
        "folds": len(folds),
        "ground_energy": folds.ground_energy,
        "ground_states": [str(c) for c in folds.ground_states],
    }
    (out / "ground.json").write_text(dumps_json(ground))
    print(f"folds: {len(folds)}")
    print(f"ground energy: {folds.ground_energy:g}")
    print("ground states: " + " ".join(str(c) for c in folds.ground_states))
    return 0


def cmd_build(args) -> int:
    inst = _instance(args)
    e = build_encoding(inst.lattice, inst.n_residues)
    mixer = MixerKind.parse(args.mixer) if args.mixer else None
    skip_short = skip_long = False
    if args.cost == REDUCED:
        if mixer is None:
            raise CliError("--cost reduced needs --mixer")
        skip_short, skip_long = mixer.guards_short_range, mixer.guards_long_range
    h_c = build_cost(e, inst, args.lambda_olap, skip_short=skip_short, skip_long=skip_long)
    out = _out_dir(args)
    print(f"qubits: {e.n_qubits}")
    print(f"lambda_olap: {h_c.lambda_olap:g}")
    if args.no_pauli:
        return 0
    pauli = h_c.pauli
    (out / "cost.txt").write_text(pauli.to_text())
    hist: dict[int, int] = {}
    for s in pauli.terms:
        k = sum(c != "I" for c in s)
        hist[k] = hist.get(k, 0) + 1
    print(f"cost terms: {len(pauli)}")
    for k in sorted(hist):
        print(f"  locality {k}: {hist[k]}")
    if mixer is not None:
        h_m = build_mixer(e, mixer)
        (out / "mixer.txt").write_text(h_m.pauli.to_text())
        print(f"mixer {mixer.value} terms: {len(h_m.pauli)}")
    return 0


def _experiment_config(args, inst, mixer, p) -> ExperimentConfig:
    return ExperimentConfig(
        inst,
        mixer,
        p=p,
        init=args.init,
        cost_variant=args.cost,
        runs=args.runs,
        shots=args.shots,
        objective_shots=args.objective_shots,
        seed=args.seed,
        tol=args.tol,
        max_evals=args.max_evals,
        evolution=args.evolution,
        lambda_olap=args.lambda_olap,
    )


def cmd_run(args) -> int:
    inst = _instance(args)
    if args.mixers == "all":
        mixers = list(ALL_MIXERS)
    elif args.mixer:
        mixers = [MixerKind.parse(args.mixer)]
    else:
        raise CliError("give --mixer or --mixers all")
    results = []
    for mixer in mixers:
        for p in args.p:
            res = run_experiment(_experiment_config(args, inst, mixer, p))
            s = res.stats
            print(
                f"{mixer.value:<10} p={p} median={s.median:.4f} "
                f"q1={s.q1:.4f} q3={s.q3:.4f} min={s.min:.4f} max={s.max:.4f}"
            )
            results.append(res)
    out = _out_dir(args)
    doc = {"experiments": [r.to_json() for r in results]}
    (out / "results.json").write_text(dumps_json(doc))
    (out / "runs.csv").write_text(runs_to_csv(results))
    if len(results) > 1 or args.plot:
        labels = [f"{r.config.mixer.value} p{r.config.p}" for r in results]
        title = f"{inst.sequence} {inst.lattice.value} init={args.init} cost={args.cost}"
        (out / "boxplot.svg").write_text(box_plot_svg(labels, [r.stats for r in results], title))
    return 0


def cmd_split(args) -> int:
    inst = _instance(args)
    cfg = _experiment_config(args, inst, MixerKind.parse(args.mixer), args.p[0])
    report = divide_and_conquer(cfg)
    out = _out_dir(args)
    (out / "split.json").write_text(dumps_json(report.to_json()))
    print(f"full ground energy: {report.full_ground_energy:g}")
    for part in report.parts:
        probs = [r.ground_state_probability for r in part.experiment.runs]
        line = (
            f"turn1={part.turn1} qubits={part.n_qubits} ground_energy={part.ground_energy:g} "
            f"ground={','.join(part.ground_bitstrings)}"
        )
        if args.shots:
            counts: dict[str, int] = {}
            for r in part.experiment.runs:
                for b, c in (r.counts or {}).items():
                    counts[b] = counts.get(b, 0) + c
            hits = sum(counts.get(b, 0) for b in part.ground_bitstrings)
            line += f" shots={sum(counts.values())} ground_hits={hits}"
        else:
            line += f" ground_probability_median={sorted(probs)[len(probs) // 2]:.4f}"
        print(line)
    print(f"winner: turn1={report.best.turn1}")
    return 0


def cmd_cost(args) -> int:
    inst = _instance(args)
    e = build_encoding(inst.lattice, inst.n_residues)
    h_c = build_cost(e, inst, args.lambda_olap)
    graph = HardwareGraph.from_json(args.graph) if args.graph else None
    if graph is not None and e.n_qubits > len(graph.nodes):
        raise CliError(f"{e.n_qubits} qubits do not fit on {len(graph.nodes)} graph nodes")
    report = cost_report(h_c.pauli, graph)
    out = _out_dir(args)
    doc = {"cost": report.to_json()}
    print(f"qubits: {e.n_qubits}")
    print("cost Hamiltonian")
    sys.stdout.write(report.to_table())
    if args.mixer:
        h_m = build_mixer(e, args.mixer)
        # X/Y letters cost like Z once rotated into the Z basis
        z_form: dict[str, float] = {}
        for s, c in h_m.pauli.terms.items():
            z = s.replace("X", "Z").replace("Y", "Z")
            z_form[z] = z_form.get(z, 0.0) + abs(c)
        m_report = cost_report(PauliSum(e.n_qubits, z_form), graph)
        doc["mixer"] = {"kind": h_m.kind.value, **m_report.to_json()}
        print(f"mixer {h_m.kind.value} (support after basis change)")
        sys.stdout.write(m_report.to_table())
    (out / "cost_report.json").write_text(dumps_json(doc))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latticefold", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="exhaustive self-avoiding folds and energies")
    _add_instance_flags(p)
    p.add_argument("--cap", type=_positive_int, default=10**7)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("build", help="write cost (and mixer) Hamiltonians as Pauli text")
    _add_instance_flags(p)
    p.add_argument("--mixer", choices=MIXER_NAMES, default=None)
    p.add_argument("--cost", choices=[CONSTANT, REDUCED], default=CONSTANT)
    p.add_argument("--lambda-olap", type=float, default=None)
    p.add_argument("--no-pauli", action="store_true", help="only report the qubit count")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("run", help="multi-run QAOA experiment")
    _add_instance_flags(p)
    p.add_argument("--mixer", choices=MIXER_NAMES, default=None)
    p.add_argument("--mixers", choices=["all"], default=None)
    p.add_argument("--p", type=_depths, default=[1], help="depth or comma list, e.g. 1,2")
    p.add_argument("--plot", action="store_true", help="write boxplot.svg for a single block too")
    _add_experiment_flags(p, tol_default=1e-3)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("split", help="divide and conquer on turn 1")
    _add_instance_flags(p)
    p.add_argument("--mixer", choices=MIXER_NAMES, default="xy-simple")
    p.add_argument("--p", type=_depths, default=[1])
    _add_experiment_flags(p, tol_default=0.5)
    p.set_defaults(func=cmd_split, init=UNIFORM_ALL, runs=1)

    p = sub.add_parser("cost", help="CNOT counts and routing estimate")
    _add_instance_flags(p)
    p.add_argument("--graph", default=None, help="JSON hardware graph {nodes, edges}")
    p.add_argument("--mixer", choices=MIXER_NAMES, default=None)
    p.add_argument("--lambda-olap", type=float, default=None)
    p.set_defaults(func=cmd_cost)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, RuntimeError, OSError, IndexError) as exc:
        print(f"latticefold {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
