"""Command-line front end.

Every subcommand is batch-oriented and reproducible: seeds come from
flags (or the MVLSIM_SEED environment variable), artifacts are JSON
documents carrying the full run configuration, and parallel runs return
the same verdicts as serial ones.  Exit codes: 0 success, 1 a
verification finding (counterexample, non-maximal valuation, state that
never initializes), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from pathlib import Path

from . import abstraction as A
from . import equivalence as E
from . import netlist as N
from . import normal_forms as F
from . import sequential as Q
from . import simulator as S
from . import values as V
from .values import Ternary


class CliError(Exception):
    """Input problem reportable to the user; maps to exit 2."""


def _load(path: str) -> N.Circuit:
    try:
        return N.load_netlist(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    except N.NetlistError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _seed(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("MVLSIM_SEED")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise CliError(f"MVLSIM_SEED must be an integer, got {env!r}") from exc
    return 0


def _parse_m_vector(
    text: str, circuit: N.Circuit, inf_ceiling: int | None
) -> dict[str, V.MValue]:
    out: dict[str, V.MValue] = {}
    for part in re.split(r"[,\s]+", text.strip()):
        if not part:
            continue
        name, eq, val = part.partition("=")
        if not eq:
            raise CliError(f"vector entry {part!r} is not name=value")
        if name not in circuit.input_index:
            raise CliError(f"vector names unknown input {name!r}")
        if name in out:
            raise CliError(f"vector sets {name!r} twice")
        try:
            out[name] = V.parse_mvalue(val, inf_ceiling=inf_ceiling)
        except V.DomainError as exc:
            raise CliError(str(exc)) from exc
    missing = [n for n in circuit.inputs if n not in out]
    if missing:
        raise CliError(f"vector misses inputs: {', '.join(missing)}")
    return out


def _parse_ternary_vector(text: str, circuit: N.Circuit) -> dict[str, Ternary]:
    cells = [c for c in re.split(r"[,\s]+", text.strip()) if c]
    if len(cells) != circuit.n_inputs:
        raise CliError(
            f"expected {circuit.n_inputs} ternary values in input order, "
            f"got {len(cells)}"
        )
    try:
        vals = [V.parse_ternary(c) for c in cells]
    except V.DomainError as exc:
        raise CliError(str(exc)) from exc
    return dict(zip(circuit.inputs, vals))


def _parse_perm(text: str, n: int) -> tuple[int, ...]:
    cells = [c for c in re.split(r"[,\s]+", text.strip()) if c]
    try:
        w = tuple(int(c) for c in cells)
    except ValueError as exc:
        raise CliError(f"bad permutation entry in {text!r}") from exc
    try:
        A.check_signed_permutation(w, n)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    return w


def _artifact(args: argparse.Namespace, payload: dict) -> dict:
    skip = {"func"}
    cfg = {}
    for key, value in vars(args).items():
        if key in skip:
            continue
        if isinstance(value, (str, int, float, bool)) or value is None:
            cfg[key] = value
        else:
            cfg[key] = str(value)
    doc = {
        "schema_version": 1,
        "run_config": cfg,
        "generated_at": S.run_stamp(),
    }
    doc.update(payload)
    return doc


def _emit(args: argparse.Namespace, payload: dict, *, finding: bool = False) -> None:
    """Write the JSON artifact; findings go to stdout when no path is set."""
    doc = _artifact(args, payload)
    text = json.dumps(doc, indent=2, sort_keys=True)
    path = getattr(args, "json", None)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    elif finding:
        print(text)


def _fmt_ternary(values) -> str:
    return ",".join(str(v) for v in values)


# --- subcommand handlers ----------------------------------------------------


def _cmd_sim(args: argparse.Namespace) -> int:
    circuit = _load(args.netlist)
    valuation = _parse_m_vector(args.vector, circuit, args.inf_ceiling)
    trace = S.evaluate(circuit, valuation)
    for name in sorted(trace.outputs):
        print(f"{name} = {V.format_mvalue(trace.outputs[name])}")
    if args.forest:
        forest = S.extract_forest(trace)
        for mag in sorted(forest.classes):
            cls = forest.classes[mag]
            print(
                f"magnitude {V.format_mvalue(mag) if mag != abs(mag) else mag}:"
                f" nodes {','.join(map(str, cls.node_ids))}"
                f" roots {','.join(map(str, cls.roots))}"
            )
    if args.dot:
        Path(args.dot).write_text(S.trace_to_dot(trace), encoding="utf-8")
    _emit(args, S.trace_to_json(trace))
    return 0


def _cmd_ternary_sim(args: argparse.Namespace) -> int:
    circuit = _load(args.netlist)
    valuation = _parse_ternary_vector(args.vector, circuit)
    _, outputs = S.evaluate_ternary(circuit, valuation)
    for name in sorted(outputs):
        print(f"{name} = {outputs[name]}")
    _emit(args, {"outputs": {n: str(v) for n, v in outputs.items()}})
    return 0


def _cmd_abstract(args: argparse.Namespace) -> int:
    circuit = _load(args.netlist)
    n = circuit.n_inputs
    if args.perm:
        w = _parse_perm(args.perm, n)
    else:
        import random

        w = A.random_signed_permutation(n, random.Random(_seed(args)))
    result = A.abstract_valuation(
        circuit,
        w,
        args.output,
        mode=args.mode,
        sign_flip_probe=args.sign_flip_probe,
    )
    print(f"mode: {result.mode}")
    print(f"w: {','.join(V.format_mvalue(v) for v in w)}")
    for k, rec in enumerate(result.iterations, start=1):
        vals = ",".join(V.format_mvalue(v) for v in rec.values)
        print(f"iteration {k}: w={vals} out={V.format_mvalue(rec.output)}")
    print(f"final: w={','.join(V.format_mvalue(v) for v in result.values)}"
          f" out={V.format_mvalue(result.output)}")
    print(f"threshold: {result.threshold}")
    print(f"av: {_fmt_ternary(result.av)}")
    if result.probe_insensitive is not None:
        names = [circuit.inputs[k] for k in result.probe_insensitive]
        print(f"sign-flip insensitive: {','.join(names) if names else '(none)'}")
    payload = {
        "w": [V.mvalue_to_json(v) for v in w],
        "mode": result.mode,
        "threshold": result.threshold,
        "av": [str(t) for t in result.av],
        "final_values": [V.mvalue_to_json(v) for v in result.values],
        "final_output": V.mvalue_to_json(result.output),
        "iterations": [
            {
                "values": [V.mvalue_to_json(v) for v in rec.values],
                "output": V.mvalue_to_json(rec.output),
            }
            for rec in result.iterations
        ],
    }
    if result.probe_insensitive is not None:
        payload["sign_flip_insensitive"] = list(result.probe_insensitive)
    _emit(args, payload)
    return 0


def _cmd_check_maximal(args: argparse.Namespace) -> int:
    circuit = _load(args.netlist)
    valuation = _parse_ternary_vector(args.av, circuit)
    av = tuple(valuation[name] for name in circuit.inputs)
    result = A.check_maximal(circuit, av, args.output)
    print(f"consistent: {'yes' if result.consistent else 'no'}")
    print(f"maximal: {'yes' if result.maximal else 'no'}")
    print(f"output: {result.output}")
    if result.witness is not None:
        print(f"witness: {circuit.inputs[result.witness]}")
    ok = result.consistent and result.maximal
    _emit(
        args,
        {
            "consistent": result.consistent,
            "maximal": result.maximal,
            "output": str(result.output),
            "witness": None
            if result.witness is None
            else circuit.inputs[result.witness],
        },
        finding=not ok,
    )
    return 0 if ok else 1


def _read_stimulus_rows(path: str, n: int) -> list[tuple[int, ...]]:
    rows: list[tuple[int, ...]] = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                cells = [c.strip() for c in row if c.strip()]
                if not cells:
                    continue
                if len(cells) == 1:
                    cells = [c for c in re.split(r"\s+", cells[0]) if c]
                try:
                    rows.append(tuple(int(c) for c in cells))
                except ValueError as exc:
                    raise CliError(f"{path}:{lineno}: bad entry") from exc
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    return rows


def _cmd_equiv(args: argparse.Namespace) -> int:
    a = _load(args.netlist_a)
    b = _load(args.netlist_b)
    stimulus = None
    if args.stimulus_file:
        stimulus = _read_stimulus_rows(args.stimulus_file, a.n_inputs)
    try:
        result = E.nonequivalence_search(
            a,
            b,
            budget=args.budget,
            seed=_seed(args),
            expansion_cap=args.expansion_cap,
            stimulus=stimulus,
            stop_on_m_discrepancy=args.stop_on_m_discrepancy,
            guided=not args.blind,
            workers=args.workers if args.workers else (os.cpu_count() or 1),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    print(f"verdict: {result.verdict}")
    stats = result.stats
    print(
        f"trials: {stats.trials}  m-discrepancies: {stats.m_discrepancies}"
        f"  av-mismatches: {stats.av_mismatches}  expansions: {stats.expansions}"
    )
    payload: dict = {
        "verdict": result.verdict,
        "stats": {
            "trials": stats.trials,
            "m_discrepancies": stats.m_discrepancies,
            "av_mismatches": stats.av_mismatches,
            "expansions": stats.expansions,
            "anomalies": stats.anomalies,
        },
    }
    if result.verdict == "counterexample":
        print(f"trial: {result.trial}  output: {result.output}  trigger: {result.trigger}")
        assignment = {k: ("T" if v else "F") for k, v in result.assignment.items()}
        print("assignment: " + ",".join(f"{k}={v}" for k, v in assignment.items()))
        payload.update(
            trial=result.trial,
            output=result.output,
            trigger=result.trigger,
            assignment=assignment,
        )
    elif result.verdict == "m_discrepancy":
        print(f"trial: {result.trial}  output: {result.output}")
        print("w: " + ",".join(V.format_mvalue(v) for v in result.w))
        print(f"m outputs A: " + ",".join(
            f"{o}={V.format_mvalue(x)}" for o, x in sorted(result.m_out_a.items())))
        print(f"m outputs B: " + ",".join(
            f"{o}={V.format_mvalue(x)}" for o, x in sorted(result.m_out_b.items())))
        print(f"av A: {_fmt_ternary(result.av_a)}")
        print(f"av B: {_fmt_ternary(result.av_b)}")
        payload.update(
            trial=result.trial,
            output=result.output,
            w=[V.mvalue_to_json(v) for v in result.w],
            m_out_a={o: V.mvalue_to_json(x) for o, x in result.m_out_a.items()},
            m_out_b={o: V.mvalue_to_json(x) for o, x in result.m_out_b.items()},
            av_a=[str(t) for t in result.av_a],
            av_b=[str(t) for t in result.av_b],
        )
    found = result.verdict != "budget_exhausted"
    _emit(args, payload, finding=found)
    return 1 if found else 0


def _cmd_oracle_equiv(args: argparse.Namespace) -> int:
    a = _load(args.netlist_a)
    b = _load(args.netlist_b)
    try:
        result = E.oracle_equivalence(a, b)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    print(f"equivalent: {'yes' if result.equivalent else 'no'}")
    payload: dict = {"equivalent": result.equivalent}
    if not result.equivalent:
        assignment = {k: ("T" if v else "F") for k, v in result.assignment.items()}
        print(f"output: {result.output}")
        print("assignment: " + ",".join(f"{k}={v}" for k, v in assignment.items()))
        payload.update(output=result.output, assignment=assignment)
    _emit(args, payload, finding=not result.equivalent)
    return 0 if result.equivalent else 1


def _cmd_dnf(args: argparse.Namespace) -> int:
    circuit = _load(args.netlist)
    try:
        if args.form == "dmcf":
            form = F.dmcf(circuit, args.output, term_budget=args.budget)
        elif args.form == "bcf":
            form = F.bcf(circuit, args.output)
        elif args.form == "fdnf":
            form = F.fdnf(circuit, args.output)
        else:
            base = F.dmcf(circuit, args.output, term_budget=args.budget)
            n = circuit.n_inputs
            target = circuit.output_node(args.output)
            onset = S.node_masks(circuit)[target]
            full = (1 << (1 << n)) - 1
            form = F.DnfForm(
                names=base.names,
                pos=F.minimal_cover(base.pos, onset, n),
                neg=F.minimal_cover(base.neg, full & ~onset, n),
            )
    except F.DnfOverflowError as exc:
        raise CliError(str(exc)) from exc
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    terms = form.neg if args.negate else form.pos
    text = F.format_dnf(terms, form.names)
    print(f"form: {args.form}{' (negated)' if args.negate else ''}")
    print(f"terms: {len(terms)}")
    print(text)
    _emit(
        args,
        {
            "form": args.form,
            "negated": bool(args.negate),
            "term_count": len(terms),
            "dnf": text,
            "terms": [
                [("~" if neg else "") + form.names[i] for i, neg in sorted(t)]
                for t in F.sorted_terms(terms)
            ],
        },
    )
    return 0


def _cmd_complexity(args: argparse.Namespace) -> int:
    circuit = _load(args.netlist)
    try:
        report = F.complexity_measures(circuit, args.output, term_budget=args.budget)
    except F.DnfOverflowError as exc:
        raise CliError(str(exc)) from exc
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    print(f"structural: {report.structural}")
    print(f"prime: {report.prime}")
    print(f"variable_upper: {report.variable_upper}")
    print(f"min_cover: {F.format_dnf(report.min_cover_pos, report.names)}")
    print(f"min_cover_negated: {F.format_dnf(report.min_cover_neg, report.names)}")
    _emit(
        args,
        {
            "structural": report.structural,
            "prime": report.prime,
            "variable_upper": report.variable_upper,
            "min_cover": F.format_dnf(report.min_cover_pos, report.names),
            "min_cover_negated": F.format_dnf(report.min_cover_neg, report.names),
            "prime_cover": F.format_dnf(report.prime_cover_pos, report.names),
            "prime_cover_negated": F.format_dnf(report.prime_cover_neg, report.names),
        },
    )
    return 0


def _cmd_gen_vectors(args: argparse.Namespace) -> int:
    circuit = _load(args.netlist)
    control = [c for c in (args.control.split(",") if args.control else []) if c]
    try:
        vectors = F.generate_test_vectors(circuit, args.output, control=control)
    except F.DnfOverflowError as exc:
        raise CliError(str(exc)) from exc
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    print("ternary\tm_values\texpected")
    for vec in vectors:
        print(
            f"{_fmt_ternary(vec.ternary)}\t"
            + ",".join(V.format_mvalue(v) for v in vec.m_values)
            + f"\t{'T' if vec.expected else 'F'}"
        )
    _emit(
        args,
        {
            "inputs": list(circuit.inputs),
            "vectors": [
                {
                    "term": [
                        ("~" if neg else "") + circuit.inputs[i]
                        for i, neg in sorted(vec.term)
                    ],
                    "ternary": [str(t) for t in vec.ternary],
                    "m_values": [V.mvalue_to_json(v) for v in vec.m_values],
                    "expected": vec.expected,
                }
                for vec in vectors
            ],
        },
    )
    return 0


def _parse_init_overrides(text: str | None) -> dict[str, Q.TemporalValue]:
    if not text:
        return {}
    out: dict[str, Q.TemporalValue] = {}
    for part in re.split(r"[,\s]+", text.strip()):
        if not part:
            continue
        name, eq, val = part.partition("=")
        if not eq:
            raise CliError(f"init entry {part!r} is not name=value")
        try:
            m = V.parse_mvalue(val)
        except V.DomainError as exc:
            raise CliError(str(exc)) from exc
        out[name] = Q.TemporalValue(1 if m > 0 else -1, -1, abs(m))
    return out


def _seq_plan(args: argparse.Namespace, circuit: N.Circuit) -> tuple[Q.StimulusPlan, int]:
    if args.stimulus:
        try:
            with open(args.stimulus, "r", encoding="utf-8", newline="") as fh:
                raw = [row for row in csv.reader(fh) if any(c.strip() for c in row)]
        except OSError as exc:
            raise CliError(f"cannot read {args.stimulus}: {exc.strerror}") from exc
        try:
            plan: Q.StimulusPlan = Q.StimulusPlan.from_rows(
                circuit.inputs, raw, truth_digits=args.truth_digits
            )
        except (ValueError, V.DomainError) as exc:
            raise CliError(str(exc)) from exc
        cycles = args.cycles if args.cycles is not None else len(raw)
        if cycles > len(raw):
            raise CliError(
                f"{cycles} cycles requested but stimulus covers {len(raw)}"
            )
    else:
        if args.cycles is None:
            raise CliError("--cycles is required with seeded stimulus")
        plan = Q.StimulusPlan.seeded(circuit.inputs, _seed(args))
        cycles = args.cycles
    return plan, cycles


def _seq_setup(args: argparse.Namespace):
    circuit = _load(args.netlist)
    plan, cycles = _seq_plan(args, circuit)
    overrides = _parse_init_overrides(args.init)
    try:
        init = Q.initial_state(
            circuit, seed=args.init_seed, overrides=overrides or None
        )
        result = Q.run(circuit, cycles=cycles, plan=plan, init=init)
    except (ValueError, Q.EpochMismatchError) as exc:
        raise CliError(str(exc)) from exc
    return circuit, plan, cycles, result


def _cmd_seq_run(args: argparse.Namespace) -> int:
    circuit, _, cycles, result = _seq_setup(args)
    k = args.truth_digits
    for c, state in enumerate(result.states):
        cells = " ".join(
            f"{r.name}={Q.format_temporal(state.values[idx], k)}"
            for idx, r in enumerate(circuit.registers)
        )
        print(f"cycle {c:02d} state: {cells if cells else '(no registers)'}")
        if c < len(result.outputs):
            outs = " ".join(
                f"{name}={Q.format_temporal(result.outputs[c][name], k)}"
                for name in sorted(result.outputs[c])
            )
            print(f"cycle {c:02d} out:   {outs}")
    _emit(
        args,
        {
            "cycles": cycles,
            "states": [
                {
                    "cycle": st.cycle,
                    "registers": {
                        r.name: st.values[idx].to_json()
                        for idx, r in enumerate(circuit.registers)
                    },
                }
                for st in result.states
            ],
            "outputs": [
                {name: v.to_json() for name, v in outs.items()}
                for outs in result.outputs
            ],
        },
    )
    return 0


def _cmd_seq_init(args: argparse.Namespace) -> int:
    circuit, plan, cycles, result = _seq_setup(args)
    report = Q.detect_initialization(circuit, result.states)
    oracle = Q.ternary_init_oracle(circuit, plan, cycles)
    print("cycle\toldest_epoch\tspan")
    for row in report.rows:
        print(f"{row.cycle}\t{row.oldest_epoch}\t{row.span}")
    if report.initialized_at is None:
        print(f"initialized: never within {cycles} cycles")
    else:
        print(f"initialized: cycle {report.initialized_at}")
    print(f"ternary oracle: {'never' if oracle is None else f'cycle {oracle}'}")
    found = report.initialized_at is None
    _emit(
        args,
        {
            "initialized_at": report.initialized_at,
            "ternary_oracle": oracle,
            "rows": [
                {
                    "cycle": row.cycle,
                    "oldest_epoch": row.oldest_epoch,
                    "span": row.span,
                }
                for row in report.rows
            ],
        },
        finding=found,
    )
    return 1 if found else 0


def _parse_term(text: str) -> list[tuple[str, bool]]:
    lits: list[tuple[str, bool]] = []
    for part in re.split(r"[,\s]+", text.strip()):
        if not part:
            continue
        neg = part.startswith("~")
        lits.append((part[1:] if neg else part, neg))
    if not lits:
        raise CliError("term must name at least one literal")
    return lits


def _cmd_mutate(args: argparse.Namespace) -> int:
    circuit = _load(args.netlist)
    seed = _seed(args)
    try:
        if args.kind == "contradiction":
            mutant = E.mutate_redundant_contradiction(circuit, seed=seed)
        elif args.kind == "tautology":
            mutant = E.mutate_redundant_tautology(circuit, seed=seed)
        else:
            if not args.term:
                raise CliError("--term is required for conjunctive mutations")
            mutant = E.mutate_conjunctive_bug(
                circuit, _parse_term(args.term), seed=seed
            )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    text = N.format_netlist(mutant)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    from . import report as R

    manifest = R.generate_report(
        out_dir=args.out_dir, seed=_seed(args), quick=args.quick
    )
    for name in manifest["artifacts"]:
        print(f"wrote {os.path.join(args.out_dir, name)}")
    return 0


# --- parser -------------------------------------------------------------------


def _add_json(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", metavar="PATH", help="write a JSON artifact here")


def _add_netlist(p: argparse.ArgumentParser) -> None:
    p.add_argument("-n", "--netlist", required=True, help="netlist file")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "-o", "--output", default=None, help="output name (default: the only one)"
    )


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--seed", type=int, default=None, help="RNG seed (fallback: MVLSIM_SEED, then 0)"
    )


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="mvlsim",
        description="Gate-level simulation over signed integer strengths",
    )
    sub = top.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("sim", help="evaluate a netlist on a strength vector")
    _add_netlist(p)
    p.add_argument("-v", "--vector", required=True, help='e.g. "a=2,b=-1,c=3"')
    p.add_argument("--inf-ceiling", type=int, default=None,
                   help="treat |values| at or above this as infinite")
    p.add_argument("--dot", metavar="PATH", help="write a GraphViz trace here")
    p.add_argument("--forest", action="store_true",
                   help="print the magnitude classes and their roots")
    _add_json(p)
    p.set_defaults(func=_cmd_sim)

    p = sub.add_parser("ternary-sim", help="evaluate with three-valued inputs")
    _add_netlist(p)
    p.add_argument("-v", "--vector", required=True,
                   help='ternary values in input order, e.g. "T,F,X"')
    _add_json(p)
    p.set_defaults(func=_cmd_ternary_sim)

    p = sub.add_parser("abstract", help="compute an abstract valuation")
    _add_netlist(p)
    _add_output(p)
    p.add_argument("--perm", help='signed permutation, e.g. "1,-2,3"')
    _add_seed(p)
    p.add_argument("--mode", choices=("strict", "faithful"), default="strict")
    p.add_argument("--sign-flip-probe", action="store_true",
                   help="report known entries whose sign flip leaves the output")
    _add_json(p)
    p.set_defaults(func=_cmd_abstract)

    p = sub.add_parser("check-maximal", help="check an abstract valuation")
    _add_netlist(p)
    _add_output(p)
    p.add_argument("--av", required=True, help='ternary values, e.g. "T,X,T"')
    _add_json(p)
    p.set_defaults(func=_cmd_check_maximal)

    p = sub.add_parser("equiv", help="search for a distinguishing input")
    p.add_argument("netlist_a")
    p.add_argument("netlist_b")
    p.add_argument("--budget", type=int, default=10000, help="max trials")
    _add_seed(p)
    p.add_argument("--expansion-cap", type=int, default=4096,
                   help="max guided flips per abstraction mismatch")
    p.add_argument("--stimulus-file", metavar="PATH",
                   help="CSV of signed permutations, one per trial")
    p.add_argument("--stop-on-m-discrepancy", action="store_true",
                   help="stop when strength outputs split, even if binary agrees")
    p.add_argument("--blind", action="store_true",
                   help="direct boolean sampling only, no guidance")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: all cores)")
    _add_json(p)
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("oracle-equiv", help="exhaustive equivalence check")
    p.add_argument("netlist_a")
    p.add_argument("netlist_b")
    _add_json(p)
    p.set_defaults(func=_cmd_oracle_equiv)

    p = sub.add_parser("dnf", help="print a normal form of one output")
    _add_netlist(p)
    _add_output(p)
    p.add_argument("--form", choices=("dmcf", "bcf", "fdnf", "mincover"),
                   default="dmcf")
    p.add_argument("--negate", action="store_true",
                   help="print the complement's form instead")
    p.add_argument("--budget", type=int, default=F.DEFAULT_TERM_BUDGET,
                   help="term budget for structural forms")
    _add_json(p)
    p.set_defaults(func=_cmd_dnf)

    p = sub.add_parser("complexity", help="cover-size measures of one output")
    _add_netlist(p)
    _add_output(p)
    p.add_argument("--budget", type=int, default=F.DEFAULT_TERM_BUDGET)
    _add_json(p)
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("gen-vectors", help="derive test vectors from the covers")
    _add_netlist(p)
    _add_output(p)
    p.add_argument("--control", default=None,
                   help="comma-separated inputs pinned to infinity in vectors")
    _add_json(p)
    p.set_defaults(func=_cmd_gen_vectors)

    for name, help_text in (
        ("seq-run", "run a sequential circuit"),
        ("seq-init", "analyze initialization of a sequential run"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_netlist(p)
        p.add_argument("--cycles", type=int, default=None)
        p.add_argument("--stimulus", metavar="PATH",
                       help="CSV stimulus, one row per cycle")
        _add_seed(p)
        p.add_argument("--truth-digits", type=int, default=3,
                       help="strength digits in the text rendering")
        p.add_argument("--init-seed", type=int, default=0,
                       help="seed for power-up register values")
        p.add_argument("--init", default=None,
                       help='power-up overrides, e.g. "r1=inf,r2=-3"')
        _add_json(p)
        p.set_defaults(func=_cmd_seq_run if name == "seq-run" else _cmd_seq_init)

    p = sub.add_parser("mutate", help="inject a seeded mutation into a netlist")
    _add_netlist(p)
    p.add_argument("--kind", choices=("contradiction", "tautology", "conjunctive"),
                   required=True)
    _add_seed(p)
    p.add_argument("--term", default=None, help='literals, e.g. "x1,~x2"')
    p.add_argument("-O", "--out", default=None, help="write the mutant here")
    p.set_defaults(func=_cmd_mutate)

    p = sub.add_parser("report", help="run the bundled experiments; write figures")
    p.add_argument("--out-dir", default="report")
    p.add_argument("--quick", action="store_true",
                   help="small budgets; for smoke testing")
    _add_seed(p)
    p.set_defaults(func=_cmd_report)

    return top


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
