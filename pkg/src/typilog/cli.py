"""Command-line surface for the verification workflows.

Exit codes: 0 every requested check passed / axiom entailed; 1 a property
failed (report emitted); 2 usage or input error; 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bridge, entailment, harness, interpretation as interp, network as netmod
from .activations import activation_map_from_dict, activation_map_to_dict
from .concepts import Inclusion, Typ
from .degrees import GOEDEL_INVOLUTIVE, GradedScale, family_by_name
from .syntax import (KbSyntaxError, axiom_to_text, parse_axiom, parse_inclusion,
                     parse_kb)
from .weighted_kb import (WeightedKb, check_coherent, check_faithful,
                          check_phi_coherent)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class CliError(Exception):
    pass


def _scale(args) -> GradedScale | None:
    return GradedScale(args.grade) if getattr(args, "grade", None) else None


def _family(args):
    try:
        return family_by_name(args.family)
    except KeyError as e:
        raise CliError(str(e)) from None


def _load_model(path: str, family) -> interp.Interpretation:
    p = Path(path)
    if not p.exists():
        raise CliError(f"model file not found: {path}")
    if p.suffix == ".csv":
        return interp.from_csv(p.read_text(encoding="utf-8"), family=family)
    return interp.load_json(p, family=family)


def _load_network(path: str) -> netmod.Network:
    if not Path(path).exists():
        raise CliError(f"network file not found: {path}")
    try:
        return netmod.load_json(path)
    except (netmod.NetworkError, KeyError, ValueError) as e:
        raise CliError(f"bad network file {path}: {e}") from None


def _parse_thresholds(spec: str, n: int) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        ks = list(range(int(lo), int(hi) + 1))
    else:
        ks = [int(k) for k in spec.split(",")]
    for k in ks:
        if not 0 <= k <= n:
            raise CliError(f"threshold numerator {k} outside 0..{n}")
    return ks


def cmd_build_model(args) -> int:
    net = _load_network(args.network)
    try:
        _, rows = netmod.load_stimuli(args.stimuli, net)
    except (ValueError, netmod.NetworkError) as e:
        raise CliError(f"bad stimulus file {args.stimuli}: {e}") from None
    concepts = args.concepts.split(",") if args.concepts else None
    try:
        model = bridge.build_model(net, rows, scale=_scale(args),
                                   family=_family(args), concepts=concepts)
    except interp.UnknownNameError as e:
        raise CliError(str(e)) from None
    interp.save_json(model, args.out)
    print(f"wrote interpretation with {len(model.domain)} elements and "
          f"{len(model.concepts)} concepts to {args.out}")
    return EXIT_OK


def cmd_check(args) -> int:
    family = _family(args)
    model = _load_model(args.model, family)
    scale = model.scale or _scale(args)

    if args.thresholds:
        if scale is None:
            raise CliError("--thresholds needs a graded model or --grade")
        if model.scale is None:
            model = bridge.quantize_model(model, scale)
        pairs = []
        texts = []
        if args.axiom:
            texts.append(args.axiom)
        if args.axioms:
            doc = parse_kb(Path(args.axioms).read_text(encoding="utf-8"))
            texts.extend(axiom_to_text(ax) for ax in doc.strict_axioms)
        for text in texts:
            lhs, rhs, _, _ = parse_inclusion(text, require_threshold=False)
            pairs.append((lhs, rhs))
        if not pairs:
            raise CliError("nothing to check: pass --axiom or --axioms")
        ks = _parse_thresholds(args.thresholds, scale.n)
        rows = interp.threshold_sweep(model, pairs, ks, scale)
        report = {"n": scale.n, "thresholds": ks, "rows": rows}
        if args.json:
            print(json.dumps(report, sort_keys=True))
        else:
            head = ["E", "F"] + [f"k={k}" for k in ks] + ["#T(E)"]
            print("\t".join(head))
            for row in rows:
                cells = [row["lhs"], row["rhs"]]
                cells += [str(row["counts"][k]) for k in ks]
                cells.append(str(row["typical"]))
                print("\t".join(cells))
        ok = all(c == 0 for row in rows for c in row["counts"].values())
        return EXIT_OK if ok else EXIT_FAIL

    if not args.axiom and not args.axioms:
        raise CliError("nothing to check: pass --axiom or --axioms")
    axioms = []
    try:
        if args.axiom:
            axioms.append(parse_axiom(args.axiom, scale))
        if args.axioms:
            doc = parse_kb(Path(args.axioms).read_text(encoding="utf-8"), scale)
            axioms.extend(doc.all_axioms())
    except KbSyntaxError as e:
        raise CliError(f"bad axiom: {e}") from None
    results = []
    all_hold = True
    for ax in axioms:
        try:
            res = interp.check_axiom(model, ax)
        except interp.UnknownNameError as e:
            raise CliError(str(e)) from None
        all_hold &= res.holds
        results.append({"axiom": axiom_to_text(ax), **res.to_dict()})
    if args.json:
        print(json.dumps({"results": results, "allHold": all_hold}, sort_keys=True))
    else:
        for r in results:
            status = "holds" if r["holds"] else "FAILS"
            print(f"{r['axiom']}: {status} (value {r['value']:.6g}, "
                  f"{len(r['counterexamples'])} counterexample(s))")
    return EXIT_OK if all_hold else EXIT_FAIL


def cmd_extract(args) -> int:
    net = _load_network(args.network)
    kb, phi = bridge.extract_kb(net, force_names=args.force_names)
    from .syntax import kb_to_text
    Path(args.out).write_text(kb_to_text(kb.document), encoding="utf-8")
    if args.phi_out:
        Path(args.phi_out).write_text(
            json.dumps(activation_map_to_dict(phi), indent=1), encoding="utf-8")
    print(f"wrote {len(kb.distinguished)} weighted blocks to {args.out}")
    return EXIT_OK


def _load_kb_and_phi(args, scale):
    text = Path(args.kb).read_text(encoding="utf-8")
    try:
        kb = WeightedKb.from_document(parse_kb(text, scale))
    except KbSyntaxError as e:
        raise CliError(f"bad knowledge base {args.kb}: {e}") from None
    phi = activation_map_from_dict(json.loads(Path(args.phi).read_text(encoding="utf-8")))
    return kb, phi


def cmd_entail(args) -> int:
    if not args.grade:
        raise CliError("entailment needs a finite scale: pass --grade n")
    scale = GradedScale(args.grade)
    family = _family(args)
    kb, phi = _load_kb_and_phi(args, scale)
    try:
        axiom = parse_axiom(args.axiom, scale)
    except KbSyntaxError as e:
        raise CliError(f"bad axiom: {e}") from None
    try:
        res = entailment.entails(kb, phi, axiom, scale, family=family,
                                 mode=args.mode, budget=args.budget,
                                 jobs=args.jobs, prune=args.prune)
    except entailment.BudgetExceededError as e:
        print(json.dumps({"error": "budget-exceeded", "searchSpace": e.search_space,
                          "budget": e.budget}) if args.json else f"aborted: {e}",
              file=sys.stderr)
        return EXIT_BUDGET
    except entailment.EntailmentUnsupportedError as e:
        raise CliError(str(e)) from None
    if args.json:
        print(json.dumps(res.to_json_dict(), sort_keys=True))
    else:
        verdict = "entailed" if res.entailed else "not entailed"
        extra = " (vacuously: no positive instance of the subject)" if res.vacuous else ""
        print(f"{axiom_to_text(axiom)}: {verdict}{extra}")
        print(f"explored {res.explored} valuations ({res.kept} coherent, "
              f"{res.pruned} pruned) in {res.elapsed_ms:.1f} ms; "
              f"max subject degree {res.max_value}")
        if res.counterexample is not None:
            print(f"counterexample: {res.counterexample}")
    return EXIT_OK if res.entailed else EXIT_FAIL


def cmd_coherence(args) -> int:
    family = _family(args)
    model = _load_model(args.model, family)
    scale = model.scale
    if args.kind == "phi":
        if not args.phi:
            raise CliError("--kind phi needs an activation map: pass --phi")
        kb, phi = _load_kb_and_phi(args, scale)
        report = check_phi_coherent(kb, model, phi, tol=args.tol)
    else:
        text = Path(args.kb).read_text(encoding="utf-8")
        kb = WeightedKb.from_document(parse_kb(text, scale))
        report = (check_faithful if args.kind == "faithful" else check_coherent)(kb, model)
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=True))
    else:
        print(f"{args.kind}: {'holds' if report.holds else 'FAILS'}")
        if args.kind == "phi":
            print(f"max residual: {report.max_residual:.3g} (tol {report.tol:.3g})")
        else:
            for v in report.violations[:10]:
                print(f"  {v.concept}: {v.x} vs {v.y} ({v.kind}; W={v.wx} vs {v.wy})")
    return EXIT_OK if report.holds else EXIT_FAIL


def cmd_fuzz(args) -> int:
    cfg = harness.GeneratorConfig(seed=args.seed, iterations=args.iterations,
                                  family=_family(args))
    if args.suite == "klm":
        report = harness.klm_suite(cfg, k=args.k)
    elif args.suite == "ft":
        report = harness.ft_suite(cfg)
    elif args.suite == "hierarchy":
        report = harness.hierarchy_trials(cfg)
    elif args.suite == "cm-hunt":
        report = harness.find_cm_violation(cfg)
    elif args.suite == "andor-hunt":
        report = harness.find_andor_violation(cfg)
    else:  # pragma: no cover
        raise CliError(f"unknown suite {args.suite!r}")

    payload = report.to_dict()
    if args.fixture_dir and getattr(report, "violations", None):
        Path(args.fixture_dir).mkdir(parents=True, exist_ok=True)
        for i, record in enumerate(report.violations):
            out = Path(args.fixture_dir) / f"{args.suite}-{args.seed}-{i}.json"
            out.write_text(json.dumps(record, indent=1), encoding="utf-8")
        payload["fixtures"] = len(report.violations)
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        if isinstance(report, harness.SuiteReport):
            if report.found is not None:
                print(f"{report.suite}: witness found after {report.trials} trials")
            elif report.inconclusive:
                print(f"{report.suite}: inconclusive after {report.trials} trials "
                      f"(no witness found; this is not a pass)")
            else:
                print(f"{report.suite}: {report.trials} trials, "
                      f"{len(report.violations)} violations, digest {report.digest()}")
        else:
            print(f"hierarchy: {report.trials} trials, ok={report.ok}")
    if isinstance(report, harness.SuiteReport) and report.suite.endswith("hunt"):
        return EXIT_OK if report.found is not None else EXIT_FAIL
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typilog",
        description="Model checking and graded entailment of typicality "
                    "properties for feedforward networks")
    parser.add_argument("--jobs", type=int,
                        default=int(os.environ.get("TYPILOG_JOBS", "1")),
                        help="worker count for grid search (default $TYPILOG_JOBS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-model", help="network + stimuli -> interpretation JSON")
    p.add_argument("--network", required=True)
    p.add_argument("--stimuli", required=True)
    p.add_argument("--grade", type=int, default=None)
    p.add_argument("--concepts", default=None, help="comma-separated concept filter")
    p.add_argument("--family", default=GOEDEL_INVOLUTIVE.name)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_build_model)

    p = sub.add_parser("check", help="model-check axioms on an interpretation")
    p.add_argument("--model", required=True)
    p.add_argument("--axiom", default=None)
    p.add_argument("--axioms", default=None, help="a .kb file of axioms")
    p.add_argument("--family", default=GOEDEL_INVOLUTIVE.name)
    p.add_argument("--grade", type=int, default=None)
    p.add_argument("--thresholds", default=None,
                   help="sweep numerators, e.g. 1..4 or 1,3,5")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("extract", help="network -> weighted knowledge base")
    p.add_argument("--network", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--phi-out", dest="phi_out", default=None,
                   help="write the activation map sidecar JSON here")
    p.add_argument("--force-names", action="store_true",
                   help="auto-name anonymous units u<id>")
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("entail", help="canonical graded entailment of an axiom")
    p.add_argument("--kb", required=True)
    p.add_argument("--phi", required=True, help="activation map JSON")
    p.add_argument("--axiom", required=True)
    p.add_argument("--grade", type=int, required=True)
    p.add_argument("--family", default=GOEDEL_INVOLUTIVE.name)
    p.add_argument("--mode", choices=["auto", "acyclic-grid", "general-search"],
                   default="auto")
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.add_argument("--prune", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_entail)

    p = sub.add_parser("coherence", help="faithful / coherent / phi-coherent checks")
    p.add_argument("--kind", choices=["faithful", "coherent", "phi"], required=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--phi", default=None, help="activation map JSON (kind=phi)")
    p.add_argument("--model", required=True)
    p.add_argument("--family", default=GOEDEL_INVOLUTIVE.name)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_coherence)

    p = sub.add_parser("fuzz", help="randomized postulate and hierarchy suites")
    p.add_argument("--suite", choices=["klm", "ft", "hierarchy", "cm-hunt", "andor-hunt"],
                   required=True)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--family", default="goedel")
    p.add_argument("--fixture-dir", dest="fixture_dir", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_fuzz)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
