"""Command-line front end: verify, condition, synthesize, spectrum.

Exit codes are strict: 0 all checks pass, 1 a check verifiably fails (the
report carries a replayable witness), 2 the input could not be used.  With a
fixed --seed the structured output is bit-identical across runs on the same
platform; reports named by --replay are re-verified witness by witness.
"""

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import (
    fileio,
    instances,
    jordan,
    lueders,
    observables,
    orthospace,
    statespace,
    synthesis,
)
from .errors import (
    ConditioningUndefinedError,
    DecompositionError,
    ParseError,
    PreconditionError,
    SynthesisError,
    UcpError,
)

PASS, FAIL, BAD_INPUT = 0, 1, 2


def _g(v):
    """Compact numeric formatting for text reports."""
    return f"{float(v):g}"


def _clean(obj):
    """JSON-safe copy: Fractions to p/q strings, numpy scalars to natives."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    return obj


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")


def _load_polytope(space, states_arg):
    if states_arg == "full":
        return statespace.build_state_polytope(space)
    gens = fileio.parse_states(_read(states_arg))
    for ix, g in enumerate(gens):
        ok, viol = statespace.is_state(space, g)
        if not ok:
            raise ParseError(f"state {ix} is invalid: {viol[0]}")
    return statespace.generated_polytope(space, gens)


def _atoms(space):
    """Minimal nonzero events."""
    out = []
    for e in space.events():
        if e == space.zero:
            continue
        if any(
            f not in (space.zero, e) and orthospace.precedes(space, f, e)
            for f in space.events()
        ):
            continue
        out.append(e)
    return out


# ---------------------------------------------------------------------------
# verify


_CHECKS = ("axioms", "separation", "uniqueness", "mixture")


def _verify_axioms(space, report, lines):
    ax = orthospace.verify_orthospace(space)
    report["structural"] = [list(w) for w in ax.structural]
    report["axioms"] = {
        tag: {"passed": v.passed, "witnesses": [list(w) for w in v.witnesses]}
        for tag, v in ax.axioms.items()
    }
    for tag in sorted(ax.axioms):
        v = ax.axioms[tag]
        mark = "pass" if v.passed else f"FAIL {v.witnesses[:3]}"
        lines.append(f"axiom {tag}: {mark}")
    if ax.structural:
        lines.append(f"structural issues: {ax.structural}")
    return ax.passed


def _verify_uniqueness(space, polytope, report, lines):
    records = []
    all_unique = True
    for ix, mu in enumerate(polytope.generators or []):
        for e in space.events():
            if e == space.zero or mu[e] == 0:
                continue
            verdict = statespace.check_conditional_uniqueness(polytope, mu, e)
            if verdict.verdict == statespace.UNIQUE:
                continue
            all_unique = False
            rec = {
                "state": [fileio._format_value(v) for v in mu.values],
                "state_index": ix,
                "event": e,
                "verdict": verdict.verdict,
            }
            if verdict.witnesses:
                nu1, nu2, at = verdict.witnesses
                rec["witnesses"] = [
                    [fileio._format_value(v) for v in nu1.values],
                    [fileio._format_value(v) for v in nu2.values],
                ]
                rec["witness_event"] = at
                lines.append(
                    f"uniqueness: state {ix} under event {e} is {verdict.verdict}; "
                    f"witnesses differ at event {at}"
                )
            else:
                lines.append(f"uniqueness: state {ix} under event {e} is {verdict.verdict}")
            records.append(rec)
    report["uniqueness"] = records
    if all_unique:
        lines.append("uniqueness: all conditionals UNIQUE")
    return all_unique


def _verify_mixture(space, polytope, report, lines, rng, samples):
    gens = polytope.generators or []
    if len(gens) < 2:
        report["mixture"] = {"checked": 0, "failures": 0}
        lines.append("mixture: skipped (needs at least two generator states)")
        return True
    checked = failures = 0
    for _ in range(samples):
        mu = gens[int(rng.integers(len(gens)))]
        nu = gens[int(rng.integers(len(gens)))]
        s = Fraction(int(rng.integers(1, 4)), 4)
        e = int(rng.integers(space.n_events))
        mix = statespace.mix_states(mu, nu, s)
        if e == space.zero or mix[e] == 0:
            continue
        try:
            rep = statespace.check_mixture_identity(polytope, mu, nu, s, e)
        except (PreconditionError, ConditioningUndefinedError):
            continue
        checked += 1
        if not rep.passed:
            failures += 1
    report["mixture"] = {"checked": checked, "failures": failures}
    lines.append(f"mixture identity: {checked} sampled, {failures} failures")
    return failures == 0


def cmd_verify(args):
    report = {"command": "verify", "input": args.input}
    lines = []
    space = fileio.parse_orthospace(_read(args.input))
    checks = args.extra or (["axioms", "separation", "uniqueness"] if args.states else ["axioms"])
    for c in checks:
        if c not in _CHECKS:
            raise ParseError(f"unknown check '{c}' (choose from {', '.join(_CHECKS)})")
    report["checks"] = checks
    ok = True
    polytope = _load_polytope(space, args.states) if args.states else None
    if "axioms" in checks:
        ok &= _verify_axioms(space, report, lines)
    if "separation" in checks:
        if polytope is None:
            raise ParseError("separation check needs --states")
        sep = statespace.check_separation(polytope)
        report["separation"] = {"passed": sep.passed, "witness": _clean(sep.witness)}
        lines.append("separation: pass" if sep.passed else f"separation: FAIL {sep.witness[:2]}")
        ok &= sep.passed
    if "uniqueness" in checks:
        if polytope is None:
            raise ParseError("uniqueness check needs --states")
        ok &= _verify_uniqueness(space, polytope, report, lines)
    if "mixture" in checks:
        if polytope is None:
            raise ParseError("mixture check needs --states")
        rng = np.random.default_rng(args.seed)
        ok &= _verify_mixture(space, polytope, report, lines, rng, args.samples or 50)
    report["passed"] = bool(ok)
    lines.append("verify: PASS" if ok else "verify: FAIL")
    return (PASS if ok else FAIL), report, lines


def cmd_replay(args):
    report = {"command": "replay", "input": args.replay}
    lines = []
    prev = json.loads(_read(args.replay))
    space = fileio.parse_orthospace(_read(args.input)) if args.input else None
    if space is None and "input" in prev:
        space = fileio.parse_orthospace(_read(prev["input"]))
    if space is None:
        raise ParseError("replay needs --input or an input path inside the report")
    total = reproduced = 0
    for tag, data in (prev.get("axioms") or {}).items():
        for w in data.get("witnesses", []):
            total += 1
            hit = orthospace.replay_axiom_witness(space, tag, tuple(w))
            reproduced += bool(hit)
            lines.append(f"axiom {tag} witness {w}: {'reproduced' if hit else 'STALE'}")
    polytope = _load_polytope(space, args.states) if args.states else None
    for rec in prev.get("uniqueness") or []:
        total += 1
        if polytope is None:
            polytope = statespace.build_state_polytope(space)
        mu = statespace.State(tuple(fileio._parse_value(v, 0) for v in rec["state"]))
        verdict = statespace.check_conditional_uniqueness(polytope, mu, rec["event"])
        hit = verdict.verdict == rec["verdict"]
        reproduced += bool(hit)
        lines.append(
            f"uniqueness witness (state {rec.get('state_index')}, event {rec['event']}): "
            f"{'reproduced' if hit else 'STALE'}"
        )
    report["witnesses"] = total
    report["reproduced"] = reproduced
    ok = total == reproduced
    lines.append(f"replay: {reproduced}/{total} witnesses reproduced")
    report["passed"] = ok
    return (PASS if ok else FAIL), report, lines


# ---------------------------------------------------------------------------
# condition


def _condition_abstract(args, report, lines):
    space = fileio.parse_orthospace(_read(args.input))
    if not args.states:
        raise ParseError("abstract conditioning needs --states")
    gens = fileio.parse_states(_read(args.states)) if args.states != "full" else None
    if gens is not None and not gens:
        raise ParseError("state file holds no states")
    mu = gens[0] if gens is not None else None
    if mu is None:
        raise ParseError("abstract conditioning needs an explicit state file (first state is conditioned)")
    ok, viol = statespace.is_state(space, mu)
    if not ok:
        raise ParseError(f"first state is invalid: {viol[0]}")
    polytope = statespace.build_state_polytope(space)
    e = args.event
    verdict = statespace.check_conditional_uniqueness(polytope, mu, e)
    report["slice_dim"] = verdict.slice_dim
    if verdict.verdict != statespace.UNIQUE:
        report["verdict"] = verdict.verdict
        lines.append(f"conditional under event {e} is {verdict.verdict}")
        return FAIL
    cond = verdict.conditional
    report["conditional"] = [fileio._format_value(v) for v in cond.values]
    lines.append(
        "conditional values: (" + ", ".join(_g(v) for v in cond.values) + ")"
    )
    atoms = _atoms(space)
    if atoms:
        lines.append(
            "conditional atoms: (" + ", ".join(_g(cond[a]) for a in atoms) + ")"
        )
        report["atoms"] = atoms
    lines.append(f"slice dimension: {verdict.slice_dim}")
    if args.observe is not None:
        val = cond[args.observe]
        report["observed"] = fileio._format_value(val)
        lines.append(f"mu(f|e) = {_g(val)}")
    return PASS


def _condition_matrix(args, report, lines):
    tag, n, blocks = fileio.parse_elements(_read(args.input))
    if len(blocks) < 2:
        raise ParseError("matrix conditioning needs a density block and at least one event block")
    rho = lueders.DensityState(blocks[0])
    if not (1 <= args.event < len(blocks)):
        raise ParseError(f"event block index must be in 1..{len(blocks) - 1}")
    e = blocks[args.event]
    cond = lueders.condition(rho, e)
    report["trace"] = jordan.trace(cond.element)
    lines.append(f"conditioned density trace: {_g(jordan.trace(cond.element))}")
    if args.observe is not None:
        if not (1 <= args.observe < len(blocks)):
            raise ParseError(f"observe block index must be in 1..{len(blocks) - 1}")
        f = blocks[args.observe]
        val = lueders.conditional_probability(rho, f, e)
        report["observed"] = float(val)
        lines.append(f"mu(f|e) = {_g(val)}")
    report["conditional"] = _clean(cond.element.coords)
    return PASS


def cmd_condition(args):
    report = {"command": "condition", "input": args.input, "event": args.event}
    lines = []
    header = fileio.sniff_header(_read(args.input))
    if args.event is None:
        raise ParseError("condition needs an event argument")
    if header == fileio.ORTHOSPACE_HEADER:
        code = _condition_abstract(args, report, lines)
    elif header in (fileio.MATRIX_HEADER, fileio.PROJECTIONS_HEADER):
        code = _condition_matrix(args, report, lines)
    else:
        raise ParseError(f"cannot condition on a '{header}' file")
    report["passed"] = code == PASS
    return code, report, lines


# ---------------------------------------------------------------------------
# synthesize


def _law_lines(laws, lines):
    lines.append(
        "laws: jordan "
        + _g(laws.jordan_identity)
        + ", square-norm "
        + _g(laws.square_norm)
        + ", square-sum slack "
        + _g(laws.square_sum_slack)
        + ", power-assoc "
        + _g(laws.power_associativity)
        + ", unit "
        + _g(laws.unit_residual)
    )


def _density_summary(synth, instance, rng, report, lines):
    dens = synthesis.check_hull_density(synth, rng=rng, instance=instance)
    n_ext = sum(1 for v in dens.extremes if v.extreme)
    entry = {"extreme": n_ext, "of": len(dens.extremes), "note": dens.note}
    msg = f"density: {n_ext}/{len(dens.extremes)} event images extreme"
    if dens.box is not None:
        entry["box_equal"] = dens.box.equal
        entry["members"] = dens.samples_member
        msg += f"; interval equals hull: {dens.box.equal}"
    if dens.separation is not None:
        msg += "; " + dens.note
    lines.append(msg)
    report["density"] = entry
    return n_ext == len(dens.extremes)


def cmd_synthesize(args):
    report = {"command": "synthesize", "input": args.input}
    lines = []
    header = fileio.sniff_header(_read(args.input))
    rng = np.random.default_rng(args.seed)
    instance = None
    if header == fileio.ORTHOSPACE_HEADER:
        space = fileio.parse_orthospace(_read(args.input))
        if not args.states:
            raise ParseError("abstract synthesis needs --states (a file or 'full')")
        polytope = _load_polytope(space, args.states)
        gens = polytope.generators
        if not gens:
            raise ParseError("state polytope has no generators to synthesize from")
        synth = synthesis.abstract_synthetic_space(space, gens)
        oracle = synthesis.polytope_expansion_oracle(synth, polytope)
    elif header in (fileio.MATRIX_HEADER, fileio.PROJECTIONS_HEADER):
        tag, n, blocks = fileio.parse_elements(_read(args.input))
        system = orthospace.projection_orthospace(blocks)
        densities = []
        for el in system.elements:
            tr = jordan.trace(el)
            if tr > 0.5:
                densities.append(lueders.DensityState(el * (1.0 / tr)))
        densities.extend(instances._spanning_densities(tag, n))
        instance = instances.MatrixInstance(tag=tag, n=n, system=system, densities=densities)
        synth = synthesis.matrix_synthetic_space(instance)
        oracle = synthesis.lueders_expansion_oracle(synth, instance)
    else:
        raise ParseError(f"cannot synthesize from a '{header}' file")

    try:
        model = synthesis.build_product_model(synth, oracle)
    except SynthesisError as exc:
        blocking = getattr(exc, "generator", None)
        report["blocked"] = {
            "generator": blocking,
            "event": getattr(exc, "event", None),
            "verdict": getattr(exc, "verdict", None),
        }
        report["passed"] = False
        lines.append(f"synthesis blocked: {exc}")
        return FAIL, report, lines

    report["dim"] = synth.dim
    report["n_events"] = synth.space.n_events
    report["n_states"] = synth.n_states
    lines.append(f"dim {synth.dim} over {synth.space.n_events} events, {synth.n_states} generators")

    worst_sym, arg = model.worst_symmetry()
    report["worst_symmetry"] = float(worst_sym)
    lines.append(f"worst multiplier symmetry: {_g(worst_sym)} at {arg}")

    wd = synthesis.check_well_definedness(model, rng=rng)
    wd_worst = max(wd.sum_triple_residual, wd.regroup_residual)
    report["well_definedness"] = float(wd_worst)
    lines.append(f"well-definedness worst: {_g(wd_worst)}")

    laws = synthesis.check_laws_on_reconstruction(model, pairs=args.samples or 60, rng=rng)
    report["laws"] = {
        "jordan_identity": float(laws.jordan_identity),
        "square_norm": float(laws.square_norm),
        "square_sum_slack": float(laws.square_sum_slack),
        "power_associativity": float(laws.power_associativity),
        "unit_residual": float(laws.unit_residual),
    }
    _law_lines(laws, lines)

    comp_worsts = [
        max(float(c.idempotency), float(c.unit_image), float(c.invariance))
        for c in model.compressions.values()
    ]
    report["compression_worst"] = max(comp_worsts)
    lines.append(f"compression residual worst: {_g(max(comp_worsts))}")

    ok = _density_summary(synth, instance, rng, report, lines)
    tol = args.tol or synthesis.FLOAT_TOL
    if instance is not None:
        lue = synthesis.compare_with_lueders(model, instance)
        prod = synthesis.compare_products(model, instance)
        report["match_lueders"] = lue
        report["match_product"] = prod
        lines.append(f"matches: lueders {_g(lue)}, product {_g(prod)}")
        ok &= lue <= tol and prod <= tol
    ok &= worst_sym <= tol and wd_worst <= tol and max(comp_worsts) <= tol
    ok &= laws.passed(tol)

    payload = fileio.synth_dump(model)
    if args.format == "structured":
        report["dump"] = payload
    else:
        path = args.input + ".synth.json"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(fileio.dump_to_json(payload))
        report["dump_path"] = path
        lines.append(f"dump written: {path}")
    report["passed"] = bool(ok)
    lines.append("synthesize: PASS" if ok else "synthesize: FAIL")
    return (PASS if ok else FAIL), report, lines


# ---------------------------------------------------------------------------
# spectrum


def cmd_spectrum(args):
    report = {"command": "spectrum", "input": args.input}
    lines = []
    text = _read(args.input)
    header = fileio.sniff_header(text)
    if header == fileio.OBSERVABLE_HEADER:
        support = fileio.parse_observable(text)
        if not support:
            raise ParseError("observable file holds no terms")
        radius = max(abs(v) for v, _ in support)
        report["support"] = [[fileio._format_value(v), e] for v, e in support]
        report["spectral_radius"] = fileio._format_value(radius)
        lines.append("support: " + ", ".join(f"{_g(v)} on event {e}" for v, e in support))
        lines.append(f"spectral radius: {_g(radius)}")
        report["passed"] = True
        return PASS, report, lines
    if header in (fileio.MATRIX_HEADER, fileio.PROJECTIONS_HEADER):
        tag, n, blocks = fileio.parse_elements(text)
        a = blocks[0]
        spec = jordan.spectral_decomposition(a)
        recon = None
        for lam, p in zip(spec.values, spec.frame):
            term = p * float(lam)
            recon = term if recon is None else recon + term
        residual = jordan.max_abs(recon - a)
        report["eigenvalues"] = [float(v) for v in spec.values]
        report["multiplicity"] = list(spec.multiplicity)
        report["frame_residual"] = float(residual)
        lines.append("eigenvalues: " + ", ".join(_g(v) for v in spec.values))
        lines.append(f"frame residual: {_g(residual)}")
        report["passed"] = True
        return PASS, report, lines
    raise ParseError(f"cannot take a spectrum of a '{header}' file")


# ---------------------------------------------------------------------------
# entry point


def build_parser():
    p = argparse.ArgumentParser(
        prog="ucpspace",
        description="Event systems, their states, and synthetic order-unit models.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, event_args=False, extra=False):
        sp.add_argument("--input", help="primary input file")
        sp.add_argument("--states", help="state file, or 'full' for the whole polytope")
        sp.add_argument("--tol", type=float, default=None, help="tolerance override")
        sp.add_argument("--seed", type=int, default=0, help="random seed")
        sp.add_argument("--samples", type=int, default=None, help="sample count override")
        sp.add_argument(
            "--format", choices=("text", "structured"), default="text", help="output format"
        )
        sp.add_argument("--replay", help="re-verify witnesses from a structured report")
        if event_args:
            sp.add_argument("event", type=int, nargs="?", help="conditioning event")
            sp.add_argument("observe", type=int, nargs="?", help="observed event")
        if extra:
            sp.add_argument("extra", nargs="*", help="checks to run")

    common(sub.add_parser("verify", help="axioms, separation, uniqueness, mixture"), extra=True)
    common(sub.add_parser("condition", help="conditional states"), event_args=True)
    common(sub.add_parser("synthesize", help="build and check the synthetic model"))
    common(sub.add_parser("spectrum", help="eigenvalues or spectral radius"))
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            if args.replay:
                code, report, lines = cmd_replay(args)
            else:
                if not args.input:
                    raise ParseError("verify needs --input")
                code, report, lines = cmd_verify(args)
        elif args.command == "condition":
            if not args.input:
                raise ParseError("condition needs --input")
            code, report, lines = cmd_condition(args)
        elif args.command == "synthesize":
            if not args.input:
                raise ParseError("synthesize needs --input")
            code, report, lines = cmd_synthesize(args)
        else:
            if not args.input:
                raise ParseError("spectrum needs --input")
            code, report, lines = cmd_spectrum(args)
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (ConditioningUndefinedError, DecompositionError) as exc:
        print(f"verified failure: {exc}", file=sys.stderr)
        return FAIL
    except UcpError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT

    if args.format == "structured":
        print(json.dumps(_clean(report), sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
