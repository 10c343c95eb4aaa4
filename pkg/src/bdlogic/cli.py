"""Command-line front door: one executable over the whole toolkit.

Every capability is a subcommand with stable text output and an optional
``--json`` rendering that re-parses into the emitting module's types.
Rationals are printed exactly as ``num/den``; ``--decimals K`` appends a
rounded decimal column to the text output (display only, the JSON stays
exact).  All sampling is driven by ``--seed``, so two runs with the same
arguments are byte-identical.

Exit codes: 0 a positive verdict (or plain output) was produced; 1 the
verdict is negative (invalid / unsat / rejected / not designated / total
conflict); 2 usage error; 3 the input could not be read (syntax errors,
malformed files, missing atoms).
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import bd_core
from . import ineq_calculus
from . import lattice_measures as lm
from . import luk_two
from . import models
from . import translations
from . import two_layered

PROG = "bdlogic"

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_INPUT = 3


class InputError(Exception):
    """Anything wrong with what the user handed us (exit code 3)."""


class UsageError(Exception):
    """Malformed invocation that argparse could not catch (exit code 2)."""


# ---------------------------------------------------------------------------
# small renderers

def _rat(text) -> Fraction:
    if isinstance(text, bool):
        raise InputError("expected a rational, got a boolean")
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as e:
        raise InputError("bad rational %r: %s" % (text, e))


def _fmt_rat(q: Fraction, decimals) -> str:
    base = "%d/%d" % (q.numerator, q.denominator) if q.denominator != 1 \
        else str(q.numerator)
    if decimals is None:
        return base
    return "%s (%.*f)" % (base, decimals, float(q))


def _json_rat(q: Fraction) -> str:
    return "%d/%d" % (q.numerator, q.denominator) if q.denominator != 1 \
        else str(q.numerator)


def _emit(args, text_lines, payload) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _state_label(state) -> str:
    lits = sorted(state, key=lambda t: (t[0], not t[1]))
    return "{%s}" % ",".join(n if pos else "-" + n for n, pos in lits)


def _load_json(value: str):
    """Inline JSON or a path to a JSON file."""
    raw = value
    if os.path.exists(value):
        with open(value) as fh:
            raw = fh.read()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputError("bad JSON %r: %s" % (value, e))


def _split_names(text: str):
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise InputError("empty name list %r" % text)
    return tuple(names)


# ---------------------------------------------------------------------------
# measure files

def _measure_payload(doc):
    """A measure file is either a bare {label: rational} object or a
    wrapper {"mass"|"values": {...}, "algebra": ..., "frame"/"signature":
    [...], "normalized": bool}."""
    if not isinstance(doc, dict):
        raise InputError("measure file must be a JSON object")
    meta = {}
    body = doc
    if "mass" in doc or "values" in doc:
        body = doc.get("mass", doc.get("values"))
        meta = {k: v for k, v in doc.items() if k not in ("mass", "values")}
        if not isinstance(body, dict):
            raise InputError("'mass'/'values' must be an object")
    return {str(k): _rat(v) for k, v in body.items()}, meta


def _infer_carrier(algebra: str, labelled_maps):
    names = set()
    for body in labelled_maps:
        for label in body:
            if algebra == "powerset":
                inner = label.strip()
                if not (inner.startswith("{") and inner.endswith("}")):
                    raise InputError("powerset element %r should look like "
                                     "'{a,b}'" % label)
                names.update(n.strip() for n in inner[1:-1].split(",")
                             if n.strip())
            else:
                names.update(bd_core.variables(bd_core.parse_bd(label)))
    if not names:
        raise InputError("cannot infer the carrier from empty measures; "
                         "pass --frame or --vars")
    return tuple(sorted(names))


def _build_algebra(args, labelled_maps, metas):
    algebra = args.algebra
    for meta in metas:
        algebra = algebra or meta.get("algebra")
    algebra = algebra or "powerset"
    if algebra not in ("powerset", "demorgan_free", "demorgan_bounded"):
        raise InputError("unknown algebra %r" % algebra)
    carrier = None
    if getattr(args, "frame", None):
        carrier = _split_names(args.frame)
    elif getattr(args, "vars", None):
        carrier = _split_names(args.vars)
    else:
        for meta in metas:
            found = meta.get("frame") or meta.get("signature")
            if found:
                carrier = tuple(str(n) for n in found)
                break
    if carrier is None:
        carrier = _infer_carrier(algebra, labelled_maps)
    if algebra == "powerset":
        return algebra, lm.PowersetAlgebra(carrier)
    return algebra, lm.FreeDeMorganAlgebra(
        carrier, with_constants=(algebra == "demorgan_bounded"))


def _labelled(mapping, alg, skip_zero=True):
    items = [(alg.label(k), v) for k, v in mapping.items()
             if v or not skip_zero]
    return sorted(items, key=lambda kv: kv[0])


def _label_any(alg, x):
    """Best-effort rendering of a violation-report entry: lattice elements
    get their algebra label, tuples are rendered memberwise, everything
    else falls back to str()."""
    if isinstance(x, (str, int, Fraction)):
        return _json_rat(x) if isinstance(x, Fraction) else str(x)
    if isinstance(x, tuple):
        return [_label_any(alg, y) for y in x]
    try:
        return alg.label(x)
    except Exception:
        return str(x)


# ---------------------------------------------------------------------------
# subcommand handlers (each returns an exit code)

def _cmd_entail(args):
    if len(args.formulas) < 2:
        raise UsageError("need at least a premise and a conclusion")
    fs = [bd_core.parse_bd(t, with_constants=args.constants)
          for t in args.formulas]
    premise = bd_core.big_and(fs[:-1])
    ok, witness = bd_core.entails_with_witness(premise, fs[-1])
    if ok:
        _emit(args, ["valid"], {"verdict": "valid"})
        return EXIT_OK
    state, side = witness
    _emit(args, ["invalid",
                 "countermodel: state %s fails on the %s side"
                 % (_state_label(state), "positive" if side == "+"
                    else "negative")],
          {"verdict": "invalid",
           "witness": {"state": sorted(n if pos else "-" + n
                                       for n, pos in state),
                       "side": side}})
    return EXIT_NO


def _cmd_nf(args):
    f = bd_core.parse_bd(args.formula, with_constants=args.constants)
    if args.form == "fdnf":
        if args.lits:
            lits = [(t[1:], False) if t.startswith("-") else (t, True)
                    for t in _split_names(args.lits)]
        else:
            lits = [(v, s) for v in sorted(bd_core.variables(f))
                    for s in (True, False)]
        out = bd_core.fdnf(f, lits, with_constants=args.constants)
    else:
        out = bd_core.normalize(f, args.form)
    text = bd_core.to_str(out)
    _emit(args, [text], {"form": args.form, "formula": text})
    return EXIT_OK


def _cmd_lindenbaum(args):
    signature = _split_names(args.vars)
    keys = bd_core.lindenbaum_class_keys(signature,
                                         with_constants=args.constants)
    reps = [bd_core.to_str(bd_core.formula_of_class(k)) for k in keys]
    lines = ["%d classes over {%s}" % (len(reps), ",".join(signature))]
    lines += reps
    _emit(args, lines, {"signature": list(signature),
                        "count": len(reps), "classes": reps})
    return EXIT_OK


def _cmd_canonical_model(args):
    signature = _split_names(args.vars)
    M = models.canonical_model(signature)
    doc = models.model_to_json(M)
    _emit(args, [json.dumps(doc, indent=2)], doc)
    return EXIT_OK


def _cmd_mobius(args):
    body, meta = _measure_payload(_load_json(args.file))
    _, alg = _build_algebra(args, [body], [meta])
    lat = alg.lattice()
    values = {}
    for label, q in body.items():
        values[alg.parse_element(label)] = q
    missing = [x for x in lat.elements if x not in values]
    if args.inverse:
        # mass -> cumulative measure; absent elements carry no mass
        bel = lm.belief_from_mass(lm.MassFunction(values), lat)
        items = _labelled(dict(bel), alg, skip_zero=False)
        what = "bel"
    else:
        if missing:
            raise InputError("measure must be total on the lattice; missing "
                             "e.g. %r" % alg.label(missing[0]))
        mass = lm.mobius_transform(values, lat)
        items = _labelled(mass, alg, skip_zero=not args.with_zeros)
        what = "mass"
    lines = ["%s = %s" % (k, _fmt_rat(v, args.decimals)) for k, v in items]
    _emit(args, lines, {what: {k: _json_rat(v) for k, v in items}})
    return EXIT_OK


def _cmd_check_measure(args):
    body, meta = _measure_payload(_load_json(args.file))
    _, alg = _build_algebra(args, [body], [meta])
    lat = alg.lattice()
    values = {alg.parse_element(label): q for label, q in body.items()}
    missing = [x for x in lat.elements if x not in values]
    if missing:
        raise InputError("measure must be total on the lattice; missing "
                         "e.g. %r" % alg.label(missing[0]))
    rep = lm.check_measure(values, lat, kmax=args.kmax)
    payload = {"ok": rep.ok, "message": rep.message}
    lines = [rep.message]
    if not rep.ok and rep.violation is not None:
        labels = [_label_any(alg, x) for x in rep.violation]
        payload["violation"] = labels
        lines.append("violating tuple: %s" % json.dumps(labels))
    _emit(args, lines, payload)
    return EXIT_OK if rep.ok else EXIT_NO


def _cmd_combine(args):
    docs = [_measure_payload(_load_json(p)) for p in args.files]
    bodies = [d[0] for d in docs]
    metas = [d[1] for d in docs]
    algebra, alg = _build_algebra(args, bodies, metas)
    masses = []
    for path, body in zip(args.files, bodies):
        parsed = {}
        for label, q in body.items():
            el = alg.parse_element(label)
            if el in parsed:
                raise InputError("duplicate element %r in %s" % (label, path))
            parsed[el] = q
        masses.append(lm.MassFunction(parsed))
    try:
        out = lm.combine(masses[0], masses[1], args.rule, algebra, alg)
    except lm.TotalConflict as e:
        _emit(args, ["total conflict: %s" % e],
              {"verdict": "total conflict"})
        return EXIT_NO
    items = _labelled(dict(out), alg)
    lines = ["%s = %s" % (k, _fmt_rat(v, args.decimals)) for k, v in items]
    _emit(args, lines, {k: _json_rat(v) for k, v in items})
    return EXIT_OK


def _sat_common(args, result):
    if not result:
        _emit(args, ["unsat"], {"verdict": "unsat"})
        return EXIT_NO
    doc = models.model_to_json(result.model)
    lines = ["sat", json.dumps(doc, indent=2)]
    payload = {"verdict": "sat", "model": doc}
    if result.belief is not None:
        bel = {bd_core.to_str(bd_core.formula_of_class(k)): _json_rat(v)
               for k, v in sorted(result.belief.items(),
                                  key=lambda kv: bd_core.class_key_sort(kv[0]))
               if v}
        payload["belief"] = bel
        lines.append("belief: " + json.dumps(bel))
    _emit(args, lines, payload)
    return EXIT_OK


def _cmd_sat_weight(args):
    combo = ineq_calculus.parse_combo(args.formula)
    return _sat_common(args, ineq_calculus.sat_weight(combo))


def _cmd_sat_belief(args):
    combo = ineq_calculus.parse_combo(args.formula)
    return _sat_common(args, ineq_calculus.sat_belief(
        combo, normalized=args.normalized))


def _cmd_entail_ineq(args, kind):
    combos = [ineq_calculus.parse_combo(t) for t in args.formulas]
    premises, conclusion = combos[:-1], combos[-1]
    ok = ineq_calculus.entails(premises, conclusion, kind)
    _emit(args, ["valid" if ok else "invalid"],
          {"verdict": "valid" if ok else "invalid"})
    return EXIT_OK if ok else EXIT_NO


def _point_from_json(doc, where) -> luk_two.TwoPoint:
    if not isinstance(doc, (list, tuple)) or len(doc) != 2:
        raise InputError("%s must be a [first, second] pair" % where)
    return luk_two.TwoPoint(_rat(doc[0]), _rat(doc[1]))


def _cmd_eval_luk(args):
    f = luk_two.parse_outer(args.formula, args.logic)
    doc = _load_json(args.valuation)
    if not isinstance(doc, dict):
        raise InputError("valuation must be a JSON object")
    v = {a: _point_from_json(x, "value of %r" % a) for a, x in doc.items()}
    missing = [a for a in luk_two.outer_atoms(f) if a not in v]
    if missing:
        raise InputError("valuation misses atoms: %s"
                         % ", ".join(sorted(str(a) for a in missing)))
    val = luk_two.eval(v, f)
    des = luk_two.designated(val, args.logic)
    _emit(args,
          ["value = (%s, %s)" % (_fmt_rat(val.first, args.decimals),
                                 _fmt_rat(val.second, args.decimals)),
           "designated" if des else "not designated"],
          {"value": [_json_rat(val.first), _json_rat(val.second)],
           "designated": des})
    return EXIT_OK if des else EXIT_NO


def _cmd_eval_two_layer(args):
    f = two_layered.parse_two_layer(args.formula, args.logic)
    M = models.model_from_json(_load_json(args.model))
    val = two_layered.eval_two_layer(M, f)
    des = two_layered.designated(val, args.logic)
    _emit(args,
          ["value = (%s, %s)" % (_fmt_rat(val.first, args.decimals),
                                 _fmt_rat(val.second, args.decimals)),
           "designated" if des else "not designated"],
          {"value": [_json_rat(val.first), _json_rat(val.second)],
           "designated": des})
    return EXIT_OK if des else EXIT_NO


def _cmd_check_axioms(args):
    rng = random.Random(args.seed)
    if args.logic in (luk_two.L2, luk_two.NL):
        rep = luk_two.check_axioms(args.logic, samples=args.trials, rng=rng)
        bad = {n: r["violations"] for n, r in rep.items() if r["violations"]}
        lines = ["%s: %d axioms, %d samples each"
                 % (args.logic, len(rep), args.trials)]
        for name in sorted(rep):
            lines.append("  %-12s %s" % (name, "ok" if name not in bad
                                         else "%d violations"
                                         % len(bad[name])))
        payload = {"logic": args.logic, "samples": args.trials,
                   "violations": {n: len(v) for n, v in bad.items()}}
        _emit(args, lines, payload)
        return EXIT_OK if not bad else EXIT_NO
    rep = two_layered.soundness_suite(
        args.logic, None, args.trials, rng=rng,
        bel_leq_pl=args.bel_leq_pl)
    lines = ["%s: %d axioms x %d models, %d violations"
             % (rep["tag"], rep["axioms"], rep["trials"],
                rep["violation_count"])]
    for name, count in sorted(rep["by_axiom"].items()):
        lines.append("  %-12s %d violations" % (name, count))
    payload = {"logic": rep["tag"], "axioms": rep["axioms"],
               "trials": rep["trials"],
               "violation_count": rep["violation_count"],
               "by_axiom": rep["by_axiom"]}
    if args.verbose and rep["violations"]:
        payload["violations"] = rep["violations"]
        lines.append(json.dumps(rep["violations"][0], indent=2))
    _emit(args, lines, payload)
    return EXIT_OK if rep["violation_count"] == 0 else EXIT_NO


def _cmd_translate(args):
    text = args.formula
    if args.infile:
        with open(args.infile) as fh:
            text = fh.read().strip()
    if text is None:
        raise UsageError("pass a formula or --in FILE")
    out = translations.translate(text, args.dir)
    if isinstance(out, two_layered.TwoLayerFormula):
        rendered = str(out)
    else:
        rendered = ineq_calculus.combo_to_str(out)
    _emit(args, [rendered],
          {"direction": args.dir, "input": text, "output": rendered})
    return EXIT_OK


def _cmd_classify(args):
    parts = args.value.split(",")
    if len(parts) != 2:
        raise InputError("expected 'first,second', got %r" % args.value)
    v = luk_two.TwoPoint(_rat(parts[0]), _rat(parts[1]))
    for q in (v.first, v.second):
        if not 0 <= q <= 1:
            raise InputError("coordinate %s outside [0,1]" % q)
    verdict = luk_two.classify(v)
    _emit(args, [verdict], {"value": [_json_rat(v.first),
                                      _json_rat(v.second)],
                            "verdict": verdict})
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit JSON instead of text")
    common.add_argument("--decimals", type=int, default=None, metavar="K",
                        help="append a K-digit decimal column (text only)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for any sampling (default 0)")

    p = argparse.ArgumentParser(
        prog=PROG, description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, handler, help_, **kw):
        sp = sub.add_parser(name, parents=[common], help=help_, **kw)
        sp.set_defaults(handler=handler)
        return sp

    sp = add("entail", _cmd_entail, "two-sided entailment between formulas")
    sp.add_argument("formulas", nargs="+",
                    help="premises... conclusion (at least two)")
    sp.add_argument("--constants", action="store_true",
                    help="allow T and F in the language")

    sp = add("nf", _cmd_nf, "rewrite a formula into a normal form")
    sp.add_argument("formula")
    sp.add_argument("--form", required=True,
                    choices=["nnf", "dnf", "cnf", "idnf", "fdnf"])
    sp.add_argument("--lits", default=None,
                    help="comma-separated literal set for fdnf "
                         "(default: all literals over the variables)")
    sp.add_argument("--constants", action="store_true")

    sp = add("lindenbaum", _cmd_lindenbaum,
             "enumerate formula classes over a signature")
    sp.add_argument("--vars", required=True, help="e.g. p,q")
    sp.add_argument("--constants", action="store_true")

    sp = add("canonical-model", _cmd_canonical_model,
             "the canonical model over a signature, as JSON")
    sp.add_argument("--vars", required=True, help="e.g. p,q")

    sp = add("mobius", _cmd_mobius,
             "Moebius transform of a measure file (or --inverse)")
    sp.add_argument("file", help="measure JSON")
    sp.add_argument("--algebra", default=None,
                    choices=["powerset", "demorgan_free", "demorgan_bounded"])
    sp.add_argument("--frame", default=None, help="powerset frame, e.g. a,b,c")
    sp.add_argument("--vars", default=None, help="formula signature")
    sp.add_argument("--inverse", action="store_true",
                    help="mass -> cumulative measure instead")
    sp.add_argument("--with-zeros", action="store_true",
                    help="keep zero entries in the output")

    sp = add("check-measure", _cmd_check_measure,
             "verify belief-function inequalities on a measure file")
    sp.add_argument("file")
    sp.add_argument("--algebra", default=None,
                    choices=["powerset", "demorgan_free", "demorgan_bounded"])
    sp.add_argument("--frame", default=None)
    sp.add_argument("--vars", default=None)
    sp.add_argument("--kmax", type=int, default=3)

    sp = add("combine", _cmd_combine, "aggregate two mass files")
    sp.add_argument("files", nargs=2, metavar="MASS_JSON")
    sp.add_argument("--rule", default="dempster",
                    choices=["dempster", "dubois_prade"])
    sp.add_argument("--algebra", default=None,
                    choices=["powerset", "demorgan_free", "demorgan_bounded"])
    sp.add_argument("--frame", default=None)
    sp.add_argument("--vars", default=None)

    sp = add("sat-weight", _cmd_sat_weight,
             "satisfiability of a weight-inequality combination")
    sp.add_argument("formula")

    sp = add("sat-belief", _cmd_sat_belief,
             "satisfiability of a belief-inequality combination")
    sp.add_argument("formula")
    sp.add_argument("--normalized", action="store_true",
                    help="require the masses to sum to exactly 1")

    sp = add("entail-weight", lambda a: _cmd_entail_ineq(a, "w"),
             "entailment between weight combinations")
    sp.add_argument("formulas", nargs="+",
                    help="premises... conclusion (conclusion alone = validity)")

    sp = add("entail-belief", lambda a: _cmd_entail_ineq(a, "b"),
             "entailment between belief combinations")
    sp.add_argument("formulas", nargs="+")

    sp = add("eval-luk", _cmd_eval_luk,
             "evaluate an outer formula under a two-dimensional valuation")
    sp.add_argument("formula")
    sp.add_argument("--logic", required=True, choices=[luk_two.L2,
                                                       luk_two.NL])
    sp.add_argument("--valuation", required=True,
                    help='JSON (inline or file): {"p": ["3/5","3/10"]}')

    sp = add("eval-two-layer", _cmd_eval_two_layer,
             "evaluate a measure-modal formula on a model file")
    sp.add_argument("formula")
    sp.add_argument("--logic", required=True,
                    choices=[two_layered.PR, two_layered.BEL_L2,
                             two_layered.BEL_NL])
    sp.add_argument("--model", required=True, help="model JSON (inline or file)")

    sp = add("check-axioms", _cmd_check_axioms,
             "sample the axioms of a calculus for violations")
    sp.add_argument("--logic", required=True,
                    choices=[luk_two.L2, luk_two.NL, two_layered.PR,
                             two_layered.BEL_L2, two_layered.BEL_NL])
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--bel-leq-pl", action="store_true",
                    help="sample only models with bel <= pl pointwise")
    sp.add_argument("--verbose", action="store_true",
                    help="include violating models in the output")

    sp = add("translate", _cmd_translate,
             "move between inequality and outer-formula presentations")
    sp.add_argument("formula", nargs="?", default=None)
    sp.add_argument("--dir", required=True,
                    choices=["w2l", "l2w", "b2l", "l2b"])
    sp.add_argument("--in", dest="infile", default=None, metavar="FILE")

    sp = add("classify", _cmd_classify,
             "classical / incomplete / contradictory for a value pair")
    sp.add_argument("value", help="e.g. 3/5,3/10")

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as e:
        print("usage error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except InputError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    except (bd_core.BDError, lm.TotalConflict) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, TypeError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
