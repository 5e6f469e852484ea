"""glwedge command line: single computations, corpus generation and experiment batches.

Exit codes: 0 ok, 1 a checked statement was violated, 2 usage or input error.
Reports are JSON (sorted keys) or CSV; with --out both are written.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import shlex
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import groebner
from .characters import format_character, frobenius_twist, parse_character, schur_derivative
from .equivariant import analysis
from .equivariant import fixtures
from .equivariant.functors import PresentedValues, difference
from .equivariant.presentation import EquivariantPresentation
from .equivariant.rank import delta_evaluate, evaluate
from .modular import decomposition_matrix, gram_rank_character, verify_steinberg, wedge_tensor_length_report
from .partitions import enumerate_partitions, format_partition, is_prime, parse_partition, steinberg_decompose

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
# random chains draw from indices <= 6 and wedges of length <= 3
ACC_WINDOW = (6, 3)
ACC_STEP_CAP = 64
EXPERIMENTS = ("shift-theorem", "resolution", "reg-bound", "torsion", "acc", "steinberg-sweep", "wedge-lengths")


class UsageError(Exception):
    pass


@dataclass
class WorkbenchConfig:
    primes: tuple
    seed: int
    degree_cap: int | None
    rank_cap: int | None
    out: str | None
    fmt: str
    jobs: int

    def prime(self) -> int:
        return self.primes[0]

    def cap(self, default: int) -> int:
        return default if self.degree_cap is None else self.degree_cap

    def rank(self, default: int) -> int:
        return default if self.rank_cap is None else self.rank_cap


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _primes(text: str) -> tuple:
    try:
        out = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a prime list: {text!r}")
    if not out or not all(is_prime(p) for p in out):
        raise argparse.ArgumentTypeError(f"not a prime list: {text!r}")
    return out


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------


FIXTURES = ("R", "k", "m", "R/m^2", "R/m^3", "m^2", "V(1)", "V(1)^2")


def load_module(source: str, p: int, seed: int = 0) -> EquivariantPresentation:
    """A presentation file, ``fixture:NAME``, ``corpus:INDEX`` or ``curated:INDEX`` at prime p."""
    for prefix in ("corpus:", "curated:"):
        if source.startswith(prefix):
            try:
                k = int(source[len(prefix):])
            except ValueError:
                raise UsageError(f"bad index in {source!r}")
            mods = fixtures.curated(p) if prefix == "curated:" else fixtures.corpus(k + 1, seed=seed, primes=(p,))
            if not 0 <= k < len(mods):
                raise UsageError(f"index {k} out of range for {prefix[:-1]}")
            return mods[k]
    if source.startswith("fixture:"):
        name = source.split(":", 1)[1]
        if name in ("V(1)", "V(1)^2"):
            return fixtures.twisted_induced(p, 1 if name == "V(1)" else 2)
        if name.startswith("Div"):
            return fixtures.induced(p, parse_partition(name[3:]))
        named = fixtures.named_fixtures(p)
        if name not in named:
            raise UsageError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}, Div[...]")
        return named[name]
    try:
        return EquivariantPresentation.load(source)
    except FileNotFoundError:
        raise UsageError(f"no such file: {source}")
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"invalid presentation {source}: {exc}")


def parse_element(text: str, p: int) -> groebner.PModElement:
    """"x1 | e1 + 2*x2 | e2" as an element of P_n."""
    terms = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        coeff = 1
        if "*" in chunk:
            c, chunk = chunk.split("*", 1)
            coeff = int(c)
        sign, m = groebner.parse_monomial(chunk)
        terms[m] = (terms.get(m, 0) + sign * coeff) % p
    return groebner.PModElement(p, terms)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def command_line(args: list) -> str:
    return "glwedge " + " ".join(shlex.quote(a) for a in args)


def experiment_report(name: str, inputs: dict, items: list, started: float) -> dict:
    counts = {v: sum(1 for it in items if it["verdict"] == v) for v in ("pass", "fail", "inconclusive", "report")}
    return {"experiment": name, "inputs": inputs, "items": items, "summary": counts,
            "timing": {"seconds": round(time.perf_counter() - started, 3)}}


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], out)
    else:
        out[prefix] = json.dumps(value, sort_keys=True) if isinstance(value, list) else value


def to_csv(report: dict) -> str:
    rows = report["items"] if isinstance(report.get("items"), list) else [report]
    flat = []
    for row in rows:
        out: dict = {}
        _flatten("", row, out)
        flat.append(out)
    cols = sorted({k for r in flat for k in r})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for r in flat:
        writer.writerow(r)
    return buf.getvalue()


def emit(report: dict, cfg: WorkbenchConfig, stem: str) -> None:
    text_json = json.dumps(report, sort_keys=True, indent=2)
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        with open(os.path.join(cfg.out, stem + ".json"), "w") as fh:
            fh.write(text_json + "\n")
        with open(os.path.join(cfg.out, stem + ".csv"), "w") as fh:
            fh.write(to_csv(report))
    sys.stdout.write((text_json + "\n") if cfg.fmt == "json" else to_csv(report))


def run_pool(func, payloads: list, jobs: int) -> list:
    """Map in input order, so results do not depend on the pool size."""
    if jobs <= 1 or len(payloads) <= 1:
        return [func(x) for x in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, payloads))


# ---------------------------------------------------------------------------
# Single computations
# ---------------------------------------------------------------------------


def cmd_steinberg(args, cfg) -> tuple:
    lam = parse_partition(args.partition)
    rep = verify_steinberg(lam, cfg.prime(), cfg.cap(8))
    return rep.to_json(), EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_char(args, cfg) -> tuple:
    a = parse_character(args.expression)
    out = {"input": format_character(a)}
    if args.op == "derivative":
        out["derivative"] = format_character(schur_derivative(a))
    else:
        out["twist"] = format_character(frobenius_twist(a, cfg.prime()))
    return out, EXIT_OK


def cmd_simple_char(args, cfg) -> tuple:
    lam = parse_partition(args.partition)
    if lam.size > cfg.cap(8):
        raise UsageError(f"|lam|={lam.size} exceeds degree cap {cfg.cap(8)}")
    ch = gram_rank_character(lam, cfg.prime())
    dec = steinberg_decompose(lam, cfg.prime())
    return {"partition": format_partition(lam), "prime": cfg.prime(), "simple": format_character(ch.character),
            "layers": [format_partition(x) for x in dec.layers]}, EXIT_OK


def cmd_decomp_matrix(args, cfg) -> tuple:
    return decomposition_matrix(args.degree, cfg.prime(), cfg.cap(6)).to_json(), EXIT_OK


def cmd_evaluate(args, cfg) -> tuple:
    pres = load_module(args.module, cfg.prime(), cfg.seed)
    r = cfg.rank(3)
    d_max = cfg.cap(4)
    ev = evaluate(pres, r)
    top = r + max(pres.max_block_degree(), 0)
    delta = delta_evaluate(pres, r)
    betti = analysis.equivariant_betti(pres, 2, d_max, certify=False)
    semi = analysis.is_semi_induced(pres, d_max, betti)
    tors = analysis.torsion_submodule(pres, r, analysis.DEFAULT_KILL_EXPONENT)
    delta_dims = delta.dims(top)
    out = {
        "module": pres.name or args.module,
        "rank": r,
        "dims": ev.dims(top),
        "betti": betti.table.summary(),
        "semi_induced": semi.to_json(),
        "delta": {"dims": delta_dims, "is_residue_field": delta_dims[:1] == [1] and not any(delta_dims[1:]),
                  "is_zero": not any(delta_dims)},
        "torsion": {"dims_by_degree": {str(k): v for k, v in sorted(tors.dims_by_degree.items())},
                    "inconclusive": tors.inconclusive},
    }
    return out, EXIT_OK


def cmd_betti(args, cfg) -> tuple:
    pres = load_module(args.module, cfg.prime(), cfg.seed)
    betti = analysis.equivariant_betti(pres, args.i_max, cfg.cap(4), certify=not args.no_certify,
                                       exhaustive=args.exhaustive)
    return dict(betti.to_json(), module=pres.name or args.module), EXIT_OK


def cmd_regularity(args, cfg) -> tuple:
    pres = load_module(args.module, cfg.prime(), cfg.seed)
    rep = analysis.regularity_bound_check(pres, args.i_max, cfg.cap(5))
    return dict(rep.to_json(), module=pres.name or args.module), EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_shift(args, cfg) -> tuple:
    pres = load_module(args.module, cfg.prime(), cfg.seed)
    res = analysis.shift_theorem_experiment(pres, args.l_max, cfg.cap(4))
    code = EXIT_VIOLATION if not res.monotone() else EXIT_OK
    return dict(res.to_json(), module=pres.name or args.module), code


def cmd_delta(args, cfg) -> tuple:
    pres = load_module(args.module, cfg.prime(), cfg.seed)
    r = cfg.rank(3)
    ev = delta_evaluate(pres, r, args.s)
    vals = difference(PresentedValues(pres), args.s)
    return {"module": pres.name or args.module, "rank": r, "s": args.s,
            "dims": ev.dims(r + max(pres.max_block_degree(), 0)),
            "generator_degree": analysis.generator_degree(vals, cfg.cap(4))}, EXIT_OK


def cmd_torsion(args, cfg) -> tuple:
    pres = load_module(args.module, cfg.prime(), cfg.seed)
    rep = analysis.torsion_submodule(pres, cfg.rank(3), args.s_max)
    return dict(rep.to_json(), module=pres.name or args.module), EXIT_OK


def cmd_groebner(args, cfg) -> tuple:
    p = cfg.prime()
    if args.action == "member":
        with open(args.module_file) as fh:
            try:
                module = groebner.module_from_json(json.load(fh))
            except json.JSONDecodeError as exc:
                raise UsageError(f"invalid module file: {exc}")
        _, m = groebner.parse_monomial(args.monomial)
        w = module.membership(m)
        return {"monomial": groebner.format_monomial(m), "member": w is not None,
                "witness": None if w is None else w.to_json()}, EXIT_OK
    if args.action == "init":
        elements = [parse_element(t, p) for t in args.elements]
        init = groebner.initial_module_truncated(elements, cfg.cap(2), cfg.rank(4))
        return init.to_json(), EXIT_OK
    items = []
    for k in range(args.chains):
        seed = cfg.seed * 1000 + k
        rep = _acc_chain(seed, args.n, args.steps)
        items.append(dict(rep.to_json(), chain_seed=seed))
    return {"items": items}, EXIT_OK


def _acc_chain(seed: int, n: int, steps: int) -> groebner.ACCReport:
    index_cap, degree_cap = ACC_WINDOW
    chain = groebner.random_chain(seed, n=n, index_cap=index_cap, degree_cap=degree_cap)
    limit = groebner.window_monomials(n, degree_cap, index_cap)
    return groebner.acc_experiment(chain, n, steps, limit=limit)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def _shift_item(payload) -> dict:
    pres = EquivariantPresentation.from_json(payload["presentation"])
    res = analysis.shift_theorem_experiment(pres, payload["l_max"], payload["d_max"])
    if not res.monotone():
        verdict = "fail"
    elif res.found:
        verdict = "pass"
    else:
        verdict = "fail" if payload["curated"] else "inconclusive"
    return {"verdict": verdict, "details": res.to_json()}


def _resolution_item(payload) -> dict:
    pres = EquivariantPresentation.from_json(payload["presentation"])
    rep = analysis.resolution_experiment(pres, payload["d_max"], payload["l_max"])
    verdict = "inconclusive" if rep.inconclusive else ("pass" if rep.ok else "fail")
    return {"verdict": verdict, "details": rep.to_json()}


def _reg_item(payload) -> dict:
    pres = EquivariantPresentation.from_json(payload["presentation"])
    rep = analysis.regularity_bound_check(pres, payload["i_max"], payload["d_max"])
    details = rep.to_json()
    ok = rep.ok
    if payload.get("finite_length"):
        top = analysis.top_degree(pres, payload["d_max"])
        details["max_degree"] = top
        ok = ok and rep.regularity <= top
    return {"verdict": "pass" if ok else "fail", "details": details}


def _torsion_item(payload) -> dict:
    pres = EquivariantPresentation.from_json(payload["presentation"])
    rep = analysis.torsion_submodule(pres, payload["rank"], payload["s_max"])
    details = {k: v for k, v in rep.to_json().items() if k != "elements"}
    if rep.inconclusive:
        verdict = "inconclusive"
    else:
        verdict = "pass" if rep.stabilized else "fail"
    return {"verdict": verdict, "details": details}


def _steinberg_item(payload) -> dict:
    rep = verify_steinberg(tuple(payload["partition"]), payload["prime"], payload["degree_cap"])
    return {"verdict": "pass" if rep.ok else "fail", "details": rep.to_json()}


def _module_payloads(cfg: WorkbenchConfig, curated: bool) -> list:
    """(source, presentation) pairs; the source reloads the item through load_module."""
    out = []
    for p in cfg.primes:
        mods = fixtures.curated(p) if curated else fixtures.corpus(50, seed=cfg.seed, primes=(p,))
        out.extend((f"{'curated' if curated else 'corpus'}:{k}", m) for k, m in enumerate(mods))
    return out


def cmd_experiment(args, cfg, argv_prefix: list) -> tuple:
    started = time.perf_counter()
    name = args.name
    items = []
    inputs = {"primes": list(cfg.primes), "seed": cfg.seed}

    def add(item_id, result, extra_args):
        result = dict(result, id=item_id)
        result["reproduce"] = command_line(argv_prefix + extra_args)
        items.append(result)

    if name == "steinberg-sweep":
        cap = cfg.cap(6)
        inputs["degree_cap"] = cap
        payloads = [{"partition": list(lam), "prime": p, "degree_cap": cap}
                    for p in cfg.primes for lam in enumerate_partitions(cap) if lam.size]
        for pl, res in zip(payloads, run_pool(_steinberg_item, payloads, cfg.jobs)):
            lam = format_partition(pl["partition"])
            add(f"{lam}-p{pl['prime']}", res, ["--prime", str(pl["prime"]), "steinberg", lam])
    elif name == "wedge-lengths":
        i_max = cfg.cap(8)
        inputs["i_max"] = i_max
        for p in cfg.primes:
            for n in (0, 1):
                rep = wedge_tensor_length_report(n, i_max, p, degree_cap=i_max + n)
                add(f"n{n}-p{p}", {"verdict": "report", "details": rep},
                    ["--prime", str(p), "--degree-cap", str(i_max), "experiment", name])
    elif name == "acc":
        steps = cfg.rank(ACC_STEP_CAP)
        inputs["step_cap"] = steps
        for k in range(args.count):
            seed = cfg.seed * 1000 + k
            rep = _acc_chain(seed, 1, steps)
            verdict = "inconclusive" if rep.cap_reached else ("pass" if rep.verified else "fail")
            add(f"chain{seed}", {"verdict": verdict, "details": rep.to_json()},
                ["groebner", "acc", "--steps", str(steps), "--chains", str(k + 1)])
    else:
        curated = name in ("shift-theorem", "resolution")
        if args.set:
            curated = args.set == "curated"
        mods = _module_payloads(cfg, curated)
        d_max = cfg.cap({"shift-theorem": 4, "resolution": 4, "reg-bound": 6, "torsion": 4}[name])
        inputs.update(set="curated" if curated else "corpus", degree_cap=d_max)
        if name == "shift-theorem":
            func, extra = _shift_item, {"l_max": args.l_max, "d_max": d_max, "curated": curated}
        elif name == "resolution":
            func, extra = _resolution_item, {"l_max": args.l_max, "d_max": d_max}
        elif name == "reg-bound":
            func, extra = _reg_item, {"i_max": 4, "d_max": d_max}
            for p in cfg.primes:
                mods.extend((f"fixture:{n}", fixtures.named_fixtures(p)[n]) for n in ("k", "R/m^2", "R/m^3"))
        else:
            func, extra = _torsion_item, {"rank": cfg.rank(3), "s_max": analysis.DEFAULT_KILL_EXPONENT}
        payloads = []
        for source, pres in mods:
            pl = dict(extra, presentation=pres.to_json())
            if source.startswith("fixture:"):
                pl["finite_length"] = True
            payloads.append(pl)
        inputs.update({k: v for k, v in extra.items() if k != "curated"})
        single = {"shift-theorem": ["shift", "--l-max", str(args.l_max)], "resolution": ["experiment", "resolution"],
                  "reg-bound": ["regularity", "--i-max", "4"], "torsion": ["torsion"]}[name]
        for (source, pres), res in zip(mods, run_pool(func, payloads, cfg.jobs)):
            item_id = pres.name if pres.name.endswith(f"p{pres.prime}") else f"{pres.name}-p{pres.prime}"
            cmd = ["--prime", str(pres.prime), "--degree-cap", str(d_max)]
            if name == "resolution":
                cmd += ["experiment", "resolution", "--set", "curated" if curated else "corpus"]
            else:
                cmd += [single[0], source] + single[1:]
            add(item_id, res, cmd)
    report = experiment_report(name, inputs, items, started)
    code = EXIT_VIOLATION if report["summary"]["fail"] else EXIT_OK
    return report, code


def cmd_corpus(args, cfg) -> tuple:
    started = time.perf_counter()
    items = []
    for p in cfg.primes:
        for pres in fixtures.corpus(args.size, seed=cfg.seed, primes=(p,)):
            items.append({"id": pres.name, "verdict": "pass", "presentation": pres.to_json(),
                          "degenerate_relations": pres.degenerate_relations(),
                          "reproduce": command_line(["--prime", str(p), "--seed", str(cfg.seed), "corpus"])})
    return experiment_report("corpus", {"primes": list(cfg.primes), "seed": cfg.seed, "size": args.size},
                             items, started), EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_globals(ap: argparse.ArgumentParser, defaults: bool) -> None:
    def d(v):
        return v if defaults else argparse.SUPPRESS
    ap.add_argument("--prime", type=_primes, default=d(None), help="prime, or comma list for batches (default 2; batches 2,3)")
    ap.add_argument("--seed", type=int, default=d(0))
    ap.add_argument("--degree-cap", type=_positive, default=d(None))
    ap.add_argument("--rank-cap", type=_positive, default=d(None))
    ap.add_argument("--out", default=d(None), help="directory for JSON and CSV reports")
    ap.add_argument("--format", choices=("json", "csv"), default=d("json"))
    ap.add_argument("--jobs", type=_positive, default=d(1), help="worker processes for batches")


class _Subparsers(argparse._SubParsersAction):
    """Every subcommand also accepts the global flags."""

    def add_parser(self, name, **kwargs):
        parser = super().add_parser(name, **kwargs)
        _add_globals(parser, defaults=False)
        return parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="glwedge", description=__doc__.splitlines()[0])
    ap.register("action", "parsers", _Subparsers)
    _add_globals(ap, defaults=True)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("steinberg", help="verify the Steinberg factorization of ch L_lam")
    s.add_argument("partition")
    s = sub.add_parser("char", help="Schur derivative or Frobenius twist of a character")
    s.add_argument("expression")
    s.add_argument("--op", choices=("derivative", "twist"), default="derivative")
    s = sub.add_parser("simple-char", help="ch L_lam from Gram ranks")
    s.add_argument("partition")
    s = sub.add_parser("decomp-matrix", help="decomposition matrix in one degree")
    s.add_argument("degree", type=_positive)
    for name, text in (("evaluate", "rank evaluation report"), ("betti", "equivariant Betti table"),
                       ("regularity", "regularity against t_0 + t_1"), ("shift", "iterate Sh until semi-induced"),
                       ("delta", "difference functor at a rank"), ("torsion", "torsion submodule at a rank")):
        s = sub.add_parser(name, help=text)
        s.add_argument("module", help="presentation JSON file or fixture:NAME")
        if name in ("betti", "regularity"):
            s.add_argument("--i-max", type=int, default=3)
        if name == "betti":
            s.add_argument("--no-certify", action="store_true")
            s.add_argument("--exhaustive", action="store_true")
        if name == "shift":
            s.add_argument("--l-max", type=int, default=6)
        if name == "delta":
            s.add_argument("--s", type=_positive, default=1)
        if name == "torsion":
            s.add_argument("--s-max", type=_positive, default=analysis.DEFAULT_KILL_EXPONENT)
    g = sub.add_parser("groebner", help="monomial modules over the exterior algebra")
    g.register("action", "parsers", _Subparsers)
    gs = g.add_subparsers(dest="action", required=True)
    s = gs.add_parser("member")
    s.add_argument("module_file")
    s.add_argument("monomial")
    s = gs.add_parser("init")
    s.add_argument("elements", nargs="+", help='elements like "x1 | e1 + x2 | e2"')
    s = gs.add_parser("acc")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--steps", type=_positive, default=ACC_STEP_CAP)
    s.add_argument("--chains", type=_positive, default=10)
    s = sub.add_parser("experiment", help="run a batch and write a report")
    s.add_argument("name", choices=EXPERIMENTS)
    s.add_argument("--set", choices=("curated", "corpus"), default=None)
    s.add_argument("--l-max", type=int, default=6)
    s.add_argument("--count", type=_positive, default=20)
    s = sub.add_parser("corpus", help="write the seeded GL-stable corpus")
    s.add_argument("--size", type=_positive, default=50)
    return ap


def _global_args(args) -> list:
    out = ["--seed", str(args.seed)]
    if args.degree_cap is not None:
        out += ["--degree-cap", str(args.degree_cap)]
    if args.rank_cap is not None:
        out += ["--rank-cap", str(args.rank_cap)]
    return out


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    batch = args.command in ("experiment", "corpus")
    primes = args.prime or ((2, 3) if batch else (2,))
    cfg = WorkbenchConfig(primes, args.seed, args.degree_cap, args.rank_cap, args.out, args.format, args.jobs)
    handlers = {
        "steinberg": cmd_steinberg, "char": cmd_char, "simple-char": cmd_simple_char,
        "decomp-matrix": cmd_decomp_matrix, "evaluate": cmd_evaluate, "betti": cmd_betti,
        "regularity": cmd_regularity, "shift": cmd_shift, "delta": cmd_delta, "torsion": cmd_torsion,
        "groebner": cmd_groebner, "corpus": cmd_corpus,
    }
    try:
        if args.command == "experiment":
            report, code = cmd_experiment(args, cfg, _global_args(args))
        else:
            report, code = handlers[args.command](args, cfg)
    except (UsageError, ValueError, OSError) as exc:
        print(f"glwedge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    stem = args.command if args.command != "experiment" else f"experiment-{args.name}"
    emit(report, cfg, stem)
    return code


if __name__ == "__main__":
    sys.exit(main())
