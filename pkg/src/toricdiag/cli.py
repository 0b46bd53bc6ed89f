"""Command-line front end: ``python3 -m toricdiag <command> ...``.

Exit status: 0 success or verified, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import serialize as ser
from .linalg import DEFAULT_PRIME
from .toric import KleinschmidtError, build_variety

PRIME_ENV = "TORICDIAG_PRIME"

KLEINSCHMIDT_RULES = (
    "Kleinschmidt normal form: r >= 1; a = a_1,...,a_s nonempty (s >= 1), "
    "with 0 <= a_1 <= ... <= a_s, e.g. --r 1 --a 0,3")

COMMANDS = ("resolve", "cohomology", "monad", "virtual", "split", "verify", "warmup")
VALUE_FLAGS = ("--window", "--sheaf", "--a", "--candidate", "--degree")


class UsageError(Exception):
    def __init__(self, flag, msg):
        super().__init__(f"{flag}: {msg}")
        self.flag = flag


@dataclass
class CliConfig:
    command: str
    r: int | None = None
    a: tuple = ()
    n: int | None = None
    window: tuple | None = None
    sheaf: tuple = ()
    candidate: tuple | None = None
    prime: int | None = DEFAULT_PRIME
    fmt: str = "json"
    suite: str = "all"
    margin: int = 2
    jobs: int = 1
    max_strand: int | None = None
    output: str | None = None
    extra: dict = field(default_factory=dict)


# -- parsing -------------------------------------------------------------------

def _ints(text, flag):
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise UsageError(flag, f"expected comma-separated integers, got {text!r}") from None


def parse_window(text: str, flag: str = "--window"):
    """'-3:3' (both coordinates) or '-3:3,-1:2' -> ((k0, k1), (l0, l1))."""
    parts = text.split(",")
    try:
        spans = [tuple(int(x) for x in p.split(":")) for p in parts]
    except ValueError:
        raise UsageError(flag, f"expected lo:hi or lo:hi,lo:hi, got {text!r}") from None
    if len(spans) == 1:
        spans = spans * 2
    if len(spans) != 2 or any(len(s) != 2 or s[0] > s[1] for s in spans):
        raise UsageError(flag, f"expected lo:hi or lo:hi,lo:hi with lo <= hi, got {text!r}")
    return spans[0], spans[1]


def parse_sheaf(text: str, flag: str = "--sheaf"):
    """'0,0;-1,-2:2' -> (((0, 0), 1), ((-1, -2), 2))."""
    out = []
    for item in filter(None, (t.strip() for t in text.split(";"))):
        tw, _, mult = item.partition(":")
        vals = _ints(tw, flag)
        if len(vals) != 2:
            raise UsageError(flag, f"twist must be b,c, got {tw!r}")
        m = int(mult) if mult else 1
        if m < 1:
            raise UsageError(flag, f"multiplicity must be >= 1, got {m}")
        out.append((vals, m))
    if not out:
        raise UsageError(flag, "empty sheaf")
    return tuple(out)


def _normalize_argv(argv):
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("usage", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toricdiag", description="Resolutions of the diagonal on Picard-rank-2 "
                "toric varieties, and what they compute.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    env_prime = os.environ.get(PRIME_ENV)
    for name in COMMANDS:
        q = sub.add_parser(name)
        if name == "warmup":
            q.add_argument("--n", type=int, required=True, help="P^n x P^n")
            q.add_argument("--compare", action="store_true",
                           help="compare with the Eagon-Northcott complex")
        else:
            q.add_argument("--r", type=int, required=True)
            q.add_argument("--a", required=True, help="twists a_1,...,a_s")
        q.add_argument("--format", dest="fmt", choices=("json", "text", "m2"), default="json")
        q.add_argument("--window", help="lo:hi or klo:khi,llo:lhi")
        q.add_argument("--prime", default=env_prime,
                       help=f"prime field (default ${PRIME_ENV} or {DEFAULT_PRIME}); 0 means QQ")
        q.add_argument("--jobs", type=int, default=1)
        q.add_argument("--output", help="write the artifact here instead of stdout")
        if name in ("cohomology", "monad", "virtual", "split"):
            q.add_argument("--sheaf", default="0,0", help="b,c[:mult];b,c[:mult];...")
        if name == "split":
            q.add_argument("--candidate", help="splitting type to test, same syntax as --sheaf")
            q.add_argument("--margin", type=int, default=2)
        if name == "verify":
            q.add_argument("--suite", default="all",
                           choices=("all", "ranks", "ddzero", "exactness", "monad",
                                    "cohomology", "b1"))
            q.add_argument("--max-strand", type=int, default=None,
                           help="skip (and report) strands larger than this")
    return p


def parse_config(argv) -> CliConfig:
    ns = build_parser().parse_args(_normalize_argv(list(argv)))
    if ns.command is None:
        raise UsageError("command", f"choose one of {', '.join(COMMANDS)}")
    cfg = CliConfig(ns.command, fmt=ns.fmt, jobs=ns.jobs, output=ns.output)
    if ns.jobs < 1:
        raise UsageError("--jobs", "must be >= 1")
    if ns.command == "warmup":
        if ns.n < 1:
            raise UsageError("--n", "must be >= 1")
        cfg.n = ns.n
        cfg.extra["compare"] = ns.compare
    else:
        cfg.r = ns.r
        cfg.a = _ints(ns.a, "--a")
    if ns.prime is None:
        cfg.prime = DEFAULT_PRIME
    else:
        try:
            cfg.prime = int(ns.prime) or None
        except ValueError:
            raise UsageError("--prime", f"expected an integer, got {ns.prime!r}") from None
    if ns.window is not None:
        cfg.window = parse_window(ns.window)
    if getattr(ns, "sheaf", None):
        cfg.sheaf = parse_sheaf(ns.sheaf)
    if getattr(ns, "candidate", None):
        cfg.candidate = parse_sheaf(ns.candidate, "--candidate")
    cfg.margin = getattr(ns, "margin", 2)
    cfg.suite = getattr(ns, "suite", "all")
    cfg.max_strand = getattr(ns, "max_strand", None)
    return cfg


# -- commands ------------------------------------------------------------------

def _emit_complex(c, fmt, extra=None):
    if fmt == "m2":
        return ser.complex_to_m2(c)
    if fmt == "text":
        return ser.complex_to_text(c)
    d = ser.complex_to_dict(c)
    if extra:
        d.update(extra)
    return ser.dumps(d)


def _variety(cfg):
    try:
        return build_variety(cfg.r, cfg.a)
    except KleinschmidtError as exc:
        bad = "--r" if "r must" in str(exc) else "--a"
        raise UsageError(bad, f"{exc}. {KLEINSCHMIDT_RULES}") from None


def _cmd_resolve(cfg):
    from .diagonal import build_R
    R = build_R(_variety(cfg))
    return 0, _emit_complex(R.complex, cfg.fmt), ""


def _cmd_cohomology(cfg):
    from .cohom import SheafSpec, cohomology_table
    X = _variety(cfg)
    window = cfg.window or ((-3, 3), (-3, 3))
    t = cohomology_table(X, SheafSpec(cfg.sheaf), window)
    if cfg.fmt == "text":
        return 0, ser.table_to_text(t), ""
    if cfg.fmt == "m2":
        raise UsageError("--format", "m2 export is available for complexes only")
    return 0, ser.dumps(ser.table_to_dict(t)), ""


def _cmd_monad(cfg):
    from .cohom import SheafSpec
    from .monad import NonAcyclicTwist, build_monad
    X = _variety(cfg)
    try:
        M = build_monad(X, SheafSpec(cfg.sheaf))
    except NonAcyclicTwist as exc:
        return 1, "", f"{exc}\n"
    prov = {"provenance": [[{"r_label": lab, "twist": list(tw), "copy": c, "z": z}
                            for lab, tw, c, z in slot] for slot in M.provenance]}
    return 0, _emit_complex(M.complex, cfg.fmt, prov), ""


def _cmd_virtual(cfg):
    from .applications import virtual_resolution
    from .cohom import SheafSpec
    X = _variety(cfg)
    res = virtual_resolution(X, SheafSpec(cfg.sheaf))
    note = f"shift {res.shift}, length {res.length}\n"
    return 0, _emit_complex(res.complex, cfg.fmt, {"shift": list(res.shift)}), note


def _cmd_split(cfg):
    from .applications import (RecoveryFailed, SplittingType, WindowTooSmall,
                               check_splitting_hypothesis, h0_oracle, recover_splitting_type)
    from .cohom import SheafSpec, cohomology_table
    X = _variety(cfg)
    F = SheafSpec(cfg.sheaf)
    window = cfg.window or ((-4, 4), (-4, 4))
    out: dict = {}
    status = 0
    try:
        st = recover_splitting_type(X, h0_oracle(X, F), window)
        out["recovered"] = ser.splitting_to_dict(st)
    except RecoveryFailed as exc:
        out["recovered"] = None
        out["error"] = str(exc)
        st = None
        status = 1
    cand = SplittingType(cfg.candidate) if cfg.candidate else st
    if cand is not None:
        pad = cfg.margin
        (b0, b1), (c0, c1) = window
        twin = ((-b1 - pad, -b0 + pad), (-c1 - pad, -c0 + pad))
        table = cohomology_table(X, F, twin)
        try:
            v = check_splitting_hypothesis(X, cand, table, cfg.margin)
        except WindowTooSmall as exc:
            raise UsageError("--window", str(exc)) from None
        out["candidate"] = ser.splitting_to_dict(cand)
        out["verdict"] = {"nef_chain_ok": v.nef_chain_ok, "table_match": v.table_match,
                          "conclusion": v.conclusion}
        if not v.table_match:
            status = 1
    return status, ser.dumps(out), ""


def _exactness_parallel(c, window, prime, jobs, max_strand):
    from .coxalg import box
    from .diagonal import ExactnessReport, check_strand_exactness, default_window
    lo, hi = window or default_window(c)
    degrees = [tuple(d) for d in box(lo, hi)]
    if jobs <= 1:
        return check_strand_exactness(c, degrees, prime, max_strand=max_strand)
    chunks = [degrees[i::jobs] for i in range(jobs)]
    rep = ExactnessReport()
    with ProcessPoolExecutor(jobs) as ex:
        for part in ex.map(check_strand_exactness, [c] * jobs, chunks, [prime] * jobs,
                           [False] * jobs, [max_strand] * jobs):
            rep = rep.merge(part)
    rep.failures.sort()
    rep.skipped.sort()
    return rep


def _cmd_verify(cfg):
    from .applications import b1_vanishes
    from .cohom import cohomology_vector, oracle_vector, ORACLE_MAX_DIM
    from .coxalg import check_ddzero
    from .diagonal import build_R, rank_formula
    from .monad import verify_monad_identity
    X = _variety(cfg)
    R = build_R(X)
    suites = ("ranks", "ddzero", "exactness", "monad", "cohomology", "b1") \
        if cfg.suite == "all" else (cfg.suite,)
    report: dict = {"variety": X.name}
    ok = True
    for s in suites:
        if s == "ranks":
            want = [rank_formula(X, n) for n in range(X.dim + 1)]
            passed = R.ranks() == want and want == want[::-1]
            report[s] = {"ok": passed, "ranks": R.ranks(), "formula": want}
        elif s == "ddzero":
            dd = check_ddzero(R.complex)
            passed = dd.ok and R.complex.linear_entries_only()
            report[s] = {"ok": passed, "witness": repr(dd.witness) if dd.witness else None}
        elif s == "exactness":
            rep = _exactness_parallel(R.complex, cfg.window, cfg.prime, cfg.jobs, cfg.max_strand)
            passed = rep.ok
            report[s] = {"ok": passed, "checked": rep.checked, "nonzero": rep.nonzero,
                         "failures": [list(map(repr, f)) for f in rep.failures[:20]],
                         "skipped": len(rep.skipped)}
        elif s == "monad":
            bad = []
            for b in range(X.r + 1):
                for c in range(X.s + 1):
                    if not verify_monad_identity(X, b, c, R, prime=cfg.prime).ok:
                        bad.append([b, c])
            passed = not bad
            report[s] = {"ok": passed, "failed": bad}
        elif s == "cohomology":
            if X.dim > ORACLE_MAX_DIM:
                report[s] = {"ok": True, "skipped": "oracle dimension guard"}
                continue
            (k0, k1), (l0, l1) = cfg.window or ((-6, 6), (-6, 6))
            bad = [[k, l] for k in range(k0, k1 + 1) for l in range(l0, l1 + 1)
                   if cohomology_vector(X, (k, l)) != oracle_vector(X, (k, l))]
            passed = not bad
            report[s] = {"ok": passed, "mismatches": bad[:20]}
        elif s == "b1":
            bad = [[k, l] for k in range(-6, 0) for l in range(-6, 0)
                   if not b1_vanishes(X, (k, l), R)]
            passed = not bad
            report[s] = {"ok": passed, "nonvanishing": bad[:20]}
        ok = ok and passed
    report["ok"] = ok
    text = ser.dumps(report)
    return (0 if ok else 1), text, ("" if ok else "verification failed\n")


def _cmd_warmup(cfg):
    from .warmup import build_pn_warmup, compare_warmup
    if cfg.extra.get("compare"):
        w = compare_warmup(cfg.n, prime=cfg.prime)
        out = {"same_terms": w.same_terms, "warmup_exact": w.warmup_exact.ok,
               "en_exact": w.en_exact.ok, "coker_mismatches": len(w.coker_mismatches),
               "ok": w.ok}
        return (0 if w.ok else 1), ser.dumps(out), ""
    return 0, _emit_complex(build_pn_warmup(cfg.n), cfg.fmt), ""


HANDLERS = {"resolve": _cmd_resolve, "cohomology": _cmd_cohomology, "monad": _cmd_monad,
            "virtual": _cmd_virtual, "split": _cmd_split, "verify": _cmd_verify,
            "warmup": _cmd_warmup}


def run(cfg: CliConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        status, artifact, note = HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(artifact)
    elif artifact:
        stdout.write(artifact)
    if note:
        stderr.write(note)
    return status


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n{KLEINSCHMIDT_RULES}\n")
        return 2
    return run(cfg)
